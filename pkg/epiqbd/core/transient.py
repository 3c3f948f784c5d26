# -*- coding: utf-8 -*-
#
# 2026 epicast contributors
#
# This file is part of epicast.
#
# epicast is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# epicast is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with epicast. If not, see <http://www.gnu.org/licenses/>.
#
#

"""Transient analysis of the truncated chain.

P(t) = omega exp(Qt) is computed by uniformization: with Lambda the largest
exit rate and P_u = I + Q / Lambda,

    v exp(Qt) = sum_j Poisson(Lambda t; j) v P_u^j.

Long horizons are cut into steps with Lambda * dt <= MAX_STEP_RATE so the
Poisson weights stay representable.  Every step drops a Poisson tail whose
mass is accumulated in the mass defect of the result.
"""

import enum
import math

from dataclasses import (dataclass, field)
from typing import (Optional, Tuple)

import numpy as np
import scipy.stats

import epiqbd
import epiqbd.log
import epiqbd.mputil

from epiqbd.core import qbd
from epiqbd.core.model import largest_remainder

_logger = epiqbd.log.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-10
MAX_TOLERANCE = 1e-3
MAX_STEP_RATE = 64.0

# automatic truncation: double n_max until this little mass sits on the
# boundary state, but never beyond MAX_STATES states
BOUNDARY_TARGET = 1e-10
MIN_STATES = 1024
MAX_STATES = 1 << 24

# probability on the top 1% of states that triggers a truncation warning
TRUNCATION_WARNING_MASS = 1e-6


class Engine(enum.Enum):
    CLOSED_FORM = "closed_form"
    UNIFORMIZATION = "uniformization"


@dataclass(frozen=True)
class DistributionVector:
    probabilities: np.ndarray
    time: float = 0.0
    mass_defect: float = 0.0
    truncation_warning: bool = False

    @classmethod
    def point_mass(cls, state, n_max):
        initial = qbd.InitialDistribution(state=state, dimension=n_max + 1)
        return cls(initial.to_vector())

    @property
    def n_max(self):
        return len(self.probabilities) - 1

    @property
    def boundary_mass(self):
        return float(self.probabilities[-1])

    @property
    def total(self):
        return math.fsum(self.probabilities)


def check_tolerance(tol):
    if not (0 < tol <= MAX_TOLERANCE):
        raise epiqbd.ValidationError(
            "invalid tolerance %r, must lie in (0, %g]" % (
                tol, MAX_TOLERANCE), field="tol")


def _poisson_weights(rate, tol):
    right = int(scipy.stats.poisson.isf(tol, rate)) + 1
    weights = scipy.stats.poisson.pmf(np.arange(right + 1), rate)
    tail = float(scipy.stats.poisson.sf(right, rate))
    return (weights, tail)


def _near_boundary(probabilities):
    top = int(math.ceil(0.99 * len(probabilities)))
    top = min(top, len(probabilities) - 1)
    return float(probabilities[top:].sum())


def transient_distribution(gen, init, t, tol=DEFAULT_TOLERANCE):
    """Return the distribution at time init.time + t."""
    check_tolerance(tol)
    if t < 0:
        raise epiqbd.ValidationError(
            "must be >= 0, got %r" % (t,), field="t")
    if len(init.probabilities) != gen.dimension:
        raise epiqbd.ValidationError(
            "distribution has %d entries, generator %d states" % (
                len(init.probabilities), gen.dimension))
    if t == 0:
        return init

    exit_rate = gen.max_exit_rate
    if exit_rate == 0:
        return DistributionVector(
            init.probabilities.copy(), init.time + t, init.mass_defect,
            init.truncation_warning)

    n_steps = max(1, int(math.ceil(exit_rate * t / MAX_STEP_RATE)))
    step_rate = exit_rate * t / n_steps
    (weights, tail) = _poisson_weights(step_rate, tol / n_steps)
    _logger.trace(
        "uniformization: Lambda=%g t=%g steps=%d terms=%d",
        exit_rate, t, n_steps, len(weights))

    vector = init.probabilities
    for _ in range(n_steps):
        term = vector
        acc = weights[0] * term
        for w in weights[1:]:
            term = term + gen.left_multiply(term) / exit_rate
            acc += w * term
        vector = acc

    defect = init.mass_defect + n_steps * tail
    if gen.policy is qbd.BoundaryPolicy.REDIRECT:
        # only the top-state mass gained in this call, once per run
        defect += max(0.0, float(vector[-1]) - init.boundary_mass)
    else:
        lost = (math.fsum(init.probabilities) - n_steps * tail
                - math.fsum(vector))
        defect += max(0.0, lost)

    near = _near_boundary(vector)
    warning = init.truncation_warning
    if near >= TRUNCATION_WARNING_MASS:
        warning = True
        _logger.warning(
            "truncation warning: probability %.3g on the top 1%% of "
            "states 0..%d", near, gen.n_max)

    return DistributionVector(vector, init.time + t, defect, warning)


def expected_active(dist):
    states = np.arange(len(dist.probabilities), dtype=float)
    return float(np.dot(states, dist.probabilities))


def mass_report(dist):
    return (dist.mass_defect, dist.boundary_mass)


def closed_form_mean(k, lambda_event, mu, d, t):
    """Mean of a linear batch birth-death group started with k cases."""
    return k * math.exp((lambda_event * d - mu) * t)


def initial_n_max(k, d_eff):
    return max(int(math.ceil(4 * k * (d_eff + 1))), MIN_STATES)


def _resize(dist, n_max):
    """dist on the states 0..n_max, zero padded or with the tail folded
    onto the new top state."""
    probabilities = dist.probabilities
    if n_max + 1 >= len(probabilities):
        vector = np.zeros(n_max + 1)
        vector[:len(probabilities)] = probabilities
    else:
        vector = probabilities[:n_max + 1].copy()
        vector[-1] += probabilities[n_max + 1:].sum()
    return DistributionVector(
        vector, 0.0, dist.mass_defect, dist.truncation_warning)


def transient_series(lambda_event, mu, tau, d, k, times,
                     tol=DEFAULT_TOLERANCE, n_max=None,
                     policy=qbd.BoundaryPolicy.REDIRECT, init=None):
    """Distributions of one group started at k cases, at each of times.

    times are model times relative to the start and must be
    non-decreasing.  init, when given, replaces the point mass at k as the
    starting distribution.  Without an explicit n_max the truncation
    starts at initial_n_max() and is doubled until the boundary state
    holds less than BOUNDARY_TARGET at every requested time.
    """
    auto = n_max is None
    if auto:
        n_max = max(initial_n_max(k, d), k + d + 1)
        if init is not None:
            n_max = max(n_max, init.n_max)
    while True:
        gen = qbd.build_generator(lambda_event, mu, tau, d, n_max, policy)
        if init is None:
            dist = DistributionVector.point_mass(k, n_max)
        else:
            dist = _resize(init, n_max)
        result = []
        now = 0.0
        for t in times:
            dist = transient_distribution(gen, dist, t - now, tol)
            now = t
            result.append(dist)
        boundary = max((r.boundary_mass for r in result), default=0.0)
        if not auto or boundary < BOUNDARY_TARGET:
            return result
        if n_max * 2 > MAX_STATES:
            raise epiqbd.TruncationError(n_max, boundary, BOUNDARY_TARGET)
        _logger.debug(
            "boundary mass %.3g at n_max=%d, doubling", boundary, n_max)
        n_max *= 2


@dataclass(frozen=True)
class ExpectedTrajectory:
    times: Tuple[float, ...]
    values: Tuple[float, ...]
    per_group: Optional[Tuple[Tuple[float, ...], ...]] = None
    mass_defect: Tuple[float, ...] = field(default=())

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        values = tuple(float(v) for v in self.values)
        if len(times) != len(values):
            raise epiqbd.ValidationError("times and values differ in length")
        if any(b <= a for (a, b) in zip(times, times[1:])):
            raise epiqbd.ValidationError(
                "times must be strictly increasing", field="times")
        if any(v < 0 for v in values):
            raise epiqbd.ValidationError(
                "expected values must be >= 0", field="values")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        if not self.mass_defect:
            object.__setattr__(self, "mass_defect", (0.0,) * len(times))

    def value_at(self, day):
        return self.values[self.times.index(float(day))]


def _check_grid(grid):
    grid = [float(g) for g in grid]
    if not grid:
        raise epiqbd.ValidationError("empty grid", field="grid")
    if grid[0] < 1:
        raise epiqbd.ValidationError(
            "grid days start at day 1", field="grid")
    if any(b <= a for (a, b) in zip(grid, grid[1:])):
        raise epiqbd.ValidationError(
            "grid days must be strictly increasing", field="grid")
    return grid


def _segment_plan(schedule, grid):
    """Assign grid times to schedule segments.

    Returns [(t0, t1, regime, [(grid index, t), ...]), ...]; a grid time on
    a segment boundary belongs to the earlier segment.
    """
    times = [day - 1 for day in grid]
    plan = []
    pending = list(enumerate(times))
    for (t0, t1, regime) in schedule.segments(times[-1]):
        here = [(i, t) for (i, t) in pending if t <= t1]
        pending = pending[len(here):]
        plan.append((t0, t1, regime, here))
    return plan


def _closed_form(schedule, grid):
    plan = _segment_plan(schedule, grid)
    width = max(len(r.mixture) for r in schedule.regimes)
    values = [0.0] * len(grid)
    per_group = [[0.0] * len(grid) for _ in range(width)]

    if any(r.params.tau > 0 for r in schedule.regimes):
        _logger.warning(
            "closed form mean ignores re-seeding (tau > 0); use the "
            "uniformization engine to include it")

    total = float(schedule.k)
    carried = None
    previous = None
    for (t0, t1, regime, points) in plan:
        rates = regime.growth_rates()
        if carried is not None and regime.mixture == previous:
            start = carried
        else:
            start = [total * r for r in regime.mixture.weights]
        for (i, t) in points:
            group_values = [
                s * math.exp(g * (t - t0)) for (s, g) in zip(start, rates)]
            values[i] = math.fsum(group_values)
            for (j, v) in enumerate(group_values):
                per_group[j][i] = v
        # pooled at the boundary unless the next mixture is the same
        carried = [
            s * math.exp(g * (t1 - t0)) for (s, g) in zip(start, rates)]
        total = math.fsum(carried)
        previous = regime.mixture

    return ExpectedTrajectory(
        times=grid, values=values,
        per_group=tuple(tuple(p) for p in per_group))


def _group_run(lambda_event, mu, tau, d, k, times, tol, init=None):
    if init is None and k == 0 and tau == 0:
        return ([0.0] * len(times), [0.0] * len(times), None)
    dists = transient_series(
        lambda_event, mu, tau, d, k, times, tol, init=init)
    return ([expected_active(x) for x in dists],
            [x.mass_defect for x in dists], dists[-1])


def _uniformization(schedule, grid, tol, jobs):
    plan = _segment_plan(schedule, grid)
    width = max(len(r.mixture) for r in schedule.regimes)
    values = [0.0] * len(grid)
    defects = [0.0] * len(grid)
    per_group = [[0.0] * len(grid) for _ in range(width)]

    total = schedule.k
    carried = None
    previous = None
    for (t0, t1, regime, points) in plan:
        mixture = regime.mixture
        if carried is not None and mixture == previous:
            # same groups on both sides: the distributions carry over
            counts = [0] * len(mixture)
            inits = carried
        else:
            counts = largest_remainder(total, mixture.weights)
            inits = [None] * len(mixture)
        lam = regime.event_rate
        rel_times = [t - t0 for (_, t) in points] + [t1 - t0]
        args = [
            (lam, regime.params.mu, regime.params.tau, d, k_i, rel_times, tol,
             init)
            for (d, k_i, init) in zip(mixture.batch_sizes, counts, inits)]
        _logger.verbose(
            "uniformization segment [%g, %g]: group counts %s", t0, t1,
            "carried" if inits is carried else counts)
        results = epiqbd.mputil.mp_pool_run(_group_run, args, jobs=jobs)
        for (n, (i, _)) in enumerate(points):
            group_values = [res[0][n] for res in results]
            values[i] = math.fsum(group_values)
            defects[i] = math.fsum(res[1][n] for res in results)
            for (j, v) in enumerate(group_values):
                per_group[j][i] = v
        end_total = math.fsum(res[0][-1] for res in results)
        total = int(round(end_total))
        carried = [res[2] for res in results]
        previous = mixture

    return ExpectedTrajectory(
        times=grid, values=values,
        per_group=tuple(tuple(p) for p in per_group),
        mass_defect=tuple(defects))


def mean_trajectory(schedule, grid, engine=Engine.CLOSED_FORM,
                    tol=DEFAULT_TOLERANCE, jobs=1):
    """Expected active cases of the schedule on the given days."""
    grid = _check_grid(grid)
    engine = Engine(engine)
    if engine is Engine.CLOSED_FORM:
        return _closed_form(schedule, grid)
    check_tolerance(tol)
    return _uniformization(schedule, grid, tol, jobs)
