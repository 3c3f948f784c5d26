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

"""Exact simulation of the group mixture with change points.

Within a day every group is advanced along its embedded jump chain: the
event types are independent coin flips (birth with probability
lambda / (lambda + mu)), the states are the running sum of the jumps and
the holding times are exponential with rate n (lambda + mu) of the state
left.  Draws are made in blocks; the first event that would cross the end
of the day and everything after it is thrown away, which is exact because
the holding times are memoryless.
"""

import math

from dataclasses import dataclass
from typing import Tuple

import numpy as np

import epiqbd
import epiqbd.log
import epiqbd.mputil

from epiqbd.core.model import apportion_initial

_logger = epiqbd.log.getLogger(__name__)

MAX_COUNT = np.iinfo(np.int64).max
MAX_SEED = (1 << 64) - 1

# replications handed to one worker at a time
CHUNK_SIZE = 250


@dataclass(frozen=True)
class SimulationConfig:
    schedule: object
    horizon: int
    replications: int = 1
    seed: int = 0

    def __post_init__(self):
        if int(self.horizon) != self.horizon or self.horizon < 1:
            raise epiqbd.ValidationError(
                "must be an integer >= 1, got %r" % (self.horizon,),
                field="horizon")
        if int(self.replications) != self.replications \
                or self.replications < 1:
            raise epiqbd.ValidationError(
                "must be an integer >= 1, got %r" % (self.replications,),
                field="replications")
        check_seed(self.seed)


def check_seed(seed):
    if isinstance(seed, bool) or int(seed) != seed \
            or not 0 <= seed <= MAX_SEED:
        raise epiqbd.ValidationError(
            "must be an unsigned 64 bit integer, got %r" % (seed,),
            field="seed")


@dataclass(frozen=True)
class ReplicationTrace:
    days: Tuple[int, ...]
    counts: np.ndarray
    extinct: bool

    @property
    def totals(self):
        return self.counts.sum(axis=1)


@dataclass(frozen=True)
class EnsembleSummary:
    days: Tuple[int, ...]
    mean: np.ndarray
    var: np.ndarray
    p05: np.ndarray
    p95: np.ndarray
    replications: int
    seed: int

    def std_error(self):
        return np.sqrt(self.var / self.replications)


def replication_rng(seed, replication):
    """The random generator owned by one replication."""
    return np.random.default_rng(
        np.random.SeedSequence(int(seed), spawn_key=(int(replication),)))


def advance_group(n, lambda_event, mu, tau, d, duration, rng):
    """Advance one group holding n cases by duration days."""
    remaining = float(duration)
    rate = lambda_event + mu
    while remaining > 0:
        if n == 0:
            if tau == 0:
                return 0
            wait = rng.exponential(1.0 / tau)
            if wait >= remaining:
                return 0
            remaining -= wait
            n = d
            continue
        if rate == 0:
            return n

        size = int(n * rate * remaining * 1.25) + 16
        births = rng.random(size) < lambda_event / rate
        waits = rng.standard_exponential(size)
        states = n + np.cumsum(np.where(births, d, -1))
        absorbed = np.flatnonzero(states == 0)
        if absorbed.size:
            # nothing happens after extinction until re-seeding
            size = int(absorbed[0]) + 1
            states = states[:size]
        before = np.concatenate(([n], states[:-1]))
        clock = np.cumsum(waits[:size] / (before * rate))

        crossing = int(np.searchsorted(clock, remaining, side="left"))
        if crossing < size:
            return int(states[crossing - 1]) if crossing else n
        n = int(states[-1])
        if n > MAX_COUNT // 2:
            raise epiqbd.NumericalError(
                "overflow: group count %d exceeds the count range" % (n,))
        remaining -= float(clock[-1])
    return n


def _simulate(schedule, horizon, seed, replication):
    rng = replication_rng(seed, replication)
    width = max(len(r.mixture) for r in schedule.regimes)
    counts = np.zeros((horizon, width), dtype=np.int64)

    groups = None
    previous = None
    for (t0, t1, regime) in schedule.segments(horizon - 1):
        mixture = regime.mixture
        if groups is None:
            groups = list(apportion_initial(schedule.k, mixture).counts)
            counts[0, :len(groups)] = groups
        elif mixture != previous:
            # pool the groups and deal the cases out to the new mixture
            groups = list(rng.multinomial(sum(groups), mixture.weights))
        previous = mixture
        lam = regime.event_rate
        mu = regime.params.mu
        tau = regime.params.tau
        for step in range(int(t0), int(t1)):
            groups = [
                advance_group(n, lam, mu, tau, d, 1.0, rng)
                for (n, d) in zip(groups, mixture.batch_sizes)]
            counts[step + 1, :] = 0
            counts[step + 1, :len(groups)] = groups

    if groups is None:
        groups = list(apportion_initial(
            schedule.k, schedule.regimes[0].mixture).counts)
        counts[0, :len(groups)] = groups

    return ReplicationTrace(
        days=tuple(range(1, horizon + 1)),
        counts=counts,
        extinct=bool(counts[-1].sum() == 0))


def simulate_once(schedule, horizon, seed=0, replication=0):
    """One replication of the schedule over days 1..horizon."""
    config = SimulationConfig(schedule, horizon, 1, seed)
    return _simulate(config.schedule, int(config.horizon), int(config.seed),
                     replication)


def _run_chunk(schedule, horizon, seed, first, last):
    totals = np.empty((last - first, horizon), dtype=np.int64)
    for (row, j) in enumerate(range(first, last)):
        totals[row] = _simulate(schedule, horizon, seed, j).totals
    return totals


def ensemble_statistics(totals, seed=0):
    """Per-day statistics of a (replications x days) array of totals."""
    totals = np.asarray(totals, dtype=float)
    (reps, horizon) = totals.shape
    var = totals.var(axis=0, ddof=1) if reps > 1 else np.zeros(horizon)
    return EnsembleSummary(
        days=tuple(range(1, horizon + 1)),
        mean=totals.mean(axis=0),
        var=var,
        p05=np.quantile(totals, 0.05, axis=0),
        p95=np.quantile(totals, 0.95, axis=0),
        replications=reps,
        seed=seed)


def simulate_ensemble(config, jobs=1):
    horizon = int(config.horizon)
    reps = int(config.replications)
    bounds = list(range(0, reps, CHUNK_SIZE)) + [reps]
    args = [
        (config.schedule, horizon, int(config.seed), first, last)
        for (first, last) in zip(bounds, bounds[1:])]
    _logger.verbose(
        "simulating %d replications over %d days in %d chunks",
        reps, horizon, len(args))
    chunks = epiqbd.mputil.mp_pool_run(_run_chunk, args, jobs=jobs)
    totals = np.concatenate(chunks, axis=0)
    summary = ensemble_statistics(totals, int(config.seed))
    _logger.debug(
        "ensemble day %d: mean %.6g +/- %.3g", horizon, summary.mean[-1],
        math.sqrt(summary.var[-1] / reps))
    return summary
