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

import collections
import enum
import math

from dataclasses import dataclass
from typing import Optional, Tuple

import epiqbd
import epiqbd.log

from epiqbd.core import transient
from epiqbd.core.model import (
    Convention, GroupMixture, Regime, RegimeParameters, RegimeSchedule)

_logger = epiqbd.log.getLogger(__name__)


class KTransform(enum.Enum):
    NONE = "none"
    HALVE_CEILING = "halve_ceiling"


@dataclass(frozen=True)
class Scenario:
    """Parameter edits applied to every regime of a schedule.

    weight_override holds one entry per regime; an entry of None keeps the
    weights of that regime.
    """
    lambda_scale: float = 1.0
    k_transform: KTransform = KTransform.NONE
    batch_shift: int = 0
    weight_override: Optional[Tuple[Optional[Tuple[float, ...]], ...]] = None

    def __post_init__(self):
        scale = self.lambda_scale
        if isinstance(scale, bool) or not isinstance(scale, (int, float)) \
                or not math.isfinite(scale) or scale <= 0:
            raise epiqbd.ValidationError(
                "must be a finite number > 0, got %r" % (scale,),
                field="lambda_scale")
        object.__setattr__(self, "lambda_scale", float(scale))
        try:
            object.__setattr__(
                self, "k_transform", KTransform(self.k_transform))
        except ValueError:
            raise epiqbd.ValidationError(
                "must be one of: %s" % (
                    ", ".join(t.value for t in KTransform)),
                field="k_transform") from None
        shift = self.batch_shift
        if isinstance(shift, bool) or int(shift) != shift or shift > 0:
            raise epiqbd.ValidationError(
                "must be an integer <= 0, got %r" % (shift,),
                field="batch_shift")
        object.__setattr__(self, "batch_shift", int(shift))
        if self.weight_override is not None:
            override = tuple(
                None if w is None else tuple(float(x) for x in w)
                for w in self.weight_override)
            for weights in override:
                if weights is None:
                    continue
                if min(weights) < 0 or abs(math.fsum(weights) - 1) > 1e-12:
                    raise epiqbd.ValidationError(
                        "override weights must be >= 0 and sum to 1, got %s"
                        % (weights,), field="weight_override")
            object.__setattr__(self, "weight_override", override)

    @classmethod
    def from_dict(cls, data):
        unknown = set(data) - {
            "lambda_scale", "k_transform", "batch_shift", "weight_override"}
        if unknown:
            raise epiqbd.ValidationError(
                "unknown keys %s" % (", ".join(sorted(unknown))),
                field="scenario")
        return cls(
            lambda_scale=data.get("lambda_scale", 1.0),
            k_transform=data.get("k_transform", KTransform.NONE.value),
            batch_shift=data.get("batch_shift", 0),
            weight_override=data.get("weight_override"))

    def to_dict(self):
        return {
            "lambda_scale": self.lambda_scale,
            "k_transform": self.k_transform.value,
            "batch_shift": self.batch_shift,
            "weight_override": (
                None if self.weight_override is None
                else [None if w is None else list(w)
                      for w in self.weight_override]),
        }

    @property
    def is_identity(self):
        return (self.lambda_scale == 1.0
                and self.k_transform is KTransform.NONE
                and self.batch_shift == 0
                and self.weight_override is None)


@dataclass(frozen=True)
class RhoCurve:
    times: Tuple[float, ...]
    values: Tuple[float, ...]

    def value_at(self, day):
        return self.values[self.times.index(float(day))]


def _shift_mixture(mixture, shift, override):
    merged = collections.OrderedDict()
    for group in mixture.groups:
        d = max(group.d + shift, 0)
        merged[d] = merged.get(d, 0.0) + group.r
    sizes = list(merged)
    weights = list(merged.values())
    if override is not None:
        if len(override) != len(sizes):
            raise epiqbd.ValidationError(
                "%d override weights for %d groups" % (
                    len(override), len(sizes)), field="weight_override")
        weights = list(override)
    return GroupMixture(
        tuple(zip(sizes, weights)), pure_decay=max(sizes) == 0)


def apply_scenario(baseline, s):
    """The baseline schedule with the scenario's edits applied.

    Edits act on the per-event rate: a regime whose rate is scaled or whose
    mixture changes is re-expressed in the event convention, so that the
    flow convention cannot undo a batch size change through d_eff.  The
    disappearance rate is never touched.
    """
    if s.weight_override is not None \
            and len(s.weight_override) != len(baseline.regimes):
        raise epiqbd.ValidationError(
            "%d weight overrides for %d regimes" % (
                len(s.weight_override), len(baseline.regimes)),
            field="weight_override")

    regimes = []
    for (i, regime) in enumerate(baseline.regimes):
        override = s.weight_override[i] if s.weight_override else None
        mixture = _shift_mixture(regime.mixture, s.batch_shift, override)
        params = regime.params
        if s.lambda_scale != 1.0 or mixture != regime.mixture:
            params = RegimeParameters(
                beta=s.lambda_scale * regime.event_rate,
                mu=params.mu, tau=params.tau, convention=Convention.EVENT)
        regimes.append(Regime(regime.start_day, params, mixture))

    k = baseline.k
    if s.k_transform is KTransform.HALVE_CEILING:
        k = -(-k // 2)
    return RegimeSchedule(tuple(regimes), k)


def rho_curve(baseline, scenario_schedule, grid,
              engine=transient.Engine.CLOSED_FORM,
              tol=transient.DEFAULT_TOLERANCE, jobs=1):
    """Pointwise ratio of the baseline to the scenario expectation."""
    base = transient.mean_trajectory(baseline, grid, engine, tol, jobs)
    other = transient.mean_trajectory(
        scenario_schedule, grid, engine, tol, jobs)
    values = []
    for (day, b, o) in zip(base.times, base.values, other.values):
        if not o > 0:
            raise epiqbd.NumericalError(
                "degenerate scenario: expectation %g on day %g" % (o, day))
        values.append(b / o)
    return RhoCurve(times=base.times, values=tuple(values))


def standard_scenarios(shifted_weights=None):
    """Halve the rate, shift every batch size by one, halve k.

    shifted_weights optionally gives the weights of each regime after the
    batch shift (None entries keep the merged weights).
    """
    if shifted_weights is not None and all(
            w is None for w in shifted_weights):
        shifted_weights = None
    return collections.OrderedDict([
        ("lambda", Scenario(lambda_scale=0.5)),
        ("d", Scenario(batch_shift=-1, weight_override=shifted_weights)),
        ("k", Scenario(k_transform=KTransform.HALVE_CEILING)),
    ])


def scenario_report(baseline, scenarios, grid,
                    engine=transient.Engine.CLOSED_FORM,
                    tol=transient.DEFAULT_TOLERANCE, jobs=1):
    """rho curve of every named scenario, in the given order."""
    report = collections.OrderedDict()
    for (name, scenario) in scenarios.items():
        schedule = apply_scenario(baseline, scenario)
        report[name] = rho_curve(baseline, schedule, grid, engine, tol, jobs)
        _logger.verbose(
            "scenario %s: rho(day %g) = %.6g", name,
            report[name].times[-1], report[name].values[-1])
    return report
