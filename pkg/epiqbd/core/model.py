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

"""Parameter types of the batch infection process.

A patient group with batch size d evolves as a linear birth-death chain:
every active case triggers a batch of d new cases at the per-event rate
and disappears (cure or death) at rate mu.  A population is a mixture of
independent groups, and a schedule strings mixtures together at change
points.
"""

import enum
import math
import numbers

from dataclasses import dataclass
from typing import Tuple

import numpy as np

import epiqbd

WEIGHT_TOLERANCE = 1e-12


class Convention(enum.Enum):
    """How an estimated beta maps to the per-event infection rate.

    EVENT reads beta as the per-event rate itself, FLOW reads it as the
    per-patient flow of new cases (rate times effective batch size).
    """
    EVENT = "event"
    FLOW = "flow"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise epiqbd.ValidationError(
                "must be one of: %s" % (
                    ", ".join(c.value for c in cls)),
                field="convention") from None

    def __str__(self):
        return self.value


def _check_rate(name, value):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise epiqbd.ValidationError("must be a number", field=name)
    if not math.isfinite(value) or value < 0:
        raise epiqbd.ValidationError(
            "must be finite and non-negative, got %r" % (value,), field=name)


@dataclass(frozen=True)
class RegimeParameters:
    beta: float
    mu: float
    tau: float = 0.0
    convention: Convention = Convention.FLOW

    def __post_init__(self):
        for name in ("beta", "mu", "tau"):
            _check_rate(name, getattr(self, name))
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(
            self, "convention", Convention.parse(self.convention))


@dataclass(frozen=True)
class Group:
    d: int
    r: float

    def __post_init__(self):
        if isinstance(self.d, bool) or not isinstance(
                self.d, (int, np.integer)) or self.d < 0:
            raise epiqbd.ValidationError(
                "batch size must be an integer >= 0, got %r" % (self.d,),
                field="d")
        object.__setattr__(self, "d", int(self.d))
        _check_rate("r", self.r)
        if self.r > 1:
            raise epiqbd.ValidationError(
                "weight must lie in [0, 1], got %r" % (self.r,), field="r")


@dataclass(frozen=True)
class GroupMixture:
    groups: Tuple[Group, ...]
    pure_decay: bool = False

    def __post_init__(self):
        groups = tuple(
            g if isinstance(g, Group) else Group(*g) for g in self.groups)
        object.__setattr__(self, "groups", groups)

        if not groups:
            raise epiqbd.ValidationError(
                "a mixture needs at least one group", field="groups")
        total = math.fsum(g.r for g in groups)
        if abs(total - 1.0) > WEIGHT_TOLERANCE:
            raise epiqbd.ValidationError(
                "weights must sum to 1, got %.15g" % (total), field="groups")
        sizes = [g.d for g in groups]
        if len(set(sizes)) != len(sizes):
            raise epiqbd.ValidationError(
                "batch sizes must be distinct, got %s" % (sizes),
                field="groups")
        if not self.pure_decay and max(sizes) < 1:
            raise epiqbd.ValidationError(
                "no group has a batch size >= 1; mark the mixture as "
                "pure decay if that is intended", field="groups")

    @classmethod
    def single(cls, d=1):
        return cls(((d, 1.0),), pure_decay=(d == 0))

    @classmethod
    def pair(cls, d1, d2, r2):
        """Two groups with batch sizes d1 and d2, weight r2 on the second.

        The weight of the first group is 1 - r2, so the pair is always
        normalised.
        """
        return cls(((d1, 1.0 - r2), (d2, r2)),
                   pure_decay=(max(d1, d2) == 0))

    @property
    def batch_sizes(self):
        return tuple(g.d for g in self.groups)

    @property
    def weights(self):
        return tuple(g.r for g in self.groups)

    def __len__(self):
        return len(self.groups)


def effective_batch_size(mixture):
    """Weighted average batch size of the mixture."""
    return math.fsum(g.r * g.d for g in mixture.groups)


def event_rate(params, mixture):
    """Per-patient rate of batch infection events."""
    if params.convention is Convention.EVENT:
        return params.beta
    d_eff = effective_batch_size(mixture)
    if d_eff <= 0:
        raise epiqbd.NumericalError(
            "zero effective batch size: the flow convention cannot be "
            "applied to a pure decay mixture")
    return params.beta / d_eff


def largest_remainder(total, weights):
    """Split the integer total into integer shares proportional to weights.

    The shares sum exactly to total and each is within 1 of its exact
    share.  Ties between equal remainders go to the earlier group.
    """
    weights = np.asarray(weights, dtype=float)
    raw = total * weights
    shares = np.floor(raw).astype(np.int64)
    missing = int(total - shares.sum())
    if missing > 0:
        order = np.argsort(-(raw - shares), kind="stable")
        shares[order[:missing]] += 1
    return tuple(int(s) for s in shares)


@dataclass(frozen=True)
class PopulationState:
    counts: Tuple[int, ...]
    time: float = 0.0

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if any(c < 0 for c in counts):
            raise epiqbd.ValidationError(
                "group counts must be >= 0, got %s" % (counts,),
                field="counts")
        object.__setattr__(self, "counts", counts)

    @property
    def total(self):
        return sum(self.counts)


def apportion_initial(k, mixture):
    """Distribute the k initial cases over the groups of the mixture."""
    if k < 1:
        raise epiqbd.ValidationError("must be >= 1, got %r" % (k,), field="k")
    return PopulationState(largest_remainder(k, mixture.weights), time=0.0)


@dataclass(frozen=True)
class Regime:
    start_day: int
    params: RegimeParameters
    mixture: GroupMixture

    @property
    def event_rate(self):
        return event_rate(self.params, self.mixture)

    @property
    def start_time(self):
        """Model time from which this regime governs the process.

        Day i is observed at t = i - 1 and the increment reported on day
        i is driven by the regime owning day i, so a regime starting on
        day s >= 2 takes over at t = s - 2.
        """
        return float(max(self.start_day - 2, 0))

    def growth_rates(self):
        """Per-group exponential growth rate of the mean."""
        lam = self.event_rate
        return tuple(
            lam * d - self.params.mu for d in self.mixture.batch_sizes)


@dataclass(frozen=True)
class RegimeSchedule:
    regimes: Tuple[Regime, ...]
    k: int

    def __post_init__(self):
        regimes = tuple(self.regimes)
        object.__setattr__(self, "regimes", regimes)
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 1:
            raise epiqbd.ValidationError(
                "must be an integer >= 1, got %r" % (self.k,), field="k")
        object.__setattr__(self, "k", int(self.k))
        if not regimes:
            raise epiqbd.ValidationError(
                "a schedule needs at least one regime", field="regimes")
        if regimes[0].start_day != 1:
            raise epiqbd.ValidationError(
                "the first regime must start at day 1", field="start_day")
        for (prev, cur) in zip(regimes, regimes[1:]):
            if cur.start_day <= prev.start_day:
                raise epiqbd.ValidationError(
                    "start days must be strictly increasing, got %d after %d"
                    % (cur.start_day, prev.start_day), field="start_day")

    @classmethod
    def single(cls, k, params, mixture):
        return cls((Regime(1, params, mixture),), k)

    @property
    def change_points(self):
        return tuple(r.start_day for r in self.regimes[1:])

    def regime_for_day(self, day):
        current = self.regimes[0]
        for regime in self.regimes[1:]:
            if regime.start_day > day:
                break
            current = regime
        return current

    def segments(self, t_end):
        """Yield (t0, t1, regime) pieces covering [0, t_end].

        Regimes whose start lies beyond t_end are skipped; the last regime
        extends to t_end.
        """
        starts = [r.start_time for r in self.regimes]
        for (i, regime) in enumerate(self.regimes):
            t0 = starts[i]
            if t0 > t_end:
                break
            t1 = starts[i + 1] if i + 1 < len(starts) else t_end
            t1 = min(t1, t_end)
            if t1 > t0 or (i == 0 and t_end == 0):
                yield (t0, t1, regime)
