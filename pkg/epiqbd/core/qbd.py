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

import enum

from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.sparse

import epiqbd
import epiqbd.log

_logger = epiqbd.log.getLogger(__name__)

# largest state index a level boundary may reach
MAX_STATE = np.iinfo(np.int64).max


class BoundaryPolicy(enum.Enum):
    REDIRECT = "redirect"
    DROP = "drop"


@dataclass(frozen=True)
class LevelPartition:
    k: int
    d: int
    levels: Tuple[range, ...]

    @property
    def upper_bound(self):
        return self.levels[-1].stop

    def level_of(self, state):
        for (n, level) in enumerate(self.levels):
            if state in level:
                return n
        raise epiqbd.NumericalError(
            "state %d lies beyond level %d" % (state, len(self.levels) - 1))


def build_levels(k, d, n_levels):
    """Partition the states into levels [k(d+1)^(n-1), k(d+1)^n).

    Level 0 holds the states below k.
    """
    if k < 1 or d < 1 or n_levels < 1:
        raise epiqbd.ValidationError(
            "need k >= 1, d >= 1 and n_levels >= 1, got k=%r d=%r "
            "n_levels=%r" % (k, d, n_levels))
    levels = [range(0, k)]
    lower = k
    for n in range(1, n_levels + 1):
        upper = k * (d + 1) ** n
        if upper - 1 > MAX_STATE:
            raise epiqbd.NumericalError(
                "level overflow: level %d ends beyond %d" % (n, MAX_STATE))
        levels.append(range(lower, upper))
        lower = upper
    return LevelPartition(k=k, d=d, levels=tuple(levels))


@dataclass(frozen=True)
class InitialDistribution:
    state: int
    dimension: int

    def __post_init__(self):
        if not 0 <= self.state < self.dimension:
            raise epiqbd.ValidationError(
                "initial state %d outside [0, %d)" % (
                    self.state, self.dimension), field="k")

    def to_vector(self):
        vector = np.zeros(self.dimension)
        vector[self.state] = 1.0
        return vector


class TruncatedGenerator:
    """Generator of one batch birth-death group on the states 0..n_max.

    Row n holds at most two off-diagonal rates: n * lambda_event towards
    n + d and n * mu towards n - 1.  Row 0 additionally carries tau towards
    d.  Jumps above n_max are redirected to n_max or dropped, depending on
    the boundary policy; dropped jumps keep their exit rate on the
    diagonal, so those rows leak probability.

    The rates are kept in a fixed per-row layout (up_target, up_rate,
    down_rate, diag) rather than in a general sparse matrix.
    """

    def __init__(self, lambda_event, mu, tau, d, n_max,
                 policy=BoundaryPolicy.REDIRECT):
        if min(lambda_event, mu, tau) < 0:
            raise epiqbd.ValidationError("rates must be non-negative")
        if d < 0:
            raise epiqbd.ValidationError(
                "must be >= 0, got %r" % (d,), field="d")
        if n_max < 1:
            raise epiqbd.ValidationError(
                "must be >= 1, got %r" % (n_max,), field="n_max")

        self.lambda_event = float(lambda_event)
        self.mu = float(mu)
        self.tau = float(tau)
        self.d = int(d)
        self.n_max = int(n_max)
        self.policy = BoundaryPolicy(policy)

        states = np.arange(self.n_max + 1)
        up_rate = states * self.lambda_event
        if self.tau > 0:
            up_rate[0] = self.tau
        raw_target = states + self.d
        if self.policy is BoundaryPolicy.REDIRECT:
            up_target = np.minimum(raw_target, self.n_max)
        else:
            up_target = np.where(raw_target > self.n_max, -1, raw_target)

        if self.d == 0:
            # an infection event that adds nobody does not change the state
            exit_up = np.zeros_like(up_rate)
            up_rate = np.zeros_like(up_rate)
        else:
            exit_up = up_rate.copy()
            # redirected jumps that land on their own row cancel out
            self_loop = up_target == states
            exit_up[self_loop] = 0.0
            up_rate = np.where((up_target < 0) | self_loop, 0.0, up_rate)
        up_target = np.where(up_rate > 0, up_target, -1)

        down_rate = states * self.mu

        self.up_target = up_target
        self.up_rate = up_rate
        self.down_rate = down_rate
        self.diag = -(exit_up + down_rate)

        _logger.trace(
            "generator: lambda=%g mu=%g tau=%g d=%d n_max=%d policy=%s",
            self.lambda_event, self.mu, self.tau, self.d, self.n_max,
            self.policy.value)

    def __repr__(self):
        return "<TruncatedGenerator d={} n_max={} policy={}>".format(
            self.d, self.n_max, self.policy.value)

    @property
    def dimension(self):
        return self.n_max + 1

    @property
    def max_exit_rate(self):
        return float(-self.diag.min())

    def entries(self):
        """Yield ((row, column), rate) for every non-zero entry."""
        for n in range(self.dimension):
            if self.diag[n] != 0:
                yield ((n, n), float(self.diag[n]))
            if self.up_target[n] >= 0:
                yield ((n, int(self.up_target[n])), float(self.up_rate[n]))
            if n > 0 and self.down_rate[n] != 0:
                yield ((n, n - 1), float(self.down_rate[n]))

    def to_sparse(self):
        """The generator as a scipy.sparse CSR matrix."""
        n = self.dimension
        states = np.arange(n)
        has_up = self.up_target >= 0
        rows = np.concatenate([
            states, states[has_up], states[1:]])
        cols = np.concatenate([
            states, self.up_target[has_up], states[:-1]])
        data = np.concatenate([
            self.diag, self.up_rate[has_up], self.down_rate[1:]])
        return scipy.sparse.coo_matrix(
            (data, (rows, cols)), shape=(n, n)).tocsr()

    def row_sums(self):
        # the death rate of row n sits in column n - 1 of the same row
        return self.diag + self.up_rate + self.down_rate

    def left_multiply(self, vector):
        """Return vector @ Q for a row vector."""
        out = vector * self.diag
        has_up = self.up_target >= 0
        out += np.bincount(
            self.up_target[has_up],
            weights=vector[has_up] * self.up_rate[has_up],
            minlength=self.dimension)
        out[:-1] += vector[1:] * self.down_rate[1:]
        return out


def build_generator(lambda_event, mu, tau, d, n_max,
                    policy=BoundaryPolicy.REDIRECT):
    return TruncatedGenerator(lambda_event, mu, tau, d, n_max, policy)


def block_of(gen, part, i, j):
    """Dense sub-matrix of gen for rows in level i and columns in level j."""
    for n in (i, j):
        if n < 0 or n >= len(part.levels) \
                or part.levels[n].stop - 1 > gen.n_max:
            raise epiqbd.NumericalError(
                "block outside truncation: level %d does not fit into "
                "states 0..%d" % (n, gen.n_max))
    rows = part.levels[i]
    cols = part.levels[j]
    matrix = gen.to_sparse()
    return matrix[rows.start:rows.stop, cols.start:cols.stop].toarray()
