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

"""Rate estimates, change points and mixture weights from daily series.

The infection estimate is the window average of new_confirmed / active and
the disappearance estimate the window average of new_disappeared / active,
both with the active count of the same day.  A change point t_c splits
the days 1..m into 1..t_c-1 and t_c..m.
"""

import math

from dataclasses import dataclass
from typing import Tuple

import numpy as np

import epiqbd
import epiqbd.log

from epiqbd.core.model import (
    Convention, GroupMixture, Regime, RegimeParameters, RegimeSchedule)

_logger = epiqbd.log.getLogger(__name__)

DEFAULT_PAIRS = ((0, 1), (0, 2), (1, 2))
WEIGHT_GRID = np.linspace(0.0, 1.0, 1001)

# a split must reduce the squared relative error to this fraction
SPLIT_GAIN = 0.85
MIN_SCAN_LENGTH = 8


@dataclass(frozen=True)
class EstimationWindow:
    first_day: int
    last_day: int

    def __post_init__(self):
        if not 1 <= self.first_day <= self.last_day:
            raise epiqbd.ValidationError(
                "need 1 <= first <= last, got [%r, %r]" % (
                    self.first_day, self.last_day), field="window")

    @classmethod
    def full(cls, series):
        return cls(1, len(series))

    @property
    def m(self):
        return self.last_day - self.first_day + 1

    def check(self, series):
        if self.last_day > len(series):
            raise epiqbd.ValidationError(
                "window [%d, %d] exceeds the %d days of the series" % (
                    self.first_day, self.last_day, len(series)),
                field="window")
        return slice(self.first_day - 1, self.last_day)


@dataclass(frozen=True)
class ParameterEstimate:
    beta_hat: float
    mu_hat: float
    k: int
    window: EstimationWindow

    def params(self, convention=Convention.FLOW, tau=0.0):
        return RegimeParameters(
            beta=self.beta_hat, mu=self.mu_hat, tau=tau,
            convention=convention)


def _window_mean(series, window, column):
    rows = window.check(series)
    numerator = series.column(column)[rows]
    active = series.active[rows]
    zero = np.flatnonzero(active == 0)
    if zero.size:
        raise epiqbd.NumericalError(
            "division by zero active on day %d" % (
                window.first_day + int(zero[0])))
    return math.fsum(numerator / active) / window.m


def estimate_beta(series, window=None):
    window = window or EstimationWindow.full(series)
    return _window_mean(series, window, "new_confirmed")


def estimate_mu(series, window=None):
    window = window or EstimationWindow.full(series)
    return _window_mean(series, window, "new_disappeared")


def estimate(series, window=None):
    window = window or EstimationWindow.full(series)
    return ParameterEstimate(
        beta_hat=estimate_beta(series, window),
        mu_hat=estimate_mu(series, window),
        k=int(series.active[window.first_day - 1]),
        window=window)


def split_at_change_point(series, t_c):
    m = len(series)
    if isinstance(t_c, bool) or int(t_c) != t_c or not 2 <= t_c <= m:
        raise epiqbd.ValidationError(
            "change point %r out of range [2, %d]" % (t_c, m),
            field="change_point")
    t_c = int(t_c)
    return (EstimationWindow(1, t_c - 1), EstimationWindow(t_c, m))


def split_windows(series, change_points=()):
    """Windows of the regimes separated by the given change points."""
    windows = [EstimationWindow.full(series)]
    previous = 1
    for t_c in sorted(change_points):
        if t_c <= previous:
            raise epiqbd.ValidationError(
                "change points must be distinct and > 1", field="change_point")
        (pre, post) = split_at_change_point(series, t_c)
        windows[-1] = EstimationWindow(windows[-1].first_day, pre.last_day)
        windows.append(post)
        previous = t_c
    return windows


def estimate_regimes(series, change_points=()):
    return [estimate(series, w) for w in split_windows(series, change_points)]


def build_schedule(estimates, mixtures, convention=Convention.FLOW, tau=0.0):
    """Schedule with one regime per estimate, starting at day 1."""
    if len(estimates) != len(mixtures):
        raise epiqbd.ValidationError(
            "%d estimates for %d mixtures" % (len(estimates), len(mixtures)))
    regimes = tuple(
        Regime(e.window.first_day, e.params(convention, tau), mixture)
        for (e, mixture) in zip(estimates, mixtures))
    return RegimeSchedule(regimes, estimates[0].k)


def locate_reported_split(series, reported, tol=None):
    """Rank every change point by how well it reproduces reported rates.

    reported is (beta_pre, mu_pre, beta_post, mu_post).  Returns
    [(t_c, max_abs_error), ...] ordered by error, restricted to errors
    <= tol when tol is given.
    """
    reported = np.asarray(reported, dtype=float)
    ranking = []
    for t_c in range(2, len(series) + 1):
        (pre, post) = split_at_change_point(series, t_c)
        try:
            values = (estimate_beta(series, pre), estimate_mu(series, pre),
                      estimate_beta(series, post), estimate_mu(series, post))
        except epiqbd.NumericalError as e:
            _logger.debug("change point %d skipped: %s", t_c, e)
            continue
        error = float(np.max(np.abs(np.asarray(values) - reported)))
        if tol is None or error <= tol:
            ranking.append((t_c, error))
    ranking.sort(key=lambda item: (item[1], item[0]))
    return ranking


def _scan_error(active, growth, boundary):
    """Squared relative error of a piecewise exponential through day 1."""
    t = np.arange(len(active), dtype=float)
    (g1, g2) = growth
    exponent = g1 * np.minimum(t, boundary) + g2 * np.maximum(t - boundary, 0)
    predicted = active[0] * np.exp(exponent)
    return math.fsum(((predicted - active) / active) ** 2)


def detect_change_point(series):
    """Most convincing single change point of the series, or None."""
    m = len(series)
    if m < MIN_SCAN_LENGTH:
        raise epiqbd.ValidationError(
            "need at least %d days, got %d" % (MIN_SCAN_LENGTH, m),
            field="series")
    active = series.active.astype(float)
    full = estimate(series)
    growth = full.beta_hat - full.mu_hat
    baseline = _scan_error(active, (growth, growth), m)

    best = None
    for t_c in range(4, m - 2):
        (pre, post) = [estimate(series, w)
                       for w in split_at_change_point(series, t_c)]
        error = _scan_error(
            active, (pre.beta_hat - pre.mu_hat, post.beta_hat - post.mu_hat),
            t_c - 2)
        _logger.trace("change point %d: error %.6g", t_c, error)
        if best is None or error < best[1]:
            best = (t_c, error)

    _logger.debug(
        "change point scan: no split %.6g, best %s", baseline, best)
    if best is not None and best[1] <= SPLIT_GAIN * baseline:
        return best[0]
    return None


@dataclass(frozen=True)
class WeightFit:
    mixtures: Tuple[GroupMixture, ...]
    objective: float
    pairs: Tuple[Tuple[int, int], ...]
    weights: Tuple[float, ...]

    @property
    def mixture(self):
        return self.mixtures[0]


def _group_growth(pair, beta, mu, convention, times):
    """Growth factors of each group of the pair for every grid weight.

    Returns (g1, g2, finite): two arrays of shape (grid, len(times)) and
    the mask of grid rows with a defined event rate.
    """
    (d1, d2) = pair
    r2 = WEIGHT_GRID[:, None]
    d_eff = (1.0 - r2) * d1 + r2 * d2
    if convention is Convention.EVENT:
        lam = np.full_like(d_eff, beta)
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            lam = np.where(d_eff > 0, beta / np.where(d_eff > 0, d_eff, 1),
                           np.inf)
    t = np.asarray(times, dtype=float)[None, :]
    finite = np.isfinite(lam)
    lam = np.where(finite, lam, 0.0)
    with np.errstate(over="ignore"):
        g1 = np.exp((lam * d1 - mu) * t)
        g2 = np.exp((lam * d2 - mu) * t)
    return (g1, g2, finite[:, 0])


def _pair_curves(pair, beta, mu, convention, times):
    """Group mean per unit start count for every grid weight.

    Returns an array of shape (grid, len(times)); rows without a defined
    event rate are infinite.
    """
    (g1, g2, finite) = _group_growth(pair, beta, mu, convention, times)
    r2 = WEIGHT_GRID[:, None]
    with np.errstate(over="ignore", invalid="ignore"):
        curves = (1.0 - r2) * g1 + r2 * g2
    curves[~finite] = np.inf
    return curves


def _segments(estimates, m):
    """Day indices (0 based) of each regime, boundary days to the earlier."""
    t = np.arange(m, dtype=float)
    starts = [float(max(e.window.first_day - 2, 0)) for e in estimates]
    ends = starts[1:] + [float(m)]
    result = []
    for (i, (t0, t1)) in enumerate(zip(starts, ends)):
        if i == 0:
            mask = t <= t1
        else:
            mask = (t > t0) & (t <= t1)
        result.append((t0, np.flatnonzero(mask)))
    return result


def _squared_errors(scale, curves, observed):
    with np.errstate(over="ignore", invalid="ignore"):
        ss = ((scale * curves / observed - 1.0) ** 2).sum(axis=-1)
    return np.where(np.isnan(ss), np.inf, ss)


def _check_pairs(pairs):
    pairs = tuple((int(a), int(b)) for (a, b) in pairs)
    if not pairs:
        raise epiqbd.ValidationError("no candidate pairs", field="pairs")
    for (a, b) in pairs:
        if a < 0 or b < 0 or a == b:
            raise epiqbd.ValidationError(
                "pair (%d, %d) needs distinct batch sizes >= 0" % (a, b),
                field="pairs")
    return pairs


def _best(candidates):
    # candidates: (objective, weights, pair indices, payload)
    return min(candidates, key=lambda c: (c[0], c[1], c[2]))


def fit_weights(series, estimates, candidate_pairs=DEFAULT_PAIRS,
                convention=Convention.FLOW):
    """Grid search of the mixture weights against the observed actives.

    One weight r2 in {0, 0.001, ..., 1} is fitted per regime and candidate
    pair; two regimes are fitted jointly, further regimes one after the
    other with the earlier ones fixed.  The objective is the root mean
    square relative error of the closed form mean over all days.
    """
    estimates = list(estimates)
    pairs = _check_pairs(candidate_pairs)
    convention = Convention.parse(convention)
    m = len(series)
    observed = series.active.astype(float)
    if np.any(observed <= 0):
        raise epiqbd.NumericalError("division by zero active in weight fit")
    k = float(estimates[0].k)
    segments = _segments(estimates, m)

    def curves_for(j, pair, extra_time=None):
        (t0, days) = segments[j]
        times = days.astype(float) - t0
        if extra_time is not None:
            times = np.append(times, extra_time - t0)
        e = estimates[j]
        return _pair_curves(pair, e.beta_hat, e.mu_hat, convention, times)

    def growth_for(j, pair, times):
        e = estimates[j]
        return _group_growth(pair, e.beta_hat, e.mu_hat, convention, times)

    def carried_errors(j, pair, groups, days):
        """Errors of regime j when the groups at its start, one row per
        grid weight, carry over unchanged."""
        (t0, _) = segments[j]
        (g1, g2, finite) = growth_for(j, pair, days.astype(float) - t0)
        with np.errstate(over="ignore", invalid="ignore"):
            curves = groups[0][:, None] * g1 + groups[1][:, None] * g2
        curves[~finite] = np.inf
        return _squared_errors(1.0, curves, observed[days])

    if len(estimates) == 2:
        (_, days1) = segments[0]
        (t_switch, days2) = segments[1]
        candidates = []
        for (a, pair_a) in enumerate(pairs):
            c1 = curves_for(0, pair_a, extra_time=t_switch)
            ss1 = _squared_errors(k, c1[:, :-1], observed[days1])
            start = k * c1[:, -1]
            c2_all = [(b, pair_b, curves_for(1, pair_b))
                      for (b, pair_b) in enumerate(pairs)]
            for (b, pair_b, c2) in c2_all:
                y = observed[days2]
                with np.errstate(over="ignore", invalid="ignore"):
                    sq = ((c2 / y) ** 2).sum(axis=1)
                    lin = (c2 / y).sum(axis=1)
                    ss2 = (np.outer(start ** 2, sq)
                           - 2.0 * np.outer(start, lin) + len(days2))
                total = ss1[:, None] + np.maximum(ss2, 0.0)
                total = np.where(np.isnan(total), np.inf, total)
                if a == b:
                    # same mixture on both sides: no pooling at the switch
                    (g1, g2, _) = growth_for(0, pair_a, [t_switch])
                    r2 = WEIGHT_GRID
                    with np.errstate(over="ignore", invalid="ignore"):
                        groups = (k * (1.0 - r2) * g1[:, 0],
                                  k * r2 * g2[:, 0])
                    diagonal = np.arange(len(WEIGHT_GRID))
                    total[diagonal, diagonal] = ss1 + carried_errors(
                        1, pair_b, groups, days2)
                flat = int(np.argmin(total))
                (i, jj) = np.unravel_index(flat, total.shape)
                candidates.append((
                    float(total[i, jj]),
                    (float(WEIGHT_GRID[i]), float(WEIGHT_GRID[jj])),
                    (a, b), (pair_a, pair_b)))
        (ss, weights, _, chosen) = _best(candidates)
    else:
        weights = []
        chosen = []
        ss = 0.0
        start = k
        # (pair, grid row, group values) at the end of the last regime
        previous = None
        for j in range(len(estimates)):
            (t0, days) = segments[j]
            t1 = float(days[-1]) if len(days) else t0
            candidates = []
            for (a, pair) in enumerate(pairs):
                curves = curves_for(j, pair)
                errors = _squared_errors(start, curves, observed[days])
                if previous is not None and previous[0] == pair:
                    (_, row, groups) = previous
                    rows = len(WEIGHT_GRID)
                    errors[row] = carried_errors(
                        j, pair, (np.full(rows, groups[0]),
                                  np.full(rows, groups[1])), days)[row]
                i = int(np.argmin(errors))
                candidates.append((
                    float(errors[i]), float(WEIGHT_GRID[i]), a, (pair, i)))
            (err, r2, _, (pair, i)) = _best(candidates)
            if previous is not None and previous[:2] == (pair, i):
                base = previous[2]
            else:
                base = (start * (1.0 - r2), start * r2)
            (g1, g2, _) = growth_for(j, pair, [t1 - t0])
            groups = (base[0] * float(g1[i, 0]), base[1] * float(g2[i, 0]))
            weights.append(r2)
            chosen.append(pair)
            ss += err
            start = math.fsum(groups)
            previous = (pair, i, groups)
        weights = tuple(weights)
        chosen = tuple(chosen)

    objective = math.sqrt(ss / m) if math.isfinite(ss) else math.inf
    mixtures = tuple(
        GroupMixture.pair(d1, d2, r2)
        for ((d1, d2), r2) in zip(chosen, weights))
    _logger.verbose(
        "fitted weights %s for pairs %s, rms relative error %.6g",
        weights, chosen, objective)
    return WeightFit(mixtures=mixtures, objective=objective,
                     pairs=tuple(chosen), weights=tuple(weights))
