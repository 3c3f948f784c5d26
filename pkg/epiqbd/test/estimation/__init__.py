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

import datetime
import math

import epiqbd

from epiqbd import test
from epiqbd.core import estimation
from epiqbd.core.estimation import (
    EstimationWindow, ParameterEstimate, build_schedule, detect_change_point,
    estimate, estimate_beta, estimate_mu, estimate_regimes, fit_weights,
    locate_reported_split, split_at_change_point, split_windows)
from epiqbd.core.model import (
    Convention, GroupMixture, Regime, RegimeParameters, RegimeSchedule)
from epiqbd.core.transient import mean_trajectory
from epiqbd.data.fixture import load_fixture
from epiqbd.data.series import DailySeries


def synthetic_series(actives, disappearing=0.05, first_new=None):
    """A consistent series with the given active counts.

    A fixed share of the actives disappears every day; new cases make up
    the difference.
    """
    start = datetime.date(2020, 1, 1)
    records = []
    disappeared = 500
    for (i, active) in enumerate(actives):
        new_disappeared = int(disappearing * active + 0.5)
        if i == 0:
            new_confirmed = first_new if first_new is not None \
                else new_disappeared
        else:
            disappeared += new_disappeared
            new_confirmed = active - actives[i - 1] + new_disappeared
        records.append((
            (start + datetime.timedelta(days=i)).isoformat(),
            active + disappeared, new_confirmed, disappeared,
            new_disappeared, active))
    return DailySeries.from_records(records, source="synthetic")


def exponential_actives(k, growth, days):
    """k e^(g t) rounded, growth given as [(first day, rate), ...]."""
    actives = []
    exponent = 0.0
    for day in range(1, days + 1):
        if day > 1:
            exponent += [g for (first, g) in growth if first <= day][-1]
        actives.append(int(k * math.exp(exponent) + 0.5))
    return actives


class EstimatorTestCase(test.EpiTestCase):

    @classmethod
    def setUpClass(cls):
        cls.egypt = load_fixture("egypt").series
        cls.new_york = load_fixture("new-york").series
        cls.korea = load_fixture("south-korea").series

    def test_egypt(self):
        self.assertAlmostEqual(
            estimate_beta(self.egypt), 0.085434063, delta=1e-5)
        self.assertAlmostEqual(
            estimate_mu(self.egypt), 0.045978143, delta=1e-5)

    def test_new_york(self):
        est = estimate(self.new_york)
        self.assertAlmostEqual(est.beta_hat, 0.035073852, delta=1e-5)
        self.assertAlmostEqual(est.mu_hat, 0.006084398, delta=1e-5)
        self.assertEqual(est.k, 101592)
        self.assertEqual(est.window, EstimationWindow(1, 20))

    def test_korea_split(self):
        (pre, post) = split_at_change_point(self.korea, 11)
        self.assertEqual((pre.first_day, pre.last_day), (1, 10))
        self.assertEqual((post.first_day, post.last_day), (11, 20))
        self.assertAlmostEqual(
            estimate_beta(self.korea, pre), 0.062135947, delta=1e-5)
        self.assertAlmostEqual(
            estimate_beta(self.korea, post), 0.09774732, delta=1e-5)
        self.assertAlmostEqual(
            estimate_mu(self.korea, pre), 0.053096363, delta=1e-3)
        self.assertAlmostEqual(
            estimate_mu(self.korea, post), 0.038994525, delta=1e-3)

    def test_reported_rates(self):
        for key in ("india", "italy"):
            fixture = load_fixture(key)
            estimates = estimate_regimes(
                fixture.series, fixture.change_points)
            for (est, (beta, mu)) in zip(estimates, fixture.reported_rates):
                self.assertAlmostEqual(est.beta_hat, beta, delta=1e-3, msg=key)
                self.assertAlmostEqual(est.mu_hat, mu, delta=1e-3, msg=key)

    def test_mexico_reported_split(self):
        # the reported rates belong to a split at day 9
        fixture = load_fixture("mexico")
        reported = [x for pair in fixture.reported_rates for x in pair]
        ranking = locate_reported_split(fixture.series, reported)
        self.assertEqual(ranking[0][0], 9)
        self.assertLess(ranking[0][1], 1e-3)
        self.assertEqual(
            locate_reported_split(fixture.series, reported, tol=1e-3)[0][0],
            9)

    def test_window_additivity(self):
        m = len(self.korea)
        full = estimate(self.korea)
        for t_c in range(2, m + 1):
            (pre, post) = [estimate(self.korea, w)
                           for w in split_at_change_point(self.korea, t_c)]
            self.assertAlmostEqual(
                m * full.beta_hat,
                pre.window.m * pre.beta_hat + post.window.m * post.beta_hat,
                delta=1e-12)
            self.assertAlmostEqual(
                m * full.mu_hat,
                pre.window.m * pre.mu_hat + post.window.m * post.mu_hat,
                delta=1e-12)

    def test_scale_invariance(self):
        scaled = self.egypt.scaled(7)
        self.assertAlmostEqual(
            estimate_beta(scaled), estimate_beta(self.egypt), delta=1e-15)
        self.assertAlmostEqual(
            estimate_mu(scaled), estimate_mu(self.egypt), delta=1e-15)

    def test_no_new_cases(self):
        series = synthetic_series([100] * 5, disappearing=0.0)
        self.assertEqual(estimate_beta(series), 0.0)
        self.assertEqual(estimate_mu(series), 0.0)

    def test_division_by_zero_active(self):
        series = DailySeries.from_records([
            ("2020-01-01", 10, 0, 7, 0, 3),
            ("2020-01-02", 10, 0, 8, 1, 2),
            ("2020-01-03", 10, 0, 10, 2, 0),
            ("2020-01-04", 10, 0, 10, 0, 0)])
        with self.assertRaises(epiqbd.NumericalError) as cm:
            estimate_beta(series)
        self.assertIn("division by zero active", str(cm.exception))
        # the zero lies outside this window
        self.assertEqual(
            estimate_mu(series, EstimationWindow(1, 2)), 0.25)


class WindowTestCase(test.EpiTestCase):

    def test_two_day_series(self):
        series = synthetic_series([10, 11])
        (pre, post) = split_at_change_point(series, 2)
        self.assertEqual((pre.m, post.m), (1, 1))

    def test_out_of_range(self):
        series = synthetic_series([10, 11, 12])
        for t_c in (1, 4, 0, 2.5):
            with self.assertRaises(epiqbd.ValidationError) as cm:
                split_at_change_point(series, t_c)
            self.assertIn("out of range", str(cm.exception))

    def test_window_beyond_series(self):
        series = synthetic_series([10, 11, 12])
        with self.assertRaises(epiqbd.ValidationError):
            estimate(series, EstimationWindow(2, 4))
        with self.assertRaises(epiqbd.ValidationError):
            EstimationWindow(3, 2)

    def test_split_windows(self):
        series = synthetic_series(list(range(10, 30)))
        windows = split_windows(series, [12, 5])
        self.assertEqual(
            [(w.first_day, w.last_day) for w in windows],
            [(1, 4), (5, 11), (12, 20)])
        self.assertEqual(split_windows(series), [EstimationWindow(1, 20)])
        with self.assertRaises(epiqbd.ValidationError):
            split_windows(series, [5, 5])


class ChangePointTestCase(test.EpiTestCase):

    def test_two_regimes(self):
        actives = exponential_actives(1000, [(1, 0.01), (11, 0.06)], 20)
        series = synthetic_series(actives, first_new=60)
        self.assertIn(detect_change_point(series), (10, 11, 12))

    def test_single_regime(self):
        actives = exponential_actives(1000, [(1, 0.03)], 20)
        series = synthetic_series(actives, first_new=80)
        self.assertIsNone(detect_change_point(series))

    def test_korea(self):
        self.assertIn(
            detect_change_point(load_fixture("south-korea").series),
            (10, 11, 12))

    def test_short_series(self):
        series = synthetic_series([10] * 7)
        with self.assertRaises(epiqbd.ValidationError):
            detect_change_point(series)


class FitWeightsTestCase(test.EpiTestCase):

    def test_synthetic_mixture(self):
        # rounded closed form actives of k=2000, pair (1, 2), r2=0.25
        lam = 0.1 / 1.25
        actives = [
            int(2000 * (0.75 * math.exp((lam - 0.05) * t)
                        + 0.25 * math.exp((2 * lam - 0.05) * t)) + 0.5)
            for t in range(20)]
        series = synthetic_series(actives)
        est = ParameterEstimate(
            beta_hat=0.1, mu_hat=0.05, k=2000,
            window=EstimationWindow.full(series))
        result = fit_weights(series, [est])
        self.assertEqual(result.pairs, ((1, 2),))
        self.assertAlmostEqual(result.weights[0], 0.25, delta=0.001)
        self.assertLess(result.objective, 1e-3)
        self.assertEqual(result.mixture.batch_sizes, (1, 2))

    def test_exact_data_has_zero_objective(self):
        # r2 = 1 on (0, 1) is a single group with d = 1
        actives = [1024 * 2 ** t for t in range(6)]
        series = synthetic_series(actives)
        est = ParameterEstimate(
            beta_hat=math.log(2), mu_hat=0.0, k=1024,
            window=EstimationWindow.full(series))
        result = fit_weights(series, [est], candidate_pairs=[(0, 1)])
        self.assertEqual(result.weights, (1.0,))
        self.assertAlmostEqual(result.objective, 0.0, delta=1e-12)

    def test_unchanged_mixture_carries_groups(self):
        mixture = GroupMixture.pair(1, 2, 0.25)
        truth = RegimeSchedule((
            Regime(1, RegimeParameters(0.1, 0.05), mixture),
            Regime(11, RegimeParameters(0.2, 0.05), mixture)), 2000)
        actives = [int(v + 0.5) for v in
                   mean_trajectory(truth, range(1, 21)).values]
        series = synthetic_series(actives)
        estimates = [
            ParameterEstimate(0.1, 0.05, 2000, EstimationWindow(1, 10)),
            ParameterEstimate(0.2, 0.05, actives[10],
                              EstimationWindow(11, 20))]
        result = fit_weights(series, estimates, [(1, 2)])
        self.assertEqual(result.weights[0], result.weights[1])
        self.assertAlmostEqual(result.weights[0], 0.25, delta=0.002)
        self.assertLess(result.objective, 1e-3)
        # the reported objective is that of the schedule it describes
        fitted = mean_trajectory(
            build_schedule(estimates, result.mixtures), range(1, 21))
        rms = math.sqrt(sum(
            (v / a - 1.0) ** 2 for (v, a) in zip(fitted.values, actives))
            / 20)
        self.assertAlmostEqual(result.objective, rms, delta=1e-9)

    def test_single_group_series(self):
        actives = [int(1e6 * math.exp(0.05 * t) + 0.5) for t in range(15)]
        series = synthetic_series(actives)
        est = ParameterEstimate(
            beta_hat=0.08, mu_hat=0.03, k=1000000,
            window=EstimationWindow.full(series))
        result = fit_weights(series, [est])
        self.assertIn((result.pairs[0], result.weights[0]),
                      (((1, 2), 0.0), ((0, 1), 1.0)))
        self.assertLess(result.objective, 1e-3)

    def test_two_regimes(self):
        fixture = load_fixture("south-korea")
        estimates = estimate_regimes(fixture.series, fixture.change_points)
        result = fit_weights(fixture.series, estimates)
        self.assertEqual(len(result.mixtures), 2)
        schedule = build_schedule(estimates, result.mixtures)
        self.assertEqual(schedule.change_points, (11,))
        value = mean_trajectory(schedule, [20]).values[0]
        self.assertLess(abs(value - 3762) / 3762, 0.1)

    def test_egypt_fit_quality(self):
        series = load_fixture("egypt").series
        result = fit_weights(series, [estimate(series)], [(1, 2)])
        schedule = build_schedule([estimate(series)], result.mixtures)
        value = mean_trajectory(schedule, [20]).values[0]
        self.assertLess(abs(value - 4112) / 4112, 0.1)

    def test_flow_pure_decay_is_never_chosen(self):
        series = synthetic_series([1000, 990, 980, 970])
        est = ParameterEstimate(
            0.01, 0.02, 1000, EstimationWindow.full(series))
        result = fit_weights(series, [est], [(0, 1)], Convention.FLOW)
        self.assertGreater(result.weights[0], 0.0)

    def test_invalid_pairs(self):
        series = synthetic_series([10, 11, 12])
        est = estimate(series)
        for pairs in ([], [(1, 1)], [(-1, 2)]):
            with self.assertRaises(epiqbd.ValidationError):
                fit_weights(series, [est], pairs)

    def test_build_schedule(self):
        series = synthetic_series(list(range(100, 120)))
        estimates = estimate_regimes(series, [8])
        mixtures = (GroupMixture.single(), GroupMixture.pair(1, 2, 0.5))
        schedule = build_schedule(estimates, mixtures, Convention.EVENT)
        self.assertEqual(schedule.k, 100)
        self.assertEqual(schedule.change_points, (8,))
        self.assertIs(schedule.regimes[1].params.convention, Convention.EVENT)
        with self.assertRaises(epiqbd.ValidationError):
            build_schedule(estimates, mixtures[:1])

    def test_grid(self):
        self.assertEqual(len(estimation.WEIGHT_GRID), 1001)
        self.assertAlmostEqual(estimation.WEIGHT_GRID[250], 0.25, places=15)
        self.assertEqual(estimation.WEIGHT_GRID[-1], 1.0)


if __name__ == "__main__":
    import unittest

    unittest.main()
