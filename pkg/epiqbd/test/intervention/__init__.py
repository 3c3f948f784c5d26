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

import math

import epiqbd

from epiqbd import test
from epiqbd.core.intervention import (
    KTransform, Scenario, apply_scenario, rho_curve, scenario_report,
    standard_scenarios)
from epiqbd.core.model import (
    Convention, GroupMixture, RegimeParameters, RegimeSchedule)
from epiqbd.data.fixture import load_fixture

GRID = list(range(1, 21))


def single_group(k, beta=0.1, mu=0.05, d=1):
    return RegimeSchedule.single(
        k, RegimeParameters(beta, mu, convention=Convention.EVENT),
        GroupMixture.single(d))


class ScenarioTestCase(test.EpiTestCase):

    def test_defaults(self):
        scenario = Scenario()
        self.assertTrue(scenario.is_identity)
        self.assertIs(scenario.k_transform, KTransform.NONE)

    def test_from_dict(self):
        scenario = Scenario.from_dict({
            "lambda_scale": 0.5, "k_transform": "halve_ceiling",
            "batch_shift": -1, "weight_override": [[0.47, 0.53], None]})
        self.assertEqual(scenario.lambda_scale, 0.5)
        self.assertIs(scenario.k_transform, KTransform.HALVE_CEILING)
        self.assertEqual(scenario.weight_override, ((0.47, 0.53), None))
        self.assertEqual(Scenario.from_dict(scenario.to_dict()), scenario)

    def test_invalid(self):
        for data in ({"lambda_scale": 0}, {"lambda_scale": -1.0},
                     {"lambda_scale": float("inf")}, {"batch_shift": 1},
                     {"batch_shift": -0.5}, {"k_transform": "third"},
                     {"weight_override": [[0.5, 0.6]]},
                     {"weight_override": [[-0.5, 1.5]]},
                     {"speed": 2}):
            with self.assertRaises(epiqbd.ValidationError, msg=data):
                Scenario.from_dict(data)


class ApplyScenarioTestCase(test.EpiTestCase):

    def setUp(self):
        self.korea = load_fixture("south-korea").reported_schedule()

    def test_identity(self):
        self.assertEqual(apply_scenario(self.korea, Scenario()), self.korea)

    def test_halve_k(self):
        scenario = Scenario(k_transform=KTransform.HALVE_CEILING)
        self.assertEqual(apply_scenario(self.korea, scenario).k, 913)
        self.assertEqual(apply_scenario(single_group(10), scenario).k, 5)

    def test_batch_shift(self):
        shifted = apply_scenario(self.korea, Scenario(batch_shift=-1))
        for (before, after) in zip(self.korea.regimes, shifted.regimes):
            self.assertEqual(after.mixture.batch_sizes, (0, 1))
            self.assertEqual(after.mixture.weights, before.mixture.weights)
            # the per-event rate survives the change of d_eff
            self.assertIs(after.params.convention, Convention.EVENT)
            self.assertAlmostEqual(
                after.event_rate, before.event_rate, places=15)
            self.assertEqual(after.params.mu, before.params.mu)

    def test_batch_shift_merges_groups(self):
        schedule = RegimeSchedule.single(
            100, RegimeParameters(0.1, 0.05),
            GroupMixture(((0, 0.2), (1, 0.3), (2, 0.5))))
        shifted = apply_scenario(schedule, Scenario(batch_shift=-1))
        mixture = shifted.regimes[0].mixture
        self.assertEqual(mixture.batch_sizes, (0, 1))
        self.assertAlmostEqual(mixture.weights[0], 0.5, places=15)
        shifted = apply_scenario(schedule, Scenario(batch_shift=-2))
        self.assertTrue(shifted.regimes[0].mixture.pure_decay)

    def test_weight_override(self):
        scenario = Scenario(
            batch_shift=-1,
            weight_override=((0.470, 0.530), (0.217, 0.783)))
        shifted = apply_scenario(self.korea, scenario)
        self.assertEqual(shifted.regimes[0].mixture.weights, (0.470, 0.530))
        self.assertEqual(shifted.regimes[1].mixture.weights, (0.217, 0.783))
        with self.assertRaises(epiqbd.ValidationError):
            apply_scenario(self.korea, Scenario(
                weight_override=((0.5, 0.5),)))
        with self.assertRaises(epiqbd.ValidationError):
            apply_scenario(self.korea, Scenario(
                weight_override=((1.0,), None)))

    def test_lambda_scale(self):
        halved = apply_scenario(self.korea, Scenario(lambda_scale=0.5))
        for (before, after) in zip(self.korea.regimes, halved.regimes):
            self.assertAlmostEqual(
                after.event_rate, 0.5 * before.event_rate, places=15)
            self.assertEqual(after.params.mu, before.params.mu)
            self.assertEqual(after.mixture, before.mixture)


class RhoTestCase(test.EpiTestCase):

    def test_identity_is_one(self):
        schedule = load_fixture("egypt").reported_schedule()
        curve = rho_curve(schedule, apply_scenario(schedule, Scenario()), GRID)
        self.assertEqual(curve.values, (1.0,) * len(GRID))

    def test_halved_k_is_constant(self):
        schedule = single_group(1000)
        scenario = apply_scenario(
            schedule, Scenario(k_transform=KTransform.HALVE_CEILING))
        curve = rho_curve(schedule, scenario, GRID)
        for value in curve.values:
            self.assertAlmostEqual(value, 2.0, places=12)

    def test_halved_k_odd(self):
        schedule = load_fixture("south-korea").reported_schedule()
        scenario = apply_scenario(
            schedule, Scenario(k_transform=KTransform.HALVE_CEILING))
        curve = rho_curve(schedule, scenario, GRID)
        for value in curve.values:
            self.assertAlmostEqual(value, 1825 / 913, places=12)

    def test_halved_rate(self):
        lam = 0.1
        schedule = single_group(500, beta=lam)
        scenario = apply_scenario(schedule, Scenario(lambda_scale=0.5))
        curve = rho_curve(schedule, scenario, GRID)
        for (day, value) in zip(GRID, curve.values):
            self.assertAlmostEqual(
                value, math.exp(lam * (day - 1) / 2), places=12)
        self.assertTrue(all(
            b > a for (a, b) in zip(curve.values, curve.values[1:])))

    def test_halved_rate_never_decreases(self):
        schedule = load_fixture("south-korea").reported_schedule()
        scenario = apply_scenario(schedule, Scenario(lambda_scale=0.5))
        values = rho_curve(schedule, scenario, GRID).values
        self.assertTrue(all(b >= a for (a, b) in zip(values, values[1:])))
        self.assertEqual(rho_curve(schedule, scenario, GRID).value_at(1), 1.0)

    def test_degenerate(self):
        schedule = single_group(10, beta=0.0, mu=0.05)
        scenario = RegimeSchedule.single(
            10, RegimeParameters(0.0, 800.0, convention=Convention.EVENT),
            GroupMixture.single())
        with self.assertRaises(epiqbd.NumericalError) as cm:
            rho_curve(schedule, scenario, GRID)
        self.assertIn("degenerate scenario", str(cm.exception))


class ScenarioReportTestCase(test.EpiTestCase):

    def assert_ordering(self, key, expected):
        fixture = load_fixture(key)
        report = scenario_report(
            fixture.reported_schedule(),
            standard_scenarios(fixture.shifted_weights), GRID)
        self.assertEqual(list(report), ["lambda", "d", "k"])
        day20 = {name: curve.value_at(20) for (name, curve) in report.items()}
        self.assertGreater(day20["d"], day20["k"])
        self.assertGreater(day20["lambda"], day20["k"])
        for (name, value) in expected.items():
            self.assertAlmostEqual(day20[name], value, delta=1e-4, msg=name)

    def test_korea(self):
        self.assert_ordering(
            "south-korea", {"lambda": 2.2468, "d": 2.1388, "k": 1825 / 913})

    def test_egypt(self):
        self.assert_ordering(
            "egypt", {"lambda": 2.4348, "d": 2.0199, "k": 1903 / 952})

    def test_identity_scenarios(self):
        schedule = single_group(100)
        report = scenario_report(
            schedule, {"a": Scenario(), "b": Scenario()}, GRID)
        for curve in report.values():
            self.assertEqual(set(curve.values), {1.0})

    def test_standard_scenarios(self):
        scenarios = standard_scenarios()
        self.assertEqual(scenarios["lambda"].lambda_scale, 0.5)
        self.assertEqual(scenarios["d"].batch_shift, -1)
        self.assertIsNone(scenarios["d"].weight_override)
        self.assertIs(scenarios["k"].k_transform, KTransform.HALVE_CEILING)
        self.assertIsNone(
            standard_scenarios((None, None))["d"].weight_override)


if __name__ == "__main__":
    import unittest

    unittest.main()
