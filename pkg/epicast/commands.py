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

import collections
import os

import epiqbd
import epiqbd.log

from epiqbd.core import (estimation, intervention, simulation, transient)
from epiqbd.core.model import Convention
from epiqbd.data import (fixture, output, params, series)

_logger = epiqbd.log.getLogger(__name__)

# reported and re-estimated rates agreeing within this are reproduced
RATE_TOLERANCE = 1e-3


def _convention(arguments, settings):
    return Convention.parse(
        getattr(arguments, "convention", None) or settings.convention)


def _jobs(arguments, settings):
    return arguments.jobs or settings.jobs


def _grid(days):
    return list(range(1, days + 1))


def _format_rate(value):
    return "%.9g" % (value)


def estimate(arguments, settings):
    data = series.parse_series(arguments.input, strict=not arguments.lax)
    change_points = list(arguments.change_points)
    if arguments.detect and not change_points:
        t_c = estimation.detect_change_point(data)
        if t_c is None:
            _logger.info("no change point found")
        else:
            _logger.info("change point found at day %d", t_c)
            change_points = [t_c]

    for est in estimation.estimate_regimes(data, change_points):
        print("days {}-{}: beta_hat={} mu_hat={} k={}".format(
            est.window.first_day, est.window.last_day,
            _format_rate(est.beta_hat), _format_rate(est.mu_hat), est.k))


def simulate(arguments, settings):
    schedule = params.load_params(
        arguments.params, _convention(arguments, settings))
    reps = arguments.reps or settings.replications
    seed = arguments.seed if arguments.seed is not None else settings.seed
    config = simulation.SimulationConfig(
        schedule, arguments.days, reps, seed)
    summary = simulation.simulate_ensemble(
        config, jobs=_jobs(arguments, settings))
    output.write_ensemble(summary, arguments.out)
    if arguments.trace:
        trace = simulation.simulate_once(schedule, arguments.days, seed)
        output.write_trace(trace, arguments.trace)


def transient_(arguments, settings):
    schedule = params.load_params(
        arguments.params, _convention(arguments, settings))
    tol = arguments.tol or settings.tolerance
    trajectory = transient.mean_trajectory(
        schedule, _grid(arguments.days), engine=arguments.engine, tol=tol,
        jobs=_jobs(arguments, settings))
    worst = max(trajectory.mass_defect)
    if worst > tol * len(trajectory.times):
        _logger.warning("mass defect %.3g exceeds the tolerance", worst)
    output.write_trajectory(trajectory, arguments.out)
    if arguments.svg:
        output.render_svg(
            arguments.svg,
            [("expected active cases", trajectory.times, trajectory.values)],
            title=os.path.basename(arguments.params))


def fit(arguments, settings):
    data = series.parse_series(arguments.input, strict=not arguments.lax)
    convention = _convention(arguments, settings)
    estimates = estimation.estimate_regimes(data, arguments.change_points)
    result = estimation.fit_weights(
        data, estimates, arguments.pairs, convention)
    for (est, pair, r2) in zip(estimates, result.pairs, result.weights):
        print("days {}-{}: d=({}, {}) r=({:.3f}, {:.3f})".format(
            est.window.first_day, est.window.last_day, pair[0], pair[1],
            1.0 - r2, r2))
    print("rms relative error: {:.6g}".format(result.objective))
    if arguments.params_out:
        params.save_params(
            estimation.build_schedule(estimates, result.mixtures, convention),
            arguments.params_out)


def intervene(arguments, settings):
    baseline = params.load_params(
        arguments.params, _convention(arguments, settings))
    if arguments.standard:
        scenarios = intervention.standard_scenarios()
    else:
        scenarios = collections.OrderedDict(
            [("", params.load_scenario(arguments.scenario))])
    report = intervention.scenario_report(
        baseline, scenarios, _grid(arguments.days), engine=arguments.engine,
        tol=settings.tolerance, jobs=_jobs(arguments, settings))
    _write_rho(report, arguments.out, arguments.svg, "control effect")


def _write_rho(report, path, svg_path, title):
    output.write_rho(report, path)
    if svg_path:
        output.render_svg(
            svg_path,
            [("rho " + name if name else "rho", curve.times, curve.values)
             for (name, curve) in report.items()],
            title=title, ylabel="rho")


class Reproduction:
    """Re-run the analysis of one bundled country series.

    The report holds the re-estimated rates against the reported ones, the
    weights used, the final day errors under both conventions and the
    control effect of the standard scenarios.
    """

    def __init__(self, country, convention, days=None, jobs=1):
        self.fixture = fixture.load_fixture(country)
        self.series = self.fixture.series
        self.convention = Convention.parse(convention)
        self.days = days or len(self.series)
        self.jobs = jobs
        self.lines = []

    def _say(self, line=""):
        self.lines.append(line)

    def verify_rates(self):
        estimates = estimation.estimate_regimes(
            self.series, self.fixture.change_points)
        mismatch = False
        self._say("rates (re-estimated vs reported):")
        for (est, (beta, mu)) in zip(estimates, self.fixture.reported_rates):
            for (name, value, reported) in (("beta", est.beta_hat, beta),
                                            ("mu", est.mu_hat, mu)):
                diff = abs(value - reported)
                mismatch |= diff > RATE_TOLERANCE
                line = "  days {}-{} {}: {} reported {} diff {:.3g}".format(
                    est.window.first_day, est.window.last_day, name,
                    _format_rate(value), _format_rate(reported), diff)
                if diff > RATE_TOLERANCE:
                    line += "  MISMATCH"
                self._say(line)

        if len(estimates) == 2:
            reported = [x for pair in self.fixture.reported_rates
                        for x in pair]
            ranking = estimation.locate_reported_split(self.series, reported)
            best = ranking[0] if ranking else None
            stated = self.fixture.change_points[0]
            if best is not None and best[0] != stated:
                self._say("  alternate window boundaries tried:")
                for (t_c, error) in ranking[:3]:
                    self._say("    t_c={} max abs error {:.3g}".format(
                        t_c, error))
                self._say(
                    "  reported rates are reproduced with t_c={}, not the "
                    "stated t_c={}".format(best[0], stated))
                _logger.warning(
                    "%s: reported rates match t_c=%d, stated t_c=%d",
                    self.fixture.name, best[0], stated)
        elif mismatch:
            _logger.warning("%s: re-estimated rates differ from the reported "
                            "ones", self.fixture.name)
        self._say()
        return estimates

    def final_errors(self):
        observed = self.series.active
        final_day = len(self.series)
        errors = collections.OrderedDict()
        self._say("day {} model value (reported parameters and weights), "
                  "observed {}:".format(final_day, observed[-1]))
        for convention in (Convention.EVENT, Convention.FLOW):
            schedule = self.fixture.reported_schedule(convention)
            trajectory = transient.mean_trajectory(schedule, [final_day])
            value = trajectory.values[-1]
            errors[convention] = (value - observed[-1]) / observed[-1]
            self._say("  {:5s}: {:.6g} relative error {:+.4%}".format(
                convention.value, value, errors[convention]))
        best = min(errors, key=lambda c: abs(errors[c]))
        self._say("  closest convention: {}; used: {}".format(
            best.value, self.convention.value))
        self._say()
        return errors

    def run(self, outdir):
        key = self.fixture.key
        os.makedirs(outdir, exist_ok=True)
        grid = _grid(self.days)
        self._say("{} ({} days from {})".format(
            self.fixture.name, len(self.series), self.series.dates[0]))
        self._say("k = {}".format(self.fixture.k))
        self._say()

        estimates = self.verify_rates()

        self._say("weights:")
        fitted = estimation.fit_weights(
            self.series, estimates, convention=self.convention)
        for (i, (regime, pair, r2)) in enumerate(zip(
                self.fixture.regimes, fitted.pairs, fitted.weights), start=1):
            reported = ", ".join(
                "d={} r={:.3f}".format(d, r) for (d, r) in regime.groups)
            self._say("  regime {} reported: {}".format(i, reported))
            self._say("  regime {} fitted:   d={} r={:.3f}, d={} r={:.3f}"
                      .format(i, pair[0], 1.0 - r2, pair[1], r2))
        self._say("  fitted rms relative error: {:.4g}".format(
            fitted.objective))
        self._say()

        self.final_errors()

        schedule = self.fixture.reported_schedule(self.convention)
        trajectory = transient.mean_trajectory(schedule, grid)
        fitted_schedule = estimation.build_schedule(
            estimates, fitted.mixtures, self.convention)
        fitted_trajectory = transient.mean_trajectory(fitted_schedule, grid)
        output.write_trajectory(
            trajectory, os.path.join(outdir, key + "-trajectory.csv"))
        observed_days = list(range(1, len(self.series) + 1))
        output.render_svg(
            os.path.join(outdir, key + ".svg"),
            [("model, reported weights", trajectory.times, trajectory.values),
             ("model, fitted weights", fitted_trajectory.times,
              fitted_trajectory.values)],
            markers=[("observed", observed_days, self.series.active)],
            title="{} ({} convention)".format(
                self.fixture.name, self.convention.value))

        scenarios = intervention.standard_scenarios(
            self.fixture.shifted_weights)
        report = intervention.scenario_report(
            schedule, scenarios, grid, jobs=self.jobs)
        self._say("control effect on day {}:".format(grid[-1]))
        for (name, curve) in report.items():
            self._say("  rho_{} = {:.6g}".format(name, curve.values[-1]))
        _write_rho(report, os.path.join(outdir, key + "-rho.csv"),
                   os.path.join(outdir, key + "-rho.svg"),
                   "control effect, " + self.fixture.name)

        report_path = os.path.join(outdir, key + "-report.txt")
        with open(report_path, "w", encoding="utf-8") as f:
            f.write("\n".join(self.lines) + "\n")
        _logger.info("wrote %s", report_path)
        return self.lines


def reproduce(arguments, settings):
    outdir = arguments.outdir or settings.out_path
    if not outdir:
        raise epiqbd.ValidationError(
            "no output directory, use --outdir", field="outdir")
    reproduction = Reproduction(
        arguments.country, _convention(arguments, settings),
        days=arguments.days, jobs=_jobs(arguments, settings))
    for line in reproduction.run(outdir):
        print(line)


COMMANDS = {
    "estimate": estimate,
    "simulate": simulate,
    "transient": transient_,
    "fit": fit,
    "intervene": intervene,
    "reproduce": reproduce,
}
