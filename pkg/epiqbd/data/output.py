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


"""Result files: trajectory, rho, ensemble and trace tables, SVG charts."""

import matplotlib
matplotlib.use("Agg")

import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from matplotlib.figure import Figure  # noqa: E402

import epiqbd  # noqa: E402
import epiqbd.log  # noqa: E402

_logger = epiqbd.log.getLogger(__name__)

FLOAT_FORMAT = "%.9g"

# keep the SVG output byte-identical between runs
SVG_PARAMS = {
    "svg.hashsalt": "epicast",
    "svg.fonttype": "none",
    "path.simplify": False,
}


def _write_frame(frame, path):
    if frame.empty:
        raise epiqbd.ValidationError("nothing to write", field="output")
    try:
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT,
                     lineterminator="\n")
    except OSError as e:
        raise epiqbd.Error(
            "cannot write {}: {}".format(path, e.strerror)) from e
    _logger.verbose("wrote %d rows to %s", len(frame), path)


def trajectory_frame(trajectory):
    columns = {"t": list(trajectory.times), "total": list(trajectory.values)}
    for (i, values) in enumerate(trajectory.per_group or ()):
        columns["group_{}".format(i)] = list(values)
    columns["mass_defect"] = list(trajectory.mass_defect)
    return pd.DataFrame(columns)


def write_trajectory(trajectory, path):
    _write_frame(trajectory_frame(trajectory), path)


def rho_frame(report):
    """report maps scenario names to RhoCurve objects."""
    if not report:
        raise epiqbd.ValidationError("no rho curves", field="output")
    curves = list(report.values())
    columns = {"day": [int(t) if float(t).is_integer() else t
                       for t in curves[0].times]}
    for (name, curve) in report.items():
        columns["rho_" + name if name else "rho"] = list(curve.values)
    return pd.DataFrame(columns)


def write_rho(report, path):
    _write_frame(rho_frame(report), path)


def write_ensemble(summary, path):
    _write_frame(pd.DataFrame({
        "day": list(summary.days),
        "mean": summary.mean,
        "var": summary.var,
        "p05": summary.p05,
        "p95": summary.p95,
    }), path)


def write_trace(trace, path):
    columns = {"day": list(trace.days)}
    for i in range(trace.counts.shape[1]):
        columns["group_{}".format(i)] = trace.counts[:, i]
    _write_frame(pd.DataFrame(columns), path)


def render_svg(path, lines, title="", xlabel="day", ylabel="active cases",
               markers=()):
    """Draw a line chart into a standalone SVG file.

    lines and markers are sequences of (label, x, y); markers are drawn as
    points without connecting lines (observed data).
    """
    lines = [(label, np.asarray(x, dtype=float), np.asarray(y, dtype=float))
             for (label, x, y) in lines]
    markers = [(label, np.asarray(x, dtype=float), np.asarray(y, dtype=float))
               for (label, x, y) in markers]
    if not any(len(x) for (_, x, _) in lines + markers):
        raise epiqbd.ValidationError("nothing to plot", field="output")

    with matplotlib.rc_context(SVG_PARAMS):
        figure = Figure(figsize=(8, 5))
        axes = figure.subplots()
        for (label, x, y) in markers:
            axes.plot(x, y, "o", markersize=3, label=label)
        for (label, x, y) in lines:
            axes.plot(x, y, "-", label=label)
        axes.set_title(title)
        axes.set_xlabel(xlabel)
        axes.set_ylabel(ylabel)
        axes.grid(True, linewidth=0.3)
        axes.legend()
        try:
            figure.savefig(path, format="svg", metadata={"Date": None})
        except OSError as e:
            raise epiqbd.Error(
                "cannot write {}: {}".format(path, e.strerror)) from e
    _logger.verbose("wrote chart %s", path)
