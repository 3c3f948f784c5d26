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


"""Parameter and scenario files.

A parameter file is a JSON object:

    {
        "k": 1825,
        "convention": "flow",
        "regimes": [
            {"start_day": 1, "beta": 0.062, "mu": 0.053, "tau": 0.0,
             "groups": [{"d": 1, "r": 0.94}, {"d": 2, "r": 0.06}]},
            ...
        ]
    }

convention and tau may be given per regime or for the whole file.  A
regime may also carry "pure_decay"; when absent it is true exactly when
every batch size is 0.
"""

import json

import epiqbd
import epiqbd.log

from epiqbd.core.intervention import Scenario
from epiqbd.core.model import (
    Convention, GroupMixture, Regime, RegimeParameters, RegimeSchedule)

_logger = epiqbd.log.getLogger(__name__)


def _read_json(path, what):
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except OSError as e:
        raise epiqbd.ValidationError(
            "cannot read {} file {}: {}".format(what, path, e.strerror),
            field=what) from e
    except ValueError as e:
        raise epiqbd.ValidationError(
            "malformed {} file {}: {}".format(what, path, e),
            field=what) from e


def _require(data, key, where):
    try:
        return data[key]
    except (KeyError, TypeError):
        raise epiqbd.ValidationError(
            "missing key \"{}\"".format(key), field=where) from None


def _mixture(groups, pure_decay=None):
    try:
        groups = tuple((int(g["d"]), float(g["r"])) for g in groups)
    except (KeyError, TypeError, ValueError):
        raise epiqbd.ValidationError(
            "groups must be a list of {\"d\": int, \"r\": number} objects",
            field="groups") from None
    if pure_decay is None:
        pure_decay = bool(groups) and max(d for (d, _) in groups) == 0
    return GroupMixture(groups, pure_decay=pure_decay)


def schedule_from_dict(data, convention=None):
    """Build a RegimeSchedule.

    convention is used for regimes that do not name their own; the file's
    top level convention takes precedence over it.
    """
    if not isinstance(data, dict):
        raise epiqbd.ValidationError("expected a JSON object", field="params")
    default = Convention.parse(
        data.get("convention", convention or Convention.FLOW))
    default_tau = data.get("tau", 0.0)
    regimes = []
    for (i, entry) in enumerate(_require(data, "regimes", "params"), start=1):
        where = "regime {}".format(i)
        params = RegimeParameters(
            beta=_require(entry, "beta", where),
            mu=_require(entry, "mu", where),
            tau=entry.get("tau", default_tau),
            convention=entry.get("convention", default))
        mixture = _mixture(
            _require(entry, "groups", where), entry.get("pure_decay"))
        regimes.append(Regime(int(entry.get("start_day", 1)), params, mixture))
    return RegimeSchedule(tuple(regimes), _require(data, "k", "params"))


def _regime_to_dict(regime, convention):
    entry = {
        "start_day": regime.start_day,
        "beta": regime.params.beta,
        "mu": regime.params.mu,
        "tau": regime.params.tau,
        "groups": [{"d": g.d, "r": g.r} for g in regime.mixture.groups],
    }
    if regime.params.convention is not convention:
        entry["convention"] = regime.params.convention.value
    sizes = regime.mixture.batch_sizes
    if regime.mixture.pure_decay != (max(sizes) == 0):
        entry["pure_decay"] = regime.mixture.pure_decay
    return entry


def schedule_to_dict(schedule):
    convention = schedule.regimes[0].params.convention
    return {
        "k": schedule.k,
        "convention": convention.value,
        "regimes": [
            _regime_to_dict(r, convention) for r in schedule.regimes],
    }


def load_params(path, convention=None):
    schedule = schedule_from_dict(_read_json(path, "params"), convention)
    _logger.debug(
        "%s: k=%d, %d regime(s)", path, schedule.k, len(schedule.regimes))
    return schedule


def save_params(schedule, path):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(schedule_to_dict(schedule), f, indent=4, sort_keys=True)
        f.write("\n")


def load_scenario(path):
    data = _read_json(path, "scenario")
    if not isinstance(data, dict):
        raise epiqbd.ValidationError(
            "expected a JSON object", field="scenario")
    return Scenario.from_dict(data)
