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


"""The six bundled country series and the rates reported for them."""

import json
import os

from dataclasses import dataclass
from typing import Optional, Tuple

import epiqbd

from epiqbd.core.model import Convention
from epiqbd.data.params import schedule_from_dict
from epiqbd.data.series import parse_series

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "fixtures")
FIXTURE_KEYS = (
    "new-york", "india", "egypt", "south-korea", "italy", "mexico")


@dataclass(frozen=True)
class ReportedRegime:
    start_day: int
    beta: float
    mu: float
    groups: Tuple[Tuple[int, float], ...]
    shifted_weights: Optional[Tuple[float, ...]] = None


@dataclass(frozen=True)
class Fixture:
    key: str
    name: str
    series: object
    k: int
    regimes: Tuple[ReportedRegime, ...]

    @property
    def change_points(self):
        return tuple(r.start_day for r in self.regimes[1:])

    @property
    def reported_rates(self):
        """(beta, mu) of every regime, in schedule order."""
        return tuple((r.beta, r.mu) for r in self.regimes)

    @property
    def shifted_weights(self):
        weights = tuple(r.shifted_weights for r in self.regimes)
        if all(w is None for w in weights):
            return None
        return weights

    def reported_schedule(self, convention=Convention.FLOW):
        """Schedule built from the reported rates, weights and k."""
        return schedule_from_dict({
            "k": self.k,
            "convention": Convention.parse(convention).value,
            "regimes": [
                {"start_day": r.start_day, "beta": r.beta, "mu": r.mu,
                 "groups": [{"d": d, "r": w} for (d, w) in r.groups]}
                for r in self.regimes],
        })


def path_of(key):
    return os.path.join(FIXTURE_DIR, "{}.csv".format(key))


def _reported():
    with open(os.path.join(FIXTURE_DIR, "reported.json"),
              encoding="utf-8") as f:
        return json.load(f)


def load_fixture(key):
    if key not in FIXTURE_KEYS:
        raise epiqbd.ValidationError(
            "unknown country \"{}\", must be one of: {}".format(
                key, ", ".join(FIXTURE_KEYS)), field="country")
    entry = _reported()[key]
    regimes = tuple(
        ReportedRegime(
            start_day=r["start_day"], beta=r["beta"], mu=r["mu"],
            groups=tuple(
                (int(g["d"]), float(g["r"])) for g in r["groups"]),
            shifted_weights=(tuple(r["shifted_weights"])
                             if "shifted_weights" in r else None))
        for r in entry["regimes"])
    return Fixture(
        key=key, name=entry["name"], series=parse_series(path_of(key)),
        k=int(entry["k"]), regimes=regimes)


def load_all():
    return [load_fixture(key) for key in FIXTURE_KEYS]
