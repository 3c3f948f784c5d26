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

import io
import os

import numpy as np
import pandas as pd

import epiqbd
import epiqbd.log

_logger = epiqbd.log.getLogger(__name__)

COLUMNS = ("date", "confirmed", "new_confirmed", "disappeared",
           "new_disappeared", "active")
COUNT_COLUMNS = COLUMNS[1:]
DATE_FORMAT = "%Y-%m-%d"


class DailySeries:
    """Daily confirmed, disappeared and active counts of one region.

    Rows are numbered from 1, the first observation day.  The series is
    checked on construction: with strict=True the first violated identity
    raises a SeriesError, otherwise every violation is logged as a warning
    and kept in self.violations.
    """

    def __init__(self, frame, source=None, strict=True):
        if list(frame.columns) != list(COLUMNS):
            raise epiqbd.SeriesError(
                "columns must be {}, got {}".format(
                    ",".join(COLUMNS), ",".join(map(str, frame.columns))),
                identity="header", source=source)
        self.frame = frame.reset_index(drop=True).copy()
        self.source = source
        self.violations = []
        for error in _check(self.frame, source):
            if strict:
                raise error
            _logger.warning("%s", error)
            self.violations.append(error)

    @classmethod
    def from_records(cls, records, source=None, strict=True):
        """Build a series from (date, confirmed, new_confirmed,
        disappeared, new_disappeared, active) tuples."""
        frame = pd.DataFrame.from_records(list(records), columns=COLUMNS)
        frame["date"] = pd.to_datetime(frame["date"], format=DATE_FORMAT)
        for column in COUNT_COLUMNS:
            frame[column] = frame[column].astype(np.int64)
        return cls(frame, source=source, strict=strict)

    def __len__(self):
        return len(self.frame)

    def __repr__(self):
        return "<DailySeries {} days{}>".format(
            len(self), " from " + self.source if self.source else "")

    def __eq__(self, other):
        return (isinstance(other, DailySeries)
                and self.frame.equals(other.frame))

    @property
    def m(self):
        return len(self.frame)

    @property
    def dates(self):
        return tuple(d.strftime(DATE_FORMAT) for d in self.frame["date"])

    def column(self, name):
        return self.frame[name].to_numpy(dtype=np.int64)

    @property
    def confirmed(self):
        return self.column("confirmed")

    @property
    def new_confirmed(self):
        return self.column("new_confirmed")

    @property
    def disappeared(self):
        return self.column("disappeared")

    @property
    def new_disappeared(self):
        return self.column("new_disappeared")

    @property
    def active(self):
        return self.column("active")

    @property
    def initial_active(self):
        return int(self.frame["active"].iloc[0])

    def scaled(self, factor):
        """The series with every count multiplied by an integer factor."""
        frame = self.frame.copy()
        for column in COUNT_COLUMNS:
            frame[column] = frame[column] * int(factor)
        return DailySeries(frame, source=self.source)


def _check(frame, source):
    """Yield a SeriesError for every violated identity."""
    for (i, row) in enumerate(frame.itertuples(index=False), start=1):
        for column in COUNT_COLUMNS:
            if getattr(row, column) < 0:
                yield epiqbd.SeriesError(
                    "negative {}".format(column), row=i,
                    identity=column, source=source)
        if row.active != row.confirmed - row.disappeared:
            yield epiqbd.SeriesError(
                "active ≠ confirmed − disappeared", row=i,
                identity="active", source=source)

    dates = frame["date"]
    steps = dates.diff().iloc[1:]
    for (i, step) in zip(range(2, len(frame) + 1), steps):
        if step != pd.Timedelta(days=1):
            yield epiqbd.SeriesError(
                "dates must advance by one day", row=i,
                identity="date", source=source)

    for (total, new) in (("confirmed", "new_confirmed"),
                         ("disappeared", "new_disappeared")):
        diff = frame[total].diff().iloc[1:]
        for (i, expected, actual) in zip(
                range(2, len(frame) + 1), diff, frame[new].iloc[1:]):
            if expected != actual:
                yield epiqbd.SeriesError(
                    "{} ≠ difference of {}".format(new, total),
                    row=i, identity=new, source=source)


def parse_series(source, strict=True):
    """Read a series from a path, a file object or bytes."""
    name = None
    if isinstance(source, (bytes, bytearray)):
        handle = io.BytesIO(source)
    elif isinstance(source, (str, os.PathLike)):
        name = os.fspath(source)
        handle = name
    else:
        handle = source
        name = getattr(source, "name", None)

    try:
        frame = pd.read_csv(handle, dtype=str, keep_default_na=False,
                            encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise epiqbd.SeriesError(
            "cannot read series: {}".format(e), source=name) from e
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
        raise epiqbd.SeriesError(
            "malformed CSV: {}".format(e), identity="header",
            source=name) from e

    if tuple(frame.columns) != COLUMNS:
        raise epiqbd.SeriesError(
            "header mismatch: expected {}".format(",".join(COLUMNS)),
            row=0, identity="header", source=name)
    if frame.empty:
        raise epiqbd.SeriesError("empty series", source=name)

    dates = pd.to_datetime(frame["date"], format=DATE_FORMAT,
                           errors="coerce")
    bad = dates.isna()
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0]) + 1
        raise epiqbd.SeriesError(
            "invalid date {!r}".format(frame["date"].iloc[row - 1]),
            row=row, identity="date", source=name)
    frame["date"] = dates

    for column in COUNT_COLUMNS:
        text = frame[column].str.strip()
        bad = ~text.str.fullmatch(r"[+-]?\d+")
        if bad.any():
            row = int(np.flatnonzero(bad.to_numpy())[0]) + 1
            raise epiqbd.SeriesError(
                "non-integer cell {!r} in column {}".format(
                    frame[column].iloc[row - 1], column),
                row=row, identity=column, source=name)
        frame[column] = text.astype(np.int64)

    series = DailySeries(frame, source=name, strict=strict)
    _logger.debug("read %d days from %s", len(series), name or "<bytes>")
    return series


def write_series(series, path):
    frame = series.frame.copy()
    frame["date"] = frame["date"].dt.strftime(DATE_FORMAT)
    frame.to_csv(path, index=False, lineterminator="\n")


def from_cumulative(confirmed, deaths, recovered, dates, source=None):
    """Build a series from JHU style cumulative columns.

    The disappeared count is deaths plus recovered; the daily columns are
    first differences with 0 on the first row.
    """
    lengths = {len(confirmed), len(deaths), len(recovered), len(dates)}
    if len(lengths) != 1:
        raise epiqbd.SeriesError(
            "cumulative columns differ in length", source=source)
    if lengths.pop() < 2:
        raise epiqbd.SeriesError(
            "need at least two days", source=source)

    confirmed = np.asarray(confirmed, dtype=np.int64)
    disappeared = (np.asarray(deaths, dtype=np.int64)
                   + np.asarray(recovered, dtype=np.int64))
    for (name, values) in (("confirmed", confirmed),
                           ("deaths", np.asarray(deaths)),
                           ("recovered", np.asarray(recovered))):
        drops = np.flatnonzero(np.diff(values) < 0)
        if drops.size:
            raise epiqbd.SeriesError(
                "non-monotone cumulative series: {} decreases".format(name),
                row=int(drops[0]) + 2, identity=name, source=source)

    frame = pd.DataFrame({
        "date": pd.to_datetime(list(dates), format=DATE_FORMAT),
        "confirmed": confirmed,
        "new_confirmed": np.concatenate(([0], np.diff(confirmed))),
        "disappeared": disappeared,
        "new_disappeared": np.concatenate(([0], np.diff(disappeared))),
        "active": confirmed - disappeared,
    }, columns=list(COLUMNS))
    return DailySeries(frame, source=source)
