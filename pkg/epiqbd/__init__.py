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

from epicast import __version__


# minimum Python version required to run epiqbd.
MIN_SUPPORTED_PYTHON_VERSION = (3, 8)
# maximum (currently) tested Python version.
MAX_TESTED_PYTHON_VERSION = (3, 12)


class Error(Exception):
    """Base exception class for this project"""
    pass


class ValidationError(Error):
    """A parameter, mixture, schedule, scenario or window is invalid"""
    def __init__(self, message, field=None):
        self.message = message
        self.field = field

    def __str__(self):
        if self.field:
            return "{}: {}".format(self.field, self.message)
        return self.message


class SeriesError(ValidationError):
    """A daily series violates one of its identities"""
    def __init__(self, message, row=None, identity=None, source=None):
        super().__init__(message, field=identity)
        self.row = row
        self.identity = identity
        self.source = source

    def __str__(self):
        output = [self.message]
        if self.row is not None:
            output.append(" at row {}".format(self.row))
        if self.source:
            output.append(" ({})".format(self.source))
        return ''.join(output)


class NumericalError(Error):
    """A computation cannot produce a meaningful number"""
    pass


class TruncationError(NumericalError):
    """The state space cannot be truncated within the requested accuracy"""
    def __init__(self, n_max, boundary_mass, target):
        self.n_max = n_max
        self.boundary_mass = boundary_mass
        self.target = target

    def __str__(self):
        return ("tolerance unachievable: boundary mass {:.3g} at n_max={} "
                "exceeds {:.3g}").format(
                    self.boundary_mass, self.n_max, self.target)
