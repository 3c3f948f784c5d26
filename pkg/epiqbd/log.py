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

"""logging with the extra levels OFF, VERBOSE and TRACE.

Every logger created after import writes "LEVEL: name: message" lines to
stderr; stdout is left to the command results.
"""

import logging as _logging
import sys

from logging import *

root = _logging.root


def _add_level(name, value, method=True):
    addLevelName(value, name)
    setattr(_logging, name, value)
    if method:
        setattr(Logger, name.lower(),
                lambda self, msg, *args, **kwargs: self.log(
                    value, msg, *args, **kwargs))
    return value


OFF = _add_level("OFF", CRITICAL + 10, method=False)
VERBOSE = _add_level("VERBOSE", INFO - 5)
TRACE = _add_level("TRACE", DEBUG - 5)

# -q counts down, -v counts up
_VERBOSITY_LEVELS = (OFF, ERROR, WARNING, INFO, VERBOSE, DEBUG, TRACE)
_VERBOSITY_OFFSET = 2


def verbosity_to_level(verbosity):
    """Map the -q/-v count to a level; None means the default, WARNING."""
    if verbosity is None:
        return WARNING
    index = verbosity + _VERBOSITY_OFFSET
    index = max(0, min(index, len(_VERBOSITY_LEVELS) - 1))
    return _VERBOSITY_LEVELS[index]


class EpiFormatter(Formatter):
    USE_COLORS = False
    RESET = "\033[0m"
    COLORS = {
        ERROR: "\033[0;31m",
        WARNING: "\033[0;33m",
        INFO: "\033[0;94m",
        VERBOSE: "\033[0;34m",
        DEBUG: "\033[0;90m",
        TRACE: "\033[0;37m",
    }

    def format(self, record):
        msg = super().format(record)
        color = self.COLORS.get(record.levelno) if self.USE_COLORS else None
        if color:
            return color + msg + self.RESET
        return msg


class EpiLog(Logger):
    FORMAT = "%(levelname)s: %(name)s: %(message)s"

    def __init__(self, name):
        super().__init__(name)
        self.propagate = False

        handler = StreamHandler(sys.stderr)
        handler.setLevel(TRACE)
        handler.setFormatter(EpiFormatter(self.FORMAT))
        self.addHandler(handler)


def set_level(level):
    """Apply level to the root logger and every logger created so far."""
    root.setLevel(level)
    for logger in Logger.manager.loggerDict.values():
        if isinstance(logger, Logger):
            logger.setLevel(level)


def setup_default_logging():
    del getLogger().handlers[:]
    setLoggerClass(EpiLog)


setup_default_logging()
