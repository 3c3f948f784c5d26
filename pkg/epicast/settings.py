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

"""epicast settings.

Values come from the built-in defaults, then from the "config" files of the
search directories (section [epicast]), then from EPICAST_* environment
variables; command line options are applied by the caller.  A value that
does not parse is logged and the previous value is kept.
"""

import configparser
import math
import multiprocessing
import os
import sys

import epiqbd.log

_logger = epiqbd.log.getLogger(__name__)

CONFIG_SECTION = "epicast"
DEFAULT_SEARCH_DIRS = ("~/.epicast", "/etc/epicast")


def get_config_search_dirs():
    """Existing search directories, lowest precedence first."""
    if "EPICAST_PATH" in os.environ:
        search_dirs = os.environ["EPICAST_PATH"].split(os.pathsep)
    else:
        search_dirs = DEFAULT_SEARCH_DIRS
    found = [d for d in map(os.path.expanduser, search_dirs)
             if os.path.isdir(d)]
    # later files overwrite earlier ones, the first directory has to win
    found.reverse()
    return found


class any_setting:
    """A typed attribute of SettingsContainer.

    transform_store() validates and converts assigned values (strings from
    config files and the environment included) and raises ValueError for
    anything it cannot use; transform_load() converts on read.
    """

    def __init__(self, *, default=None, doc=None, nullable=False):
        if default is None and not nullable:
            raise ValueError(
                "if the setting is not nullable a default is required.")
        self.name = None
        self.is_nullable = nullable
        self.__doc__ = doc
        self.default = self.transform_store(default)

    def __set_name__(self, owner, name):
        self.name = name

    @property
    def _slot(self):
        return "_setting_" + (self.name or "%x" % (id(self)))

    def transform_load(self, value):
        return value

    def transform_store(self, value):
        if value is None and not self.is_nullable:
            raise ValueError("this property is not nullable")
        return value

    def __get__(self, instance, owner):
        if instance is None:
            return self
        return self.transform_load(
            instance.__dict__.get(self._slot, self.default))

    def __set__(self, instance, value):
        instance.__dict__[self._slot] = self.transform_store(value)


class string_setting(any_setting):
    def transform_store(self, value):
        value = super().transform_store(value)
        if value is not None and not isinstance(value, str):
            raise ValueError("value must be a str")
        return value


class choice_setting(any_setting):
    _choices = ()

    def transform_store(self, value):
        value = super().transform_store(value)
        if value is not None and value not in self._choices:
            raise ValueError(
                "invalid value. value must be one of: %s" % (
                    ", ".join("\"%s\"" % (c) for c in self._choices)))
        return value


class convention_setting(choice_setting):
    _choices = ("event", "flow")


class coloured_output_setting(choice_setting):
    _choices = ("auto", "always", "never")

    def transform_load(self, value):
        if value == "auto":
            return "NO_COLOR" not in os.environ and sys.stderr.isatty()
        return value == "always"


class loglevel_setting(any_setting):
    def transform_store(self, value):
        value = super().transform_store(value)
        if value is None:
            return None
        if isinstance(value, str):
            level = epiqbd.log.getLevelName(value.upper())
            if not isinstance(level, int):
                raise ValueError("invalid logging level: %s" % (value))
            return level
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValueError("invalid value: %s" % (value,))
        return value


class int_setting(any_setting):
    def __init__(self, *, minimum=None, **kwargs):
        self.minimum = minimum
        super().__init__(**kwargs)

    def parse(self, value):
        if isinstance(value, str):
            try:
                return int(value, 0)
            except ValueError:
                raise ValueError("value must be an int") from None
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValueError("value must be an int")
        return value

    def transform_store(self, value):
        value = super().transform_store(value)
        if value is None:
            return None
        value = self.parse(value)
        if self.minimum is not None and value < self.minimum:
            raise ValueError("value must be at least %d" % (self.minimum))
        return value


class jobs_setting(int_setting):
    """-1 stands for the CPU count, at most 4."""

    def __init__(self, **kwargs):
        super().__init__(minimum=1, **kwargs)

    def transform_store(self, value):
        if value is not None and not isinstance(value, bool):
            try:
                if self.parse(value) == -1:
                    return min(4, multiprocessing.cpu_count())
            except ValueError:
                pass
        return super().transform_store(value)


class tolerance_setting(any_setting):
    maximum = 1e-3

    def transform_store(self, value):
        value = super().transform_store(value)
        if value is None:
            return None
        if isinstance(value, str):
            try:
                value = float(value)
            except ValueError:
                raise ValueError("value must be a number") from None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValueError("value must be a number")
        if not (math.isfinite(value) and 0 < value <= self.maximum):
            raise ValueError("tolerance must lie in (0, 1e-3]")
        return float(value)


class SettingsContainer:
    colored_output = coloured_output_setting(
        default="never",
        doc="""        Colorize epicast's log output: "always", "never" or "auto".
        "auto" colours if stderr is a TTY and NO_COLOR
        (https://no-color.org/) is not set.
        """)
    convention = convention_setting(
        default="flow",
        doc="""        How an estimated infection rate is read when building the model:
        "flow" (new cases per case and day, divided by the effective batch
        size) or "event" (batch infection events per case and day).
        """)
    jobs = jobs_setting(
        default=-1,
        doc="""        Number of worker processes; -1 uses the CPU count (at most 4),
        1 runs everything in this process.
        """)
    out_path = string_setting(
        nullable=True,
        doc="Default output directory of the reproduce command.")
    replications = int_setting(
        default=1000, minimum=1,
        doc="Default number of replications of the simulate command.")
    seed = int_setting(
        default=0, minimum=0,
        doc="Default seed of the simulate command.")
    tolerance = tolerance_setting(
        default=1e-10,
        doc="Default truncation tolerance of the uniformization engine.")
    verbosity = loglevel_setting(
        default="WARNING",
        doc="""        Log level: ERROR, WARNING, INFO, VERBOSE, DEBUG, TRACE or OFF.
        """)

    # environment variable -> setting
    ENVIRONMENT = {
        "EPICAST_COLORED_OUTPUT": "colored_output",
        "EPICAST_CONVENTION": "convention",
        "EPICAST_JOBS": "jobs",
        "EPICAST_LOG_LEVEL": "verbosity",
        "EPICAST_TOLERANCE": "tolerance",
    }

    @classmethod
    def setting_names(cls):
        return sorted(
            name for (name, value) in vars(cls).items()
            if isinstance(value, any_setting))

    def _get_all_settings(self):
        return {name: getattr(self, name) for name in self.setting_names()}

    def __repr__(self):
        return "\n".join(
            "%s = %r" % item for item in self._get_all_settings().items())

    def __eq__(self, other):
        return self._get_all_settings() == other._get_all_settings()

    def update_from_config_files(self, config_files=None):
        """Apply the [epicast] section of each file, later files win.

        Without config_files the "config" files of the search directories
        are read.
        """
        if config_files is None:
            config_files = [
                os.path.join(d, "config") for d in get_config_search_dirs()
                if os.path.isfile(os.path.join(d, "config"))]

        known = self.setting_names()
        for config_file in config_files:
            _logger.debug("reading configuration from: %s", config_file)
            # no interpolation: out_path may contain %
            parser = configparser.RawConfigParser()
            parser.read(config_file)

            if not parser.has_section(CONFIG_SECTION):
                _logger.warning(
                    "Config file %s has no %s section. Ignoring.",
                    config_file, CONFIG_SECTION)
                continue

            for (option, value) in parser.items(CONFIG_SECTION):
                if option not in known:
                    _logger.error(
                        "Invalid configuration option \"%s\" found in file "
                        "\"%s\". Ignoring.", option, config_file)
                    continue
                try:
                    setattr(self, option, value)
                except ValueError as e:
                    _logger.error(
                        "Configuration option \"%s\" has invalid value \"%s\" "
                        "in file \"%s\": %s", option, value, config_file, e)
                else:
                    _logger.trace("Setting %s = %r from config file %s",
                                  option, value, config_file)

    def update_from_env(self, environ=os.environ):
        for (env, setting) in self.ENVIRONMENT.items():
            if env not in environ:
                continue
            try:
                setattr(self, setting, environ[env])
            except ValueError as e:
                _logger.error(
                    "Environment variable \"%s\" has invalid value \"%s\": %s",
                    env, environ[env], e)
            else:
                _logger.trace("Setting %s = %r from environment",
                              setting, environ[env])


def initialise():
    """Settings from the built-in defaults, config files and environment."""
    settings = SettingsContainer()
    settings.update_from_config_files()
    settings.update_from_env()
    return settings
