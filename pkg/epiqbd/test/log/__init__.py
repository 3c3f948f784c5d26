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

import logging

from epiqbd import test

import epiqbd.log


class VerbosityTestCase(test.EpiTestCase):

    def test_levels(self):
        expected = {
            None: logging.WARNING,
            -5: epiqbd.log.OFF,
            -2: epiqbd.log.OFF,
            -1: logging.ERROR,
            0: logging.WARNING,
            1: logging.INFO,
            2: epiqbd.log.VERBOSE,
            3: logging.DEBUG,
            4: epiqbd.log.TRACE,
            9: epiqbd.log.TRACE,
        }
        for (verbosity, level) in expected.items():
            self.assertEqual(
                epiqbd.log.verbosity_to_level(verbosity), level, verbosity)

    def test_level_names(self):
        self.assertEqual(logging.getLevelName("VERBOSE"), logging.INFO - 5)
        self.assertEqual(logging.getLevelName("TRACE"), logging.DEBUG - 5)


class LoggerTestCase(test.EpiTestCase):

    def test_extra_methods(self):
        logger = epiqbd.log.getLogger("epiqbd.test.log.methods")
        with self.assertLogs(logger, level=epiqbd.log.TRACE) as logs:
            logger.verbose("v %d", 1)
            logger.trace("t %d", 2)
        self.assertEqual(logs.output, [
            "VERBOSE:epiqbd.test.log.methods:v 1",
            "TRACE:epiqbd.test.log.methods:t 2"])

    def test_does_not_propagate(self):
        logger = epiqbd.log.getLogger("epiqbd.test.log.propagate")
        self.assertIsInstance(logger, epiqbd.log.EpiLog)
        self.assertFalse(logger.propagate)

    def test_colors(self):
        formatter = epiqbd.log.EpiFormatter(epiqbd.log.EpiLog.FORMAT)
        record = logging.LogRecord(
            "epiqbd", logging.ERROR, __file__, 1, "boom", (), None)
        self.assertEqual(formatter.format(record), "ERROR: epiqbd: boom")
        with test.patch.object(epiqbd.log.EpiFormatter, "USE_COLORS", True):
            self.assertEqual(
                formatter.format(record),
                "\033[0;31mERROR: epiqbd: boom\033[0m")


if __name__ == "__main__":
    import unittest

    unittest.main()
