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

import concurrent.futures as cf
import itertools
import multiprocessing
import os
import signal

import epiqbd.log

default_jobs = min(4, multiprocessing.cpu_count())
log = epiqbd.log.getLogger("epiqbd-mputil")


def mp_sig_handler(signum, frame):
    log.trace("signal %s, SIGKILL whole process group", signum)
    os.killpg(os.getpgrp(), signal.SIGKILL)


def mp_pool_run(func, args=None, kwds=None, jobs=default_jobs):
    """Run func once per entry of the supplied iterables of args and kwds,
    using a concurrent.futures.ProcessPoolExecutor with jobs workers.

    Return the list of results in submission order, so that any reduction
    over them does not depend on which worker finished first.
    With jobs <= 1 everything runs in this process.
    """
    if args and kwds:
        fargs = list(zip(args, kwds))
    elif args:
        fargs = list(zip(args, itertools.repeat({})))
    elif kwds:
        fargs = list(zip(itertools.repeat(()), kwds))
    else:
        return [func()]

    if not jobs or jobs <= 1 or len(fargs) <= 1:
        log.trace("running %d work items serially", len(fargs))
        return [func(*a, **k) for (a, k) in fargs]

    log.debug("running %d work items with %d jobs", len(fargs), jobs)
    with cf.ProcessPoolExecutor(jobs) as executor:
        try:
            futures = [executor.submit(func, *a, **k) for (a, k) in fargs]
            return [f.result() for f in futures]
        except KeyboardInterrupt:
            mp_sig_handler(signal.SIGINT, None)
            raise
