"""Serialized access to mpmath's process-global working precision.

mpmath keeps one precision setting per process, so two threads raising it
to different levels interleave and produce last-ulp nondeterminism.  Every
precision-scoped block in this package funnels through the lock below;
the blocks are coarse (an axis build, a series sum), so contention stays
negligible next to the numeric work itself.
"""

import threading
from contextlib import contextmanager

from mpmath import mp

_MP_LOCK = threading.RLock()


@contextmanager
def locked_workdps(dps: int):
    with _MP_LOCK:
        with mp.workdps(dps):
            yield
