import os
import logging
import argparse

from concurrent.futures import ThreadPoolExecutor
from label_studio_tools.core.utils.params import get_env

logger = logging.getLogger(__name__)


class InternalInconsistencyError(RuntimeError):
    """Two computations that must agree did not; always a bug, never bad input."""

    pass


class ExpandFullPath(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, os.path.abspath(os.path.expanduser(values)))


def ensure_dir(path):
    if path and not os.path.exists(path):
        os.makedirs(path)


def get_thread_count():
    try:
        threads = int(get_env('ELLIPTIC_QDR_THREADS', default=1))
    except (TypeError, ValueError):
        logger.warning('ELLIPTIC_QDR_THREADS is not an integer, using 1 thread')
        return 1
    return max(threads, 1)


def parallel_map(func, items):
    """Map func over items, in order; threads only when ELLIPTIC_QDR_THREADS > 1."""
    items = list(items)
    threads = get_thread_count()
    if threads == 1 or len(items) < 2:
        return [func(item) for item in items]
    logger.debug('Mapping %d items over %d threads', len(items), threads)
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(func, items))
