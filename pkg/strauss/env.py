"""A file to describe all environment variables"""

import os


def _threads_from_env(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        return 0
    return max(value, 0)


# Caps the number of workers used for independent e-points. 0 means one per CPU
STRAUSS_THREADS = _threads_from_env(os.getenv("STRAUSS_THREADS", "0"))

STRAUSS_LOG_LEVEL = os.getenv("STRAUSS_LOG_LEVEL", "WARNING").upper()


def worker_count(threads: int = STRAUSS_THREADS) -> int:
    if threads > 0:
        return threads
    return os.cpu_count() or 1
