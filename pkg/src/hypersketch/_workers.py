import os


def worker_count() -> int:
    """Worker cap from ``HYPERSKETCH_THREADS`` (default 1)."""
    raw = os.environ.get("HYPERSKETCH_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
