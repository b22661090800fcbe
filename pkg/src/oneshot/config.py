"""Size limits. ``ONESHOT_MAX_DIM`` overrides the matrix dimension cap."""

import os

DEFAULT_MAX_DIM = 4096
MAX_OUTCOMES = 2 ** 22
MAX_SDP_DIM = 64


def max_dim():
    raw = os.environ.get("ONESHOT_MAX_DIM")
    if raw is None:
        return DEFAULT_MAX_DIM
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"ONESHOT_MAX_DIM must be an integer, got {raw!r}")
    if value < 1:
        raise ValueError("ONESHOT_MAX_DIM must be positive")
    return value
