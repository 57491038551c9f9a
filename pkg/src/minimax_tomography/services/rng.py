"""Counter-based random streams.

Every random quantity is drawn from a Philox generator keyed by the user
seed, with the stream index in the top word of the 256-bit counter. Stream
i of seed s is therefore the same sequence no matter which thread draws it
or in what order, so chunked and parallel runs reproduce serial ones.
"""

import numpy as np

# Streams are separated by 2^192 counter blocks.
_STREAM_SHIFT = 192
_MAX_STREAM = 2**64


def stream(seed: int, index: int = 0) -> np.random.Generator:
    """Generator for stream ``index`` of ``seed``.

    Args:
        seed: 64-bit non-negative seed (the Philox key).
        index: Non-negative stream index below 2^64.

    Raises:
        ValueError: If seed or index is out of range.
    """
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be a 64-bit non-negative integer, got {seed}")
    if not 0 <= index < _MAX_STREAM:
        raise ValueError(f"stream index out of range: {index}")
    return np.random.Generator(np.random.Philox(key=seed, counter=index << _STREAM_SHIFT))


def row_stream_index(row: int, chunk: int) -> int:
    """Stream index of chunk ``chunk`` of table row ``row`` (row << 32 | chunk)."""
    return (row << 32) + chunk
