"""Self-describing array container: an .npz archive with a JSON header.

Arrays round-trip bit-exactly (they are stored as raw .npy payloads), so a
reloaded object reproduces the original computation to the last bit.
"""

from __future__ import annotations

import json

import numpy as np

__all__ = ["save_container", "load_container"]

_HEADER_KEY = "__header__"


def save_container(path, header: dict, arrays: dict) -> None:
    if _HEADER_KEY in arrays:
        raise ValueError(f"array name {_HEADER_KEY!r} is reserved")
    meta = json.dumps(header, sort_keys=True).encode("utf-8")
    np.savez(path, **{_HEADER_KEY: np.frombuffer(meta, dtype=np.uint8)}, **arrays)


def load_container(path):
    with np.load(path) as data:
        header = json.loads(bytes(data[_HEADER_KEY].tobytes()).decode("utf-8"))
        arrays = {k: data[k] for k in data.files if k != _HEADER_KEY}
    return header, arrays
