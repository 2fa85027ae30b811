"""Binary checkpoints: JSON header followed by raw float64 tensors.

Layout:
    8 bytes   magic b"DGNNCKPT"
    4 bytes   header length, little-endian uint32
    N bytes   UTF-8 JSON header {kind, hyperparameters, seed, tensors: [{name, shape}]}
    ...       each tensor as little-endian float64, row-major, in header order
"""

import json
import struct
from pathlib import Path

import numpy as np

from ..errors import DataError

MAGIC = b"DGNNCKPT"


def save_checkpoint(path: str | Path, tensors: dict[str, np.ndarray], hyperparameters: dict, seed: int):
    """Write tensors and their metadata to `path`."""
    path = Path(path)
    header = {
        "kind": hyperparameters.get("kind", ""),
        "hyperparameters": hyperparameters,
        "seed": seed,
        "tensors": [{"name": name, "shape": list(t.shape)} for name, t in tensors.items()],
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")

    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        with open(path, "wb") as f:
            f.write(MAGIC)
            f.write(struct.pack("<I", len(header_bytes)))
            f.write(header_bytes)
            for t in tensors.values():
                f.write(np.ascontiguousarray(t, dtype="<f8").tobytes())
    except OSError as e:
        raise DataError(f"cannot write checkpoint {path}: {e}")


def load_checkpoint(path: str | Path) -> tuple[dict, dict[str, np.ndarray]]:
    """
    Read a checkpoint.

    Returns:
        (header, tensors keyed by name in stored order)

    Raises:
        DataError: on a bad magic, truncated data or unreadable file
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise DataError(f"cannot read checkpoint {path}: {e}")

    if raw[:len(MAGIC)] != MAGIC:
        raise DataError(f"{path} is not a checkpoint (bad magic)")
    offset = len(MAGIC)
    if len(raw) < offset + 4:
        raise DataError(f"{path}: truncated header")
    (header_len,) = struct.unpack_from("<I", raw, offset)
    offset += 4
    if len(raw) < offset + header_len:
        raise DataError(f"{path}: truncated header")
    try:
        header = json.loads(raw[offset:offset + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise DataError(f"{path}: unreadable header: {e}")
    offset += header_len

    tensors = {}
    for entry in header["tensors"]:
        shape = tuple(entry["shape"])
        size = int(np.prod(shape)) if shape else 1
        end = offset + 8 * size
        if end > len(raw):
            raise DataError(f"{path}: truncated data for tensor {entry['name']}")
        tensors[entry["name"]] = np.frombuffer(raw[offset:end], dtype="<f8").reshape(shape).astype(np.float64)
        offset = end
    return header, tensors
