"""Binary container for weights and datasets.

Layout: 4 magic bytes "HIM1", a little-endian u32 format version, a
little-endian u64 header length, a UTF-8 JSON header of exactly that length,
then the raw payload. The header lists every tensor as {name, dtype, shape,
byte_offset} with offsets relative to the payload start; tensors are stored
as little-endian float64 in row-major order. Writing is deterministic: the
same tensors and metadata produce byte-identical files.
"""

from __future__ import annotations

import json
import struct

import numpy as np

MAGIC = b"HIM1"
VERSION = 1


class ContainerError(ValueError):
    pass


def save_container(path, tensors: dict, meta: dict | None = None):
    """Write named float64 arrays plus a JSON-serializable metadata dict."""
    entries = []
    blobs = []
    offset = 0
    for name, arr in tensors.items():
        # asarray keeps 0-d shapes; tobytes serializes in row-major order
        arr = np.asarray(arr, dtype=np.float64)
        data = arr.astype("<f8", copy=False).tobytes()
        entries.append({"name": str(name), "dtype": "f64",
                        "shape": list(arr.shape), "byte_offset": offset})
        blobs.append(data)
        offset += len(data)
    header = {"meta": meta or {}, "tensors": entries}
    raw = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", VERSION))
        fh.write(struct.pack("<Q", len(raw)))
        fh.write(raw)
        for blob in blobs:
            fh.write(blob)


def load_container(path):
    """Read a container back; returns (tensors dict, meta dict).

    Validates magic, version, header syntax and that every tensor's extent
    lies inside the payload; errors name the offending tensor.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 16:
        raise ContainerError("truncated container: missing header")
    if data[:4] != MAGIC:
        raise ContainerError(f"bad magic {data[:4]!r}, expected {MAGIC!r}")
    (version,) = struct.unpack_from("<I", data, 4)
    if version != VERSION:
        raise ContainerError(f"unsupported container version {version}")
    (hlen,) = struct.unpack_from("<Q", data, 8)
    if 16 + hlen > len(data):
        raise ContainerError("truncated container: header extends past EOF")
    try:
        header = json.loads(data[16:16 + hlen].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ContainerError(f"malformed header: {exc}") from exc
    payload = data[16 + hlen:]
    tensors = {}
    for entry in header.get("tensors", []):
        name = entry.get("name")
        if entry.get("dtype") != "f64":
            raise ContainerError(f"tensor {name!r}: unsupported dtype "
                                 f"{entry.get('dtype')!r}")
        shape = tuple(int(s) for s in entry["shape"])
        if any(s < 0 for s in shape):
            raise ContainerError(f"tensor {name!r}: negative dimension")
        count = int(np.prod(shape, dtype=np.int64)) if shape else 1
        start = int(entry["byte_offset"])
        end = start + 8 * count
        if start < 0 or end > len(payload):
            raise ContainerError(
                f"tensor {name!r}: extent [{start}, {end}) outside payload "
                f"of {len(payload)} bytes")
        if name in tensors:
            raise ContainerError(f"duplicate tensor name {name!r}")
        arr = np.frombuffer(payload[start:end], dtype="<f8").reshape(shape)
        tensors[name] = arr.astype(np.float64)
    return tensors, header.get("meta", {})
