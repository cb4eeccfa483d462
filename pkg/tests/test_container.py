"""Binary container round-trips and corruption handling."""

import json
import struct

import numpy as np
import pytest

from hybriditer.container import (MAGIC, ContainerError, load_container,
                                  save_container)


def test_round_trip(tmp_path):
    path = tmp_path / "t.him1"
    tensors = {"a": np.arange(6.0).reshape(2, 3),
               "b": np.array(3.5),
               "c": np.zeros(0)}
    meta = {"kind": "test", "nested": {"x": [1, 2]}}
    save_container(path, tensors, meta)
    out, m = load_container(path)
    assert m == meta
    assert set(out) == {"a", "b", "c"}
    assert np.array_equal(out["a"], tensors["a"])
    assert out["a"].shape == (2, 3)
    assert out["b"].shape == ()
    assert float(out["b"]) == 3.5
    assert out["c"].shape == (0,)


def test_writes_are_byte_identical(tmp_path):
    p1, p2 = tmp_path / "a.him1", tmp_path / "b.him1"
    tensors = {"w": np.linspace(0.0, 1.0, 17), "v": np.eye(3)}
    save_container(p1, tensors, {"m": 1})
    save_container(p2, tensors, {"m": 1})
    assert p1.read_bytes() == p2.read_bytes()


def test_empty_container(tmp_path):
    path = tmp_path / "e.him1"
    save_container(path, {}, None)
    tensors, meta = load_container(path)
    assert tensors == {}
    assert meta == {}


def test_magic_and_version_checks(tmp_path):
    path = tmp_path / "bad.him1"
    path.write_bytes(b"NOPE" + b"\x00" * 20)
    with pytest.raises(ContainerError, match="magic"):
        load_container(path)
    header = json.dumps({"meta": {}, "tensors": []}).encode()
    path.write_bytes(MAGIC + struct.pack("<I", 99) +
                     struct.pack("<Q", len(header)) + header)
    with pytest.raises(ContainerError, match="version"):
        load_container(path)


def test_truncation_checks(tmp_path):
    path = tmp_path / "trunc.him1"
    path.write_bytes(MAGIC + b"\x01")
    with pytest.raises(ContainerError, match="truncated"):
        load_container(path)
    path.write_bytes(MAGIC + struct.pack("<I", 1) + struct.pack("<Q", 1000))
    with pytest.raises(ContainerError, match="truncated"):
        load_container(path)


def test_tensor_extent_check(tmp_path):
    path = tmp_path / "ext.him1"
    header = json.dumps({"meta": {}, "tensors": [
        {"name": "w", "dtype": "f64", "shape": [4], "byte_offset": 0}
    ]}).encode()
    # only 8 payload bytes for a 32-byte tensor
    path.write_bytes(MAGIC + struct.pack("<I", 1) +
                     struct.pack("<Q", len(header)) + header + b"\x00" * 8)
    with pytest.raises(ContainerError, match="'w'"):
        load_container(path)


def test_duplicate_tensor_name(tmp_path):
    path = tmp_path / "dup.him1"
    header = json.dumps({"meta": {}, "tensors": [
        {"name": "w", "dtype": "f64", "shape": [1], "byte_offset": 0},
        {"name": "w", "dtype": "f64", "shape": [1], "byte_offset": 0},
    ]}).encode()
    path.write_bytes(MAGIC + struct.pack("<I", 1) +
                     struct.pack("<Q", len(header)) + header + b"\x00" * 8)
    with pytest.raises(ContainerError, match="duplicate"):
        load_container(path)


def test_malformed_header_json(tmp_path):
    path = tmp_path / "json.him1"
    raw = b"{not json"
    path.write_bytes(MAGIC + struct.pack("<I", 1) +
                     struct.pack("<Q", len(raw)) + raw)
    with pytest.raises(ContainerError, match="malformed"):
        load_container(path)


def test_unsupported_dtype(tmp_path):
    path = tmp_path / "dtype.him1"
    header = json.dumps({"meta": {}, "tensors": [
        {"name": "w", "dtype": "f32", "shape": [1], "byte_offset": 0}
    ]}).encode()
    path.write_bytes(MAGIC + struct.pack("<I", 1) +
                     struct.pack("<Q", len(header)) + header + b"\x00" * 8)
    with pytest.raises(ContainerError, match="dtype"):
        load_container(path)


def test_loaded_arrays_are_writable_float64(tmp_path):
    path = tmp_path / "w.him1"
    save_container(path, {"x": np.ones(3, dtype=np.float32)})
    out, _ = load_container(path)
    assert out["x"].dtype == np.float64
    out["x"][0] = 5.0  # must not raise (owned copy, not a frozen buffer view)
