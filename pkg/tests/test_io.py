import json
import struct

import numpy as np
import pytest

from tensorring import (
    CanonicalTensor,
    FormatError,
    GraphTensor,
    TensorGraph,
    TRTensor,
    load_representation,
    read_dten,
    write_dten,
)
from tensorring.io import load_cp, load_graph, load_tr, save_cp, save_graph, save_tr


def test_dten_roundtrip(tmp_path, rng):
    X = rng.standard_normal((3, 1, 4, 2))
    p = tmp_path / "t.dten"
    write_dten(p, X)
    Y = read_dten(p)
    assert Y.shape == X.shape
    np.testing.assert_array_equal(X, Y)


def test_dten_layout_is_column_major(tmp_path):
    X = np.arange(6.0).reshape(2, 3)
    p = tmp_path / "t.dten"
    write_dten(p, X)
    raw = p.read_bytes()
    assert raw[:4] == b"DTEN"
    assert struct.unpack_from("<II2Q", raw, 4) == (1, 2, 2, 3)
    np.testing.assert_array_equal(np.frombuffer(raw, "<f8", offset=28), X.ravel(order="F"))


@pytest.mark.parametrize(
    "mutate",
    [
        lambda b: b"XTEN" + b[4:],
        lambda b: b[:-8],
        lambda b: b + b"\0" * 8,
        lambda b: b[:4] + struct.pack("<I", 9) + b[8:],
        lambda b: b[:14],
        lambda b: b[:6],
    ],
)
def test_dten_corrupt(tmp_path, mutate):
    p = tmp_path / "t.dten"
    write_dten(p, np.ones((2, 3)))
    p.write_bytes(mutate(p.read_bytes()))
    with pytest.raises(FormatError):
        read_dten(p)


def test_tr_roundtrip(tmp_path, rng):
    T = TRTensor.random((3, 2, 4), (2, 3, 1, 2), rng)
    save_tr(tmp_path / "r", T)
    for U in (load_tr(tmp_path / "r"), load_representation(tmp_path / "r")):
        assert U.ranks == T.ranks
        for a, b in zip(U.cores, T.cores):
            np.testing.assert_array_equal(a, b)


def test_graph_roundtrip(tmp_path, rng):
    g = TensorGraph((2, 3, 2, 2), {(0, 1): 2, (1, 2): 3, (2, 3): 2, (0, 3): 2, (0, 2): 2})
    gt = GraphTensor(g, [rng.standard_normal(g.core_shape(v)) for v in range(4)])
    save_graph(tmp_path / "g", gt)
    manifest = json.loads((tmp_path / "g" / "manifest.json").read_text())
    assert manifest["format"] == "graph"
    U = load_graph(tmp_path / "g")
    assert U.graph == g
    for a, b in zip(U.cores, gt.cores):
        np.testing.assert_array_equal(a, b)
    assert isinstance(load_representation(tmp_path / "g"), GraphTensor)


def test_cp_roundtrip(tmp_path, rng):
    C = CanonicalTensor([rng.standard_normal((n, 3)) for n in (2, 3, 4)])
    save_cp(tmp_path / "c", C)
    U = load_cp(tmp_path / "c")
    np.testing.assert_array_equal(U.full(), C.full())


def test_missing_and_wrong_manifest(tmp_path, rng):
    with pytest.raises(FormatError):
        load_representation(tmp_path)
    save_tr(tmp_path / "r", TRTensor.random((2, 2), (2, 2), rng))
    with pytest.raises(FormatError):
        load_cp(tmp_path / "r")
    (tmp_path / "r" / "manifest.json").write_text("{not json")
    with pytest.raises(FormatError):
        load_tr(tmp_path / "r")


def test_truncated_blob(tmp_path, rng):
    save_tr(tmp_path / "r", TRTensor.random((3, 3), (2, 2), rng))
    blob = tmp_path / "r" / "cores.bin"
    blob.write_bytes(blob.read_bytes()[:-8])
    with pytest.raises(FormatError):
        load_tr(tmp_path / "r")
