"""On-disk formats.

* DTEN: ``b"DTEN"``, u32 version, u32 ``d``, ``d`` x u64 shape, then the
  float64 entries in column-major order; everything little-endian.
* Representations (tensor ring, graph, canonical): a directory holding
  ``manifest.json`` and ``cores.bin``; the blob is the concatenation of
  column-major float64 arrays at the byte offsets listed in the manifest.
"""

from __future__ import annotations

import json
import math
import struct
from pathlib import Path
from typing import Union

import numpy as np

from .conversions import CanonicalTensor
from .exceptions import FormatError
from .graph import GraphTensor, TensorGraph
from .ring import TRTensor

__all__ = [
    "write_dten",
    "read_dten",
    "save_tr",
    "load_tr",
    "save_graph",
    "load_graph",
    "save_cp",
    "load_cp",
    "load_representation",
]

MAGIC = b"DTEN"
VERSION = 1
MANIFEST = "manifest.json"
BLOB = "cores.bin"

PathLike = Union[str, Path]


def write_dten(path: PathLike, T) -> None:
    T = np.asarray(T, dtype=np.float64)
    header = MAGIC + struct.pack("<II", VERSION, T.ndim) + struct.pack(f"<{T.ndim}Q", *T.shape)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(T.astype("<f8").tobytes(order="F"))


def read_dten(path: PathLike) -> np.ndarray:
    data = Path(path).read_bytes()
    if data[:4] != MAGIC:
        raise FormatError(f"{path}: not a DTEN file")
    if len(data) < 12:
        raise FormatError(f"{path}: truncated header")
    version, d = struct.unpack_from("<II", data, 4)
    if version != VERSION:
        raise FormatError(f"{path}: unsupported DTEN version {version}")
    end = 12 + 8 * d
    if len(data) < end:
        raise FormatError(f"{path}: truncated shape")
    shape = struct.unpack_from(f"<{d}Q", data, 12)
    count = math.prod(shape)
    if len(data) != end + 8 * count:
        raise FormatError(f"{path}: payload has {len(data) - end} bytes, expected {8 * count}")
    flat = np.frombuffer(data, dtype="<f8", count=count, offset=end)
    return np.asfortranarray(flat.reshape(shape, order="F").astype(np.float64))


def _write_blob(directory: Path, arrays) -> list:
    entries = []
    offset = 0
    with open(directory / BLOB, "wb") as fh:
        for A in arrays:
            raw = np.asarray(A, dtype="<f8").tobytes(order="F")
            fh.write(raw)
            entries.append({"offset": offset, "shape": list(A.shape)})
            offset += len(raw)
    return entries


def _read_blob(directory: Path, entries) -> list:
    data = (directory / BLOB).read_bytes()
    out = []
    for e in entries:
        shape = tuple(e["shape"])
        count = math.prod(shape)
        start = e["offset"]
        if start + 8 * count > len(data):
            raise FormatError(f"{directory}: blob too short for array at offset {start}")
        flat = np.frombuffer(data, dtype="<f8", count=count, offset=start)
        out.append(flat.reshape(shape, order="F").astype(np.float64))
    return out


def _write_manifest(directory: Path, manifest: dict) -> None:
    (directory / MANIFEST).write_text(json.dumps(manifest, indent=2) + "\n")


def _read_manifest(directory: Path) -> dict:
    try:
        return json.loads((Path(directory) / MANIFEST).read_text())
    except FileNotFoundError as exc:
        raise FormatError(f"{directory}: missing {MANIFEST}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{directory}: invalid manifest ({exc})") from exc


def _expect(manifest: dict, kind: str, directory) -> None:
    if manifest.get("format") != kind:
        raise FormatError(f"{directory}: manifest format is {manifest.get('format')!r}, expected {kind!r}")


def save_tr(directory: PathLike, T: TRTensor) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    cores = _write_blob(directory, T.cores)
    _write_manifest(directory, {
        "format": "tensor-ring",
        "version": VERSION,
        "d": T.d,
        "shape": list(T.shape),
        "ranks": list(T.ranks),
        "blob": BLOB,
        "cores": cores,
    })


def load_tr(directory: PathLike) -> TRTensor:
    m = _read_manifest(directory)
    _expect(m, "tensor-ring", directory)
    T = TRTensor(_read_blob(Path(directory), m["cores"]))
    if list(T.ranks) != list(m["ranks"]) or list(T.shape) != list(m["shape"]):
        raise FormatError(f"{directory}: cores disagree with manifest ranks or shape")
    return T


def save_graph(directory: PathLike, gt: GraphTensor) -> None:
    """Vertices are written 1-based; each core lists its mode order."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    g = gt.graph
    cores = _write_blob(directory, gt.cores)
    for v, entry in enumerate(cores):
        entry["vertex"] = v + 1
        entry["modes"] = ["external"] + [w + 1 for w in g.neighbors(v)]
    _write_manifest(directory, {
        "format": "graph",
        "version": VERSION,
        "mode_sizes": list(g.mode_sizes),
        "edges": [[u + 1, v + 1, r] for (u, v), r in g.edges.items()],
        "blob": BLOB,
        "cores": cores,
    })


def load_graph(directory: PathLike) -> GraphTensor:
    m = _read_manifest(directory)
    _expect(m, "graph", directory)
    g = TensorGraph(m["mode_sizes"], {(u - 1, v - 1): r for u, v, r in m["edges"]})
    for v, entry in enumerate(m["cores"]):
        expected = ["external"] + [w + 1 for w in g.neighbors(v)]
        if entry.get("modes", expected) != expected:
            raise FormatError(f"{directory}: core {v + 1} has non-canonical mode order")
    return GraphTensor(g, _read_blob(Path(directory), m["cores"]))


def save_cp(directory: PathLike, C: CanonicalTensor) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    factors = _write_blob(directory, C.factors)
    _write_manifest(directory, {
        "format": "canonical",
        "version": VERSION,
        "d": C.d,
        "rank": C.rank,
        "shape": list(C.shape),
        "blob": BLOB,
        "factors": factors,
    })


def load_cp(directory: PathLike) -> CanonicalTensor:
    m = _read_manifest(directory)
    _expect(m, "canonical", directory)
    C = CanonicalTensor(_read_blob(Path(directory), m["factors"]))
    if C.rank != m["rank"]:
        raise FormatError(f"{directory}: factors have rank {C.rank}, manifest says {m['rank']}")
    return C


def load_representation(directory: PathLike):
    """Load whichever representation the manifest describes."""
    kind = _read_manifest(directory).get("format")
    loaders = {"tensor-ring": load_tr, "graph": load_graph, "canonical": load_cp}
    if kind not in loaders:
        raise FormatError(f"{directory}: unknown representation format {kind!r}")
    return loaders[kind](directory)
