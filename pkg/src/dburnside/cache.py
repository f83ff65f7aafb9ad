"""On-disk caches for subgroup lattices and canonical bases.

Files are keyed by the content hash of the Cayley table (pairs of hashes
for bases), carry a format version, and use a deterministic binary
encoding: little-endian uint32 counts followed by length-prefixed sorted
integer lists.  Writes are atomic (temp file then rename).
"""

from __future__ import annotations

import os
import struct
import tempfile
from pathlib import Path
from typing import List, Optional, Tuple

from .errors import Budget
from .groups import FiniteGroup
from .lattice import SubgroupLattice, get_lattice, seed_lattice, _LATTICE_MEMO

LATTICE_MAGIC = b"DBLT"
BASIS_MAGIC = b"DBBS"
FORMAT_VERSION = 1

ENV_CACHE_DIR = "DBURNSIDE_CACHE_DIR"


def default_cache_dir() -> Optional[Path]:
    v = os.environ.get(ENV_CACHE_DIR)
    return Path(v) if v else None


def _write_atomic(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _pack_list(values) -> bytes:
    vals = list(values)
    return struct.pack("<I", len(vals)) + struct.pack(f"<{len(vals)}I", *vals)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def u32(self) -> int:
        (v,) = struct.unpack_from("<I", self.data, self.pos)
        self.pos += 4
        return v

    def int_list(self) -> List[int]:
        n = self.u32()
        vals = list(struct.unpack_from(f"<{n}I", self.data, self.pos))
        self.pos += 4 * n
        return vals


def lattice_cache_path(cache_dir: Path, G: FiniteGroup) -> Path:
    return Path(cache_dir) / "lattice" / f"{G.key}.v{FORMAT_VERSION}.bin"


def save_lattice(cache_dir: Path, lat: SubgroupLattice) -> Path:
    out = [LATTICE_MAGIC, struct.pack("<I", FORMAT_VERSION),
           struct.pack("<I", lat.group.order),
           struct.pack("<I", len(lat.subgroups))]
    for s in lat.subgroups:
        out.append(_pack_list(s))
    out.append(struct.pack("<I", len(lat.classes)))
    for cls in lat.classes:
        out.append(_pack_list(cls))
    path = lattice_cache_path(cache_dir, lat.group)
    _write_atomic(path, b"".join(out))
    return path


def load_lattice(cache_dir: Path, G: FiniteGroup) -> Optional[SubgroupLattice]:
    path = lattice_cache_path(cache_dir, G)
    if not path.is_file():
        return None
    data = path.read_bytes()
    if data[:4] != LATTICE_MAGIC:
        return None
    r = _Reader(data[4:])
    if r.u32() != FORMAT_VERSION or r.u32() != G.order:
        return None
    subgroups = [tuple(r.int_list()) for _ in range(r.u32())]
    classes = [r.int_list() for _ in range(r.u32())]
    return seed_lattice(G, subgroups, classes)


def cached_lattice(G: FiniteGroup, cache_dir: Optional[Path],
                   budget: Optional[Budget] = None) -> SubgroupLattice:
    """Memory, then disk, then compute-and-store."""
    if G.key in _LATTICE_MEMO:
        return _LATTICE_MEMO[G.key]
    if cache_dir is not None:
        lat = load_lattice(cache_dir, G)
        if lat is not None:
            return lat
    lat = get_lattice(G, budget)
    if cache_dir is not None:
        save_lattice(cache_dir, lat)
    return lat


def clear_memory_caches() -> None:
    """Drop every in-process memo (lattices, spaces, tables, iso results)."""
    from . import bisets as _bisets
    from . import functors as _functors
    from . import lattice as _lattice
    _lattice._LATTICE_MEMO.clear()
    _lattice._ISO_MEMO.clear()
    _lattice._SUBQ_MEMO.clear()
    _bisets.clear_biset_caches()
    _functors._GG_TABLE_MEMO.clear()
    _functors._GENERATES_MEMO.clear()


def enable_disk_cache(cache_dir: Path) -> None:
    """Route every lattice computation through the on-disk cache."""
    from . import lattice as _lattice
    cache_dir = Path(cache_dir)
    _lattice.set_disk_hooks((lambda G: load_lattice(cache_dir, G),
                             lambda lat: save_lattice(cache_dir, lat)))


def disable_disk_cache() -> None:
    from . import lattice as _lattice
    _lattice.set_disk_hooks(None)


def basis_cache_path(cache_dir: Path, G: FiniteGroup, H: FiniteGroup) -> Path:
    return (Path(cache_dir) / "basis"
            / f"{G.key}_{H.key}.v{FORMAT_VERSION}.bin")


def save_basis(cache_dir: Path, G: FiniteGroup, H: FiniteGroup,
               labels: List[Tuple[int, ...]],
               invariants: List[Tuple[List[int], List[int], List[int], List[int], int]]
               ) -> Path:
    """Store canonical labels with their projection/kernel data and |q|."""
    out = [BASIS_MAGIC, struct.pack("<I", FORMAT_VERSION),
           struct.pack("<II", G.order, H.order),
           struct.pack("<I", len(labels))]
    for t, inv in zip(labels, invariants):
        p1, p2, k1, k2, qn = inv
        out.append(_pack_list(t))
        out.append(_pack_list(p1))
        out.append(_pack_list(p2))
        out.append(_pack_list(k1))
        out.append(_pack_list(k2))
        out.append(struct.pack("<I", qn))
    path = basis_cache_path(cache_dir, G, H)
    _write_atomic(path, b"".join(out))
    return path


def load_basis(cache_dir: Path, G: FiniteGroup, H: FiniteGroup):
    path = basis_cache_path(cache_dir, G, H)
    if not path.is_file():
        return None
    data = path.read_bytes()
    if data[:4] != BASIS_MAGIC:
        return None
    r = _Reader(data[4:])
    if r.u32() != FORMAT_VERSION:
        return None
    if r.u32() != G.order or r.u32() != H.order:
        return None
    labels = []
    invariants = []
    for _ in range(r.u32()):
        labels.append(tuple(r.int_list()))
        p1 = r.int_list()
        p2 = r.int_list()
        k1 = r.int_list()
        k2 = r.int_list()
        qn = r.u32()
        invariants.append((p1, p2, k1, k2, qn))
    return labels, invariants
