"""Equivalence classes of n x n binary matrices under row and column permutations.

A binary matrix is a bipartite graph (rows on one side, columns on the
other); two matrices are equivalent when independent row and column
permutations carry one to the other. Transposition is not part of the group.

The class representative is the lexicographically smallest row-major bit
string in the orbit. For a fixed row order the best column order is simply
the columns sorted as bit vectors, so the canonical form is a minimum over
n! row permutations of a column sort rather than over all (n!)^2 pairs.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from itertools import permutations
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .errors import ConsistencyError, IncompleteTable, InfeasibleSize
from .matrix import BinaryMatrix

log = logging.getLogger(__name__)

DEFAULT_LIMIT = 4
HARD_LIMIT = 5
CACHE_ENV = "SPERMAT_CACHE_DIR"
DEFAULT_CACHE_DIR = ".spermat-cache"


@dataclass(frozen=True)
class DegreeProfile:
    """``psi[i]`` is the number of vertices (rows plus columns) of degree ``i``."""

    n: int
    psi: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "psi", tuple(int(v) for v in self.psi))
        if len(self.psi) != self.n + 1:
            raise ValueError(f"degree profile for n={self.n} needs {self.n + 1} entries")
        if sum(self.psi) != 2 * self.n:
            raise ValueError(f"degree profile {self.psi} does not count 2n={2 * self.n} vertices")

    @property
    def edges(self) -> int:
        total = sum(i * c for i, c in enumerate(self.psi))
        return total // 2

    def __getitem__(self, i: int) -> int:
        return self.psi[i]

    def __iter__(self):
        return iter(self.psi)


def psi_vector(m: BinaryMatrix) -> DegreeProfile:
    counts = Counter(m.row_sums()) + Counter(m.col_sums())
    return DegreeProfile(m.n, tuple(counts.get(i, 0) for i in range(m.n + 1)))


def degree_weight(psi: Sequence[int], n: int, top: int | None = None) -> int:
    """Product of ((n - i)!)^psi[i] for i = 0..top (default n - 2)."""
    top = n - 2 if top is None else top
    w = 1
    for i in range(0, top + 1):
        w *= math.factorial(n - i) ** psi[i]
    return w


def completion_count(mask: BinaryMatrix) -> int:
    """Product over all 2n vertices of (n - degree)!.

    This is the number of pair matrices agreeing with a fixed one on every
    marked position: each row permutation has its marked values pinned and
    the rest free, likewise for each column permutation.
    """
    n = mask.n
    w = 1
    for d in (*mask.row_sums(), *mask.col_sums()):
        w *= math.factorial(n - d)
    return w


def _column_key(m: BinaryMatrix, row_order: Sequence[int]) -> BinaryMatrix:
    cols = sorted(tuple(m.bits[r][j] for r in row_order) for j in range(m.n))
    return BinaryMatrix(tuple(zip(*cols)))


def canonical_form(m: BinaryMatrix) -> BinaryMatrix:
    """Lexicographically smallest matrix reachable by row and column permutations."""
    best = None
    best_int = None
    for order in permutations(range(m.n)):
        cand = _column_key(m, order)
        v = cand.to_int()
        if best_int is None or v < best_int:
            best, best_int = cand, v
    return best


def stabilizer_size(m: BinaryMatrix) -> int:
    """Number of (row perm, column perm) pairs that leave ``m`` unchanged.

    For a row permutation that preserves the multiset of columns, the column
    permutations restoring ``m`` are exactly the ones that shuffle identical
    columns among themselves.
    """
    n = m.n
    cols = [tuple(m.bits[r][j] for r in range(n)) for j in range(n)]
    target = Counter(cols)
    fixers = math.prod(math.factorial(c) for c in target.values())
    total = 0
    for order in permutations(range(n)):
        moved = Counter(tuple(m.bits[r][j] for r in order) for j in range(n))
        if moved == target:
            total += fixers
    return total


def orbit_size(m: BinaryMatrix) -> int:
    group = math.factorial(m.n) ** 2
    return group // stabilizer_size(m)


@dataclass(frozen=True)
class GraphClass:
    n: int
    k: int
    canonical: BinaryMatrix
    orbit_size: int
    psi: DegreeProfile
    weight: int

    @classmethod
    def from_matrix(cls, m: BinaryMatrix, orbit: int | None = None) -> GraphClass:
        canon = canonical_form(m)
        psi = psi_vector(canon)
        return cls(
            n=m.n,
            k=canon.k,
            canonical=canon,
            orbit_size=orbit_size(canon) if orbit is None else orbit,
            psi=psi,
            weight=degree_weight(psi.psi, m.n),
        )

    def sort_key(self) -> tuple[int, str]:
        return self.k, "".join(self.canonical.to_strings())

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "canonical": self.canonical.to_strings(),
            "orbit_size": self.orbit_size,
            "psi": list(self.psi.psi),
            "weight": str(self.weight),
        }

    @classmethod
    def from_dict(cls, n: int, d: dict) -> GraphClass:
        return cls(
            n=n,
            k=int(d["k"]),
            canonical=BinaryMatrix.from_rows(d["canonical"]),
            orbit_size=int(d["orbit_size"]),
            psi=DegreeProfile(n, d["psi"]),
            weight=int(d["weight"]),
        )


def class_weight(c: GraphClass) -> int:
    return degree_weight(c.psi.psi, c.n)


@dataclass(frozen=True)
class ClassTable:
    n: int
    classes: tuple[GraphClass, ...]
    metadata: dict = field(default_factory=dict, compare=False)

    def by_k(self, k: int) -> list[GraphClass]:
        return [c for c in self.classes if c.k == k]

    def class_counts(self) -> list[int]:
        counts = Counter(c.k for c in self.classes)
        return [counts.get(k, 0) for k in range(self.n * self.n + 1)]

    def orbit_sums(self) -> list[int]:
        sums = [0] * (self.n * self.n + 1)
        for c in self.classes:
            sums[c.k] += c.orbit_size
        return sums

    def check(self) -> None:
        """Raise :class:`IncompleteTable` unless the orbits tile every k exactly."""
        N = self.n * self.n
        sums = self.orbit_sums()
        for k in range(N + 1):
            if sums[k] != math.comb(N, k):
                raise IncompleteTable(
                    f"n={self.n}, k={k}: orbit sizes sum to {sums[k]}, expected C({N},{k})={math.comb(N, k)}"
                )
        for c in self.classes:
            if c.n != self.n or c.canonical.n != self.n or c.canonical.k != c.k:
                raise IncompleteTable(f"class {c.canonical.to_strings()} has inconsistent size data")
            if psi_vector(c.canonical) != c.psi or degree_weight(c.psi.psi, self.n) != c.weight:
                raise IncompleteTable(f"class {c.canonical.to_strings()} has stale psi or weight")
            if canonical_form(c.canonical) != c.canonical or orbit_size(c.canonical) != c.orbit_size:
                raise IncompleteTable(f"class {c.canonical.to_strings()} is not canonical or has a wrong orbit size")
        if len({c.canonical for c in self.classes}) != len(self.classes):
            raise IncompleteTable(f"n={self.n}: duplicate classes")

    def to_dict(self, with_metadata: bool = True) -> dict:
        d = {"n": self.n, "classes": [c.to_dict() for c in self.classes]}
        if with_metadata:
            d["metadata"] = dict(self.metadata)
        return d

    def to_json(self, with_metadata: bool = True) -> str:
        return json.dumps(self.to_dict(with_metadata), indent=1) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> ClassTable:
        n = int(d["n"])
        return cls(n, tuple(GraphClass.from_dict(n, c) for c in d["classes"]), d.get("metadata", {}))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "orbit_size", *(f"psi_{i}" for i in range(self.n + 1)), "weight"])
        for c in self.classes:
            w.writerow([c.k, c.orbit_size, *c.psi.psi, c.weight])
        return buf.getvalue()


# bulk canonicalisation over integer-encoded matrices

def _row_perm_luts(n: int) -> np.ndarray:
    """``lut[p, c]``: column bit-vector ``c`` with its rows reordered by the p-th row permutation."""
    perms = list(permutations(range(n)))
    cs = np.arange(1 << n, dtype=np.int64)
    lut = np.zeros((len(perms), 1 << n), dtype=np.int64)
    for p, order in enumerate(perms):
        for i, r in enumerate(order):
            lut[p] |= ((cs >> (n - 1 - r)) & 1) << (n - 1 - i)
    return lut


def _spread_lut(n: int) -> np.ndarray:
    """``spread[c]``: column vector ``c`` placed in column 0 of a row-major integer."""
    N = n * n
    cs = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        out |= ((cs >> (n - 1 - i)) & 1) << (N - 1 - i * n)
    return out


def canonical_ints(n: int, start: int, stop: int) -> np.ndarray:
    """Canonical integer codes for the matrices encoded by ``start .. stop-1``."""
    N = n * n
    xs = np.arange(start, stop, dtype=np.int64)
    # column j as an n-bit vector, top row most significant
    base = np.zeros((xs.size, n), dtype=np.int64)
    for j in range(n):
        for i in range(n):
            base[:, j] |= ((xs >> (N - 1 - (i * n + j))) & 1) << (n - 1 - i)
    spread = _spread_lut(n)
    best = None
    for lut in _row_perm_luts(n):
        cols = np.sort(lut[base], axis=1)
        val = spread[cols[:, 0]]
        for j in range(1, n):
            val |= spread[cols[:, j]] >> j
        best = val if best is None else np.minimum(best, val)
    return best


def _count_chunk(args: tuple[int, int, int]) -> dict[int, int]:
    n, start, stop = args
    u, cnt = np.unique(canonical_ints(n, start, stop), return_counts=True)
    return dict(zip(u.tolist(), cnt.tolist()))


def _check_size(n: int, allow_large: bool, limit: int = DEFAULT_LIMIT) -> None:
    if n < 1:
        raise ValueError("n must be positive")
    if n > HARD_LIMIT or (n > limit and not allow_large):
        raise InfeasibleSize(
            f"class enumeration scans 2^{n * n} matrices; n={n} exceeds the limit of {limit}"
            + ("" if n > HARD_LIMIT else " (pass allow_large to override)")
        )
    if n > limit:
        log.warning("enumerating classes for n=%d scans 2^%d matrices; this is slow", n, n * n)


def enumerate_classes(n: int, jobs: int = 1, allow_large: bool = False,
                      limit: int = DEFAULT_LIMIT, chunk: int = 1 << 18) -> ClassTable:
    """All classes for ``n`` by scanning every matrix and grouping by canonical form.

    The scan is cut into contiguous ranges whose per-class counts are merged
    by addition, so the table does not depend on ``jobs``.
    """
    _check_size(n, allow_large, limit)
    total = 1 << (n * n)
    tasks = [(n, s, min(s + chunk, total)) for s in range(0, total, chunk)]
    counts: Counter[int] = Counter()
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_count_chunk, tasks):
                counts.update(part)
    else:
        for t in tasks:
            counts.update(_count_chunk(t))

    classes = []
    for code, count in counts.items():
        canon = BinaryMatrix.from_int(n, code)
        gc = GraphClass.from_matrix(canon, orbit=count)
        if gc.canonical != canon:
            raise ConsistencyError(f"bulk and single canonical forms disagree for {canon.to_strings()}")
        if count * stabilizer_size(canon) != math.factorial(n) ** 2:
            raise ConsistencyError(f"orbit-stabilizer fails for {canon.to_strings()}")
        classes.append(gc)
    classes.sort(key=GraphClass.sort_key)
    meta = {
        "generator": f"spermat {__version__}",
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    table = ClassTable(n, tuple(classes), meta)
    table.check()
    return table


def cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV, DEFAULT_CACHE_DIR))


def cache_path(n: int, directory: Path | str | None = None) -> Path:
    return Path(directory if directory is not None else cache_dir()) / f"classes_n{n}.json"


def load_class_table(n: int, directory: Path | str | None = None, force: bool = False,
                     jobs: int = 1, allow_large: bool = False) -> ClassTable:
    """Cached class table for ``n``, enumerating and writing the cache on a miss."""
    path = cache_path(n, directory)
    if path.exists() and not force:
        try:
            table = ClassTable.from_dict(json.loads(path.read_text()))
            if table.n != n:
                raise IncompleteTable(f"cache file holds n={table.n}")
            table.check()
            return table
        except (ValueError, KeyError, TypeError) as exc:
            log.warning("ignoring unusable cache %s: %s", path, exc)
    table = enumerate_classes(n, jobs=jobs, allow_large=allow_large)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(table.to_json())
        tmp.replace(path)
    except OSError as exc:
        log.warning("could not write class cache %s: %s", path, exc)
    return table
