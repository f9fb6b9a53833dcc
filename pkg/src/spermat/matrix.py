"""Domain types for S-permutation matrices and their pair-matrix representation.

An n^2 x n^2 S-permutation matrix has exactly one 1 in every row, column and
n x n block. It is stored compactly by the within-block coordinates of each
block's single 1; read as an n x n matrix of ordered pairs this is exactly its
image in the pair-matrix set (``PiMatrix``), so the bijection between the two
representations is a relabelling.

All external values are 1-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BlockViolation,
    CellUncovered,
    ColumnSecondComponentNotPermutation,
    ColumnViolation,
    DimensionNotSquareOfSquare,
    FamilyNotPairwiseDisjoint,
    FamilySizeWrong,
    InvalidBinaryMatrix,
    InvalidPermutation,
    InvalidPiMatrix,
    InvalidSudoku,
    RowFirstComponentNotPermutation,
    RowViolation,
    SizeMismatch,
)
from .sampling import make_rng, pi_components

Pair = tuple[int, int]


def _is_permutation(values: Sequence[int], n: int) -> bool:
    return sorted(values) == list(range(1, n + 1))


@dataclass(frozen=True)
class Permutation:
    """A bijection on {1..n}, given by its image sequence."""

    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(v) for v in self.image)
        object.__setattr__(self, "image", image)
        if not image or not _is_permutation(image, len(image)):
            raise InvalidPermutation(f"{image} is not a permutation of 1..{len(image)}")

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i - 1]


@dataclass(frozen=True)
class BinaryMatrix:
    """Square 0/1 matrix; equivalently a bipartite graph with rows and columns as the two sides."""

    bits: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        bits = tuple(tuple(int(b) for b in row) for row in self.bits)
        object.__setattr__(self, "bits", bits)
        n = len(bits)
        if n == 0:
            raise InvalidBinaryMatrix("matrix must have at least one row")
        for i, row in enumerate(bits, 1):
            if len(row) != n:
                raise InvalidBinaryMatrix(f"row {i} has length {len(row)}, expected {n}")
            if any(b not in (0, 1) for b in row):
                raise InvalidBinaryMatrix(f"row {i} has entries outside {{0,1}}")

    @classmethod
    def from_rows(cls, rows: Iterable) -> BinaryMatrix:
        """Build from nested sequences or from bit strings such as ``["010", "110", "000"]``."""
        out = []
        for row in rows:
            if isinstance(row, str):
                if set(row) - {"0", "1"}:
                    raise InvalidBinaryMatrix(f"bad bit string {row!r}")
                row = [int(c) for c in row]
            out.append(tuple(row))
        return cls(tuple(out))

    @classmethod
    def zeros(cls, n: int) -> BinaryMatrix:
        return cls(tuple((0,) * n for _ in range(n)))

    @classmethod
    def from_int(cls, n: int, value: int) -> BinaryMatrix:
        """Inverse of :meth:`to_int`."""
        size = n * n
        return cls(tuple(
            tuple((value >> (size - 1 - (i * n + j))) & 1 for j in range(n)) for i in range(n)
        ))

    def to_int(self) -> int:
        """Row-major bits, entry (1,1) most significant.

        Integer order therefore coincides with lexicographic order of the
        row-major bit string.
        """
        value = 0
        for row in self.bits:
            for b in row:
                value = (value << 1) | b
        return value

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def k(self) -> int:
        return sum(map(sum, self.bits))

    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.bits)

    def col_sums(self) -> tuple[int, ...]:
        return tuple(sum(col) for col in zip(*self.bits))

    def ones(self) -> list[tuple[int, int]]:
        return [(i, j) for i, row in enumerate(self.bits, 1) for j, b in enumerate(row, 1) if b]

    def to_strings(self) -> list[str]:
        return ["".join(map(str, row)) for row in self.bits]

    def to_array(self) -> np.ndarray:
        return np.array(self.bits, dtype=np.uint8)

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> BinaryMatrix:
        """Matrix whose entry (i, j) is this matrix's entry (row_perm[i], col_perm[j]); 0-based perms."""
        return BinaryMatrix(tuple(
            tuple(self.bits[r][c] for c in col_perm) for r in row_perm
        ))

    def __str__(self) -> str:
        return "\n".join(" ".join(map(str, row)) for row in self.bits)


def _pi_checks(entries: tuple[tuple[Pair, ...], ...]) -> None:
    n = len(entries)
    if n == 0:
        raise InvalidPiMatrix("matrix must have at least one row")
    for i, row in enumerate(entries, 1):
        if len(row) != n:
            raise InvalidPiMatrix(f"row {i} has {len(row)} entries, expected {n}")
        for j, pair in enumerate(row, 1):
            if len(pair) != 2 or not all(1 <= v <= n for v in pair):
                raise InvalidPiMatrix(f"entry ({i},{j}) = {pair} is not a pair over 1..{n}")
    for i, row in enumerate(entries, 1):
        if not _is_permutation([a for a, _ in row], n):
            raise RowFirstComponentNotPermutation(i, "first components are not a permutation")
    for j in range(n):
        if not _is_permutation([entries[i][j][1] for i in range(n)], n):
            raise ColumnSecondComponentNotPermutation(j + 1, "second components are not a permutation")


def _normalize_pairs(entries) -> tuple[tuple[Pair, ...], ...]:
    try:
        return tuple(tuple((int(p[0]), int(p[1])) if len(p) == 2 else tuple(p) for p in row)
                     for row in entries)
    except (TypeError, ValueError) as exc:
        raise InvalidPiMatrix(f"entries are not an n x n array of integer pairs: {exc}") from None


@dataclass(frozen=True)
class PiMatrix:
    """n x n matrix of ordered pairs.

    In each row the first components form a permutation of 1..n and in each
    column the second components do. Entry (i, j) is (rho_i(j), sigma_j(i))
    for row permutations rho_i and column permutations sigma_j.
    """

    entries: tuple[tuple[Pair, ...], ...]

    def __post_init__(self):
        entries = _normalize_pairs(self.entries)
        object.__setattr__(self, "entries", entries)
        _pi_checks(entries)

    @classmethod
    def from_permutations(cls, rhos: Sequence[Permutation], sigmas: Sequence[Permutation]) -> PiMatrix:
        n = len(rhos)
        if len(sigmas) != n or any(p.n != n for p in (*rhos, *sigmas)):
            raise SizeMismatch("need n row permutations and n column permutations of degree n")
        return cls(tuple(
            tuple((rhos[i](j + 1), sigmas[j](i + 1)) for j in range(n)) for i in range(n)
        ))

    @classmethod
    def from_codes(cls, n: int, codes: Sequence[int]) -> PiMatrix:
        """Inverse of :attr:`codes`."""
        return cls(tuple(
            tuple((int(codes[i * n + j]) // n + 1, int(codes[i * n + j]) % n + 1) for j in range(n))
            for i in range(n)
        ))

    @property
    def n(self) -> int:
        return len(self.entries)

    def row_permutation(self, i: int) -> Permutation:
        return Permutation(tuple(a for a, _ in self.entries[i - 1]))

    def column_permutation(self, j: int) -> Permutation:
        return Permutation(tuple(row[j - 1][1] for row in self.entries))

    @cached_property
    def codes(self) -> tuple[int, ...]:
        """Row-major packed pair codes ``(a-1)*n + (b-1)``."""
        n = self.n
        return tuple((a - 1) * n + (b - 1) for row in self.entries for a, b in row)

    def __str__(self) -> str:
        return "\n".join(" ".join(f"<{a},{b}>" for a, b in row) for row in self.entries)


@dataclass(frozen=True)
class SPermMatrix:
    """n^2 x n^2 S-permutation matrix stored by block.

    ``block_ones[i][j]`` is the within-block position (a, b) of the single 1
    in block (i, j). The full matrix exists only via :meth:`to_grid`.
    """

    block_ones: tuple[tuple[Pair, ...], ...]

    def __post_init__(self):
        blocks = _normalize_pairs(self.block_ones)
        object.__setattr__(self, "block_ones", blocks)
        n = len(blocks)
        try:
            _pi_checks(blocks)
        except RowFirstComponentNotPermutation as exc:
            i = exc.index
            firsts = [a for a, _ in blocks[i - 1]]
            dup = next((a for a in firsts if firsts.count(a) > 1), 1)
            raise RowViolation((i - 1) * n + dup) from None
        except ColumnSecondComponentNotPermutation as exc:
            j = exc.index
            seconds = [blocks[i][j - 1][1] for i in range(n)]
            dup = next((b for b in seconds if seconds.count(b) > 1), 1)
            raise ColumnViolation((j - 1) * n + dup) from None

    @property
    def n(self) -> int:
        return len(self.block_ones)

    @property
    def size(self) -> int:
        return self.n * self.n

    def ones(self) -> list[tuple[int, int]]:
        """Global 1-based coordinates of the n^2 ones, block by block."""
        n = self.n
        return [((i * n) + a, (j * n) + b)
                for i, row in enumerate(self.block_ones)
                for j, (a, b) in enumerate(row)]

    def to_grid(self) -> tuple[tuple[int, ...], ...]:
        m = self.size
        grid = [[0] * m for _ in range(m)]
        for r, c in self.ones():
            grid[r - 1][c - 1] = 1
        return tuple(map(tuple, grid))


def _square_root_of_size(m: int) -> int:
    n = math.isqrt(m)
    if m == 0 or n * n != m:
        raise DimensionNotSquareOfSquare(f"grid side {m} is not n^2 for a positive integer n")
    return n


def validate_s_permutation(grid: Sequence[Sequence[int]]) -> SPermMatrix:
    """Check an n^2 x n^2 0/1 grid and return its compact form.

    Rows are checked first, then columns, then blocks; the first violation
    found is raised with its 1-based index (blocks as ``(k, l)``).
    """
    rows = [list(r) for r in grid]
    m = len(rows)
    if any(len(r) != m for r in rows):
        raise DimensionNotSquareOfSquare("grid is not square")
    n = _square_root_of_size(m)
    for i, r in enumerate(rows, 1):
        if any(v not in (0, 1) for v in r):
            raise InvalidBinaryMatrix(f"row {i} has entries outside {{0,1}}")
    for i, r in enumerate(rows, 1):
        if sum(r) != 1:
            raise RowViolation(i, f"{sum(r)} ones")
    for j in range(m):
        s = sum(rows[i][j] for i in range(m))
        if s != 1:
            raise ColumnViolation(j + 1, f"{s} ones")
    blocks = []
    for bi in range(n):
        block_row = []
        for bj in range(n):
            hits = [(a + 1, b + 1) for a in range(n) for b in range(n)
                    if rows[bi * n + a][bj * n + b]]
            if len(hits) != 1:
                raise BlockViolation((bi + 1, bj + 1), f"{len(hits)} ones")
            block_row.append(hits[0])
        blocks.append(tuple(block_row))
    return SPermMatrix(tuple(blocks))


def validate_pi(entries) -> PiMatrix:
    if isinstance(entries, PiMatrix):
        return entries
    return PiMatrix(entries)


def sigma_to_pi(a: SPermMatrix) -> PiMatrix:
    return PiMatrix(a.block_ones)


def pi_to_sigma(p: PiMatrix) -> SPermMatrix:
    return SPermMatrix(p.entries)


def _same_size(p, q) -> None:
    if p.n != q.n:
        raise SizeMismatch(f"sizes differ: n={p.n} vs n={q.n}")


def disjoint_pi(p: PiMatrix, q: PiMatrix) -> bool:
    """True when no position holds the same pair in both matrices."""
    _same_size(p, q)
    return all(x != y for x, y in zip(p.codes, q.codes))


def coincidence_matrix(p: PiMatrix, q: PiMatrix) -> BinaryMatrix:
    _same_size(p, q)
    return BinaryMatrix(tuple(
        tuple(int(x == y) for x, y in zip(rp, rq)) for rp, rq in zip(p.entries, q.entries)
    ))


def disjoint_sigma(a: SPermMatrix, b: SPermMatrix) -> bool:
    """Disjointness of the expanded 0/1 matrices (no shared 1 position)."""
    _same_size(a, b)
    return not set(a.ones()) & set(b.ones())


@dataclass(frozen=True)
class SudokuMatrix:
    """n^2 x n^2 matrix over 1..n^2 whose rows, columns and blocks are permutations."""

    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        try:
            cells = tuple(tuple(int(v) for v in row) for row in self.cells)
        except (TypeError, ValueError) as exc:
            raise InvalidSudoku(f"cells are not integers: {exc}") from None
        object.__setattr__(self, "cells", cells)
        m = len(cells)
        if any(len(r) != m for r in cells):
            raise InvalidSudoku("grid is not square")
        try:
            n = _square_root_of_size(m)
        except DimensionNotSquareOfSquare as exc:
            raise InvalidSudoku(str(exc)) from None
        for i, row in enumerate(cells, 1):
            if not _is_permutation(row, m):
                raise InvalidSudoku(f"row {i} is not a permutation of 1..{m}")
        for j in range(m):
            if not _is_permutation([cells[i][j] for i in range(m)], m):
                raise InvalidSudoku(f"column {j + 1} is not a permutation of 1..{m}")
        for bi in range(n):
            for bj in range(n):
                block = [cells[bi * n + a][bj * n + b] for a in range(n) for b in range(n)]
                if not _is_permutation(block, m):
                    raise InvalidSudoku(f"block ({bi + 1},{bj + 1}) is not a permutation of 1..{m}")

    @property
    def n(self) -> int:
        return math.isqrt(len(self.cells))


def compose_sudoku(family: Sequence[SPermMatrix]) -> SudokuMatrix:
    """Sum of t * A_t over a pairwise-disjoint family of n^2 S-permutation matrices."""
    family = list(family)
    if not family:
        raise FamilySizeWrong("empty family")
    n = family[0].n
    for a in family[1:]:
        _same_size(family[0], a)
    m = n * n
    if len(family) != m:
        raise FamilySizeWrong(f"need {m} matrices for n={n}, got {len(family)}")
    for s in range(m):
        for t in range(s + 1, m):
            if not disjoint_sigma(family[s], family[t]):
                raise FamilyNotPairwiseDisjoint(s + 1, t + 1)
    cells = [[0] * m for _ in range(m)]
    for t, a in enumerate(family, 1):
        for r, c in a.ones():
            cells[r - 1][c - 1] = t
    for r, row in enumerate(cells, 1):
        if 0 in row:
            raise CellUncovered(f"cell ({r},{row.index(0) + 1}) receives no value")
    return SudokuMatrix(tuple(map(tuple, cells)))


def decompose_sudoku(m: SudokuMatrix | Sequence[Sequence[int]]) -> list[SPermMatrix]:
    if not isinstance(m, SudokuMatrix):
        m = SudokuMatrix(m)
    size = len(m.cells)
    return [
        validate_s_permutation([[int(v == t) for v in row] for row in m.cells])
        for t in range(1, size + 1)
    ]


def _pi_from_arrays(rho: np.ndarray, sigma: np.ndarray) -> PiMatrix:
    n = rho.shape[0]
    return PiMatrix(tuple(
        tuple((int(rho[i, j]) + 1, int(sigma[j, i]) + 1) for j in range(n)) for i in range(n)
    ))


def random_pi_batch(n: int, count: int, seed: int) -> list[PiMatrix]:
    """``count`` independent uniform pair matrices from one seeded stream."""
    if n < 1:
        raise ValueError("n must be positive")
    rho, sigma = pi_components(make_rng(seed), count, n)
    return [_pi_from_arrays(rho[b], sigma[b]) for b in range(count)]


def random_pi(n: int, seed: int) -> PiMatrix:
    """Uniform pair matrix: 2n independent uniform permutations assembled row/column-wise."""
    return random_pi_batch(n, 1, seed)[0]
