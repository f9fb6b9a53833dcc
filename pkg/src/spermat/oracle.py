"""Brute-force checks that never touch the class table.

Every pair matrix is encoded as a flat row of n^2 packed pair codes
``(a-1)*n + (b-1)``; two matrices are disjoint when no column of their code
rows matches. Exhaustive routines cover n <= 3 (46 656 matrices at n=3).
For the all-pairs count each (position, code) gets a bitset over matrix
indices, so the matrices colliding with matrix i anywhere are one OR of n^2
bitsets and its disjoint partners are the complement.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product
from typing import Any, Callable, Iterator

import numpy as np

from .errors import InfeasibleSize, SizeMismatch, UndefinedForN1
from .formats import pi_to_json
from .matrix import BinaryMatrix, PiMatrix
from .sampling import check_seed, components_to_codes, make_rng, pi_components

EXHAUSTIVE_LIMIT = 3
MC_BLOCK = 50_000


def _check_exhaustive(n: int, allow_large: bool = False) -> None:
    if n < 1:
        raise ValueError("n must be positive")
    if n > EXHAUSTIVE_LIMIT and not allow_large:
        raise InfeasibleSize(
            f"exhaustive enumeration of (n!)^(2n) = {math.factorial(n) ** (2 * n)} matrices "
            f"is capped at n={EXHAUSTIVE_LIMIT}"
        )


def enumerate_pi(n: int, allow_large: bool = False) -> Iterator[PiMatrix]:
    """Every pair matrix for ``n`` exactly once.

    Order is lexicographic in the tuple (rho_1, ..., rho_n, sigma_1, ..., sigma_n)
    of permutation ranks, each permutation ranked lexicographically.
    """
    _check_exhaustive(n, allow_large)
    perms = [tuple(v + 1 for v in p) for p in permutations(range(n))]
    for choice in product(perms, repeat=2 * n):
        rhos, sigmas = choice[:n], choice[n:]
        yield PiMatrix(tuple(
            tuple((rhos[i][j], sigmas[j][i]) for j in range(n)) for i in range(n)
        ))


@lru_cache(maxsize=4)
def code_table(n: int) -> np.ndarray:
    """Codes of all pair matrices, shape ``((n!)^(2n), n^2)``, in :func:`enumerate_pi` order."""
    _check_exhaustive(n)
    perms = np.array(list(permutations(range(n))), dtype=np.int64).reshape(-1, n)
    f = perms.shape[0]
    total = f ** (2 * n)
    idx = np.arange(total, dtype=np.int64)
    digits = [(idx // f ** (2 * n - 1 - t)) % f for t in range(2 * n)]
    rho = np.stack([perms[digits[i]] for i in range(n)], axis=1)
    sigma = np.stack([perms[digits[n + j]] for j in range(n)], axis=1)
    table = components_to_codes(rho, sigma)
    table.setflags(write=False)
    return table


def _codes_of(p: PiMatrix) -> np.ndarray:
    return np.array(p.codes, dtype=np.int64)


def count_disjoint_with(reference: PiMatrix) -> int:
    """Number of pair matrices disjoint from ``reference`` (never itself)."""
    codes = code_table(reference.n)
    return int(np.count_nonzero(np.all(codes != _codes_of(reference), axis=1)))


def count_agreeing(reference: PiMatrix, mask: BinaryMatrix) -> int:
    """Number of pair matrices equal to ``reference`` at every marked position.

    Unmarked positions are unconstrained, so agreement there is allowed.
    """
    if mask.n != reference.n:
        raise SizeMismatch(f"mask is {mask.n} x {mask.n}, reference has n={reference.n}")
    codes = code_table(reference.n)
    pos = [i * mask.n + j for i, j in ((a - 1, b - 1) for a, b in mask.ones())]
    if not pos:
        return int(codes.shape[0])
    ref = _codes_of(reference)[pos]
    return int(np.count_nonzero(np.all(codes[:, pos] == ref, axis=1)))


@lru_cache(maxsize=4)
def _bitsets(n: int) -> tuple[tuple[int, ...], ...]:
    codes = code_table(n)
    out = []
    for p in range(n * n):
        col = codes[:, p]
        out.append(tuple(
            int.from_bytes(np.packbits(col == v, bitorder="little").tobytes(), "little")
            for v in range(n * n)
        ))
    return tuple(out)


def _collisions(n: int, i: int) -> int:
    bits = _bitsets(n)
    row = code_table(n)[i]
    hit = 0
    for p, v in enumerate(row.tolist()):
        hit |= bits[p][v]
    return hit


def _pairs_chunk(args: tuple[int, int, int]) -> int:
    n, start, stop = args
    full = (1 << code_table(n).shape[0]) - 1
    total = 0
    for i in range(start, stop):
        total += ((full ^ _collisions(n, i)) >> (i + 1)).bit_count()
    return total


def disjoint_counts_all(n: int) -> list[int]:
    """``count_disjoint_with`` for every pair matrix, in enumeration order."""
    full = (1 << code_table(n).shape[0]) - 1
    return [(full ^ _collisions(n, i)).bit_count() for i in range(code_table(n).shape[0])]


def count_disjoint_pairs(n: int, jobs: int = 1, allow_large: bool = False,
                         chunk: int = 2048) -> int:
    """Number of unordered disjoint pairs, by exhaustive comparison.

    n <= 2 always runs; n = 3 (about 1.09e9 pairs) needs ``allow_large``.
    The index range is cut into fixed contiguous chunks whose partial sums
    are added, so the result does not depend on ``jobs``.
    """
    if n >= 3 and not allow_large:
        raise InfeasibleSize(f"all-pairs count for n={n} is opt-in (allow_large)")
    _check_exhaustive(n)
    total = code_table(n).shape[0]
    tasks = [(n, s, min(s + chunk, total)) for s in range(0, total, chunk)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return sum(pool.map(_pairs_chunk, tasks))
    return sum(_pairs_chunk(t) for t in tasks)


@dataclass
class OracleResult:
    n: int
    mode: str
    count: int
    reference: PiMatrix | None = None
    seed: int | None = None
    trials: int | None = None
    equal_pairs: int | None = None
    estimate: float | None = None
    stderr: float | None = None
    elapsed_ms: float = 0.0
    notes: dict[str, Any] = field(default_factory=dict)

    def to_dict(self, timing: bool = True) -> dict[str, Any]:
        d: dict[str, Any] = {"n": self.n, "mode": self.mode, "count": str(self.count)}
        if self.reference is not None:
            d["reference"] = pi_to_json(self.reference)
        for key in ("seed", "trials", "equal_pairs", "estimate", "stderr"):
            value = getattr(self, key)
            if value is not None:
                d[key] = value
        if self.mode == "monte-carlo":
            d["stderr_defined"] = self.stderr is not None
        if self.notes:
            d["notes"] = self.notes
        if timing:
            d["metadata"] = {"elapsed_ms": round(self.elapsed_ms, 3)}
        return d


def timed(mode: str, n: int, fn: Callable[[], int], **kw) -> OracleResult:
    t0 = time.perf_counter()
    count = fn()
    return OracleResult(n=n, mode=mode, count=count,
                        elapsed_ms=(time.perf_counter() - t0) * 1e3, **kw)


def _mc_block(args: tuple[int, int, int, int]) -> tuple[int, int]:
    n, seed, block, size = args
    rho, sigma = pi_components(make_rng(seed, block), 2 * size, n)
    codes = components_to_codes(rho, sigma).reshape(size, 2, n * n)
    a, b = codes[:, 0], codes[:, 1]
    disjoint = int(np.count_nonzero(np.all(a != b, axis=1)))
    equal = int(np.count_nonzero(np.all(a == b, axis=1)))
    return disjoint, equal


def monte_carlo_p(n: int, trials: int, seed: int, jobs: int = 1,
                  block_size: int = MC_BLOCK) -> OracleResult:
    """Estimate the probability that two distinct uniform matrices are disjoint.

    ``trials`` independent pairs are drawn. Pairs that happen to be equal are
    counted in ``equal_pairs`` and excluded from the denominator, since the
    target probability is over distinct pairs. Trials are split into fixed
    blocks with their own substreams, so ``jobs`` does not change the result.
    ``stderr`` is None when the binomial standard error is degenerate.
    """
    if n == 1:
        raise UndefinedForN1("Monte Carlo p(n)")
    if n < 1:
        raise ValueError("n must be positive")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    seed = check_seed(seed)
    t0 = time.perf_counter()
    tasks = [(n, seed, b, min(block_size, trials - s))
             for b, s in enumerate(range(0, trials, block_size))]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_mc_block, tasks))
    else:
        parts = [_mc_block(t) for t in tasks]
    disjoint = sum(p[0] for p in parts)
    equal = sum(p[1] for p in parts)
    distinct = trials - equal
    estimate = stderr = None
    if distinct:
        estimate = disjoint / distinct
        if distinct > 1 and 0 < disjoint < distinct:
            stderr = math.sqrt(estimate * (1 - estimate) / distinct)
    return OracleResult(
        n=n, mode="monte-carlo", count=disjoint, seed=seed, trials=trials,
        equal_pairs=equal, estimate=estimate, stderr=stderr,
        elapsed_ms=(time.perf_counter() - t0) * 1e3,
    )
