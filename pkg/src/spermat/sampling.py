"""Seeded permutation sampling.

All randomness in the package flows through :func:`make_rng`, which wraps
numpy's PCG64 bit generator. Permutations are drawn with a vectorised
Fisher-Yates shuffle: for ``i = n-1 .. 1`` a uniform ``j`` in ``[0, i]`` is
drawn for every row of the batch and positions ``i`` and ``j`` are swapped.
Given ``(seed, n, count)`` the output is fully determined.

Arrays produced here are 0-based; conversion to 1-based domain objects
happens in :mod:`spermat.matrix`.
"""

from __future__ import annotations

import numpy as np

SEED_LIMIT = 1 << 64


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < SEED_LIMIT:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def make_rng(seed: int, block: int | None = None) -> np.random.Generator:
    """PCG64 generator for ``seed``; ``block`` selects an independent substream."""
    seed = check_seed(seed)
    if block is None:
        ss = np.random.SeedSequence(seed)
    else:
        ss = np.random.SeedSequence(seed, spawn_key=(block,))
    return np.random.Generator(np.random.PCG64(ss))


def fisher_yates(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    """``count`` independent uniform permutations of ``range(n)``, shape ``(count, n)``."""
    perm = np.tile(np.arange(n, dtype=np.int64), (count, 1))
    rows = np.arange(count)
    for i in range(n - 1, 0, -1):
        j = rng.integers(0, i + 1, size=count)
        tmp = perm[rows, i].copy()
        perm[rows, i] = perm[rows, j]
        perm[rows, j] = tmp
    return perm


def pi_components(rng: np.random.Generator, count: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Row permutations ``rho[b, i, :]`` and column permutations ``sigma[b, j, :]``.

    The first ``n`` draws of each matrix are its row permutations, the next
    ``n`` its column permutations.
    """
    perms = fisher_yates(rng, count * 2 * n, n).reshape(count, 2 * n, n)
    return perms[:, :n, :], perms[:, n:, :]


def components_to_codes(rho: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """Packed pair codes, shape ``(count, n*n)``, row-major.

    Entry ``(i, j)`` holds the pair (rho_i(j), sigma_j(i)); its code is
    ``a*n + b`` with 0-based components.
    """
    n = rho.shape[-1]
    codes = rho * n + np.swapaxes(sigma, 1, 2)
    return codes.reshape(rho.shape[0], n * n).astype(np.uint8 if n * n <= 256 else np.uint16)
