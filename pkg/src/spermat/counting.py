"""Exact counts of disjoint S-permutation matrices from a class table.

``q(n, k)`` sums, over the k-edge classes, orbit size times class weight: the
number of (mask, matrix) pairs where a k-position mask is matched by a pair
matrix agreeing with a fixed reference there. Inclusion-exclusion over k then
gives ``xi``, the number of matrices disjoint from any fixed reference.
Everything is integer or Fraction arithmetic; floats never appear.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from pathlib import Path

from .errors import ConsistencyError, UndefinedForN1
from .graphs import ClassTable, degree_weight, load_class_table

log = logging.getLogger(__name__)


def sigma_count(n: int) -> int:
    """Number of n^2 x n^2 S-permutation matrices, (n!)^(2n)."""
    return math.factorial(n) ** (2 * n)


def q_vector(table: ClassTable, top: int | None = None) -> list[int]:
    """``[q(n, 0), ..., q(n, n^2)]``; ``top`` overrides the weight product's upper index."""
    table.check()
    n = table.n
    q = [0] * (n * n + 1)
    for c in table.classes:
        w = c.weight if top is None else degree_weight(c.psi.psi, n, top)
        q[c.k] += c.orbit_size * w
    return q


def q_value(table: ClassTable, k: int) -> int:
    N = table.n * table.n
    if not 0 <= k <= N:
        raise ValueError(f"k must lie in 0..{N}")
    return q_vector(table)[k]


def alternating_sum(q: list[int]) -> int:
    return sum(v if k % 2 == 0 else -v for k, v in enumerate(q))


def xi(table: ClassTable) -> int:
    """Number of S-permutation matrices disjoint from a fixed one."""
    return alternating_sum(q_vector(table))


def _eta_from(n: int, xi_n: int) -> int:
    prod = sigma_count(n) * xi_n
    if prod % 2:
        raise ConsistencyError(f"(n!)^(2n) * xi = {prod} is odd for n={n}")
    return prod // 2


def eta(table: ClassTable) -> int:
    """Number of unordered disjoint pairs."""
    return _eta_from(table.n, xi(table))


def _probability_from(n: int, xi_n: int) -> Fraction:
    if n == 1:
        raise UndefinedForN1()
    return Fraction(xi_n, sigma_count(n) - 1)


def probability(table: ClassTable) -> Fraction:
    """Probability that two distinct uniform S-permutation matrices are disjoint."""
    return _probability_from(table.n, xi(table))


def render_decimal(x: Fraction, places: int = 6) -> str:
    """Round-half-even decimal rendering of an exact rational."""
    with localcontext() as ctx:
        ctx.prec = places + len(str(abs(x.numerator) // x.denominator)) + 10
        value = Decimal(x.numerator) / Decimal(x.denominator)
        return str(value.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN))


@dataclass(frozen=True)
class CountReport:
    n: int
    sigma_count: int
    q: tuple[int, ...]
    xi: int
    eta: int
    p: Fraction | None

    def p_decimal(self, places: int = 6) -> str | None:
        return None if self.p is None else render_decimal(self.p, places)

    def check(self) -> None:
        """Assert the arithmetic identities tying the fields together."""
        n, S = self.n, self.sigma_count
        problems = []
        if S != sigma_count(n):
            problems.append("sigma_count != (n!)^(2n)")
        if self.q[0] != S or self.q[-1] != 1:
            problems.append("q(n,0) != (n!)^(2n) or q(n,n^2) != 1")
        if alternating_sum(list(self.q)) != self.xi:
            problems.append("xi is not the alternating sum of q")
        if 2 * self.eta != S * self.xi:
            problems.append("2*eta != (n!)^(2n) * xi")
        if not 0 <= self.xi < S:
            problems.append("xi outside [0, (n!)^(2n))")
        if self.p is not None and (self.p * (S - 1) != self.xi or not 0 <= self.p <= 1):
            problems.append("p * ((n!)^(2n) - 1) != xi")
        if problems:
            raise ConsistencyError("; ".join(problems))

    def to_dict(self, places: int = 6) -> dict:
        p = None
        if self.p is not None:
            p = {"num": str(self.p.numerator), "den": str(self.p.denominator),
                 "decimal": render_decimal(self.p, places)}
        return {
            "n": self.n,
            "sigma_count": str(self.sigma_count),
            "q": [str(v) for v in self.q],
            "xi": str(self.xi),
            "eta": str(self.eta),
            "p": p,
        }


def report_from_table(table: ClassTable) -> CountReport:
    n = table.n
    q = q_vector(table)
    x = alternating_sum(q)
    _check_monotone(n, q)
    report = CountReport(
        n=n,
        sigma_count=sigma_count(n),
        q=tuple(q),
        xi=x,
        eta=_eta_from(n, x),
        p=None if n == 1 else _probability_from(n, x),
    )
    report.check()
    return report


def _check_monotone(n: int, q: list[int]) -> None:
    # q(n,0) == q(n,1) always, so strict decrease is only expected from k=1 on
    ok = all(v > 0 for v in q) and q[0] >= q[1] and all(a > b for a, b in zip(q[1:], q[2:]))
    if ok:
        return
    msg = f"q(n,k) is not decreasing in k for n={n}: {q}"
    if n >= 5:
        log.warning(msg)
    else:
        raise ConsistencyError(msg)


def full_report(n: int, cache: Path | str | None = None, force: bool = False,
                jobs: int = 1, allow_large: bool = False) -> CountReport:
    table = load_class_table(n, cache, force=force, jobs=jobs, allow_large=allow_large)
    return report_from_table(table)
