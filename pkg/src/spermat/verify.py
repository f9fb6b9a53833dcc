"""Formula-versus-oracle cross checks behind ``spermat verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .counting import CountReport, report_from_table
from .errors import ConsistencyError
from .graphs import completion_count, load_class_table, psi_vector
from .matrix import BinaryMatrix, random_pi_batch
from .oracle import (
    EXHAUSTIVE_LIMIT,
    count_agreeing,
    count_disjoint_pairs,
    count_disjoint_with,
    disjoint_counts_all,
    monte_carlo_p,
)
from .sampling import make_rng

# published values, n -> (xi, eta)
PUBLISHED = {2: (7, 56), 3: (17972, 419250816)}

REFERENCE_SAMPLE = 20
MASK_SAMPLE = 100
SIGMA_LIMIT = 4.0
DEFAULT_MC_TRIALS = 200_000


@dataclass
class Check:
    name: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'}  {self.name}: {self.detail}"

    def to_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail}


def random_masks(n: int, count: int, seed: int) -> list[BinaryMatrix]:
    rng = make_rng(seed, block=2)
    bits = rng.integers(0, 2, size=(count, n, n))
    return [BinaryMatrix(tuple(map(tuple, m.tolist()))) for m in bits]


def table_checks(n: int, table) -> list[Check]:
    N = n * n
    sums = table.orbit_sums()
    binoms = [math.comb(N, k) for k in range(N + 1)]
    out = [Check("orbit sums", sums == binoms,
                 f"k-sums {','.join(map(str, sums))} vs C({N},k)")]
    bad = [c for c in table.classes
           if sum(c.psi) != 2 * n or sum(i * v for i, v in enumerate(c.psi)) != 2 * c.k
           or psi_vector(c.canonical) != c.psi]
    out.append(Check("degree profiles", not bad,
                     f"{len(table.classes)} classes, {len(bad)} violating sum(psi)=2n / sum(i*psi)=2k"))
    return out


def monte_carlo_check(report: CountReport, trials: int, seed: int, jobs: int) -> Check:
    mc = monte_carlo_p(report.n, trials, seed, jobs=jobs)
    target = float(report.p)
    if mc.stderr is None:
        return Check("monte carlo", False, f"degenerate sample (estimate={mc.estimate})")
    z = (mc.estimate - target) / mc.stderr
    return Check("monte carlo", abs(z) <= SIGMA_LIMIT,
                 f"estimate {mc.estimate:.6f} +/- {mc.stderr:.6f} over {trials} trials "
                 f"(seed {seed}), formula {target:.6f}, z={z:+.2f}")


def run_checks(n: int, seed: int, trials: int | None = None, jobs: int = 1,
               allow_large: bool = False, cache: Path | str | None = None,
               force: bool = False) -> tuple[CountReport | None, list[Check]]:
    table = load_class_table(n, cache, force=force, jobs=jobs, allow_large=allow_large)
    checks = table_checks(n, table)
    try:
        report = report_from_table(table)
        checks.append(Check("formula identities", True,
                            f"xi={report.xi}, 2*eta=(n!)^(2n)*xi, q(n,0)=(n!)^(2n), q(n,n^2)=1"))
    except ConsistencyError as exc:
        return None, checks + [Check("formula identities", False, str(exc))]

    if n in PUBLISHED:
        want = PUBLISHED[n]
        checks.append(Check("published values", (report.xi, report.eta) == want,
                            f"xi={report.xi} eta={report.eta}, published xi={want[0]} eta={want[1]}"))

    if n <= EXHAUSTIVE_LIMIT:
        if n <= 2:
            counts = disjoint_counts_all(n)
            checks.append(Check("fixed reference (all)", set(counts) == {report.xi},
                                f"{len(counts)} references, counts {sorted(set(counts))}, formula {report.xi}"))
        else:
            refs = random_pi_batch(n, REFERENCE_SAMPLE, seed)
            counts = [count_disjoint_with(r) for r in refs]
            checks.append(Check("fixed reference (sample)", set(counts) == {report.xi},
                                f"{len(refs)} seeded references, counts {sorted(set(counts))}, "
                                f"formula {report.xi}"))
        if n <= 2 or allow_large:
            pairs = count_disjoint_pairs(n, jobs=jobs, allow_large=allow_large)
            checks.append(Check("all pairs", pairs == report.eta,
                                f"{pairs} disjoint unordered pairs, formula eta={report.eta}"))
            if n <= 2:
                total = sum(counts)
                checks.append(Check("handshake", total == 2 * pairs,
                                    f"sum of per-reference counts {total} = 2 * {pairs}"))

        refs = random_pi_batch(n, MASK_SAMPLE, seed ^ 0x5A5A)
        masks = random_masks(n, MASK_SAMPLE, seed)
        bad = [(r, m) for r, m in zip(refs, masks) if count_agreeing(r, m) != completion_count(m)]
        checks.append(Check("agreement counts", not bad,
                            f"{MASK_SAMPLE} random (reference, mask) pairs, {len(bad)} mismatches"))

    if n >= 2 and (trials is not None or n > EXHAUSTIVE_LIMIT):
        checks.append(monte_carlo_check(report, trials or DEFAULT_MC_TRIALS, seed, jobs))
    return report, checks


def all_passed(checks: list[Check]) -> bool:
    return all(c.ok for c in checks)

