"""Certificate tables over grids of ``(N, p)``."""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

from .exponents import (
    Admissibility,
    ProblemParams,
    RefusedError,
    admissible_window,
    certify,
    to_rational,
)

CSV_HEADER = ("N", "p", "q", "ell", "case", "theta", "theta1", "theta2", "a", "b", "status")

# dim = 2 has no upper end; default sweeps sample p in (1, DIM2_P_MAX)
DIM2_P_MAX = Fraction(11)


@dataclass(frozen=True)
class CertificateRow:
    dim: int
    p: Fraction
    status: str
    q: Optional[Fraction] = None
    ell: Optional[Fraction] = None
    case: Optional[str] = None
    theta: Optional[Fraction] = None
    theta1: Optional[Fraction] = None
    theta2: Optional[Fraction] = None
    a: Optional[Fraction] = None
    b: Optional[Fraction] = None

    def as_record(self) -> Dict[str, str]:
        vals = (self.dim, self.p, self.q, self.ell, self.case, self.theta,
                self.theta1, self.theta2, self.a, self.b, self.status)
        return {k: "" if v is None else str(v) for k, v in zip(CSV_HEADER, vals)}


CertificateTable = List[CertificateRow]


def midpoint_grid(dim: int, samples: int) -> List[Fraction]:
    """``samples`` cell midpoints of the admissible ``p`` window."""
    if dim == 2:
        lo, hi = Fraction(1), DIM2_P_MAX
    else:
        lo, hi = admissible_window(dim)
    return [lo + (hi - lo) * Fraction(2 * j + 1, 2 * samples) for j in range(samples)]


def certify_row(dim: int, p) -> CertificateRow:
    params = ProblemParams(dim, to_rational(p))
    try:
        cert = certify(params)
    except RefusedError as exc:
        return CertificateRow(dim=params.dim, p=params.p, status=exc.status.value)
    return CertificateRow(
        dim=params.dim,
        p=params.p,
        status=Admissibility.ADMISSIBLE.value,
        q=cert.qsel.q,
        ell=cert.qsel.ell,
        case=cert.step1.case,
        theta=cert.step1.theta,
        theta1=cert.step2.theta1,
        theta2=cert.step2.theta2,
        a=cert.a,
        b=cert.b,
    )


def default_threads() -> int:
    env = os.environ.get("LEL_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def sweep(
    dims: Iterable[int],
    p_grid: Optional[Mapping[int, Sequence]] = None,
    samples: int = 50,
    threads: Optional[int] = None,
) -> CertificateTable:
    """Certify every ``(N, p)`` of the grid.

    ``p_grid`` maps a dimension to its ``p`` values; dimensions missing
    from it get :func:`midpoint_grid` with ``samples`` points.  Rows come
    back sorted by ``N`` then ``p`` regardless of ``threads``.
    """
    jobs = []
    for dim in sorted(set(dims)):
        ps = p_grid[dim] if p_grid and dim in p_grid else midpoint_grid(dim, samples)
        jobs.extend((dim, to_rational(p)) for p in sorted(set(map(to_rational, ps))))
    if not jobs:
        return []
    threads = threads or default_threads()
    if threads == 1:
        return [certify_row(d, p) for d, p in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: certify_row(*job), jobs))


def table_to_csv(rows: CertificateTable) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_HEADER, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.as_record())
    return buf.getvalue()
