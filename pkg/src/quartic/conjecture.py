"""Scans of the polynomial families t = d*i^2 - 1, d in {2, 3, 4, 6}.

For each family a polynomial p(x) is evaluated at P_b, with b taken from the
same offset decomposition used for t = 2, and the Jacobi symbol of P_n modulo
p(P_b) is recorded.  The expected value is -1 throughout; anything else is
collected, never raised.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .descent import Poly, decompose
from .pell import alpha_power_exact, jacobi, p_mod

log = logging.getLogger(__name__)

FAMILIES = (2, 3, 4, 6)
SIGNS = ("+", "-")


def family_poly(d: int, i: int, sign: str) -> Poly:
    if d not in FAMILIES:
        raise ValueError(f"d must be one of {FAMILIES}, got {d}")
    if i < 1:
        raise ValueError(f"i must be positive, got {i}")
    if sign not in SIGNS:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    e = 1 if sign == "+" else -1
    if d == 2:
        return Poly((8 * i * i, e * 4 * i, -1))
    if d == 3:
        return Poly((2 * i, e))
    if d == 4:
        return Poly((4 * i, e))
    return Poly((24 * i * i, e * 12 * i, 1))


@dataclass(frozen=True)
class FamilySpec:
    d: int
    i: int

    def __post_init__(self) -> None:
        if self.d not in FAMILIES or self.i < 1:
            raise ValueError(f"bad family d={self.d}, i={self.i}")

    @property
    def t(self) -> int:
        return self.d * self.i * self.i - 1

    def poly(self, sign: str) -> Poly:
        return family_poly(self.d, self.i, sign)


@dataclass(frozen=True)
class ScanEntry:
    i: int
    t: int
    n: int
    b: int
    N: int
    value: int

    @property
    def w(self) -> int:
        return (self.n - 1) // 840

    def to_json(self) -> dict:
        return {"i": self.i, "t": self.t, "n": self.n, "b": self.b, "N": str(self.N), "value": self.value}


@dataclass
class ScanReport:
    d: int
    sign: str
    i_range: list[int]
    w_range: list[int]
    tested: list[ScanEntry] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)

    @property
    def exceptions(self) -> list[ScanEntry]:
        return [e for e in self.tested if e.value != -1]

    @property
    def zero_symbols(self) -> list[ScanEntry]:
        return [e for e in self.tested if e.value == 0]

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "d": self.d,
            "sign": self.sign,
            "i_range": self.i_range,
            "w_range": self.w_range,
            "tested": [e.to_json() for e in self.tested],
            "skipped": self.skipped,
            "exceptions": [e.to_json() for e in self.exceptions],
            "zero_symbols": [e.to_json() for e in self.zero_symbols],
        }


def _scan_one(job: tuple[int, int, int, str]):
    d, i, w, sign = job
    t = d * i * i - 1
    n = 1 + 840 * w
    b = decompose(n).b
    N = family_poly(d, i, sign)(alpha_power_exact(t, b).p)
    if N < 3 or N % 2 == 0:
        return {"i": i, "w": w, "N": str(N), "reason": "modulus even or below 3"}
    return ScanEntry(i, t, n, b, N, jacobi(p_mod(t, n, N), N))


def scan_family(
    d: int,
    i_range: Iterable[int],
    w_range: Iterable[int],
    sign: str,
    mapper: Callable = map,
) -> ScanReport:
    """Jacobi values (P_n / p(P_b)) over every i and nonzero w, n = 1 + 840w."""
    family_poly(d, 1, sign)
    i_list = sorted(set(i_range))
    w_list = sorted(set(w_range))
    if not i_list or not w_list:
        raise ValueError("empty scan range")
    if i_list[0] < 1:
        raise ValueError("i must be positive")
    jobs = [(d, i, w, sign) for i in i_list for w in w_list if w != 0]
    report = ScanReport(d, sign, i_list, w_list)
    for job, res in zip(jobs, mapper(_scan_one, jobs)):
        if isinstance(res, ScanEntry):
            report.tested.append(res)
        else:
            log.warning("skipping d=%d i=%d w=%d: %s", d, job[1], job[2], res["reason"])
            report.skipped.append(res)
    return report


@dataclass(frozen=True)
class Conjecture31Result:
    i: int
    w: int
    t: int
    n: int
    b: int
    lhs: int
    middle: int
    sign_factor: int

    @property
    def holds(self) -> bool:
        return self.lhs == self.middle == -1

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "w": self.w,
            "t": self.t,
            "n": self.n,
            "b": self.b,
            "lhs": self.lhs,
            "middle": self.middle,
            "sign_factor": self.sign_factor,
            "holds": self.holds,
        }


def verify_conjecture31(i: int, w: int) -> Conjecture31Result:
    """Evaluate both sides of the open d = 3 conjecture at one (i, w).

    lhs is (P_n / 2iP_b + 1); middle is (-1)^((i-1)/2) (2tQ_b + 1 / 2iP_b + 1),
    with t = 3i^2 - 1.  A result is numerical evidence only.
    """
    if i < 1 or i % 2 == 0:
        raise ValueError(f"i must be odd and positive, got {i}")
    t = 3 * i * i - 1
    n = 1 + 840 * w
    b = decompose(n).b
    ab = alpha_power_exact(t, b)
    N = 2 * i * ab.p + 1
    lhs = jacobi(p_mod(t, n, N), N)
    sign_factor = -1 if ((i - 1) // 2) % 2 else 1
    middle = sign_factor * jacobi(2 * t * ab.q + 1, N)
    return Conjecture31Result(i, w, t, n, b, lhs, middle, sign_factor)


def _conj_job(job: tuple[int, int]) -> Conjecture31Result:
    return verify_conjecture31(*job)


def scan_conjecture31(
    i_range: Iterable[int], w_range: Iterable[int], mapper: Callable = map
) -> list[Conjecture31Result]:
    jobs = [(i, w) for i in sorted(set(i_range)) for w in sorted(set(w_range)) if w != 0]
    return list(mapper(_conj_job, jobs))


def conjecture31_report(results: list[Conjecture31Result]) -> dict:
    return {
        "schema": 1,
        "status": "open conjecture: values are numerical evidence for the tested range only",
        "results": [r.to_json() for r in results],
        "exceptions": [r.to_json() for r in results if not r.holds],
    }
