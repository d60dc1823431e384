"""Reduction of Ax^4 - By^2 = 1 to (t+1)X^4 - tY^2 = 1, and brute-force oracles.

If (a0, b0) is the least positive solution of Ax^2 - By^2 = 1 then
a0*sqrt(A) + b0*sqrt(B) = sqrt(t+1) + sqrt(t) with t = B*b0^2, so the odd
powers of that unit are x_k*sqrt(A) + y_k*sqrt(B) = a0*P_k*sqrt(A) + b0*Q_k*sqrt(B).
Only this parameter map is implemented; which indices carry quartic
solutions is found by enumeration (``match_solutions``), not assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

from .pell import _mul, integer_sqrt

# fundamental_solution re-derives its answer by direct search when a0 is at most this
CROSS_CHECK_BOUND = 20_000


@dataclass(frozen=True)
class GeneralEquation:
    A: int
    B: int

    def __post_init__(self) -> None:
        if self.A < 1 or self.B < 1:
            raise ValueError(f"A and B must be positive, got A={self.A}, B={self.B}")

    @property
    def coprime(self) -> bool:
        return math.gcd(self.A, self.B) == 1


@dataclass(frozen=True)
class CanonicalForm:
    t: int
    a0: int
    b0: int


@dataclass(frozen=True)
class ReductionReport:
    A: int
    B: int
    solvable: bool
    a0: Optional[int]
    b0: Optional[int]
    t: Optional[int]
    degenerate: bool
    note: str = ""

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "A": self.A,
            "B": self.B,
            "solvable": self.solvable,
            "a0": None if self.a0 is None else str(self.a0),
            "b0": None if self.b0 is None else str(self.b0),
            "t": None if self.t is None else str(self.t),
            "degenerate_flag": self.degenerate,
            "note": self.note,
        }


def continued_fraction_sqrt(D: int) -> tuple[int, list[int]]:
    """(a0, period) of the continued fraction of sqrt(D), D not a square."""
    a0 = math.isqrt(D)
    if a0 * a0 == D:
        raise ValueError(f"{D} is a perfect square")
    m, d, a = 0, 1, a0
    period = []
    while a != 2 * a0:
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        period.append(a)
    return a0, period


def convergents_sqrt(D: int, n_terms: int) -> Iterator[tuple[int, int]]:
    a0, period = continued_fraction_sqrt(D)
    h_prev, h = 1, a0
    k_prev, k = 0, 1
    yield h, k
    for i in range(n_terms - 1):
        a = period[i % len(period)]
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        yield h, k


def direct_search(A: int, B: int, x_bound: int) -> Optional[tuple[int, int]]:
    """Least (x, y), x <= x_bound, y >= 1, with Ax^2 - By^2 = 1."""
    for x in range(1, x_bound + 1):
        v = A * x * x - 1
        if v > 0 and v % B == 0:
            y, exact = integer_sqrt(v // B)
            if exact:
                return x, y
    return None


def fundamental_solution(A: int, B: int, periods: int = 2) -> Optional[tuple[int, int]]:
    """Least positive solution (a0, b0) of Ax^2 - By^2 = 1, or None.

    With D = AB, the solutions are the convergents h/k of sqrt(D) with
    h^2 - Dk^2 = A, A | h (when A < B; then x = h/A, y = k) or
    h^2 - Dk^2 = -B, B | h (when B < A; then x = k, y = h/B).  In both cases
    |rhs| < sqrt(D), so every primitive solution is a convergent.  The scan
    covers ``periods`` full periods of the expansion.

    A = 1 returns the degenerate (1, 0).
    """
    GeneralEquation(A, B)
    if A == 1:
        return 1, 0
    if math.gcd(A, B) != 1 or A == B:
        return None
    D = A * B
    if integer_sqrt(D)[1]:
        # A and B coprime squares, A > 1: (ax)^2 - (by)^2 = 1 has no y >= 1
        return None
    _, period = continued_fraction_sqrt(D)
    found = None
    for h, k in convergents_sqrt(D, periods * len(period) + 1):
        if A < B:
            if h * h - D * k * k == A and h % A == 0:
                found = (h // A, k)
                break
        elif h * h - D * k * k == -B and h % B == 0:
            found = (k, h // B)
            break
    bound = min(found[0] - 1, CROSS_CHECK_BOUND) if found else CROSS_CHECK_BOUND
    direct = direct_search(A, B, bound)
    if direct is not None:
        raise AssertionError(f"direct search found {direct} below continued-fraction answer {found}")
    return found


def to_canonical(eq: GeneralEquation) -> Optional[CanonicalForm]:
    rep = reduce_equation(eq.A, eq.B)
    if not rep.solvable or rep.degenerate:
        return None
    return CanonicalForm(rep.t, rep.a0, rep.b0)


def reduce_equation(A: int, B: int) -> ReductionReport:
    eq = GeneralEquation(A, B)
    if not eq.coprime:
        return ReductionReport(A, B, False, None, None, None, False, "gcd(A, B) > 1")
    sol = fundamental_solution(A, B)
    if sol is None:
        return ReductionReport(A, B, False, None, None, None, False, "no fundamental solution found (bound)")
    a0, b0 = sol
    t = A * a0 * a0 - 1
    assert t == B * b0 * b0
    if t < 1:
        return ReductionReport(A, B, True, a0, b0, t, True, "t = 0: degenerate parameterization")
    return ReductionReport(A, B, True, a0, b0, t, False)


def brute_force_quartic(A: int, B: int, x_bound: int) -> list[tuple[int, int]]:
    out = []
    for x in range(1, x_bound + 1):
        v = A * x**4 - 1
        if v > 0 and v % B == 0:
            y, exact = integer_sqrt(v // B)
            if exact:
                out.append((x, y))
    return out


def odd_index_values(t: int, n_bound: int) -> Iterator[tuple[int, int, int]]:
    """Yield (n, P_n, Q_n) for odd n = 1, 3, ..., <= n_bound, exactly."""
    a2p, a2q, _ = _mul(t, 1, 1, True, 1, 1, True)
    p, q = 1, 1
    for n in range(1, n_bound + 1, 2):
        yield n, p, q
        p, q, _ = _mul(t, p, q, True, a2p, a2q, False)


def brute_force_index(t: int, n_bound: int) -> list[int]:
    """Odd n in [1, n_bound] with P_n a perfect square."""
    return [n for n, p, _ in odd_index_values(t, n_bound) if integer_sqrt(p)[1]]


def match_solutions(A: int, B: int, x_bound: int) -> list[dict]:
    """Locate each brute-force solution of Ax^4 - By^2 = 1 in the unit's odd powers.

    For a solution (x, y) this finds the odd k with x^2 = a0*P_k (and checks
    y = b0*Q_k), reporting whether P_k itself is a square, i.e. whether the
    canonical equation has a solution at the same index.
    """
    form = to_canonical(GeneralEquation(A, B))
    if form is None:
        return []
    out = []
    for x, y in brute_force_quartic(A, B, x_bound):
        target = x * x
        for k, p, q in odd_index_values(form.t, 10**9):
            if form.a0 * p >= target:
                break
        matched = form.a0 * p == target and form.b0 * q == y
        out.append(
            {
                "x": x,
                "y": y,
                "k": k if matched else None,
                "canonical_square": matched and integer_sqrt(p)[1],
            }
        )
    return out
