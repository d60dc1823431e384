"""Arithmetic on the powers of alpha = sqrt(t+1) + sqrt(t).

For odd k the power is written P_k*sqrt(t+1) + Q_k*sqrt(t); for even k it is
P_k + Q_k*sqrt(t(t+1)).  Both the exact state and its reduction modulo an
integer are handled by the same three product rules (see ``_mul``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union


@dataclass(frozen=True)
class EquationParams:
    """The parameter t of (t+1)X^4 - tY^2 = 1."""

    t: int

    def __post_init__(self) -> None:
        if not isinstance(self.t, int) or self.t < 1:
            raise ValueError(f"t must be a positive integer, got {self.t!r}")


@dataclass(frozen=True)
class AlphaPower:
    t: int
    k: int
    p: int
    q: int

    @property
    def odd(self) -> bool:
        return self.k % 2 == 1

    @property
    def parity(self) -> str:
        return "odd" if self.odd else "even"

    def norm(self) -> int:
        """Left side of the pell identity; always 1."""
        if self.odd:
            return (self.t + 1) * self.p * self.p - self.t * self.q * self.q
        return self.p * self.p - self.t * (self.t + 1) * self.q * self.q

    def reduce(self, modulus: int) -> "ModPair":
        return ModPair(self.t, modulus, self.p % modulus, self.q % modulus, self.odd)


@dataclass(frozen=True)
class ModPair:
    t: int
    modulus: int
    p: int
    q: int
    odd: bool

    @property
    def parity(self) -> str:
        return "odd" if self.odd else "even"

    def is_identity(self) -> bool:
        return not self.odd and self.p == 1 % self.modulus and self.q == 0

    def norm(self) -> int:
        t, m = self.t, self.modulus
        if self.odd:
            return ((t + 1) * self.p * self.p - t * self.q * self.q) % m
        return (self.p * self.p - t * (t + 1) * self.q * self.q) % m


Pair = Union[AlphaPower, ModPair]


def _params(params: Union[EquationParams, int]) -> int:
    if isinstance(params, EquationParams):
        return params.t
    return EquationParams(params).t


def _mul(t: int, p1: int, q1: int, o1: bool, p2: int, q2: int, o2: bool):
    # odd*odd -> even, odd*even -> odd, even*even -> even
    if o1 and o2:
        return (t + 1) * p1 * p2 + t * q1 * q2, p1 * q2 + q1 * p2, False
    if o1:
        return p1 * p2 + t * q1 * q2, q1 * p2 + (t + 1) * p1 * q2, True
    if o2:
        return p1 * p2 + t * q1 * q2, q2 * p1 + (t + 1) * p2 * q1, True
    return p1 * p2 + t * (t + 1) * q1 * q2, p1 * q2 + q1 * p2, False


def _power(t: int, k: int, modulus: Optional[int] = None):
    """Left-to-right binary powering of alpha; returns (p, q, odd)."""
    p, q, odd = 1, 0, False
    for bit in bin(abs(k))[2:]:
        p, q, odd = _mul(t, p, q, odd, p, q, odd)
        if bit == "1":
            p, q, odd = _mul(t, p, q, odd, 1, 1, True)
        if modulus is not None:
            p, q = p % modulus, q % modulus
    if k < 0:
        q = -q
    if modulus is not None:
        p, q = p % modulus, q % modulus
    return p, q, odd


def alpha_power_exact(params: Union[EquationParams, int], k: int) -> AlphaPower:
    """Exact (P_k, Q_k); negative k uses P_{-k} = P_k, Q_{-k} = -Q_k."""
    t = _params(params)
    p, q, _ = _power(t, k)
    return AlphaPower(t, k, p, q)


def alpha_power_mod(params: Union[EquationParams, int], k: int, modulus: int) -> ModPair:
    if modulus < 3 or modulus % 2 == 0:
        raise ValueError(f"modulus must be odd and >= 3, got {modulus}")
    t = _params(params)
    p, q, odd = _power(t, k, modulus)
    return ModPair(t, modulus, p, q, odd)


def p_mod(t: int, k: int, modulus: int) -> int:
    """P_k mod any modulus >= 1 (even moduli such as Q_{6b} included)."""
    if modulus < 1:
        raise ValueError("modulus must be positive")
    return _power(t, k, modulus)[0]


def pair_multiply(x: Pair, y: Pair) -> Pair:
    if type(x) is not type(y):
        raise TypeError("cannot mix exact and modular pairs")
    if x.t != y.t:
        raise ValueError(f"parameter mismatch: t={x.t} vs t={y.t}")
    if isinstance(x, ModPair):
        if x.modulus != y.modulus:
            raise ValueError(f"modulus mismatch: {x.modulus} vs {y.modulus}")
        p, q, odd = _mul(x.t, x.p, x.q, x.odd, y.p, y.q, y.odd)
        return ModPair(x.t, x.modulus, p % x.modulus, q % x.modulus, odd)
    p, q, _ = _mul(x.t, x.p, x.q, x.odd, y.p, y.q, y.odd)
    return AlphaPower(x.t, x.k + y.k, p, q)


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1, binary reciprocity algorithm."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs odd positive n, got {n}")
    a %= n
    sign = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def integer_sqrt(n: int) -> tuple[int, bool]:
    if n < 0:
        raise ValueError("integer_sqrt of a negative number")
    root = math.isqrt(n)
    return root, root * root == n


def triple_index_factor(params: Union[EquationParams, int], k: int) -> tuple[int, int]:
    """Split P_{3k} = P_k * ((t+1)P_k^2 + 3t Q_k^2) for odd k."""
    if k % 2 == 0:
        raise ValueError(f"k must be odd, got {k}")
    t = _params(params)
    a = alpha_power_exact(t, k)
    return a.p, (t + 1) * a.p * a.p + 3 * t * a.q * a.q
