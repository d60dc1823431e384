"""Factor-base construction and residue-class sieving of sequence indices.

A prime p enters the factor base for working modulus M when alpha^M is the
identity mod p.  Then P_{j+M} = P_j (mod p) for every j, so a Legendre symbol
(P_j/p) = -1 rules out a perfect square at every index congruent to j mod M.
"""

from __future__ import annotations

import json
import logging
import os
from concurrent.futures import Executor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .io import atomic_write_json
from .pell import _mul, alpha_power_mod
from .reduction import brute_force_index

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SieveConfig:
    t: int
    m: int = 840
    r: int = 0
    s: int = 0
    prime_bound: int = 100_000
    # primes dividing M are skipped by default; see build_factor_base
    exclude_modulus_primes: bool = True

    def __post_init__(self) -> None:
        if self.t < 1 or self.m < 1 or self.r < 0 or self.s < 0:
            raise ValueError(f"invalid sieve config {self}")

    @property
    def M(self) -> int:
        return 2**self.r * 3**self.s * self.m


@dataclass(frozen=True)
class FactorBase:
    t: int
    M: int
    prime_bound: int
    primes: tuple[int, ...]

    def to_json(self) -> dict:
        return {"t": self.t, "M": self.M, "prime_bound": self.prime_bound, "primes": list(self.primes)}


@dataclass
class SieveOutcome:
    t: int
    M: int
    m: int
    survivors_mod_M: list[int]
    survivors_mod_m: list[int]
    # eliminated residue j -> (witness prime, symbol value)
    witnesses: dict[int, tuple[int, int]] = field(default_factory=dict)


@dataclass
class EscalationResult:
    t: int
    m: int
    r: int
    s: int
    factor_base: FactorBase
    outcome: SieveOutcome
    converged: bool
    expected_mod_m: list[int]
    attempts: list[dict]


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for i in range(3, int(n**0.5) + 1, 2):
        if flags[i]:
            flags[i * i :: 2 * i] = False
    return np.flatnonzero(flags).tolist()


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _degenerate(t: int, p: int) -> bool:
    return (2 * t * (t + 1)) % p == 0


def _order_dividing(t: int, p: int, bound: int) -> int:
    """Smallest even L | bound with alpha^L = 1 mod p; alpha^bound must be 1."""
    L = bound
    for f in _prime_factors(bound):
        while L % f == 0 and (L // f) % 2 == 0 and alpha_power_mod(t, L // f, p).is_identity():
            L //= f
    return L


def sequence_period(t: int, p: int) -> int:
    """Smallest even L > 0 with alpha^L = 1 mod p.

    alpha^2 has norm 1, so its order divides p - (t(t+1)/p); L is twice that
    order.  Only meaningful for prime p.
    """
    if p < 3 or p % 2 == 0 or _degenerate(t, p):
        raise ValueError(f"p={p} must be an odd prime not dividing 2t(t+1) (t={t})")
    legendre = pow(t * (t + 1) % p, (p - 1) // 2, p)
    group = p - 1 if legendre == 1 else p + 1
    if not alpha_power_mod(t, 2 * group, p).is_identity():
        raise ValueError(f"{p} does not behave like a prime here")
    return _order_dividing(t, p, 2 * group)


def _cache_path(cache_dir: Path, t: int, M: int, prime_bound: int, exclude: bool) -> Path:
    tag = "" if exclude else "-all"
    return cache_dir / f"fb-t{t}-M{M}-b{prime_bound}{tag}.json"


def build_factor_base(config: SieveConfig, cache_dir: Optional[os.PathLike] = None) -> FactorBase:
    """Every odd prime p <= prime_bound, p not dividing 2t(t+1), with alpha^M = 1 mod p.

    With ``exclude_modulus_primes`` (the default) primes dividing M are left
    out as well; for t=2, M=1680 this gives the 27-prime reference base.
    """
    t, M = config.t, config.M
    path = None
    if cache_dir is not None:
        path = _cache_path(Path(cache_dir), t, M, config.prime_bound, config.exclude_modulus_primes)
        if path.exists():
            data = json.loads(path.read_text())
            if (data["t"], data["M"], data["prime_bound"]) == (t, M, config.prime_bound):
                return FactorBase(t, M, config.prime_bound, tuple(data["primes"]))
            log.warning("ignoring mismatched cache file %s", path)

    primes = []
    for p in primes_up_to(config.prime_bound):
        if p == 2 or _degenerate(t, p):
            continue
        if config.exclude_modulus_primes and M % p == 0:
            continue
        if alpha_power_mod(t, M, p).is_identity():
            primes.append(p)
    fb = FactorBase(t, M, config.prime_bound, tuple(primes))
    if path is not None:
        atomic_write_json(path, fb.to_json())
    return fb


def _qr_table(p: int) -> np.ndarray:
    squares = np.zeros(p, dtype=bool)
    squares[(np.arange(p, dtype=np.int64) ** 2) % p] = True
    return squares


def prime_symbols(t: int, p: int, M: int) -> np.ndarray:
    """Legendre symbols (P_j / p) for odd j = 1, 3, ..., M-1.

    One forward pass j -> j+2 over a single period, then tiled across M.
    """
    L = _order_dividing(t, p, M)
    # alpha^2 mod p as an even state
    a2p, a2q, _ = _mul(t, 1, 1, True, 1, 1, True)
    a2p, a2q = a2p % p, a2q % p
    vals = np.empty(L // 2, dtype=np.int64)
    cp, cq, odd = 1, 1, True
    for idx in range(L // 2):
        vals[idx] = cp
        cp, cq, odd = _mul(t, cp, cq, odd, a2p, a2q, False)
        cp, cq = cp % p, cq % p
    qr = _qr_table(p)
    sym = np.where(qr[vals], 1, -1).astype(np.int8)
    sym[vals == 0] = 0
    return np.tile(sym, M // L)


def run_sieve(
    fb: FactorBase,
    m: int,
    executor: Optional[Executor] = None,
) -> SieveOutcome:
    """Eliminate odd residues j mod M that have a witness prime in ``fb``.

    The witness recorded for j is the smallest prime giving symbol -1.
    """
    M, t = fb.M, fb.t
    if M % m:
        raise ValueError(f"primary modulus {m} must divide M={M}")
    half = M // 2
    witness = np.zeros(half, dtype=np.int64)
    if executor is not None:
        tables = executor.map(prime_symbols, [t] * len(fb.primes), fb.primes, [M] * len(fb.primes))
    else:
        tables = (prime_symbols(t, p, M) for p in fb.primes)
    for p, sym in zip(fb.primes, tables):
        hit = (witness == 0) & (sym == -1)
        witness[hit] = p
    js = np.arange(1, M, 2)
    survivors = js[witness == 0].tolist()
    witnesses = {int(j): (int(p), -1) for j, p in zip(js, witness) if p}
    return SieveOutcome(
        t=t,
        M=M,
        m=m,
        survivors_mod_M=survivors,
        survivors_mod_m=sorted({j % m for j in survivors}),
        witnesses=witnesses,
    )


def expected_survivors(t: int, m: int) -> list[int]:
    """Classes mod m that no sound sieve can remove.

    These are +-n mod m for each odd n < m with P_n a perfect square; +-1
    always qualifies, +-3 does exactly when 4t+1 is a square (t = u^2+u).
    """
    classes = set()
    for n in brute_force_index(t, max(m - 1, 1)):
        classes |= {n % m, (-n) % m}
    return sorted(classes)


def escalation_order(m: int, max_r: int, max_s: int) -> list[tuple[int, int]]:
    pairs = [(r, s) for r in range(max_r + 1) for s in range(max_s + 1)]
    return sorted(pairs, key=lambda rs: (2 ** rs[0] * 3 ** rs[1] * m, rs))


def escalate(
    t: int,
    m: int = 840,
    max_r: int = 4,
    max_s: int = 3,
    prime_bound: int = 100_000,
    cache_dir: Optional[os.PathLike] = None,
    executor: Optional[Executor] = None,
    exclude_modulus_primes: bool = True,
) -> EscalationResult:
    """Grow M = 2^r 3^s m until only the unavoidable classes survive mod m.

    Unavoidable classes are those of ``expected_survivors``.  If no (r, s)
    within bounds gets there, the attempt with the fewest survivors mod m is
    returned with ``converged=False``.
    """
    target = expected_survivors(t, m)
    attempts: list[dict] = []
    best: Optional[EscalationResult] = None
    for r, s in escalation_order(m, max_r, max_s):
        cfg = SieveConfig(t, m, r, s, prime_bound, exclude_modulus_primes)
        fb = build_factor_base(cfg, cache_dir)
        outcome = run_sieve(fb, m, executor)
        ok = outcome.survivors_mod_m == target
        attempts.append(
            {"r": r, "s": s, "M": cfg.M, "fb_size": len(fb.primes), "survivors_mod_m": outcome.survivors_mod_m}
        )
        log.info("t=%d r=%d s=%d M=%d: %d survivors mod m", t, r, s, cfg.M, len(outcome.survivors_mod_m))
        result = EscalationResult(t, m, r, s, fb, outcome, ok, target, attempts)
        if ok:
            return result
        if best is None or len(outcome.survivors_mod_m) < len(best.outcome.survivors_mod_m):
            best = result
    assert best is not None
    best.attempts = attempts
    return best


def check_symmetry(outcome: SieveOutcome) -> bool:
    alive = set(outcome.survivors_mod_M)
    return all((outcome.M - j) in alive for j in alive)


def sieve_report(
    outcome: SieveOutcome, r: int, s: int, converged: bool, primes: Sequence[int] = ()
) -> dict:
    report = {
        "schema": 1,
        "t": outcome.t,
        "m": outcome.m,
        "r": r,
        "s": s,
        "M": outcome.M,
        "survivors_mod_M": outcome.survivors_mod_M,
        "survivors_mod_m": outcome.survivors_mod_m,
        "witnesses": {str(j): {"p": p, "symbol": v} for j, (p, v) in sorted(outcome.witnesses.items())},
        "converged": converged,
    }
    if primes:
        report["factor_base"] = list(primes)
    return report
