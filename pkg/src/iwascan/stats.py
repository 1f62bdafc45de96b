"""Statistical surveys of Fermat-quotient valuations.

Two experiments:

* `prime_fermat_scan` walks primes ell in the residue classes mod p^(n+1)
  where ell^(p-1) = 1, extracts a generator of a prime ideal above each
  split ell, and tallies the common delta of the generator, whose expected
  law is P(delta = r) = (p-1)/p^(r+1);
* `random_elem_density` samples random field elements and measures how
  often delta = 0, under a norm congruence or unconstrained.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import is_prime, kronecker, primitive_root_mod_prime_power
from .fermat import Capped, delta_embed
from .qforms import represent
from .quadint import hensel_sqrt
from .sunits import PreconditionError, build_context, validate_field

NORM_CONSTRAINED = "norm"
UNCONSTRAINED = "unconstrained"

_CHUNK = 1 << 17  # fixed so a given seed always yields the same stream


def expected_proportions(p: int, d: int = 2, rmax: int = 5) -> tuple[Fraction, ...]:
    """Reference law P(delta = r) = (q-1)/q^(r+1) with q = p^(d-1), tail-summed."""
    if d < 2:
        raise ValueError("d must be >= 2")
    q = p ** (d - 1)
    body = tuple(Fraction(q - 1, q ** (r + 1)) for r in range(rmax))
    return body + (Fraction(1, q**rmax),)


@dataclass(frozen=True)
class StatTally:
    m: int
    p: int
    n: int
    bound: int
    rmax: int
    total: int  # accepted sample count N_L
    counts: tuple[int, ...]  # C_0..C_rmax, last bucket cumulative
    skipped_nonprincipal: int

    def __post_init__(self) -> None:
        assert sum(self.counts) == self.total

    @property
    def proportions(self) -> tuple[float, ...]:
        if self.total == 0:
            return tuple(0.0 for _ in self.counts)
        return tuple(c / self.total for c in self.counts)

    @property
    def expected(self) -> tuple[Fraction, ...]:
        return expected_proportions(self.p, 2, self.rmax)


def _small_primes(limit: int) -> np.ndarray:
    mask = np.ones(limit, dtype=bool)
    mask[:2] = False
    for q in range(2, int(limit**0.5) + 1):
        if mask[q]:
            mask[q * q :: q] = False
    return np.nonzero(mask)[0]


def _candidate_primes(residues: list[int], modulus: int, bound: int) -> list[int]:
    """Primes ell = r + j*modulus, j >= 1, ell < bound, presieved then proven."""
    out: list[int] = []
    sieve = _small_primes(min(3000, max(10, bound)))
    for r in residues:
        top = bound - 1 - r
        if top < modulus:
            continue
        cand = r + modulus * np.arange(1, top // modulus + 1, dtype=np.int64)
        keep = np.ones(len(cand), dtype=bool)
        for q in sieve:
            if q * q > bound:
                break
            keep &= (cand % q != 0) | (cand == q)
        out.extend(int(c) for c in cand[keep] if is_prime(int(c)))
    out.sort()
    return out


def _tally_block(args: tuple[int, int, int, int, tuple[int, ...]]) -> tuple[list[int], int]:
    m, p, n, rmax, primes = args
    ctx = build_context(m, p)
    D = ctx.D
    mod = p ** (n + 1)
    counts = [0] * (rmax + 1)
    skipped = 0
    for ell in primes:
        alpha = represent(D, ell)
        if alpha is None:
            skipped += 1
            continue
        nrm = alpha.norm()
        assert abs(nrm) == ell and pow(nrm, p - 1, mod) == 1, \
            "generator must satisfy the defining congruence"
        rep = delta_embed(alpha, ctx, n)
        c1, c2 = isinstance(rep.delta1, Capped), isinstance(rep.delta2, Capped)
        assert c1 == c2 and (c1 or rep.delta1 == rep.delta2), \
            f"delta dichotomy violated at ell={ell}"
        counts[rmax if c1 else min(rep.delta1, rmax)] += 1
    return counts, skipped


def prime_fermat_scan(m: int, p: int, n: int, bound: int, rmax: int = 5,
                      workers: int = 1) -> StatTally:
    """Tally generator deltas over split primes ell^(p-1) = 1 mod p^(n+1), ell < bound."""
    validate_field(m, p)
    if n < rmax:
        raise ValueError("need n >= rmax to fill every bucket")
    ctx = build_context(m, p)
    if ctx.h % p == 0:
        raise PreconditionError(f"p={p} divides h={ctx.h}; generator scan needs v_p(h)=0")
    mod = p ** (n + 1)
    rho = primitive_root_mod_prime_power(p, n + 1)
    residues = sorted(pow(rho, k * p**n, mod) for k in range(1, p))
    primes = [ell for ell in _candidate_primes(residues, mod, bound)
              if kronecker(m, ell) == 1]

    workers = max(1, min(workers, len(primes) or 1))
    blocks = []
    span = len(primes)
    for i in range(workers):
        part = tuple(primes[(span * i) // workers : (span * (i + 1)) // workers])
        blocks.append((m, p, n, rmax, part))
    if workers == 1:
        parts = [_tally_block(blocks[0])]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_tally_block, blocks))
    counts = [sum(part[0][i] for part in parts) for i in range(rmax + 1)]
    skipped = sum(part[1] for part in parts)
    return StatTally(m=m, p=p, n=n, bound=bound, rmax=rmax,
                     total=sum(counts), counts=tuple(counts),
                     skipped_nonprincipal=skipped)


@dataclass(frozen=True)
class DensityTally:
    m: int
    p: int
    mode: str
    seed: int
    samples: int
    accepted: int
    hits: int

    @property
    def density(self) -> float | None:
        return None if self.accepted == 0 else self.hits / self.accepted

    @property
    def expected(self) -> Fraction:
        if self.mode == NORM_CONSTRAINED:
            return Fraction(self.p - 1, self.p)
        return Fraction(self.p**2 - 1, self.p**2)


def _powmod_vec(base: np.ndarray, e: int, mod: int) -> np.ndarray:
    out = np.ones_like(base)
    base = base % mod
    while e:
        if e & 1:
            out = out * base % mod
        base = base * base % mod
        e >>= 1
    return out


def random_elem_density(m: int, p: int, samples: int, mode: str = NORM_CONSTRAINED,
                        seed: int = 0) -> DensityTally:
    """Sample y = a*sqrt(m) + b, a,b uniform in [0, 10^6); measure delta = 0 rates.

    NORM_CONSTRAINED keeps y with norm(y)^(p-1) = 1 mod p^2 and measures the
    common delta = 0 (expected (p-1)/p); UNCONSTRAINED keeps norm(y) prime
    to p and measures min(delta_1, delta_2) = 0 (expected (p^2-1)/p^2).
    """
    validate_field(m, p)
    if mode not in (NORM_CONSTRAINED, UNCONSTRAINED):
        raise ValueError(f"unknown mode {mode!r}")
    if samples < 0:
        raise ValueError("samples must be >= 0")
    p2 = p * p
    s = hensel_sqrt(m, p, 1) % p2
    rng = np.random.default_rng(seed)
    accepted = hits = 0
    left = samples
    while left > 0:
        k = min(_CHUNK, left)
        left -= k
        draw = rng.integers(0, 10**6, size=(k, 2), dtype=np.int64)
        a, b = draw[:, 0], draw[:, 1]
        r1 = (b + a * s) % p2
        r2 = (b - a * s) % p2
        if mode == NORM_CONSTRAINED:
            acc = _powmod_vec(r1 * r2 % p2, p - 1, p2) == 1
            hit = acc & (_powmod_vec(r1, p - 1, p2) != 1)
        else:
            acc = (r1 * r2) % p != 0
            hit = acc & ((_powmod_vec(r1, p - 1, p2) != 1)
                         | (_powmod_vec(r2, p - 1, p2) != 1))
        accepted += int(acc.sum())
        hits += int(hit.sum())
    return DensityTally(m=m, p=p, mode=mode, seed=seed, samples=samples,
                        accepted=accepted, hits=hits)
