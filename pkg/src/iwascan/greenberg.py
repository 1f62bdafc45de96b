"""Field-level vanishing test and range scans.

For a real quadratic field in which the odd prime p splits, the invariants
vanish as soon as (a) the p-part of the class number is already carried by
the class of a prime above p, and (b) the relevant S-units are not normic,
i.e. min(delta(eps), delta(pi)) = 0.  `check_field` evaluates both halves
and reports the witnessing quantities; `scan_range` repeats this over all
admissible m in an interval.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .arith import is_squarefree, kronecker, valuation
from .fermat import Capped, delta_exact
from .sunits import FieldContext, build_context


@dataclass(frozen=True)
class FieldVerdict:
    """Everything `check_field` learns about one (m, p)."""

    m: int
    p: int
    h: int
    h0: int
    v_p_h: int
    delta_eps: int
    delta_pi: int
    class_ok: bool
    normic_ok: bool
    resolved: bool
    torsion_v: int

    @property
    def z_eps(self) -> Fraction:
        return Fraction(1, self.p**self.delta_eps)

    @property
    def z_pi(self) -> Fraction:
        return Fraction(1, self.p**self.delta_pi)


def _exact_delta(x, ctx: FieldContext, n0: int, what: str) -> int:
    rep = delta_exact(x, ctx, n0)
    if isinstance(rep.delta1, Capped):
        raise ArithmeticError(f"delta({what}) >= {rep.n} for m={ctx.m}, p={ctx.p}")
    return rep.delta1


def check_field(m: int, p: int, n0: int = 1) -> FieldVerdict:
    """Run the vanishing test for Q(sqrt(m)) at p.

    n0 is only the starting precision; deltas that exceed it are recomputed
    at doubled precision, so the verdict does not depend on n0.
    """
    ctx = build_context(m, p)
    rep = delta_exact(ctx.eps, ctx, n0)
    if isinstance(rep.delta1, Capped) or isinstance(rep.delta2, Capped):
        raise ArithmeticError(f"delta(eps) out of range for m={m}, p={p}")
    assert rep.delta1 == rep.delta2, "unit deltas must agree at both primes"
    delta_eps = rep.delta1
    # delta at the first prime of the conjugate generator; multiplying by
    # units can only move it when it ties delta_eps, and never below the
    # min, so min(delta_eps, delta_pi) is convention-free.
    delta_pi = _exact_delta(ctx.pi2, ctx, n0, "pi")

    v_p_h = valuation(ctx.h, p)
    class_ok = v_p_h == valuation(ctx.h0, p)
    normic_ok = min(delta_eps, delta_pi) == 0
    return FieldVerdict(
        m=m, p=p, h=ctx.h, h0=ctx.h0, v_p_h=v_p_h,
        delta_eps=delta_eps, delta_pi=delta_pi,
        class_ok=class_ok, normic_ok=normic_ok,
        resolved=class_ok and normic_ok,
        torsion_v=v_p_h + delta_eps,
    )


def admissible(m: int, p: int) -> bool:
    """True when Q(sqrt(m)) is a real quadratic field where p splits."""
    return m > 1 and is_squarefree(m) and kronecker(m, p) == 1


def _scan_block(args: tuple[int, int, int, int]) -> list[FieldVerdict]:
    p, lo, hi, n0 = args
    return [check_field(m, p, n0) for m in range(lo, hi + 1) if admissible(m, p)]


@dataclass(frozen=True)
class ScanResult:
    p: int
    m_min: int
    m_max: int
    tested: int
    resolved: int
    rows: tuple[FieldVerdict, ...]


def scan_range(p: int, m_min: int, m_max: int, n0: int = 1,
               workers: int = 1) -> ScanResult:
    """Test every admissible m in [m_min, m_max]; rows come back m-ascending."""
    if m_min > m_max:
        raise ValueError("empty range")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    span = m_max - m_min + 1
    workers = min(workers, span)
    bounds = [m_min + (span * i) // workers for i in range(workers + 1)]
    blocks = [(p, bounds[i], bounds[i + 1] - 1, n0) for i in range(workers)]
    if workers == 1:
        parts = [_scan_block(blocks[0])]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_block, blocks))
    rows = tuple(r for part in parts for r in part)
    return ScanResult(p=p, m_min=m_min, m_max=m_max, tested=len(rows),
                      resolved=sum(r.resolved for r in rows), rows=rows)
