"""Verdict logic: invariance properties and scan bookkeeping."""

import pytest

from iwascan.fermat import Capped, delta_embed, delta_exact
from iwascan.greenberg import admissible, check_field, scan_range
from iwascan.sunits import PreconditionError, build_context

WINDOW = [30001, 30007, 30010, 30013, 30019, 30022, 30031, 30034, 30043,
          30046, 30049, 30055, 30058, 30061, 30067, 30070, 30073, 30079,
          30085, 30091, 30094, 30097]


def exact_delta1(x, ctx):
    rep = delta_exact(x, ctx, 1)
    assert not isinstance(rep.delta1, Capped)
    return rep.delta1


@pytest.mark.parametrize("m", [103, 2659, 12007, 30007, 30013, 30043, 30055])
def test_normic_equals_symbol_subgroup_sweep(m):
    """min over the unit sweep of pi2 * eps^j equals min(delta_eps, delta_pi)."""
    p = 3
    ctx = build_context(m, p)
    v = check_field(m, p)
    sweep = [exact_delta1(ctx.eps, ctx)]
    x = ctx.pi2
    for _ in range(p):
        sweep.append(exact_delta1(x, ctx))
        x = x * ctx.eps
    assert min(sweep) == min(v.delta_eps, v.delta_pi)
    assert v.normic_ok == (min(sweep) == 0)


@pytest.mark.parametrize("m,p", [(103, 3), (2659, 3), (12007, 3), (30055, 3),
                                 (44853, 7), (14, 5)])
def test_normic_stable_under_generator_change(m, p):
    ctx = build_context(m, p)
    v = check_field(m, p)
    d_eps = v.delta_eps
    # eps^-1 is +-conj(eps); sign never moves a delta
    for variant in (ctx.pi2 * ctx.eps, ctx.pi2 * ctx.eps.conjugate(), -ctx.pi2):
        d = exact_delta1(variant, ctx)
        assert min(d_eps, d) == min(d_eps, v.delta_pi)
    # conjugating the generator swaps the primes but not the verdict:
    # pi1 and pi2 share their delta at the same prime since pi1*pi2 = +-p^h0
    d_pi1 = exact_delta1(ctx.pi1, ctx)
    assert d_pi1 == v.delta_pi


@pytest.mark.parametrize("m", WINDOW)
def test_verdict_independent_of_n0(m):
    assert check_field(m, 3, n0=1) == check_field(m, 3, n0=8)


def test_admissible():
    assert admissible(7, 3) and admissible(30007, 3)
    assert not admissible(5, 3)   # inert
    assert not admissible(4, 3)   # square
    assert not admissible(12, 3)  # not squarefree
    assert not admissible(1, 3)


def test_check_field_rejects_bad_input():
    with pytest.raises(PreconditionError):
        check_field(4, 3)
    with pytest.raises(PreconditionError):
        check_field(5, 3)


def test_class_problem_field_counts_unresolved():
    # h = 9 but h0 = 3: the class of the prime above p generates too little
    v = check_field(1129, 3)
    assert (v.h, v.h0, v.v_p_h) == (9, 3, 2)
    assert not v.class_ok and v.normic_ok and not v.resolved


def test_torsion_and_z_columns():
    v = check_field(2659, 3)
    assert v.torsion_v == v.v_p_h + v.delta_eps == 3
    assert str(v.z_eps) == "1/9" and v.z_pi.denominator == 3**v.delta_pi


def test_scan_range_counts_and_order():
    res = scan_range(3, 30001, 30097)
    assert [r.m for r in res.rows] == WINDOW
    assert res.tested == 22 and res.resolved == 19
    assert {r.m for r in res.rows if not r.resolved} == {30007, 30031, 30055}


def test_scan_range_workers_agree():
    seq = scan_range(3, 2, 400, workers=1)
    par = scan_range(3, 2, 400, workers=2)
    assert seq == par


def test_scan_range_rejects_empty():
    with pytest.raises(ValueError):
        scan_range(3, 10, 5)
