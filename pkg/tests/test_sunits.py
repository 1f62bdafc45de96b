"""Field context assembly: class data, S-unit generators, embeddings."""

import pytest

from iwascan.arith import valuation
from iwascan.quadint import make_elem
from iwascan.sunits import (FieldContext, PreconditionError, build_context,
                            validate_field)

CASES = [(103, 3), (7, 3), (10, 3), (13, 3), (2659, 3), (12007, 3),
         (30007, 3), (30043, 3), (44853, 7), (109, 7), (14, 11)]


@pytest.mark.parametrize("m,p", CASES)
def test_context_invariants(m, p):
    ctx = build_context(m, p)
    # pi1 * pi2 is +-p^h0 on the nose
    prod = ctx.pi1 * ctx.pi2
    assert prod.b == 0 and prod.den == 1 and abs(prod.a) == p**ctx.h0
    assert ctx.h % ctx.h0 == 0
    # narrow/wide bookkeeping
    assert ctx.h_narrow in (ctx.h, 2 * ctx.h)
    assert (ctx.h_narrow == ctx.h) == (ctx.eps.norm() == -1)
    # the labelled embedding localizes pi1 at the first prime only
    r = ctx.embed(ctx.pi1)
    assert valuation(r.r1, p) == ctx.h0 and r.r2 % p != 0


@pytest.mark.parametrize("m,p", CASES)
def test_embedding_respects_unit(m, p):
    ctx = build_context(m, p)
    r = ctx.embed(ctx.eps)
    mod = p**ctx.N
    assert r.r1 * r.r2 % mod == ctx.eps.norm() % mod
    assert r.r1 % p != 0 and r.r2 % p != 0


def test_embed_extends_precision():
    # embed(x, n) works mod p^(n+1); n + 1 > N forces a re-lift of sqrt(m)
    ctx = build_context(103, 3)
    x = make_elem(10, -1, 1, 103)
    hi = ctx.embed(x, ctx.N + 7)
    lo = ctx.embed(x, ctx.N - 1)
    assert hi.modulus == 3 ** (ctx.N + 8)
    assert lo.modulus == 3**ctx.N
    assert hi.r1 % 3**ctx.N == lo.r1 and hi.r2 % 3**ctx.N == lo.r2


def test_validate_field_errors():
    with pytest.raises(PreconditionError):
        validate_field(4, 3)  # not squarefree
    with pytest.raises(PreconditionError):
        validate_field(5, 3)  # 3 inert in Q(sqrt 5)
    with pytest.raises(PreconditionError):
        validate_field(6, 3)  # 3 ramified
    with pytest.raises(PreconditionError):
        validate_field(7, 2)  # p must be odd
    with pytest.raises(PreconditionError):
        validate_field(103, 9)  # p must be prime
    validate_field(103, 3)


def test_context_is_cached():
    assert build_context(103, 3) is build_context(103, 3)


def test_context_values_103():
    ctx = build_context(103, 3)
    assert (ctx.h, ctx.h0, ctx.h_narrow) == (1, 1, 2)
    assert (ctx.eps.a, ctx.eps.b) == (227528, 22419)
    assert abs(ctx.pi1.norm()) == 3


def test_context_values_30043():
    ctx = build_context(30043, 3)
    assert (ctx.h, ctx.h0) == (18, 9)
    assert abs(ctx.pi1.norm()) == 3**9
    # unit-reduced generator is the tiny one: 317 +- 2*sqrt(m)
    assert (abs(ctx.pi1.a), abs(ctx.pi1.b)) == (317, 2)
