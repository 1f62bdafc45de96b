"""Indefinite binary quadratic forms and the class group machinery.

Forms (a, b, c) of positive nonsquare discriminant D = b^2 - 4ac.
`class_number` counts rho-cycles of reduced forms, i.e. proper (SL2)
classes, which is the narrow class number of the order.  `class_order`
and `represent` deliberately work in the *wide* sense instead (the
reduction walk runs on positive-norm ideals and ignores the sign of the
leading coefficient), because a prime-power ideal is what gets tested
for principality and a generator of either norm sign is acceptable.

`represent` extracts an actual generator: each reduction step
[a, (b+sqrt(D))/2] -> [|c|, (b'+sqrt(D))/2] multiplies the ideal by
c / ((b+sqrt(D))/2), and the accumulated factor is the generator once
the walk reaches the unit ideal.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import gcd, isqrt

from .arith import divisors, factorize, kronecker, valuation, xgcd
from .pell import fundamental_unit
from .quadint import QuadElem, embed, hensel_sqrt, make_elem

Mat2 = tuple[tuple[int, int], tuple[int, int]]

_IDENTITY: Mat2 = ((1, 0), (0, 1))
_MAX_WALK = 10**6


@dataclass(frozen=True)
class IndefForm:
    """Form a x^2 + b xy + c y^2 of discriminant D > 0, D not a square.

    `transform` (when present) is the accumulated change of variables
    taking the form this one was derived from to this one: if g carries
    transform M = ((al, be), (ga, de)) relative to f, then
    g(x, y) = f(al*x + be*y, ga*x + de*y), det M = +-1.
    """

    a: int
    b: int
    c: int
    D: int
    transform: Mat2 | None = None

    def __post_init__(self) -> None:
        if self.b * self.b - 4 * self.a * self.c != self.D:
            raise ValueError("coefficients do not match the discriminant")
        if self.D <= 0 or isqrt(self.D) ** 2 == self.D:
            raise ValueError("discriminant must be positive and nonsquare")

    def __repr__(self) -> str:
        return f"IndefForm({self.a}, {self.b}, {self.c})"

    def key(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


def form(a: int, b: int, c: int) -> IndefForm:
    return IndefForm(a, b, c, b * b - 4 * a * c)


def principal_form(D: int) -> IndefForm:
    k = D % 2
    return IndefForm(1, k, (k * k - D) // 4, D)


def _mat_mul(m1: Mat2, m2: Mat2) -> Mat2:
    (a, b), (c, d) = m1
    (e, f), (g, h) = m2
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def _window_b(b: int, half: int, s: int) -> int:
    """Normalized b' = -b (mod 2*half) in the reduction window."""
    if half > s:
        t = (-b) % (2 * half)
        return t - 2 * half if t > half else t
    return s - ((s + b) % (2 * half))


def is_reduced(f: IndefForm) -> bool:
    s = isqrt(f.D)
    if not 1 <= f.b <= s:
        return False
    return max(1, s - f.b + 1) <= 2 * abs(f.a) <= s + f.b


def rho(f: IndefForm) -> IndefForm:
    """One reduction/cycle step (a, b, c) -> (c, b', c'), det +1 transform."""
    a, b, c = f.a, f.b, f.c
    s = isqrt(f.D)
    b2 = _window_b(b, abs(c), s)
    c2 = (b2 * b2 - f.D) // (4 * c)
    t = f.transform
    if t is not None:
        step: Mat2 = ((0, -1), (1, (b + b2) // (2 * c)))
        t = _mat_mul(t, step)
    return IndefForm(c, b2, c2, f.D, t)


def reduce_form(f: IndefForm) -> IndefForm:
    """Reduced form equivalent to f, with the transform accumulated."""
    if f.transform is None:
        f = replace(f, transform=_IDENTITY)
    # normalize b into the window for |a| first (pure translation)
    s = isqrt(f.D)
    b2 = f.b if is_reduced(f) else _window_b(-f.b, abs(f.a), s)
    if b2 != f.b:
        shift = (b2 - f.b) // (2 * f.a)
        c2 = (b2 * b2 - f.D) // (4 * f.a)
        f = IndefForm(f.a, b2, c2, f.D, _mat_mul(f.transform, ((1, shift), (0, 1))))
    steps = 0
    while not is_reduced(f):
        f = rho(f)
        steps += 1
        if steps > _MAX_WALK:
            raise ArithmeticError("reduction did not terminate")
    return f


def _positive_reduced(f: IndefForm) -> IndefForm:
    f = reduce_form(f)
    if f.a < 0:
        f = rho(f)  # neighbours in a cycle alternate the sign of a
    return f


def compose(f: IndefForm, g: IndefForm) -> IndefForm:
    """Gauss composition, returned reduced (transform not tracked)."""
    if f.D != g.D:
        raise ValueError("mixed discriminants")
    D = f.D
    f = _positive_reduced(replace(f, transform=None))
    g = _positive_reduced(replace(g, transform=None))
    a1, b1 = f.a, f.b
    a2, b2 = g.a, g.b
    s = (b1 + b2) // 2
    d1, u, v = xgcd(a1, a2)
    d, u2, v2 = xgcd(d1, s)
    a3 = a1 * a2 // (d * d)
    num = u2 * (u * a1 * b2 + v * a2 * b1) + v2 * (b1 * b2 + D) // 2
    assert num % d == 0, "composition arithmetic broke"
    b3 = (num // d) % (2 * a3)
    r = (b3 * b3 - D) % (4 * a3)
    assert r == 0, "composed form is not integral"
    c3 = (b3 * b3 - D) // (4 * a3)
    return reduce_form(IndefForm(a3, b3, c3, D))


def inverse(f: IndefForm) -> IndefForm:
    return IndefForm(f.a, -f.b, f.c, f.D)


def power(f: IndefForm, k: int) -> IndefForm:
    if k < 0:
        return power(inverse(f), -k)
    result = reduce_form(principal_form(f.D))
    base = f
    while k:
        if k & 1:
            result = compose(result, base)
        k >>= 1
        if k:
            base = compose(base, base)
    return result


def _check_fundamental(D: int) -> None:
    if D <= 0 or isqrt(D) ** 2 == D:
        raise ValueError("discriminant must be positive and nonsquare")
    if D % 4 == 1:
        fac = factorize(D)
    elif D % 4 == 0:
        m = D // 4
        if m % 4 == 1:
            raise ValueError(f"D={D} is not fundamental")
        fac = factorize(m)
    else:
        raise ValueError(f"D={D} is not a discriminant")
    if any(e > 1 for e in fac.values()):
        raise ValueError(f"D={D} is not fundamental")


def reduced_forms(D: int) -> list[tuple[int, int, int]]:
    """All reduced forms of discriminant D (both signs of a)."""
    s = isqrt(D)
    out = []
    for b in range(2 - (D % 2), s + 1, 2):
        n = (D - b * b) // 4  # = |a|*|c|
        lo = (max(1, s - b + 1) + 1) // 2
        hi = (s + b) // 2
        for aa in range(lo, hi + 1):
            if n % aa == 0:
                c = -(n // aa)
                out.append((aa, b, c))
                out.append((-aa, b, -c))
    return out


def class_number(D: int) -> int:
    """Form class number: number of rho-cycles of reduced forms."""
    _check_fundamental(D)
    todo = set(reduced_forms(D))
    s = isqrt(D)
    cycles = 0
    while todo:
        start = next(iter(todo))
        cycles += 1
        cur = start
        while True:
            todo.discard(cur)
            a, b, c = cur
            b2 = _window_b(b, abs(c), s)
            cur = (c, b2, (b2 * b2 - D) // (4 * c))
            if cur == start:
                break
    return cycles


def _canonical_root(D: int, q: int, k: int = 1) -> int:
    """b with b^2 = D (mod 4 q^k), b = -e*s (mod q^k), b = D (mod 2).

    e*s is the canonical image of sqrt(D) under the labelled embedding
    (s the Hensel root of m = D or D/4), so the ideal [q^k, (b+sqrt(D))/2]
    is the k-th power of the *first* prime above q.
    """
    m = D // 4 if D % 4 == 0 else D
    e = 2 if D % 4 == 0 else 1
    s = hensel_sqrt(m, q, k)
    qk = q**k
    b = (-e * s) % qk
    if (b - D) % 2:
        b += qk  # q odd, so this flips the parity
    b %= 2 * qk
    assert (b * b - D) % (4 * qk) == 0
    return b


def prime_form(D: int, q: int) -> IndefForm:
    """Form (q, t, .) attached to the canonical prime ideal above split q."""
    _check_fundamental(D)
    t = _canonical_root(D, q, 1)
    return IndefForm(q, t, (t * t - D) // (4 * q), D)


def _ideal_walk(A: int, B: int, D: int, want_gamma: bool):
    """Walk [A, (B+sqrt(D))/2] through reduction steps to the unit ideal.

    Returns the accumulated factor (gA, gB, gC) meaning (gA + gB*sqrt(m))/gC
    with J = gamma * O once A = 1 is reached, or None when the walk closes
    a cycle first (ideal not principal in the wide sense).
    """
    m = D // 4 if D % 4 == 0 else D
    e = 2 if D % 4 == 0 else 1
    s = isqrt(D)
    gA, gB, gC = 1, 0, 1
    seen: set[tuple[int, int]] = set()
    steps = 0
    while A != 1:
        if (A, B) in seen:
            return None
        if A <= s:
            seen.add((A, B))
        c = (B * B - D) // (4 * A)
        b2 = _window_b(B, abs(c), s)
        if want_gamma:
            # gamma *= (B + sqrt(D))/2 / c, with sqrt(D) = e*sqrt(m)
            gA, gB = gA * B + gB * e * m, gA * e + gB * B
            gC *= 2 * c
            if gC < 0:
                gA, gB, gC = -gA, -gB, -gC
            g = gcd(gcd(gA, gB), gC)
            if g > 1:
                gA, gB, gC = gA // g, gB // g, gC // g
        A, B = abs(c), b2
        steps += 1
        if steps > _MAX_WALK:
            raise ArithmeticError("ideal walk did not terminate")
    return gA, gB, gC


def is_wide_principal(f: IndefForm) -> bool:
    """Principality of the ideal [|a|, (b+sqrt(D))/2] (sign classes merged)."""
    return _ideal_walk(abs(f.a), f.b, f.D, want_gamma=False) is not None


def class_order(f: IndefForm, h: int) -> int:
    """Order of the class of f, in the wide sense; divides h."""
    for d in divisors(h):
        if is_wide_principal(power(f, d)):
            return d
    raise ArithmeticError("class order does not divide the class number")


def _unit_reduce(x: QuadElem, m: int) -> QuadElem:
    """Smallest |trace| representative of x modulo the fundamental unit."""
    eps = fundamental_unit(m)
    eps_inv = eps.conjugate() if eps.norm() == 1 else -eps.conjugate()

    def height(y: QuadElem) -> int:
        return abs(y.trace())

    for step in (eps_inv, eps):
        while True:
            y = x * step
            if height(y) < height(x):
                x = y
            else:
                break
    if x.a < 0:
        x = -x
    return x


def represent(D: int, target: int) -> QuadElem | None:
    """Generator of the canonical prime-power ideal of norm |target|.

    target must be +-q^k for an odd prime q split in the order.  Returns
    alpha with |norm(alpha)| = q^k and (alpha) the k-th power of the
    canonical prime above q, reduced modulo units and with positive
    trace, or None when that ideal is not (wide-)principal.
    """
    _check_fundamental(D)
    t = abs(target)
    if t <= 1:
        raise ValueError("target must be a nontrivial prime power")
    fac = factorize(t)
    if len(fac) != 1:
        raise ValueError(f"target {target} is not a prime power")
    (q, k), = fac.items()
    if q == 2 or kronecker(D, q) != 1:
        raise ValueError(f"q={q} is not an odd split prime for D={D}")

    m = D // 4 if D % 4 == 0 else D
    B = _canonical_root(D, q, k)
    res = _ideal_walk(q**k, B, D, want_gamma=True)
    if res is None:
        return None
    gA, gB, gC = res
    if gC not in (1, 2):
        raise ArithmeticError("generator is not integral")
    alpha = make_elem(gA, gB, gC, m)
    assert abs(alpha.norm()) == q**k, "generator has the wrong norm"
    alpha = _unit_reduce(alpha, m)

    # the walk targeted the canonical prime; double-check the support
    s = hensel_sqrt(m, q, k + 1)
    r1 = embed(alpha, s, q, k + 1).r1
    v1 = valuation(r1, q) if r1 else k + 1
    assert v1 == k, "generator supports the wrong prime"
    return alpha
