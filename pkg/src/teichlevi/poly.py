"""Dense univariate polynomials over an exact field, stored low degree first.

A polynomial is a tuple of coefficients ``(c0, c1, ..., cd)`` with nonzero
leading coefficient; the zero polynomial is ``()``.  Coefficients may be
Gaussian rationals or quadratic-extension elements.
"""

from __future__ import annotations

from math import comb
from typing import Sequence

from .gaussian import ONE, ZERO, exact

Poly = tuple


def trim(coeffs: Sequence) -> Poly:
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(exact(c) for c in coeffs)


def degree(p: Poly) -> int:
    """Degree, with deg(0) = -1."""
    return len(p) - 1


def monomial(k: int, c=ONE) -> Poly:
    return trim([ZERO] * k + [exact(c)])


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    out = []
    for k in range(n):
        a = p[k] if k < len(p) else None
        b = q[k] if k < len(q) else None
        if a is None:
            out.append(b)
        elif b is None:
            out.append(a)
        else:
            out.append(a + b)
    return trim(out)


def neg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, neg(q))


def scale(p: Poly, c) -> Poly:
    if not c:
        return ()
    return trim([a * c for a in p])


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] = out[i + j] + a * b
    return trim(out)


def power(p: Poly, k: int) -> Poly:
    result: Poly = (ONE,)
    for _ in range(k):
        result = mul(result, p)
    return result


def divmod_poly(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    dq = len(q) - 1
    lead_inv = 1 / q[-1] if not hasattr(q[-1], "inverse") else q[-1].inverse()
    quot = [ZERO] * max(len(p) - dq, 0)
    for k in range(len(rem) - 1, dq - 1, -1):
        c = rem[k]
        if not c:
            continue
        f = c * lead_inv
        quot[k - dq] = f
        for j, b in enumerate(q):
            rem[k - dq + j] = rem[k - dq + j] - f * b
    return trim(quot), trim(rem[:dq] if dq > 0 else [])


def exact_div(p: Poly, q: Poly) -> Poly | None:
    """p / q if q divides p exactly, else None."""
    quot, rem = divmod_poly(p, q)
    if rem:
        return None
    return quot


def evaluate(p: Poly, x):
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: Poly) -> Poly:
    return trim([p[k] * k for k in range(1, len(p))])


def shift(p: Poly, x0) -> Poly:
    """Coefficients of p(x0 + t) as a polynomial in t."""
    n = len(p)
    out = [ZERO] * n
    powers = [ONE]
    for _ in range(n):
        powers.append(powers[-1] * x0)
    for j, c in enumerate(p):
        if not c:
            continue
        for k in range(j + 1):
            out[k] = out[k] + c * comb(j, k) * powers[j - k]
    return trim(out)


def monic(p: Poly) -> Poly:
    if not p:
        return p
    inv = p[-1].inverse() if hasattr(p[-1], "inverse") else 1 / p[-1]
    return tuple(c * inv for c in p)


def gcd(p: Poly, q: Poly) -> Poly:
    a, b = trim(p), trim(q)
    while b:
        _, r = divmod_poly(a, b)
        a, b = b, r
    return monic(a)


def order_at(p: Poly, x0) -> int:
    """Multiplicity of x0 as a root of p; raises for the zero polynomial."""
    if not p:
        raise ValueError("order of the zero polynomial is infinite")
    k = 0
    lin = (-exact(x0), ONE)
    while True:
        quot = exact_div(p, lin)
        if quot is None:
            return k
        p = quot
        k += 1


def from_roots(roots: Sequence) -> Poly:
    p: Poly = (ONE,)
    for r in roots:
        p = mul(p, (-exact(r), ONE))
    return p


def truncated_mul(p: Sequence, q: Sequence, n: int) -> list:
    """First n coefficients of the product of two power series."""
    out = [ZERO] * n
    for i, a in enumerate(p[:n]):
        if not a:
            continue
        for j in range(min(len(q), n - i)):
            b = q[j]
            if b:
                out[i + j] = out[i + j] + a * b
    return out


def series_sqrt_one_plus(w: Sequence, n: int) -> list:
    """First n coefficients of sqrt(1 + w(t)) where w(0) = 0."""
    w = list(w) + [ZERO] * max(0, n - len(w))
    s = [ONE] + [ZERO] * (n - 1)
    for k in range(1, n):
        acc = w[k]
        for i in range(1, k):
            if s[i] and s[k - i]:
                acc = acc - s[i] * s[k - i]
        s[k] = acc / 2
    return s
