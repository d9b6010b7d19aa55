"""Small exact number-theory helpers shared across the package.

Everything here works on plain ints and fractions.Fraction; no floating
point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n > 0 as ((p, e), ...), ascending."""
    if n <= 0:
        raise ValueError("factorize expects a positive integer")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    r = 1
    for p, e in factorize(n):
        r *= (p - 1) * p ** (e - 1)
    return r


def val_p(x: Fraction | int, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise ZeroDivisionError("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def unit_part(x: Fraction | int, p: int) -> Fraction:
    """x / p^{val_p(x)}, a p-adic unit."""
    x = Fraction(x)
    return x / Fraction(p) ** val_p(x, p)


def unit_residue(x: Fraction | int, p: int, e: int) -> int:
    """The p-adic unit part of x reduced mod p^e (x need not be a unit)."""
    u = unit_part(x, p)
    m = p**e
    den_inv = pow(u.denominator % m, -1, m)
    return (u.numerator % m) * den_inv % m


def residue_mod(x: Fraction | int, p: int, e: int) -> int:
    """x mod p^e for x with nonnegative valuation."""
    x = Fraction(x)
    m = p**e
    if x.denominator % p == 0:
        raise ValueError(f"{x} is not p-integral at p={p}")
    return (x.numerator % m) * pow(x.denominator % m, -1, m) % m


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for odd prime p; 0 on multiples of p."""
    a %= p
    if a == 0:
        return 0
    s = pow(a, (p - 1) // 2, p)
    return 1 if s == 1 else -1


@lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    """Least positive quadratic nonresidue mod an odd prime."""
    for a in range(2, p):
        if legendre(a, p) == -1:
            return a
    raise ValueError(f"no nonresidue found for p={p}")


@lru_cache(maxsize=None)
def primitive_root_mod_p_power(p: int, e: int) -> int:
    """Generator of the cyclic group (Z/p^e)^x, p odd."""
    if p == 2:
        raise ValueError("(Z/2^e)^x is not cyclic for e >= 3")
    order = p - 1
    g = None
    for cand in range(2, p):
        ok = all(pow(cand, order // q, p) != 1 for q, _ in factorize(order))
        if ok:
            g = cand
            break
    if g is None:
        raise ValueError(f"no primitive root mod {p}")
    if e == 1:
        return g
    # g lifts to a generator mod p^e unless g^(p-1) = 1 mod p^2.
    if pow(g, p - 1, p * p) == 1:
        g += p
    return g


def discrete_log_unit(u: int, p: int, e: int) -> int:
    """Log of the unit u base the canonical generator of (Z/p^e)^x.

    Brute force; the groups in play are tiny (order (p-1)p^{e-1}).
    """
    g = primitive_root_mod_p_power(p, e)
    m = p**e
    order = (p - 1) * p ** (e - 1)
    u %= m
    if u % p == 0:
        raise ValueError("not a unit")
    acc = 1
    for k in range(order):
        if acc == u:
            return k
        acc = acc * g % m
    raise ValueError("discrete log not found (corrupt input)")


def lcm(*ns: int) -> int:
    r = 1
    for n in ns:
        r = r * n // gcd(r, n)
    return r


def sqrt_rational_exact(r: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    if r < 0:
        return None
    ns = _isqrt_exact(r.numerator)
    ds = _isqrt_exact(r.denominator)
    if ns is None or ds is None:
        return None
    return Fraction(ns, ds)


def _isqrt_exact(n: int) -> int | None:
    from math import isqrt

    s = isqrt(n)
    return s if s * s == n else None
