"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored as coordinate vectors in the power basis
1, z, ..., z^(phi(N)-1) where z = zeta_N, reduced mod the N-th cyclotomic
polynomial.  All coordinates are fractions.Fraction, so arithmetic is exact.

The quadratic Gauss sum gives an explicit square root of p inside Q(zeta_p)
(p = 1 mod 4) or Q(zeta_{4p}) (p = 3 mod 4); `sqrt_of_prime` returns it.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .arith import euler_phi, factorize, legendre

_ZERO = Fraction(0)
_ONE = Fraction(1)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, ascending degree."""
    if n == 1:
        return (-1, 1)
    # x^n - 1 divided by prod of Phi_d for proper divisors d.
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _exact_div(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def _exact_div(num: list[int], den: list[int]) -> list[int]:
    num = num[:]
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1] // den[-1]
        out[k] = c
        for j, d in enumerate(den):
            num[k + j] -= c * d
    assert all(c == 0 for c in num), "non-exact cyclotomic division"
    return out


@lru_cache(maxsize=None)
def _reduction_table(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """x^(phi+k) mod Phi_n for k = 0 .. phi-2, as power-basis rows."""
    phi = euler_phi(n)
    poly = cyclotomic_polynomial(n)
    # x^phi = -(poly[0] + ... + poly[phi-1] x^{phi-1}) since Phi is monic
    rows: list[tuple[Fraction, ...]] = []
    cur = [Fraction(-c) for c in poly[:phi]]
    rows.append(tuple(cur))
    for _ in range(phi - 2):
        nxt = [_ZERO] + cur[:-1]
        top = cur[-1]
        if top:
            base = rows[0]
            nxt = [nxt[i] + top * base[i] for i in range(phi)]
        cur = nxt
        rows.append(tuple(cur))
    return tuple(rows)


@lru_cache(maxsize=None)
def _root_power_rows(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """zeta_n^e in the power basis for e = 0 .. n-1."""
    phi = euler_phi(n)
    rows = []
    for e in range(n):
        if e < phi:
            vec = [_ZERO] * phi
            vec[e] = _ONE
            rows.append(tuple(vec))
        else:
            break
    # extend by multiplying by zeta repeatedly with reduction
    red = _reduction_table(n) if phi > 1 else None
    cur = list(rows[-1])
    for _ in range(phi, n):
        nxt = [_ZERO] + cur[:-1]
        top = cur[-1]
        if top:
            base = red[0]
            nxt = [nxt[i] + top * base[i] for i in range(phi)]
        rows.append(tuple(nxt))
        cur = nxt
    if phi == 1:
        # n in {1, 2}: zeta = 1 or -1
        rows = [(_ONE,)] if n == 1 else [(_ONE,), (Fraction(-1),)]
    return tuple(rows)


class CycNumber:
    """An element of Q(zeta_N), immutable."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs) -> None:
        phi = euler_phi(order)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != phi:
            raise ValueError(f"need {phi} coordinates for Q(zeta_{order})")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("CycNumber is immutable")

    # -- constructors -------------------------------------------------
    @classmethod
    def from_rational(cls, order: int, q) -> "CycNumber":
        phi = euler_phi(order)
        return cls(order, (Fraction(q),) + (_ZERO,) * (phi - 1))

    @classmethod
    def zero(cls, order: int) -> "CycNumber":
        return cls.from_rational(order, 0)

    @classmethod
    def one(cls, order: int) -> "CycNumber":
        return cls.from_rational(order, 1)

    @classmethod
    def root_of_unity(cls, order: int, exponent: int) -> "CycNumber":
        """zeta_order ** exponent."""
        return cls(order, _root_power_rows(order)[exponent % order])

    @classmethod
    def from_root_powers(cls, order: int, counts: dict[int, Fraction]) -> "CycNumber":
        """sum over e of counts[e] * zeta_order^e, reduced once (bulk sums)."""
        phi = euler_phi(order)
        acc = [_ZERO] * phi
        rows = _root_power_rows(order)
        for e, c in counts.items():
            if not c:
                continue
            row = rows[e % order]
            c = Fraction(c)
            for i in range(phi):
                if row[i]:
                    acc[i] += c * row[i]
        return cls(order, acc)

    # -- predicates ----------------------------------------------------
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    # -- arithmetic ----------------------------------------------------
    def _check(self, other: "CycNumber") -> None:
        if self.order != other.order:
            raise ValueError("mixed cyclotomic orders; embed first")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycNumber.from_rational(self.order, other)
        if not isinstance(other, CycNumber):
            return NotImplemented
        self._check(other)
        return CycNumber(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycNumber(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycNumber.from_rational(self.order, other)
        if not isinstance(other, CycNumber):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycNumber(self.order, tuple(q * a for a in self.coeffs))
        if not isinstance(other, CycNumber):
            return NotImplemented
        self._check(other)
        phi = len(self.coeffs)
        a, b = self.coeffs, other.coeffs
        conv = [_ZERO] * (2 * phi - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if bj:
                    conv[i + j] += ai * bj
        if phi == 1:
            return CycNumber(self.order, (conv[0],))
        red = _reduction_table(self.order)
        out = conv[:phi]
        for k in range(phi, 2 * phi - 1):
            c = conv[k]
            if c:
                row = red[k - phi]
                for i in range(phi):
                    if row[i]:
                        out[i] += c * row[i]
        return CycNumber(self.order, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = CycNumber.one(self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "CycNumber":
        """Multiplicative inverse via extended Euclid mod Phi_N."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        if self.is_rational():
            return CycNumber.from_rational(self.order, 1 / self.coeffs[0])
        phi_poly = [Fraction(c) for c in cyclotomic_polynomial(self.order)]
        r0, r1 = phi_poly, list(self.coeffs)
        s0, s1 = [_ZERO], [_ONE]
        while True:
            while r1 and r1[-1] == 0:
                r1.pop()
            if len(r1) == 1:
                inv_c = 1 / r1[0]
                vec = [c * inv_c for c in s1]
                phi = euler_phi(self.order)
                vec = (vec + [_ZERO] * phi)[:phi]
                return CycNumber(self.order, vec)
            q, r = _poly_divmod(r0, r1)
            s = _poly_sub(s0, _poly_mul(q, s1))
            r0, r1 = r1, r
            s0, s1 = s1, s
            if not any(r1):
                raise ZeroDivisionError("zero divisor in cyclotomic inverse")

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * Fraction(1, 1) / CycNumber.from_rational(self.order, other)
        return self * other.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CycNumber):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    # -- Galois --------------------------------------------------------
    def galois(self, k: int) -> "CycNumber":
        """Image under zeta -> zeta^k, gcd(k, N) = 1."""
        from math import gcd

        if gcd(k, self.order) != 1:
            raise ValueError("k not coprime to the order")
        counts: dict[int, Fraction] = {}
        for e, c in enumerate(self.coeffs):
            if c:
                counts[e * k % self.order] = counts.get(e * k % self.order, _ZERO) + c
        return CycNumber.from_root_powers(self.order, counts)

    def conjugate(self) -> "CycNumber":
        """Complex conjugation zeta -> zeta^{-1}."""
        return self.galois(-1 % self.order)

    def embed(self, bigger_order: int) -> "CycNumber":
        """Embedding Q(zeta_N) -> Q(zeta_M) for N | M via zeta_N -> zeta_M^{M/N}."""
        if bigger_order % self.order != 0:
            raise ValueError("target order must be a multiple")
        if bigger_order == self.order:
            return self
        step = bigger_order // self.order
        counts: dict[int, Fraction] = {}
        for e, c in enumerate(self.coeffs):
            if c:
                counts[e * step % bigger_order] = c
        return CycNumber.from_root_powers(bigger_order, counts)

    def __repr__(self):
        parts = []
        for e, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}*z^{e}" if e else f"{c}")
        return f"Cyc({self.order}; {' + '.join(parts) or '0'})"


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = a[:]
    while b and b[-1] == 0:
        b = b[:-1]
    q = [_ZERO] * max(1, len(a) - len(b) + 1)
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / b[-1]
        q[k] = c
        for j, bj in enumerate(b):
            a[k + j] -= c * bj
    return q, a[: len(b) - 1] or [_ZERO]


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [_ZERO] * (n - len(a))
    b = b + [_ZERO] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


@lru_cache(maxsize=None)
def sqrt_of_prime(p: int, order: int) -> CycNumber:
    """An explicit square root of the odd prime p in Q(zeta_order).

    Uses the quadratic Gauss sum g = sum_t (t|p) zeta_p^t, which satisfies
    g^2 = (-1|p) p.  Requires p | order, and 4 | order when p = 3 mod 4.
    """
    if order % p != 0:
        raise ValueError(f"sqrt of {p} needs zeta_{p}; increase the cyclotomic order")
    step = order // p
    counts: dict[int, Fraction] = {}
    for t in range(1, p):
        counts[t * step % order] = Fraction(legendre(t, p))
    g = CycNumber.from_root_powers(order, counts)
    if p % 4 == 1:
        root = g
    else:
        if order % 4 != 0:
            raise ValueError(f"sqrt of {p} = 3 mod 4 needs zeta_4 as well")
        # g = i sqrt(p), so divide by i = zeta_4.
        i_unit = CycNumber.root_of_unity(order, order // 4)
        root = g * i_unit.inverse()
    sq = root * root
    assert sq.is_rational() and sq.rational_value() == p
    return root
