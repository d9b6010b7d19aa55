"""Laurent polynomials A[X, X^-1], the localization S^-1 A[X, X^-1], and
truncated Laurent series with a stabilization watermark.

S is the multiplicative set of Laurent polynomials whose leading and
trailing coefficients are units of the base ring; it is where every
denominator in this package lives.

Canonical form of a fraction: the denominator has trailing exponent 0 and
trailing coefficient 1 (always possible, the trailing coefficient is a
unit); over a field base the gcd of numerator and denominator is divided
out, over other bases equality falls back to cross-multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class LaurentPoly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms: dict):
        clean = {}
        for e, c in terms.items():
            if not ring.is_zero(c):
                clean[e] = c
        self.ring = ring
        self.terms = clean

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, ring):
        return cls(ring, {})

    @classmethod
    def constant(cls, ring, c):
        return cls(ring, {0: c})

    @classmethod
    def monomial(cls, ring, c, e: int):
        return cls(ring, {e: c})

    @classmethod
    def gen(cls, ring):
        return cls(ring, {1: ring.one})

    # -- structure ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def deg_min(self) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has no degree")
        return min(self.terms)

    @property
    def deg_max(self) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has no degree")
        return max(self.terms)

    def coeff(self, e: int):
        return self.terms.get(e, self.ring.zero)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    # -- arithmetic ----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.ring != self.ring:
                raise ValueError("mixed base rings")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(self.ring, self.ring.from_rational(other))
        return LaurentPoly.constant(self.ring, other)

    def __add__(self, other):
        o = self._coerce(other)
        terms = dict(self.terms)
        for e, c in o.terms.items():
            if e in terms:
                terms[e] = terms[e] + c
            else:
                terms[e] = c
        return LaurentPoly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = e1 + e2
                prod = c1 * c2
                if e in out:
                    out[e] = out[e] + prod
                else:
                    out[e] = prod
        return LaurentPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("use LocFraction for negative powers")
        out = LaurentPoly.constant(self.ring, self.ring.one)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, c) -> "LaurentPoly":
        return LaurentPoly(self.ring, {e: c * v for e, v in self.terms.items()})

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly(self.ring, {e + k: v for e, v in self.terms.items()})

    def subst_monomial(self, coeff, k: int) -> "LaurentPoly":
        """X -> coeff * X^k (coeff a unit when negative exponents occur)."""
        out: dict = {}
        for e, c in self.terms.items():
            v = c * _elem_pow(self.ring, coeff, e)
            key = k * e
            if key in out:
                out[key] = out[key] + v
            else:
                out[key] = v
        return LaurentPoly(self.ring, out)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash((id(self.ring), tuple(sorted(self.terms.items(), key=lambda t: t[0]))))

    def __repr__(self):
        bits = [f"({c!r})X^{e}" for e, c in sorted(self.terms.items())]
        return " + ".join(bits) or "0"


def _elem_pow(ring, x, n: int):
    if n < 0:
        return _elem_pow(ring, ring.inv(x), -n)
    out = ring.one
    b = x
    while n:
        if n & 1:
            out = out * b
        b = b * b
        n >>= 1
    return out


def s_membership(p: LaurentPoly) -> bool:
    """True iff p != 0 and both extreme coefficients are units of the base."""
    if p.is_zero():
        return False
    r = p.ring
    return r.is_unit(p.terms[p.deg_min]) and r.is_unit(p.terms[p.deg_max])


# ---------------------------------------------------------------------------


class LocFraction:
    """num / den with den in S, kept in canonical form."""

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly | None = None, _reduced=False):
        ring = num.ring
        if den is None:
            den = LaurentPoly.constant(ring, ring.one)
        if den.ring != ring:
            raise ValueError("numerator and denominator over different rings")
        if not s_membership(den):
            raise ValueError("denominator not in S (extreme coefficients must be units)")
        if not _reduced:
            num, den = _canonicalize(num, den)
        self.num = num
        self.den = den

    @property
    def ring(self):
        return self.num.ring

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "LocFraction":
        return cls(p)

    @classmethod
    def zero(cls, ring) -> "LocFraction":
        return cls(LaurentPoly.zero(ring))

    @classmethod
    def one(cls, ring) -> "LocFraction":
        return cls(LaurentPoly.constant(ring, ring.one))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def den_is_one(self) -> bool:
        return self.den.terms == {0: self.ring.one}

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LocFraction):
            return other
        if isinstance(other, LaurentPoly):
            return LocFraction(other)
        return LocFraction(LaurentPoly.constant(self.ring, self.ring.from_rational(other))
                           if isinstance(other, (int, Fraction))
                           else LaurentPoly.constant(self.ring, other))

    def __add__(self, other):
        o = self._coerce(other)
        if self.den.terms == o.den.terms:
            return LocFraction(self.num + o.num, self.den)
        return LocFraction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return LocFraction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        return LocFraction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "LocFraction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero fraction")
        if s_membership(self.num):
            return LocFraction(self.den, self.num)
        comps = _decompose_universal(self)
        if comps is None:
            raise ZeroDivisionError("numerator not in S; fraction not invertible here")
        return _recombine_universal(self.ring, [f.inverse() for f in comps])

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = LocFraction.one(self.ring)
        b = self
        while n:
            if n & 1:
                out = out * b
            b = b * b
            n >>= 1
        return out

    def subst_monomial(self, coeff, k: int) -> "LocFraction":
        """X -> coeff * X^k on numerator and denominator (coeff a unit)."""
        return LocFraction(self.num.subst_monomial(coeff, k), self.den.subst_monomial(coeff, k))

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den.terms == o.den.terms:
            return self.num.terms == o.num.terms
        return (self.num * o.den).terms == (o.num * self.den).terms

    def __hash__(self):
        raise TypeError("LocFraction not hashable (cross-multiplied equality)")

    def __repr__(self):
        if self.den_is_one():
            return f"({self.num!r})"
        return f"({self.num!r}) / ({self.den!r})"

    def is_loc_unit(self) -> bool:
        """num and den both in S, checked per U-component over universal bases."""
        if self.is_zero():
            return False
        if s_membership(self.num) and s_membership(self.den):
            return True
        comps = _decompose_universal(self)
        if comps is None:
            return False
        return all(s_membership(f.num) and s_membership(f.den) for f in comps)

    # -- series ------------------------------------------------------------
    def series_coefficients(self, lo: int, hi: int) -> dict[int, object]:
        """Exact coefficients of the Laurent-series expansion on [lo, hi].

        The expansion is in ascending powers of X; the denominator has
        trailing term 1*X^0 by canonical form, so 1/den is an honest power
        series.
        """
        ring = self.ring
        if self.is_zero():
            return {e: ring.zero for e in range(lo, hi + 1)}
        dmin = self.num.deg_min
        depth = hi - dmin
        if depth < 0:
            return {e: ring.zero for e in range(lo, hi + 1)}
        # invert den = 1 + b_1 X + ... as a power series to order `depth`
        inv = [ring.one]
        for k in range(1, depth + 1):
            acc = ring.zero
            for j in range(1, k + 1):
                bj = self.den.terms.get(j)
                if bj is not None:
                    acc = acc + bj * inv[k - j]
            inv.append(-acc)
        out = {}
        for e in range(lo, hi + 1):
            acc = ring.zero
            for ne, nc in self.num.terms.items():
                k = e - ne
                if 0 <= k <= depth:
                    acc = acc + nc * inv[k]
            out[e] = acc
        return out


def loc_reduce(f: LocFraction) -> LocFraction:
    """Return the canonical representative (constructor already canonicalizes;
    provided as the named operation and as an idempotence hook)."""
    return LocFraction(f.num, f.den)


def _canonicalize(num: LaurentPoly, den: LaurentPoly):
    ring = num.ring
    # strip the monomial X^t from den so its trailing exponent is 0
    t = den.deg_min
    if t:
        den = den.shift(-t)
        num = num.shift(-t)
    if num.is_zero():
        return LaurentPoly.zero(ring), LaurentPoly.constant(ring, ring.one)
    if getattr(ring, "is_field", False) and not den.is_monomial():
        num, den = _divide_out_gcd(num, den)
        t = den.deg_min
        if t:
            den = den.shift(-t)
            num = num.shift(-t)
    # make the trailing coefficient of den equal to 1
    tc = den.terms[den.deg_min]
    if tc != ring.one:
        c = ring.inv(tc)
        num = num.scale(c)
        den = den.scale(c)
    if den.is_monomial():
        # den is now exactly 1; fold any residual X-power into num (none left)
        den = LaurentPoly.constant(ring, ring.one)
    return num, den


def _divide_out_gcd(num: LaurentPoly, den: LaurentPoly):
    ring = num.ring
    a = _to_list(num)
    b = _to_list(den)
    g = _poly_gcd(a, b, ring)
    if len(g) > 1:
        a = _poly_exact_div(a, g, ring)
        b = _poly_exact_div(b, g, ring)
    return (
        LaurentPoly(ring, {num.deg_min + i: c for i, c in enumerate(a) if not ring.is_zero(c)}),
        LaurentPoly(ring, {den.deg_min + i: c for i, c in enumerate(b) if not ring.is_zero(c)}),
    )


def _to_list(p: LaurentPoly):
    lo, hi = p.deg_min, p.deg_max
    out = [p.ring.zero] * (hi - lo + 1)
    for e, c in p.terms.items():
        out[e - lo] = c
    return out


def _trim(a, ring):
    while a and ring.is_zero(a[-1]):
        a.pop()
    return a


def _poly_gcd(a, b, ring):
    a, b = _trim(a[:], ring), _trim(b[:], ring)
    while b:
        a = _poly_mod(a, b, ring)
        a, b = b, a
    # monic normalization
    if a:
        c = ring.inv(a[-1])
        a = [c * x for x in a]
    return a or [ring.one]


def _poly_mod(a, b, ring):
    a = a[:]
    inv_lead = ring.inv(b[-1])
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] * inv_lead
        if not ring.is_zero(c):
            for j, bj in enumerate(b):
                a[k + j] = a[k + j] - c * bj
    return _trim(a[: len(b) - 1], ring)


def _poly_exact_div(a, b, ring):
    a = a[:]
    out = [ring.zero] * (len(a) - len(b) + 1)
    inv_lead = ring.inv(b[-1])
    for k in range(len(out) - 1, -1, -1):
        c = a[k + len(b) - 1] * inv_lead
        out[k] = c
        if not ring.is_zero(c):
            for j, bj in enumerate(b):
                a[k + j] = a[k + j] - c * bj
    assert all(ring.is_zero(x) for x in a), "non-exact polynomial division"
    return _trim(out, ring)


def loc_sum(items) -> LocFraction:
    """Sum of fractions, grouping equal denominators to limit gcd churn."""
    items = list(items)
    if not items:
        raise ValueError("empty sum has no ring")
    ring = items[0].ring
    groups: dict = {}
    for f in items:
        key = tuple(sorted(f.den.terms.items(), key=lambda t: t[0]))
        if key in groups:
            groups[key] = (groups[key][0] + f.num, f.den)
        else:
            groups[key] = (f.num, f.den)
    total = LocFraction.zero(ring)
    for num, den in groups.values():
        total = total + LocFraction(num, den)
    return total


def _decompose_universal(f: LocFraction):
    """Split a fraction over UniversalTwistRing(N, d>1) into its d U-components,
    each over UniversalTwistRing(N, 1).  Returns None for other rings."""
    from .rings import UniversalTwistRing, UTElement

    ring = f.ring
    if not isinstance(ring, UniversalTwistRing) or ring.finite_order == 1:
        return None
    sub = UniversalTwistRing(ring.cyclo_order, 1, ring.q)

    def split(p: LaurentPoly) -> list[LaurentPoly]:
        comps = [dict() for _ in range(ring.finite_order)]
        for e, c in p.terms.items():
            for j, comp in enumerate(ring.u_components(c)):
                if comp:
                    comps[j][e] = UTElement(sub, {(t, 0): v for t, v in comp.items()})
        return [LaurentPoly(sub, terms) for terms in comps]

    nums = split(f.num)
    dens = split(f.den)
    return [LocFraction(n, d) for n, d in zip(nums, dens)]


def _recombine_universal(ring, comps: list[LocFraction]) -> LocFraction:
    """Reassemble component fractions over UniversalTwistRing(N,1) into one
    fraction over `ring`, with denominator the plain product of component
    denominators (which keeps its extremes units)."""
    from .rings import UTElement

    d = ring.finite_order

    def lift(p: LaurentPoly, idem_j: int | None) -> LaurentPoly:
        terms = {}
        for e, c in p.terms.items():
            # c is a UTElement over the d=1 subring: dict (t,0) -> CycNumber
            acc = ring.zero
            for (t, _u), s in c.terms.items():
                if idem_j is None:
                    acc = acc + UTElement(ring, {(t, 0): s})
                else:
                    inv_d = Fraction(1, d)
                    for k in range(d):
                        w = s * ring.scalars.root_of_unity(d, (-idem_j * k) % d) * inv_d
                        acc = acc + UTElement(ring, {(t, k): w})
            terms[e] = acc
        return LaurentPoly(ring, terms)

    den = LaurentPoly.constant(ring, ring.one)
    lifted_dens = [lift(c.den, None) for c in comps]
    for ld in lifted_dens:
        den = den * ld
    num = LaurentPoly.zero(ring)
    for j, c in enumerate(comps):
        part = lift(c.num, j)
        for k, ld in enumerate(lifted_dens):
            if k != j:
                part = part * ld
        num = num + part
    return LocFraction(num, den)


def geometric_tail_sum(c, r, k: int, v0: int, ring) -> LocFraction:
    """Closed form of sum_{v >= v0} c * r^(v - v0) * X^(k*v).

    Requires 1 - r X^k in S, which holds automatically when r is a unit or
    zero.  k may be any nonzero integer (negative k sums a tail of falling
    exponents); k = 0 is allowed only when 1 - r is a unit.
    """
    mono = LaurentPoly.monomial(ring, c, k * v0)
    if ring.is_zero(r):
        return LocFraction(mono)
    one_poly = LaurentPoly.constant(ring, ring.one)
    den = one_poly - LaurentPoly.monomial(ring, r, k)
    if not s_membership(den):
        raise ValueError("tail not summable in S-localization")
    return LocFraction(mono, den)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TruncSeries:
    """Finite window of a Laurent series, zero below `floor`, with the
    largest certified-stable exponent recorded in `trusted_upto`."""

    ring: object
    floor: int
    coeffs: tuple
    trusted_upto: int

    @classmethod
    def from_poly(cls, p: LaurentPoly, floor: int, trusted_upto: int) -> "TruncSeries":
        coeffs = tuple(p.coeff(e) for e in range(floor, trusted_upto + 1))
        return cls(p.ring, floor, coeffs, trusted_upto)

    def coeff(self, e: int):
        if e < self.floor or e > self.trusted_upto:
            return self.ring.zero
        return self.coeffs[e - self.floor]


def series_match(f: LocFraction, s: TruncSeries) -> bool:
    """True iff the series expansion of f agrees with s on every exponent
    <= s.trusted_upto (exponents below s.floor must expand to zero)."""
    lo = s.floor
    if not f.is_zero():
        lo = min(lo, f.num.deg_min)
    expansion = f.series_coefficients(lo, s.trusted_upto)
    ring = f.ring
    for e in range(lo, s.trusted_upto + 1):
        want = s.coeff(e)
        got = expansion[e]
        if not ring.is_zero(got - want):
            return False
    return True
