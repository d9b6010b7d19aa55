"""Coefficient rings for local constants.

Three kinds are supported at desk scale:

* ``CycField(N, p)``        -- the cyclotomic field Q(zeta_N); when the run
  needs delta_P^{1/2} the square root of the residue cardinality q is
  represented by an explicit element (p itself is rational for q = p^2,
  a quadratic Gauss sum otherwise), so the scalars stay a field.
* ``FiniteField(ell, r)``   -- F_{ell^r} with ell != p, used as a
  specialization target when the needed roots of unity exist there.
* ``UniversalTwistRing``    -- Q(zeta_N)[T, T^{-1}][U]/(U^d - 1), the
  desk-scale group algebra of F^x / O^{x,e} carrying the tautological
  character (T = image of the uniformizer, U = image of a unit generator).

All rings expose the same small surface: ``zero``, ``one``,
``from_rational``, ``is_zero``, ``is_unit``, ``inv``, ``root_of_unity``,
``sqrt_q`` and element arithmetic through operators.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .arith import factorize, is_prime, sqrt_rational_exact
from .cyclotomic import CycNumber, sqrt_of_prime


class CycField:
    """Q(zeta_N), optionally aware of a residue cardinality q for sqrt_q."""

    is_field = True
    kind = "cyclotomic"

    def __init__(self, order: int, q: int | None = None):
        self.order = order
        self.q = q
        self.zero = CycNumber.zero(order)
        self.one = CycNumber.one(order)

    def __eq__(self, other):
        return isinstance(other, CycField) and (self.order, self.q) == (other.order, other.q)

    def __hash__(self):
        return hash(("cyc", self.order, self.q))

    def __repr__(self):
        return f"CycField({self.order}, q={self.q})"

    def from_rational(self, x) -> CycNumber:
        return CycNumber.from_rational(self.order, Fraction(x))

    from_int = from_rational

    def coerce(self, x):
        if isinstance(x, CycNumber):
            return x.embed(self.order) if x.order != self.order else x
        return self.from_rational(x)

    def is_zero(self, x: CycNumber) -> bool:
        return x.is_zero()

    def is_unit(self, x: CycNumber) -> bool:
        return not x.is_zero()

    def inv(self, x: CycNumber) -> CycNumber:
        return x.inverse()

    def root_of_unity(self, order: int, power: int = 1) -> CycNumber:
        if self.order % order != 0:
            raise ValueError(f"zeta_{order} not available in Q(zeta_{self.order})")
        return CycNumber.root_of_unity(self.order, (self.order // order) * power)

    def canonical_zeta(self) -> CycNumber:
        return CycNumber.root_of_unity(self.order, 1)

    def sqrt_q(self) -> CycNumber:
        if self.q is None:
            raise ValueError("ring carries no residue cardinality")
        r = sqrt_rational_exact(Fraction(self.q))
        if r is not None:
            return self.from_rational(r)
        fac = factorize(self.q)
        if len(fac) == 1 and fac[0][1] % 2 == 1:
            p = fac[0][0]
            even = self.from_rational(Fraction(p) ** (fac[0][1] // 2))
            return even * sqrt_of_prime(p, self.order)
        raise ValueError(f"no exact square root of {self.q} available")

    def describe(self) -> dict:
        return {"kind": "cyclotomic", "N": self.order, "q": self.q}


# ---------------------------------------------------------------------------


class FFElement:
    """Element of F_{ell^r}, a polynomial mod (ell, modulus)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: "FiniteField", coeffs):
        self.field = field
        c = [x % field.ell for x in coeffs]
        c = (c + [0] * field.r)[: field.r]
        self.coeffs = tuple(c)

    def _lift(self, other):
        if isinstance(other, FFElement):
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return FFElement(self.field, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return FFElement(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        f = self.field
        conv = [0] * (2 * f.r - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        conv[i + j] = (conv[i + j] + a * b) % f.ell
        return FFElement(f, f._reduce(conv))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.field.inv(self) ** (-n)
        out = self.field.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.from_int(other)
        return isinstance(other, FFElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("ff", self.field.ell, self.field.r, self.coeffs))

    def __repr__(self):
        return f"FF({self.field.ell}^{self.field.r}; {list(self.coeffs)})"


class FiniteField:
    is_field = True
    kind = "finite-field"

    def __init__(self, ell: int, r: int = 1, q: int | None = None):
        if not is_prime(ell):
            raise ValueError("characteristic must be prime")
        self.ell = ell
        self.r = r
        self.q = q  # residue cardinality of the local field, if relevant
        self.modulus = _find_irreducible(ell, r)
        self.zero = FFElement(self, [0])
        self.one = FFElement(self, [1])
        self.card = ell**r

    def _reduce(self, conv: list[int]) -> list[int]:
        # reduce a coefficient list mod the monic modulus
        conv = conv[:]
        for k in range(len(conv) - 1, self.r - 1, -1):
            c = conv[k]
            if c:
                for j in range(self.r):
                    conv[k - self.r + j] = (conv[k - self.r + j] - c * self.modulus[j]) % self.ell
                conv[k] = 0
        return conv[: self.r]

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.ell, self.r) == (other.ell, other.r)

    def __hash__(self):
        return hash(("ff", self.ell, self.r))

    def __repr__(self):
        return f"FiniteField({self.ell}^{self.r})"

    def from_int(self, n: int) -> FFElement:
        return FFElement(self, [n])

    def from_rational(self, x) -> FFElement:
        x = Fraction(x)
        if x.denominator % self.ell == 0:
            raise ZeroDivisionError(f"{x} has no image in characteristic {self.ell}")
        return self.from_int(x.numerator) * self.inv(self.from_int(x.denominator))

    def is_zero(self, x: FFElement) -> bool:
        return all(c == 0 for c in x.coeffs)

    def is_unit(self, x: FFElement) -> bool:
        return not self.is_zero(x)

    def inv(self, x: FFElement) -> FFElement:
        if self.is_zero(x):
            raise ZeroDivisionError("inverse of zero")
        return x ** (self.card - 2)

    @property
    def _generator(self) -> FFElement:
        if not hasattr(self, "_gen_cache"):
            order = self.card - 1
            primes = [p for p, _ in factorize(order)] if order > 1 else []
            for trial in _ff_iter(self):
                if self.is_zero(trial):
                    continue
                if all((trial ** (order // p)) != self.one for p in primes):
                    self._gen_cache = trial
                    break
        return self._gen_cache

    def root_of_unity(self, order: int, power: int = 1) -> FFElement:
        if (self.card - 1) % order != 0:
            raise ValueError(
                f"F_{self.ell}^{self.r} has no elements of order {order} "
                f"({order} does not divide {self.card - 1})"
            )
        return self._generator ** (((self.card - 1) // order) * power)

    def canonical_zeta(self) -> FFElement:
        return self._generator

    def sqrt_q(self) -> FFElement:
        if self.q is None:
            raise ValueError("ring carries no residue cardinality")
        # brute-force square root of q in a small field
        target = self.from_rational(self.q)
        for x in _ff_iter(self):
            if x * x == target:
                return x
        raise ValueError(f"{self.q} is not a square in F_{self.ell}^{self.r}")

    def describe(self) -> dict:
        return {"kind": "finite-field", "ell": self.ell, "r": self.r, "q": self.q}


def _ff_iter(f: FiniteField):
    import itertools

    for coeffs in itertools.product(range(f.ell), repeat=f.r):
        yield FFElement(f, list(coeffs))


@lru_cache(maxsize=None)
def _find_irreducible(ell: int, r: int) -> tuple[int, ...]:
    """Monic irreducible of degree r over F_ell, as low coefficients c_0..c_{r-1}."""
    if r == 1:
        return (0,)
    import itertools

    for tail in itertools.product(range(ell), repeat=r):
        coeffs = list(tail)
        if _is_irreducible(coeffs, ell, r):
            return tuple(coeffs)
    raise RuntimeError("unreachable: irreducible polynomials exist in every degree")


def _is_irreducible(low: list[int], ell: int, r: int) -> bool:
    # f = x^r + sum low[i] x^i; check x^(ell^r) = x and x^(ell^(r/t)) != x
    def powmod_frobenius(k: int) -> list[int]:
        # compute x^(ell^k) mod f by repeated exponentiation
        cur = [0, 1] + [0] * (r - 2) if r >= 2 else [0]
        for _ in range(k):
            cur = _polypow_mod(cur, ell, low, ell, r)
        return cur

    x_poly = [0, 1] + [0] * (r - 2) if r >= 2 else [0]
    if powmod_frobenius(r) != x_poly:
        return False
    for t, _ in factorize(r):
        if powmod_frobenius(r // t) == x_poly:
            return False
    return True


def _polypow_mod(base: list[int], n: int, low: list[int], ell: int, r: int) -> list[int]:
    def mul(a, b):
        conv = [0] * (2 * r - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] = (conv[i + j] + ai * bj) % ell
        for k in range(2 * r - 2, r - 1, -1):
            c = conv[k]
            if c:
                for j in range(r):
                    conv[k - r + j] = (conv[k - r + j] - c * low[j]) % ell
                conv[k] = 0
        return conv[:r]

    out = [1] + [0] * (r - 1)
    b = base[:]
    while n:
        if n & 1:
            out = mul(out, b)
        b = mul(b, b)
        n >>= 1
    return out


# ---------------------------------------------------------------------------


class UTElement:
    """Element of Q(zeta_N)[T, T^{-1}][U]/(U^d - 1).

    terms maps (t_exp, u_exp mod d) to a nonzero CycNumber.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: "UniversalTwistRing", terms: dict):
        clean = {}
        for (t, u), c in terms.items():
            if not c.is_zero():
                key = (t, u % ring.finite_order)
                if key in clean:
                    s = clean[key] + c
                    if s.is_zero():
                        del clean[key]
                    else:
                        clean[key] = s
                else:
                    clean[key] = c
        self.ring = ring
        self.terms = clean

    def _lift(self, other):
        if isinstance(other, UTElement):
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.from_rational(other)
        if isinstance(other, CycNumber):
            return self.ring.from_scalar(other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for k, c in o.terms.items():
            if k in terms:
                s = terms[k] + c
                if s.is_zero():
                    del terms[k]
                else:
                    terms[k] = s
            else:
                terms[k] = c
        return UTElement(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return UTElement(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        out: dict = {}
        d = self.ring.finite_order
        for (t1, u1), c1 in self.terms.items():
            for (t2, u2), c2 in o.terms.items():
                k = (t1 + t2, (u1 + u2) % d)
                prod = c1 * c2
                if k in out:
                    out[k] = out[k] + prod
                else:
                    out[k] = prod
        return UTElement(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.ring.inv(self) ** (-n)
        out = self.ring.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(("ut", tuple(sorted((k, v) for k, v in self.terms.items()))))

    def __repr__(self):
        bits = []
        for (t, u), c in sorted(self.terms.items()):
            bits.append(f"({c!r})*T^{t}*U^{u}")
        return " + ".join(bits) or "0"


class UniversalTwistRing:
    """Desk-scale universal character ring: Q(zeta_N)-Laurent in T, cyclic U."""

    is_field = False
    kind = "universal-twist-ring"

    def __init__(self, cyclo_order: int, finite_order: int, q: int | None = None):
        if finite_order < 1:
            raise ValueError("finite part must have order >= 1")
        if cyclo_order % finite_order != 0:
            raise ValueError("need zeta_d inside Q(zeta_N): d must divide N")
        self.cyclo_order = cyclo_order
        self.finite_order = finite_order
        self.q = q
        self.scalars = CycField(cyclo_order, q)
        self.zero = UTElement(self, {})
        self.one = UTElement(self, {(0, 0): self.scalars.one})

    def __eq__(self, other):
        return isinstance(other, UniversalTwistRing) and (
            self.cyclo_order,
            self.finite_order,
            self.q,
        ) == (other.cyclo_order, other.finite_order, other.q)

    def __hash__(self):
        return hash(("ut", self.cyclo_order, self.finite_order, self.q))

    def __repr__(self):
        return f"UniversalTwistRing(N={self.cyclo_order}, d={self.finite_order}, q={self.q})"

    # -- constructors ---------------------------------------------------
    def from_scalar(self, c: CycNumber) -> UTElement:
        return UTElement(self, {(0, 0): c.embed(self.cyclo_order)})

    def from_rational(self, x) -> UTElement:
        return self.from_scalar(CycNumber.from_rational(self.cyclo_order, Fraction(x)))

    from_int = from_rational

    def gen_T(self, power: int = 1) -> UTElement:
        return UTElement(self, {(power, 0): self.scalars.one})

    def gen_U(self, power: int = 1) -> UTElement:
        return UTElement(self, {(0, power): self.scalars.one})

    def root_of_unity(self, order: int, power: int = 1) -> UTElement:
        return self.from_scalar(self.scalars.root_of_unity(order, power))

    def canonical_zeta(self) -> UTElement:
        return self.from_scalar(self.scalars.canonical_zeta())

    def sqrt_q(self) -> UTElement:
        return self.from_scalar(self.scalars.sqrt_q())

    # -- structure ------------------------------------------------------
    def is_zero(self, x: UTElement) -> bool:
        return not x.terms

    def u_components(self, x: UTElement) -> list[dict[int, CycNumber]]:
        """Specialize U -> zeta_d^j for j = 0..d-1; each is a T-Laurent poly."""
        d = self.finite_order
        out = []
        for j in range(d):
            comp: dict[int, CycNumber] = {}
            for (t, u), c in x.terms.items():
                w = c * self.scalars.root_of_unity(d, u * j)
                if t in comp:
                    comp[t] = comp[t] + w
                else:
                    comp[t] = w
            out.append({t: c for t, c in comp.items() if not c.is_zero()})
        return out

    def combine_components(self, comps: list[dict[int, CycNumber]]) -> UTElement:
        """Inverse of u_components via the idempotents of U."""
        d = self.finite_order
        terms: dict = {}
        inv_d = Fraction(1, d)
        for j, comp in enumerate(comps):
            for t, c in comp.items():
                for k in range(d):
                    w = c * self.scalars.root_of_unity(d, (-j * k) % d) * inv_d
                    key = (t, k)
                    if key in terms:
                        terms[key] = terms[key] + w
                    else:
                        terms[key] = w
        return UTElement(self, terms)

    def is_unit(self, x: UTElement) -> bool:
        # unit iff every U-specialization is a nonzero T-monomial with
        # nonzero (hence invertible) field coefficient
        for comp in self.u_components(x):
            if len(comp) != 1:
                return False
        return True

    def inv(self, x: UTElement) -> UTElement:
        comps = self.u_components(x)
        inv_comps = []
        for comp in comps:
            if len(comp) != 1:
                raise ZeroDivisionError("not a unit in the universal twist ring")
            (t, c), = comp.items()
            inv_comps.append({-t: c.inverse()})
        return self.combine_components(inv_comps)

    def describe(self) -> dict:
        return {
            "kind": "universal",
            "N": self.cyclo_order,
            "d": self.finite_order,
            "q": self.q,
        }
