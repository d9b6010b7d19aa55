"""Exact p-adic bookkeeping over F = Q_p and its quadratic extensions.

Group elements are plain rationals; every integrand in the package depends
only on finite-level data (valuations and unit residues mod p^e), which is
extracted exactly.  Characters are stored by generator images on the cyclic
group O^x/(1 + p^e O) plus a value at the uniformizer.

Haar normalization: mu(1 + pO) = 1 multiplicatively and mu(O) = 1
additively, so every coset volume below the top level is a power of p and
hence a unit in every coefficient ring; the factor q - 1 appears only for
vol(O^x) itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import (
    discrete_log_unit,
    is_prime,
    legendre,
    primitive_root_mod_p_power,
    residue_mod,
    smallest_nonresidue,
    unit_part,
    unit_residue,
    val_p,
)
from .laurent import LaurentPoly


@dataclass(frozen=True)
class LocalFieldDesc:
    """F = Q_p, or a quadratic extension E/F described by its type.

    ext: 'trivial' (E = F), 'unramified' (E = F(sqrt(u0)), u0 the least
    nonresidue), or 'ramified' (E = F(sqrt(d*p)), d in {1, u0}).
    """

    p: int
    ext: str = "trivial"
    d: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.ext not in ("trivial", "unramified", "ramified"):
            raise ValueError(f"unknown extension type {self.ext!r}")
        if self.ext != "trivial":
            if self.p == 2:
                raise ValueError("quadratic extensions implemented for odd p only")
            if self.ext == "ramified" and self.d not in (1, smallest_nonresidue(self.p)):
                raise ValueError("ramified d must be 1 or the least nonresidue")

    @property
    def q(self) -> int:
        """Residue cardinality of E."""
        return self.p * self.p if self.ext == "unramified" else self.p

    @property
    def e_ram(self) -> int:
        return 2 if self.ext == "ramified" else 1

    @property
    def ext_D(self) -> Fraction:
        """E = F(sqrt(ext_D)); errors on trivial extensions."""
        if self.ext == "unramified":
            return Fraction(smallest_nonresidue(self.p))
        if self.ext == "ramified":
            return Fraction(self.d * self.p)
        raise ValueError("no quadratic extension")

    @property
    def disc_class(self) -> Fraction:
        return self.ext_D


def val_and_unit(x, field: LocalFieldDesc, e: int) -> tuple[int, int]:
    """x = p^v * u with u a unit; returns (v, u mod p^e)."""
    x = Fraction(x)
    if x == 0:
        raise ZeroDivisionError("valuation of zero")
    p = field.p
    return val_p(x, p), unit_residue(x, p, e)


class MeasureSpec:
    """Ring-valued Haar volumes under the package normalization."""

    def __init__(self, field: LocalFieldDesc):
        self.field = field

    def unit_coset_volume(self, e: int) -> Fraction:
        """vol of a coset of 1 + p^e O inside F^x (e >= 1)."""
        return Fraction(1, self.field.p ** (e - 1))

    def units_volume(self) -> int:
        return self.field.p - 1

    def additive_ball_volume(self, v: int) -> Fraction:
        """vol of p^v O under mu(O) = 1."""
        return Fraction(1, self.field.p) ** v

    def additive_coset_volume(self, v: int, level: int) -> Fraction:
        """vol of p^v u (1 + p^level O) as an additive coset."""
        return Fraction(1, self.field.p) ** (v + level)


def enumerate_unit_cosets(field: LocalFieldDesc, e: int) -> list[tuple[int, Fraction]]:
    """Representatives of O^x/(1 + p^e O) with their multiplicative volumes."""
    if e < 1:
        raise ValueError("coset level must be >= 1")
    if field.ext != "trivial":
        raise ValueError("coset enumeration is for the base field")
    p = field.p
    vol = MeasureSpec(field).unit_coset_volume(e)
    return [(u, vol) for u in range(1, p**e) if u % p != 0]


# ---------------------------------------------------------------------------
# multiplicative characters


class MultChar:
    """Smooth character of F^x valued in a coefficient ring's units.

    Stored at level e: trivial on 1 + p^e O, with the image of the canonical
    generator of (Z/p^e)^x and a value at the uniformizer p.
    """

    def __init__(self, field: LocalFieldDesc, ring, conductor_exp: int,
                 unit_gen_image=None, at_uniformizer=None, check: bool = True):
        if field.ext != "trivial":
            raise ValueError("MultChar is a character of the base field F^x")
        self.field = field
        self.ring = ring
        self.conductor_exp = conductor_exp
        self.at_uniformizer = ring.one if at_uniformizer is None else at_uniformizer
        if conductor_exp == 0:
            self.unit_gen_image = ring.one
        else:
            if unit_gen_image is None:
                raise ValueError("need a generator image for a ramified level")
            self.unit_gen_image = unit_gen_image
        self._table: dict[int, object] | None = None
        if check and conductor_exp > 0:
            p = field.p
            order = (p - 1) * p ** (conductor_exp - 1)
            from .laurent import _elem_pow

            if _elem_pow(ring, self.unit_gen_image, order) != ring.one:
                raise ValueError("generator image is not a root of unity of the right order")
        if check and not ring.is_unit(self.at_uniformizer):
            raise ValueError("value at the uniformizer must be a unit")

    # -- constructors ----------------------------------------------------
    @classmethod
    def trivial(cls, field, ring):
        return cls(field, ring, 0)

    @classmethod
    def unramified(cls, field, ring, at_uniformizer):
        return cls(field, ring, 0, at_uniformizer=at_uniformizer)

    @classmethod
    def quadratic_ramified(cls, field, ring, at_uniformizer=None):
        """The Legendre character on units, extended by the given value at p."""
        at = ring.one if at_uniformizer is None else at_uniformizer
        return cls(field, ring, 1, unit_gen_image=ring.from_int(-1), at_uniformizer=at)

    # -- evaluation --------------------------------------------------------
    def _unit_table(self) -> dict[int, object]:
        if self._table is None:
            e = self.conductor_exp
            p = self.field.p
            table: dict[int, object] = {}
            if e == 0:
                self._table = table
                return table
            g = primitive_root_mod_p_power(p, e)
            m = p**e
            order = (p - 1) * p ** (e - 1)
            acc_res, acc_val = 1, self.ring.one
            for _ in range(order):
                table[acc_res] = acc_val
                acc_res = acc_res * g % m
                acc_val = acc_val * self.unit_gen_image
            self._table = table
        return self._table

    def unit_value(self, u):
        """Value on a unit (rational with valuation 0, or its residue)."""
        if self.conductor_exp == 0:
            return self.ring.one
        if isinstance(u, int):
            res = u % self.field.p ** self.conductor_exp
        else:
            res = residue_mod(Fraction(u), self.field.p, self.conductor_exp)
        return self._unit_table()[res]

    def value(self, x):
        x = Fraction(x)
        v = val_p(x, self.field.p)
        from .laurent import _elem_pow

        out = _elem_pow(self.ring, self.at_uniformizer, v)
        if self.conductor_exp > 0:
            out = out * self.unit_value(unit_part(x, self.field.p))
        return out

    def char_X_eval(self, x) -> LaurentPoly:
        """omega_X(x) = omega(x) X^{val(x)}."""
        v = val_p(Fraction(x), self.field.p)
        return LaurentPoly.monomial(self.ring, self.value(x), v)

    # -- structure -----------------------------------------------------------
    def true_conductor(self) -> int:
        """Smallest e' with the character trivial on 1 + p^{e'} O."""
        from .laurent import _elem_pow

        e = self.conductor_exp
        if e == 0 or self.unit_gen_image == self.ring.one:
            return 0
        p = self.field.p
        for e2 in range(1, e):
            s = (p - 1) * p ** (e2 - 1)
            if _elem_pow(self.ring, self.unit_gen_image, s) == self.ring.one:
                return e2
        return e

    def at_level(self, e2: int) -> "MultChar":
        """The same character stored at a higher level e2 >= conductor_exp."""
        if e2 < self.conductor_exp:
            raise ValueError("cannot lower the storage level")
        if e2 == self.conductor_exp:
            return self
        if e2 == 0:
            return self
        g2 = primitive_root_mod_p_power(self.field.p, e2)
        image = self.unit_value(g2) if self.conductor_exp > 0 else self.ring.one
        return MultChar(self.field, self.ring, e2, image, self.at_uniformizer, check=False)

    def __mul__(self, other: "MultChar") -> "MultChar":
        if (self.field, self.ring) != (other.field, other.ring):
            raise ValueError("characters over different fields or rings")
        e = max(self.conductor_exp, other.conductor_exp)
        a, b = self.at_level(e), other.at_level(e)
        return MultChar(
            self.field, self.ring, e,
            a.unit_gen_image * b.unit_gen_image if e else None,
            a.at_uniformizer * b.at_uniformizer,
            check=False,
        )

    def inverse(self) -> "MultChar":
        r = self.ring
        return MultChar(
            self.field, r, self.conductor_exp,
            r.inv(self.unit_gen_image) if self.conductor_exp else None,
            r.inv(self.at_uniformizer),
            check=False,
        )

    def __pow__(self, k: int) -> "MultChar":
        out = MultChar.trivial(self.field, self.ring)
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = out * base
        return out

    def is_trivial_on_units(self) -> bool:
        return self.true_conductor() == 0

    def value_at_minus_one(self):
        return self.unit_value(-1) if self.conductor_exp else self.ring.one


# ---------------------------------------------------------------------------
# additive characters


class AddChar:
    """Smooth additive character of F, trivial on p^{-n} O and nontrivial on
    p^{-n-1} O; values are p-power roots of unity in the coefficient ring."""

    def __init__(self, field: LocalFieldDesc, ring, conductor_exp: int = 0, sign: int = 1):
        if field.ext != "trivial":
            raise ValueError("AddChar lives on the base field F")
        self.field = field
        self.ring = ring
        self.conductor_exp = conductor_exp
        self.sign = sign

    def value(self, x):
        x = Fraction(x) * self.sign
        if x == 0:
            return self.ring.one
        p = self.field.p
        v = val_p(x, p)
        if v >= -self.conductor_exp:
            return self.ring.one
        k = -v - self.conductor_exp
        y = x * Fraction(p) ** self.conductor_exp  # val(y) = -k
        a = unit_residue(y, p, k)
        return self.ring.root_of_unity(p**k, a)

    def inverse(self) -> "AddChar":
        return AddChar(self.field, self.ring, self.conductor_exp, -self.sign)


def char_X_eval(omega: MultChar, x) -> LaurentPoly:
    return omega.char_X_eval(x)


# ---------------------------------------------------------------------------
# Hilbert symbols and quadratic extensions


def hilbert_symbol(a, b, p: int) -> int:
    """The Hilbert symbol (a, b)_p for nonzero rationals, any prime p."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ZeroDivisionError("Hilbert symbol needs nonzero arguments")
    alpha, beta = val_p(a, p), val_p(b, p)
    if p != 2:
        u_res = unit_residue(a, p, 1)
        w_res = unit_residue(b, p, 1)
        s = 1
        if (alpha * beta) % 2 == 1 and (p - 1) // 2 % 2 == 1:
            s = -s
        if beta % 2 == 1 and legendre(u_res, p) == -1:
            s = -s
        if alpha % 2 == 1 and legendre(w_res, p) == -1:
            s = -s
        return s
    u8 = unit_residue(a, 2, 3)
    w8 = unit_residue(b, 2, 3)
    eps_u, eps_w = (u8 - 1) // 2 % 2, (w8 - 1) // 2 % 2
    om_u, om_w = (u8 * u8 - 1) // 8 % 2, (w8 * w8 - 1) // 8 % 2
    exp = eps_u * eps_w + alpha * om_w + beta * om_u
    return -1 if exp % 2 else 1


def hilbert_symbol_oracle(a, b, p: int) -> int:
    """Brute-force (a, b)_p at odd p via primitive solvability of
    z^2 = a x^2 + b y^2 over Z/p^3.  Valid for valuations 0 and 1."""
    a, b = Fraction(a), Fraction(b)
    if p == 2:
        raise ValueError("oracle implemented for odd p")
    if not (0 <= val_p(a, p) <= 1 and 0 <= val_p(b, p) <= 1):
        raise ValueError("oracle requires arguments of valuation 0 or 1")
    m = p**3
    ra = (a.numerator % m) * pow(a.denominator % m, -1, m) % m
    rb = (b.numerator % m) * pow(b.denominator % m, -1, m) % m
    squares = {z * z % m for z in range(m)}
    for x in range(m):
        ax2 = ra * x * x % m
        for y in range(m):
            if x % p == 0 and y % p == 0:
                continue  # a primitive triple would need a unit z, impossible here
            if (ax2 + rb * y * y) % m in squares:
                return 1
    return -1


def square_class_reduce(x, p: int) -> Fraction:
    """Canonical representative of the square class of x in F^x:
    one of 1, u0, p, u0*p (u0 = least nonresidue)."""
    x = Fraction(x)
    v = val_p(x, p) % 2
    u = unit_residue(x, p, 1)
    rep = Fraction(1 if legendre(u, p) == 1 else smallest_nonresidue(p))
    return rep * p**v


def chi_from_square_class(delta, field: LocalFieldDesc, ring) -> MultChar:
    """The quadratic character x -> (x, delta)_p of F^x."""
    delta = Fraction(delta)
    p = field.p
    at = ring.from_int(hilbert_symbol(p, delta, p))
    if val_p(delta, p) % 2 == 0:
        if legendre(unit_residue(delta, p, 1), p) == 1:
            return MultChar(field, ring, 0, at_uniformizer=ring.one, check=False)
        return MultChar(field, ring, 0, at_uniformizer=at, check=False)
    g = primitive_root_mod_p_power(p, 1)
    gen_image = ring.from_int(hilbert_symbol(g, delta, p))
    return MultChar(field, ring, 1, unit_gen_image=gen_image, at_uniformizer=at, check=False)


def eta_char(field: LocalFieldDesc, ring) -> MultChar:
    """The order-2 character of F^x with kernel the norms of E^x."""
    if field.ext == "trivial":
        raise ValueError("no quadratic extension")
    return chi_from_square_class(field.disc_class, LocalFieldDesc(field.p), ring)


def norm_map(x: tuple, field: LocalFieldDesc) -> Fraction:
    """Norm of x = a + b sqrt(D) from E to F, computed exactly."""
    if field.ext == "trivial":
        raise ValueError("no quadratic extension")
    a, b = Fraction(x[0]), Fraction(x[1])
    return a * a - field.ext_D * b * b


# ---------------------------------------------------------------------------
# characters of E^x for the hermitian case, stored through their restriction


class ExtMultChar:
    """Character of E^x (E/F quadratic) at desk scale.

    The normalizing-factor formulas only ever evaluate omega on rationals
    (so through omega|_{F^x} and val_E) and use the restriction to F^x; we
    therefore store the unit behaviour as a base-field character together
    with the value at a chosen uniformizer of E.
    """

    def __init__(self, field: LocalFieldDesc, unit_char: MultChar, at_uniformizer_E):
        if field.ext == "trivial":
            raise ValueError("ExtMultChar needs a quadratic extension")
        self.field = field
        self.unit_char = unit_char
        self.ring = unit_char.ring
        self.at_uniformizer_E = at_uniformizer_E

    def restriction(self) -> MultChar:
        """omega restricted to F^x."""
        r = self.ring
        if self.field.ext == "unramified":
            at_p = self.at_uniformizer_E
        else:
            # p = pi_E^2 / d with d the ramification parameter (a unit or 1)
            at_p = self.at_uniformizer_E * self.at_uniformizer_E
            at_p = at_p * r.inv(self.unit_char.unit_value(self.field.d)) \
                if self.unit_char.conductor_exp else at_p
        return MultChar(
            LocalFieldDesc(self.field.p), r, self.unit_char.conductor_exp,
            self.unit_char.unit_gen_image if self.unit_char.conductor_exp else None,
            at_p, check=False,
        )

    def char_X_eval_rational(self, b) -> LaurentPoly:
        """omega_X(b) for rational b viewed inside E^x (X-power is val_E)."""
        b = Fraction(b)
        v_f = val_p(b, self.field.p)
        value = self.restriction().value(b)
        return LaurentPoly.monomial(self.ring, value, self.field.e_ram * v_f)
