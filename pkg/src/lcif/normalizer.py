"""Doubling-method normalizing data: discriminants, Kottwitz signs, Weil
indices, and the closed-form normalizing factor with its invertibility
certificate.

The normalizing factor is DEFINED here by its closed form d(X, omega, B,
psi) (four cases, evaluated literally with the package's Tate gamma and
epsilon conventions); the measure-dependent integral definition through a
Whittaker-type functional is out of scope, the measure choice being
absorbed into the closed form.  Odd residue characteristic only: the
X^{val_F(2)} and |2|_F factors collapse to 1 and are omitted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import sqrt_rational_exact, val_p
from .cyclotomic import CycNumber
from .laurent import LaurentPoly, LocFraction, _elem_pow
from .localfield import (
    AddChar,
    ExtMultChar,
    LocalFieldDesc,
    MultChar,
    chi_from_square_class,
    eta_char,
    square_class_reduce,
)
from .tate import _q_half_power, tate_epsilon, tate_gamma


@dataclass(frozen=True)
class SpaceDesc:
    """The tuple feeding the normalizing-factor formulas.

    Cases: I1 (D = E = F), I2 (D a nonsplit quaternion algebra, desk scale:
    reduced norms supplied directly), I3 (E/F quadratic, hermitian), II
    (linear case, h = 0).  `gram` holds the Gram matrix for cases I with
    rational entries; `nrd_r` may be given instead when only the reduced
    norm of the matrix is meaningful (case I2, or formal grid points).
    """

    case_tag: str
    n: int
    field: LocalFieldDesc
    epsilon: int = 1
    gram: tuple | None = None
    nrd_r: Fraction | None = None
    d_split: bool = True
    b_nrd: Fraction = Fraction(1)
    ext: LocalFieldDesc | None = None

    def __post_init__(self):
        if self.case_tag not in ("I1", "I2", "I3", "II"):
            raise ValueError(f"unknown case {self.case_tag!r}")
        if self.b_nrd == 0:
            raise ValueError("B must have maximal rank (nonzero reduced norm)")
        if self.case_tag == "I3" and self.ext is None:
            raise ValueError("case I3 needs quadratic extension data")
        if self.case_tag != "II" and self.gram is None and self.nrd_r is None:
            raise ValueError("cases I need a Gram matrix or its reduced norm")
        if self.gram is not None:
            g = self.gram
            if len(g) != self.n or any(len(row) != self.n for row in g):
                raise ValueError("Gram matrix must be n x n")
            sym = 1 if (self.case_tag == "I3" or self.epsilon == 1) else -1
            for i in range(self.n):
                for j in range(self.n):
                    if Fraction(g[i][j]) != sym * Fraction(g[j][i]):
                        raise ValueError("Gram matrix has the wrong symmetry")

    def nrd_of_gram(self) -> Fraction:
        if self.nrd_r is not None:
            return Fraction(self.nrd_r)
        d = _det([[Fraction(x) for x in row] for row in self.gram])
        if d == 0 and self.case_tag != "II":
            raise ValueError("degenerate form")
        return d


def _det(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = Fraction(0)
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        total += (-1) ** j * m[0][j] * _det(minor)
    return total


def discriminant_theta(s: SpaceDesc) -> Fraction:
    """Square class of (-1)^n Nrd(R), reduced to a canonical representative."""
    if s.case_tag == "II":
        raise ValueError("no discriminant in linear case")
    return square_class_reduce(Fraction(-1) ** s.n * s.nrd_of_gram(), s.field.p)


def kottwitz_sign(s: SpaceDesc) -> int:
    if s.d_split:
        return 1
    n = s.n
    if s.case_tag in ("I1", "I2"):
        exp = n * (n + 1) // 2 if s.epsilon == 1 else n * (n - 1) // 2
        return -1 if exp % 2 else 1
    if s.case_tag == "II":
        return -1 if n % 2 else 1
    return 1  # I3: D = E is split as a central simple E-algebra


def theta_form(s: SpaceDesc, ring):
    """The auxiliary invariant eta((-1)^{n(n-1)/2} det R) of case I3.

    Exposed for completeness; it feeds no displayed formula.
    """
    if s.case_tag != "I3":
        raise ValueError("theta_form is specific to case I3")
    eta = eta_char(s.ext, ring)
    return eta.value(Fraction(-1) ** (s.n * (s.n - 1) // 2) * s.nrd_of_gram())


# ---------------------------------------------------------------------------
# Weil index by stabilized finite Gauss sums


def _psi_exponent(y: Fraction, p: int, n: int) -> tuple[int, int]:
    """psi(y) = zeta_{p^depth}^residue for the standard conductor-n character."""
    from .arith import unit_residue

    if y == 0:
        return 0, 0
    v = val_p(y, p)
    if v >= -n:
        return 0, 0
    depth = -v - n
    a = unit_residue(y * Fraction(p) ** n, p, depth)
    return depth, a


def _prime_power_reduce(counts: dict[int, Fraction], p: int, a: int) -> tuple:
    """Reduce sum_e counts[e] zeta_{p^a}^e to power-basis coordinates.

    Uses the relation zeta^{(p-1)p^{a-1}+r} = -sum_{i<p-1} zeta^{i p^{a-1}+r}
    so no reduction tables are needed even for large prime powers.
    """
    if a == 0:
        return (sum(counts.values(), Fraction(0)),)
    phi = (p - 1) * p ** (a - 1)
    step = p ** (a - 1)
    out = [Fraction(0)] * phi
    for e, c in counts.items():
        if not c:
            continue
        e %= p**a
        if e < phi:
            out[e] += c
        else:
            r = e - phi
            for i in range(p - 1):
                out[i * step + r] -= c
    return tuple(out)


def _weil_shell_sum(a: Fraction, k: int, p: int, n: int, sign: int = 1) -> tuple[int, tuple]:
    """Exact integral of psi^{-sign}(a t^2) over the shell val(t) = -k.

    Returns (depth, coords): the value as power-basis coordinates over
    Q(zeta_{p^depth}).  Every term on the shell has the same depth
    2k - val(a) - n, so the residues reduce to c0 u^2 mod p^depth with
    c0 the unit part of -sign*a.
    """
    from .arith import unit_residue

    v_a = val_p(a, p)
    depth = 2 * k - v_a - n
    q = Fraction(p)
    if depth <= 0:
        vol = q**k - q ** (k - 1)
        return 0, (vol,)
    mod = p**depth
    c0 = unit_residue(-sign * a, p, depth)
    counts: dict[int, int] = {}
    for u in range(1, mod):
        if u % p == 0:
            continue
        e = c0 * u * u % mod
        counts[e] = counts.get(e, 0) + 1
    scale = q ** (k - depth)  # additive volume of each unit coset in the shell
    coords = _prime_power_reduce({e: Fraction(c) for e, c in counts.items()}, p, depth)
    return depth, tuple(c * scale for c in coords)


def _weil_index_one_dim(a: Fraction, psi: AddChar, ring, max_level: int = 4):
    """Normalized stabilized value of int psi^{-1}(a t^2) dt over growing balls.

    Sums shells until two consecutive shells vanish exactly; the stabilized
    ball integral, normalized to absolute value 1, is the rank-one Weil
    index of the scaled square form.
    """
    p = psi.field.p
    n = psi.conductor_exp
    if val_p(a, p) + n < 0:
        raise ValueError("oracle assumes the form is integral against psi")
    partial: list[tuple[int, tuple]] = [(0, (Fraction(1),))]  # integral over O
    zero_run = 0
    k = 0
    while zero_run < 2:
        k += 1
        if k > max_level + 2:
            raise ArithmeticError("Weil index oracle failed to stabilize")
        depth, coords = _weil_shell_sum(a, k, p, n, psi.sign)
        if any(coords):
            partial.append((depth, coords))
            zero_run = 0
        else:
            zero_run += 1
    # assemble the stabilized value in the coefficient ring
    total = ring.zero
    for depth, coords in partial:
        if depth == 0:
            total = total + ring.from_rational(coords[0])
        else:
            piece = ring.zero
            for e, c in enumerate(coords):
                if c:
                    piece = piece + ring.root_of_unity(p**depth, e) * ring.from_rational(c)
            total = total + piece
    return _normalize_to_unit_circle(total, p, ring)


def _normalize_to_unit_circle(x, p: int, ring):
    """x / |x| for x in a cyclotomic-scalar context, |x|^2 = x conj(x)."""
    conj = _ring_conjugate(x, ring)
    norm2 = x * conj
    r = _extract_rational(norm2, ring)
    if r is None or r <= 0:
        raise ArithmeticError("Weil index oracle failed to stabilize")
    w = val_p(r, p)
    rest = r / Fraction(p) ** w
    s = sqrt_rational_exact(rest)
    if s is None:
        raise ArithmeticError("Weil oracle norm is not of the expected shape")
    inv_scale = ring.inv(ring.from_rational(s) * _q_half_power(ring, w))
    return x * inv_scale


def _ring_conjugate(x, ring):
    if isinstance(x, CycNumber):
        return x.conjugate()
    # universal twist ring scalar: conjugate cyclotomic coefficients
    from .rings import UTElement, UniversalTwistRing

    if isinstance(ring, UniversalTwistRing) and isinstance(x, UTElement):
        return UTElement(ring, {k: c.conjugate() for k, c in x.terms.items()})
    raise TypeError("no conjugation available on this ring")


def _extract_rational(x, ring) -> Fraction | None:
    if isinstance(x, CycNumber):
        return x.rational_value() if x.is_rational() else None
    from .rings import UTElement

    if isinstance(x, UTElement):
        if not x.terms:
            return Fraction(0)
        if set(x.terms) == {(0, 0)} and x.terms[(0, 0)].is_rational():
            return x.terms[(0, 0)].rational_value()
        return None
    return None


def weil_index(ext: LocalFieldDesc, psi: AddChar, ring=None):
    """Weil index of the character of second degree psi^{-1} o N_{E/F}.

    The norm form of E = F(sqrt(D)) is diagonalized as <1, -D> and the
    index is the product of the two rank-one stabilized Gauss-sum indices;
    the result is a root of unity of order dividing 8.
    """
    if ext.ext == "trivial":
        raise ValueError("Weil index needs a quadratic extension")
    ring = psi.ring if ring is None else ring
    g1 = _weil_index_one_dim(Fraction(1), psi, ring)
    g2 = _weil_index_one_dim(-ext.ext_D, psi, ring)
    return g1 * g2


# ---------------------------------------------------------------------------
# the factors R and d


def _omega_x_rational(omega, b: Fraction) -> LocFraction:
    """omega_X(b) as a fraction, for omega a MultChar or ExtMultChar."""
    if isinstance(omega, ExtMultChar):
        return LocFraction(omega.char_X_eval_rational(b))
    return LocFraction(omega.char_X_eval(b))


def _epsilon_at_central_point(chi: MultChar, psi: AddChar) -> LocFraction:
    """epsilon(q^{-1/2}, chi, psi): the epsilon monomial evaluated at
    X = q^{-1/2}, a scalar."""
    ring = chi.ring
    return tate_epsilon(chi, psi).subst_monomial(ring.inv(_q_half_power(ring, 1)), 0)


def r_factor(s: SpaceDesc, omega, psi: AddChar) -> LocFraction:
    """The case-dependent factor R(X, omega, B, psi)."""
    ring = omega.ring
    if s.case_tag in ("I1", "I2"):
        base = _omega_x_rational(omega, s.b_nrd).inverse()
        if s.epsilon == 1:
            delta = Fraction(-1) ** s.n * s.b_nrd
            chi = chi_from_square_class(delta, s.field, ring)
            g = tate_gamma(omega * chi, psi).subst_monomial(ring.inv(_q_half_power(ring, 1)), 1)
            return base * g * _epsilon_at_central_point(chi, psi).inverse()
        chi = chi_from_square_class(discriminant_theta(s), s.field, ring)
        return base * _epsilon_at_central_point(chi, psi)
    if s.case_tag == "I3":
        if not isinstance(omega, ExtMultChar):
            raise ValueError("case I3 expects a character of E^x")
        eta = eta_char(s.ext, ring)
        eta_val = eta.value(s.nrd_of_gram())
        return _omega_x_rational(omega, s.b_nrd).inverse() * LocFraction(
            LaurentPoly.constant(ring, eta_val)
        )
    # linear case: omega_X(Nrd(B/2))^{-2}; Nrd scales by (1/2)^{rn}
    r_deg = 1 if s.d_split else 2
    half_nrd = s.b_nrd / Fraction(2) ** (r_deg * s.n)
    return _omega_x_rational(omega, half_nrd).inverse() ** 2


def d_factor(s: SpaceDesc, omega, psi: AddChar) -> LocFraction:
    """The closed-form normalizing factor d(X, omega, B, psi), odd p.

    Case I3 uses the variable Y = X^2 when E/F is unramified and Y = X
    otherwise.
    """
    if s.field.p == 2:
        raise ValueError("normalizing factors implemented for odd p")
    ring = omega.ring
    q = s.field.p
    n = s.n

    if s.case_tag in ("I1", "I2"):
        om: MultChar = omega
        nrd = s.nrd_of_gram()
        v = val_p(nrd, q)
        e_g = ring.from_int(kottwitz_sign(s))
        const = e_g * _elem_pow(ring, ring.inv(om.value(4)), n)
        const = const * ring.inv(om.value(nrd))
        half_steps = v * (2 * n + 1) if s.epsilon == 1 else v * (2 * n - 1)
        const = const * _q_half_power(ring, half_steps)  # divides |Nrd R|^{n +- 1/2}
        out = LocFraction(LaurentPoly.constant(ring, const))
        om2 = om * om
        for i in range(n):
            g = tate_gamma(om2, psi).subst_monomial(ring.from_rational(Fraction(q) ** (2 * i)), 2)
            out = out * g.inverse()
        if s.epsilon == 1:
            g_lin = tate_gamma(om, psi).subst_monomial(_q_half_power(ring, 2 * n - 1), 1)
            return out * g_lin.inverse() * r_factor(s, omega, psi)
        return out * _omega_x_rational(omega, s.b_nrd).inverse()

    if s.case_tag == "I3":
        if not isinstance(omega, ExtMultChar):
            raise ValueError("case I3 expects a character of E^x")
        y_power = 2 if s.ext.ext == "unramified" else 1
        w = weil_index(s.ext, psi, ring)
        const = _elem_pow(ring, w, n * (n - 1) // 2)
        out = LocFraction(LaurentPoly.constant(ring, const))
        om_f = omega.restriction()
        eta = eta_char(s.ext, ring)
        for r in range(n):
            ch = om_f * (eta**r)
            g = tate_gamma(ch, psi).subst_monomial(
                ring.from_rational(Fraction(q) ** (n - 1 - r)), y_power
            )
            out = out * g.inverse()
        return out * _omega_x_rational(omega, s.b_nrd).inverse()

    # linear case
    om: MultChar = omega
    const = ring.from_int((-1) ** n) * _elem_pow(ring, ring.inv(om.value(4)), 2 * n)
    out = LocFraction(LaurentPoly.constant(ring, const))
    om2 = om * om
    for i in range(2 * n):
        g = tate_gamma(om2, psi).subst_monomial(ring.from_rational(Fraction(q) ** i), 2)
        out = out * g.inverse()
    return out * r_factor(s, omega, psi)


def check_unit_in_localization(f: LocFraction) -> bool:
    """True iff numerator and denominator both lie in S (componentwise over
    universal twist rings)."""
    return f.is_loc_unit()
