"""Tate gamma and epsilon factors valued in S^-1 A[X, X^-1].

Conventions (pinned by the truncated-Tate-integral oracle in the test
suite, with the self-dual additive measure in the Fourier transform and
X = q^{-s}):

* omega unramified, omega(p) = c, psi of conductor n:
      gamma(X, omega, psi) = -c^{n+1} q^{n/2+1} X^{n+1} (1 - cX) / (1 - cqX)
      epsilon(X, omega, psi) = (c q^{1/2} X)^n
* omega ramified of conductor e >= 1:
      gamma = epsilon
             = q^{n/2+e-1} omega(p)^{n+e} g(omega^{-1}, psi, e) X^{n+e}
  where g is the volume-weighted Gauss sum over O^x/(1 + p^e O).

With these normalizations the functional identity
      gamma(1/(qX), omega^{-1}, psi) * gamma(X, omega, psi) = omega(-1)
holds exactly.

Over a universal twist ring with a nontrivial finite part the tautological
character mixes conductors across its U-components; gamma is computed on
each component and reassembled through the idempotents of U, which is the
interpolation that makes specialization commute with the formulas.
"""

from __future__ import annotations

from fractions import Fraction

from .laurent import LaurentPoly, LocFraction, _elem_pow, _recombine_universal
from .localfield import AddChar, MultChar, enumerate_unit_cosets
from .rings import UniversalTwistRing, UTElement

# test hook: when set, one Gauss-sum term is deliberately corrupted so the
# verification suites can demonstrate their negative path
_PERTURB_GAUSS = False


def gauss_sum(omega: MultChar, psi: AddChar, level: int):
    """sum over u in O^x/(1+p^level O) of omega(u) psi(u p^(-level-n)) vol."""
    if level < 1:
        raise ValueError("Gauss sum level must be >= 1")
    ring = omega.ring
    p = omega.field.p
    shift = Fraction(1, p ** (level + psi.conductor_exp))
    total = ring.zero
    first = True
    for u, vol in enumerate_unit_cosets(omega.field, level):
        term = omega.unit_value(u) * psi.value(u * shift) * ring.from_rational(vol)
        if first and _PERTURB_GAUSS:
            term = term + ring.one
        first = False
        total = total + term
    return total


def _q_half_power(ring, half_steps: int):
    """q^{half_steps/2} as a ring element (sqrt_q to an integer power)."""
    s = ring.sqrt_q()
    return _elem_pow(ring, s, half_steps)


def _gamma_core(omega: MultChar, psi: AddChar) -> LocFraction:
    ring = omega.ring
    q = omega.field.q
    n = psi.conductor_exp
    e = omega.true_conductor()
    c = omega.at_uniformizer
    X = LaurentPoly.gen(ring)
    if e == 0:
        coeff = -_elem_pow(ring, c, n + 1) * _q_half_power(ring, n + 2)
        num = LaurentPoly.monomial(ring, coeff, n + 1) * (1 - c * X)
        den = 1 - (c * ring.from_int(q)) * X
        return LocFraction(num, den)
    g = gauss_sum(omega.inverse(), psi, e)
    coeff = _q_half_power(ring, n + 2 * e - 2) * _elem_pow(ring, c, n + e) * g
    return LocFraction(LaurentPoly.monomial(ring, coeff, n + e))


def _epsilon_core(omega: MultChar, psi: AddChar) -> LocFraction:
    ring = omega.ring
    n = psi.conductor_exp
    e = omega.true_conductor()
    if e == 0:
        coeff = _elem_pow(ring, omega.at_uniformizer, n) * _q_half_power(ring, n)
        return LocFraction(LaurentPoly.monomial(ring, coeff, n))
    return _gamma_core(omega, psi)


def _u_component_char(omega: MultChar, j: int, sub: UniversalTwistRing) -> MultChar:
    ring: UniversalTwistRing = omega.ring

    def comp(x):
        c = ring.u_components(x)[j]
        return UTElement(sub, {(t, 0): v for t, v in c.items()})

    return MultChar(
        omega.field, sub, omega.conductor_exp,
        comp(omega.unit_gen_image) if omega.conductor_exp else None,
        comp(omega.at_uniformizer), check=False,
    )


def _over_components(omega: MultChar, psi: AddChar, core) -> LocFraction:
    ring = omega.ring
    if not (isinstance(ring, UniversalTwistRing) and ring.finite_order > 1):
        return core(omega, psi)
    sub = UniversalTwistRing(ring.cyclo_order, 1, ring.q)
    psi_sub = AddChar(psi.field, sub, psi.conductor_exp, psi.sign)
    comps = [core(_u_component_char(omega, j, sub), psi_sub)
             for j in range(ring.finite_order)]
    return _recombine_universal(ring, comps)


def tate_gamma(omega: MultChar, psi: AddChar) -> LocFraction:
    """The Tate gamma factor of omega against psi, in S^-1 A[X, X^-1]."""
    return _over_components(omega, psi, _gamma_core)


def tate_epsilon(chi: MultChar, psi: AddChar) -> LocFraction:
    """The Tate epsilon factor (a monomial; the L-quotient of gamma)."""
    return _over_components(chi, psi, _epsilon_core)


def functional_identity_defect(omega: MultChar, psi: AddChar) -> LocFraction:
    """gamma(1/(qX), omega^-1, psi) * gamma(X, omega, psi) - omega(-1).

    Zero exactly when the Tate functional identity holds.
    """
    ring = omega.ring
    q = omega.field.q
    g1 = tate_gamma(omega, psi)
    g2 = tate_gamma(omega.inverse(), psi).subst_monomial(ring.from_rational(Fraction(1, q)), -1)
    target = LocFraction(LaurentPoly.constant(ring, omega.value(-1)))
    return g1 * g2 - target
