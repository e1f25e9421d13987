"""Parametric constructors for the built-in scheme families.

Each constructor returns a SchemeSpec whose documented shift parameter and
reproduction space are attached as metadata.  Families whose masks are given
both by closed-form coefficients and by a factored symbol are built twice and
cross-checked coefficient-wise at every requested level.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable

import numpy as np

from .lattice import DilationMatrix, as_complex_vector
from .symbols import ExpPolySpace, LaurentSymbol, SchemeSpec

__all__ = [
    "CatalogError",
    "CatalogParameterError",
    "CatalogEntry",
    "CATALOG",
    "exp_bspline",
    "exp_product",
    "exp_box_spline",
    "dual4_binary",
    "dual4_binary_limit_mask",
    "dual4_ternary",
    "dual4_ternary_limit_mask",
    "dual4_ternary_limit_symbol",
    "butterfly",
    "sheared_convolution",
    "SHEAR_DIGITS",
    "sqrt3_schemes",
]

_CROSS_CHECK_TOL = 1e-12


class CatalogError(ValueError):
    """Internal construction mismatch."""


class CatalogParameterError(ValueError):
    """Scheme parameters outside the supported domain."""


def _axis_lambda(lam, s: int, name="lambda", allow_zero=True) -> tuple[complex, ...]:
    """A frequency vector restricted to R^s or i R^s (one branch for the whole vector)."""
    v = as_complex_vector(lam, s)
    real = all(z.imag == 0 for z in v)
    imag = all(z.real == 0 for z in v)
    if not (real or imag):
        raise CatalogParameterError(f"{name} must lie in R^{s} or in i R^{s}")
    if not allow_zero and all(z == 0 for z in v):
        raise CatalogParameterError(f"{name} must be nonzero")
    return v


def _geometric_factor(m: int, r: complex) -> LaurentSymbol:
    """1 + r z + ... + r^(m-1) z^(m-1)."""
    return LaurentSymbol(1, {(e,): r**e for e in range(m)})


# -- exponential B-splines -----------------------------------------------------


def exp_bspline(m: int, lam, n_fold: int = 1, tau=None) -> SchemeSpec:
    """m-ary exponential B-spline scheme (1 + r_k z + ... + r_k^{m-1} z^{m-1})^n.

    With `tau` given, each level is scaled by K^[k] = m^(1-n) r_k^(-(m-1) tau)
    so the exponential anchor condition holds for that shift.  Without it the
    raw product is returned (which for n_fold = 1 reproduces exp(lambda x)
    with shift 0).  The two-dimensional space {exp, x exp} is reached exactly
    when tau equals n_fold / 2.
    """
    if m < 2:
        raise CatalogParameterError("arity m must be at least 2")
    if n_fold < 1:
        raise CatalogParameterError("n_fold must be at least 1")
    lamc = complex(as_complex_vector(lam, 1)[0])
    M = DilationMatrix(m)

    t = None if tau is None else float(tau)

    def rule(k: int) -> LaurentSymbol:
        r = cmath.exp(lamc * float(m) ** -(k + 1))
        sym = _geometric_factor(m, r) ** n_fold
        if t is not None:
            K = float(m) ** (1 - n_fold) * cmath.exp(-lamc * float(m) ** -(k + 1) * (m - 1) * t)
            sym = sym * K
        return sym

    doc_tau = (0.0,) if t is None else (t,)
    pairs = [((0,), (lamc,))]
    if n_fold >= 2 and t is not None and t == n_fold / 2:
        pairs.append(((1,), (lamc,)))
    return SchemeSpec(
        f"exp_bspline(m={m},n={n_fold})",
        M,
        rule,
        tau=doc_tau,
        space=ExpPolySpace(pairs),
    )


def exp_product(m: int, factors, normalization=None) -> SchemeSpec:
    """Product of geometric-sum factors, one per (lambda_i, multiplicity n_i).

    normalization: None leaves the raw product; "two_factor" applies the
    K^[k] = m^(1-n) (sum_e r_k^(m-1-e) s_k^e)^(-n) scaling that pairs with
    shift parameter n for two distinct factors of equal multiplicity; a
    callable k -> K gives explicit per-level scaling.
    """
    if m < 2:
        raise CatalogParameterError("arity m must be at least 2")
    facs = [(complex(as_complex_vector(l, 1)[0]), int(n)) for l, n in factors]
    if not facs or any(n < 1 for _, n in facs):
        raise CatalogParameterError("need at least one factor with positive multiplicity")
    M = DilationMatrix(m)

    if normalization == "two_factor":
        if len(facs) != 2 or facs[0][1] != facs[1][1]:
            raise CatalogParameterError(
                "two_factor normalization needs exactly two factors of equal multiplicity"
            )
        (la, n), (mu, _) = facs

        def K(k: int) -> complex:
            r = cmath.exp(la * float(m) ** -(k + 1))
            s = cmath.exp(mu * float(m) ** -(k + 1))
            return float(m) ** (1 - n) * sum(
                r ** (m - 1 - e) * s**e for e in range(m)
            ) ** (-n)

        doc_tau = (float(n),)
        space = ExpPolySpace([((0,), (la,)), ((0,), (mu,))])
    elif callable(normalization):
        K = normalization
        doc_tau = None
        space = None
    elif normalization is None:
        K = None
        doc_tau = None
        space = None
    else:
        raise CatalogParameterError(f"unknown normalization {normalization!r}")

    def rule(k: int) -> LaurentSymbol:
        sym = LaurentSymbol.one(1)
        for lamc, n in facs:
            r = cmath.exp(lamc * float(m) ** -(k + 1))
            sym = sym * _geometric_factor(m, r) ** n
        if K is not None:
            sym = sym * K(k)
        return sym

    name = f"exp_product(m={m},factors={len(facs)})"
    return SchemeSpec(name, M, rule, tau=doc_tau, space=space)


def exp_box_spline(n_dil: int, lam) -> SchemeSpec:
    """Tensor digit-set scheme for M = n I with mask sum_(e in E) r_k^e z^e.

    Its basic limit function is exp(lambda . x) on the unit box; the raw mask
    reproduces the pure exponential with shift 0.
    """
    if n_dil < 2:
        raise CatalogParameterError("dilation factor must be at least 2")
    lamv = as_complex_vector(lam)
    s = len(lamv)
    M = DilationMatrix([[n_dil * int(i == j) for j in range(s)] for i in range(s)])

    def rule(k: int) -> LaurentSymbol:
        r = [cmath.exp(z * float(n_dil) ** -(k + 1)) for z in lamv]
        terms = {}
        for eps in product(range(n_dil), repeat=s):
            c = complex(1)
            for rj, ej in zip(r, eps):
                c *= rj**ej
            terms[eps] = c
        return LaurentSymbol(s, terms)

    return SchemeSpec(
        f"exp_box_spline(n={n_dil},s={s})",
        M,
        rule,
        tau=(0.0,) * s,
        space=ExpPolySpace([((0,) * s, lamv)]),
    )


# -- dual four-point schemes ---------------------------------------------------


def _poly1(coeffs) -> LaurentSymbol:
    """Univariate polynomial from a coefficient list starting at z^0."""
    return LaurentSymbol(1, {(i,): c for i, c in enumerate(coeffs)})


def _dual4_w(lam: complex, m: int, k: int) -> complex:
    h = float(m) ** -(k + 1) * lam / 2
    return (cmath.exp(h) + cmath.exp(-h)) / 2


def _guard_factors(factors: dict[str, complex], k: int, scheme: str):
    for name, value in factors.items():
        if abs(value) < 1e-12:
            raise CatalogParameterError(
                f"{scheme}: denominator factor {name} vanishes at level {k}"
            )


def dual4_binary(lam) -> SchemeSpec:
    """Binary dual four-point scheme reproducing span{1, x, e^(lx), e^(-lx)}.

    Eight taps anchored at z^-4 .. z^3, shift parameter -1/2.  Coefficient
    formulas and the factored symbol are cross-checked at construction.
    """
    lamc = _axis_lambda(lam, 1, allow_zero=False)[0]
    M = DilationMatrix(2)

    def rule(k: int) -> LaurentSymbol:
        w = _dual4_w(lamc, 2, k)
        _guard_factors({"w": w, "2w^2-1": 2 * w**2 - 1, "w+1": w + 1}, k, "dual4_binary")
        den = 64 * w**3 * (2 * w**2 - 1) * (w + 1)
        c0 = -(6 * w**2 + 2 * w - 1) / den
        c1 = (10 * w**2 + 2 * w - 3) / den + 0.75
        c2 = (-2 * w**2 + 2 * w + 3) / den + 0.25
        c3 = -(2 * w**2 + 2 * w + 1) / den
        mask = LaurentSymbol(
            1, {(e,): c for e, c in zip(range(-4, 4), [c3, c0, c2, c1, c1, c2, c0, c3])}
        )
        factored = (
            _poly1([1, 1]) ** 3
            * _poly1([1, 4 * w**2 - 2, 1])
            * _poly1([2 * w**2 + 2 * w + 1, -(8 * w**4 + 8 * w**3 + 2), 2 * w**2 + 2 * w + 1])
        ).shift(-4) * (-1 / den)
        if mask.max_diff(factored) > _CROSS_CHECK_TOL:
            raise CatalogError(f"dual4_binary: construction mismatch at level {k}")
        return mask

    return SchemeSpec(
        "dual4_binary",
        M,
        rule,
        tau=(-0.5,),
        space=ExpPolySpace([((0,), (0,)), ((1,), (0,)), ((0,), (lamc,)), ((0,), (-lamc,))]),
    )


def dual4_binary_limit_mask() -> LaurentSymbol:
    """Stationary limit of the binary dual four-point masks (exact rationals)."""
    lim = {
        -4: Fraction(-5, 128),
        -3: Fraction(-7, 128),
        -2: Fraction(35, 128),
        -1: Fraction(105, 128),
        0: Fraction(105, 128),
        1: Fraction(35, 128),
        2: Fraction(-7, 128),
        3: Fraction(-5, 128),
    }
    return LaurentSymbol(1, {(e,): float(c) for e, c in lim.items()})


def dual4_ternary(lam) -> SchemeSpec:
    """Ternary dual four-point scheme, twelve taps at z^-6 .. z^5, shift -1/4."""
    lamc = _axis_lambda(lam, 1, allow_zero=False)[0]
    M = DilationMatrix(3)

    def rule(k: int) -> LaurentSymbol:
        w = _dual4_w(lamc, 3, k)
        _guard_factors(
            {
                "w": w,
                "2w-1": 2 * w - 1,
                "2w+1": 2 * w + 1,
                "4w^2-3": 4 * w**2 - 3,
                "w+1": w + 1,
            },
            k,
            "dual4_ternary",
        )
        d1 = 8 * w * (2 * w - 1) ** 2 * (4 * w**2 - 3) * (w + 1)
        c02 = -1 / d1
        c12 = 1 / d1 + 0.5
        c22 = 1 / d1 + 0.5
        c32 = -1 / d1
        d2 = 24 * w * (4 * w**2 - 1) ** 3 * (-4 * w**3 - 4 * w**2 + 3 * w + 3)
        d3 = 8 * w * (2 * w - 1) ** 3 * (2 * w + 1) ** 3 * (4 * w**2 - 3) * (w + 1)
        c03 = (16 * w**4 + 16 * w**3 + 3) / d2
        c13 = -(16 * w**4 - 16 * w**2 - 4 * w - 1) / d3 + 1 / 6
        c23 = (48 * w**4 + 16 * w**3 - 32 * w**2 - 8 * w + 1) / d3 + 5 / 6
        c33 = (80 * w**4 + 32 * w**3 - 48 * w**2 - 12 * w + 3) / d2
        c31, c21, c11, c01 = c03, c13, c23, c33
        coeffs = [c03, c02, c01, c13, c12, c11, c23, c22, c21, c33, c32, c31]
        mask = LaurentSymbol(1, {(e,): c for e, c in zip(range(-6, 6), coeffs)})
        K = 1 / (
            24 * w * (2 * w - 1) ** 3 * (2 * w + 1) ** 3 * (4 * w**2 - 3) * (w + 1)
        )
        A = 16 * w**4 + 16 * w**3 + 3
        B = -64 * w**6 - 64 * w**5 + 32 * w**4 + 32 * w**3 - 12 * w**2 - 12 * w - 6
        factored = (
            _poly1([1, 1, 1]) ** 2
            * _poly1([1, 1])
            * _poly1([1, 4 * w**2 - 2, 16 * w**4 - 16 * w**2 + 3, 4 * w**2 - 2, 1])
            * _poly1([A, B, A])
        ).shift(-6) * (-K)
        if mask.max_diff(factored) > _CROSS_CHECK_TOL:
            raise CatalogError(f"dual4_ternary: construction mismatch at level {k}")
        return mask

    return SchemeSpec(
        "dual4_ternary",
        M,
        rule,
        tau=(-0.25,),
        space=ExpPolySpace([((0,), (0,)), ((1,), (0,)), ((0,), (lamc,)), ((0,), (-lamc,))]),
    )


def dual4_ternary_limit_mask() -> LaurentSymbol:
    lim = [
        Fraction(-35, 1296),
        Fraction(-1, 16),
        Fraction(-55, 1296),
        Fraction(77, 432),
        Fraction(9, 16),
        Fraction(385, 432),
        Fraction(385, 432),
        Fraction(9, 16),
        Fraction(77, 432),
        Fraction(-55, 1296),
        Fraction(-1, 16),
        Fraction(-35, 1296),
    ]
    return LaurentSymbol(1, {(e,): float(c) for e, c in zip(range(-6, 6), lim)})


def dual4_ternary_limit_symbol() -> LaurentSymbol:
    """-z^-6 (1/1296) (z^2+z+1)^4 (z+1) (35 z^2 - 94 z + 35), expanded exactly."""
    prod = _poly1([1, 1, 1]) ** 4 * _poly1([1, 1]) * _poly1([35, -94, 35])
    return prod.shift(-6) * (-1 / 1296)


# -- butterfly -----------------------------------------------------------------


def _butterfly_exact_coeffs() -> dict[tuple[int, int], Fraction]:
    """Centered interpolatory butterfly combination, exact in u = r1 z1, w = r2 z2.

    The three-directional factors are expanded over the rationals; recentering
    by (u w)^-3 leaves the even-even part exactly delta, so substituting
    numeric r keeps the scheme exactly interpolatory at every level.
    """

    def conv(a, b):
        out: dict[tuple[int, int], Fraction] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = (ea[0] + eb[0], ea[1] + eb[1])
                out[e] = out.get(e, Fraction(0)) + ca * cb
        return {e: c for e, c in out.items() if c != 0}

    def power(a, n):
        out = {(0, 0): Fraction(1)}
        for _ in range(n):
            out = conv(out, a)
        return out

    half = Fraction(1, 2)
    fu = {(0, 0): half, (1, 0): half}
    fw = {(0, 0): half, (0, 1): half}
    fuw = {(0, 0): half, (1, 1): half}

    def B(j, h, ell):
        return conv(conv(power(fu, j), power(fw, h)), power(fuw, ell))

    combo: dict[tuple[int, int], Fraction] = {}
    for prefactor, weight, b in (
        ((1, 1), 7, B(2, 2, 2)),
        ((1, 0), -2, B(1, 3, 3)),
        ((0, 1), -2, B(3, 1, 3)),
        ((1, 1), -2, B(3, 3, 1)),
    ):
        for e, c in b.items():
            key = (e[0] + prefactor[0], e[1] + prefactor[1])
            combo[key] = combo.get(key, Fraction(0)) + 4 * weight * c
    return {(e[0] - 3, e[1] - 3): c for e, c in combo.items() if c != 0}


_BUTTERFLY_COEFFS = _butterfly_exact_coeffs()


def butterfly(lam) -> SchemeSpec:
    """Interpolatory butterfly scheme for M = 2I, centered on [-3, 3]^2.

    Generates and reproduces span{x^gamma exp(lambda . x) : |gamma| < 4} with
    shift parameter (0, 0).
    """
    lamv = _axis_lambda(lam, 2)
    M = DilationMatrix([[2, 0], [0, 2]])

    def rule(k: int) -> LaurentSymbol:
        r1 = cmath.exp(lamv[0] * 2.0 ** -(k + 1))
        r2 = cmath.exp(lamv[1] * 2.0 ** -(k + 1))
        terms = {
            e: float(c) * r1 ** e[0] * r2 ** e[1]
            for e, c in _BUTTERFLY_COEFFS.items()
        }
        return LaurentSymbol(2, terms)

    space = ExpPolySpace(
        [(g, lamv) for g in product(range(4), repeat=2) if sum(g) < 4]
    )
    return SchemeSpec("butterfly", M, rule, tau=(0.0, 0.0), space=space)


# -- sheared convolution ---------------------------------------------------------

# The digit set the sheared scheme is built over; a valid transversal of
# Z^2 / M Z^2 for M = [[2,1],[0,2]], staircase-shaped rather than the box.
SHEAR_DIGITS = ((0, 0), (1, 0), (1, 1), (2, 1))


def sheared_convolution(lam, normalized: bool = False) -> SchemeSpec:
    """Squared digit-sum scheme for M = [[2,1],[0,2]].

    Unnormalized: a^[k] = (1/4) (b^[k])^2 reproduces exp(lambda . x) with
    shift (0, 0) and nothing more.  Normalized: the extra factor
    r_k^-(2,1) makes the scheme reproduce {x^gamma exp : |gamma| <= 1} with
    shift (1, 1).
    """
    M = DilationMatrix([[2, 1], [0, 2]])
    lamv = _axis_lambda(lam, 2)

    def rule(k: int) -> LaurentSymbol:
        w = np.array(lamv, dtype=complex) @ M.inv_power(k + 1)
        b = LaurentSymbol(
            2,
            {
                eps: cmath.exp(complex(w[0] * eps[0] + w[1] * eps[1]))
                for eps in SHEAR_DIGITS
            },
        )
        mask = b * b * 0.25
        if normalized:
            # K = (1/4) v^(M tau - tau) with M tau - tau = (2, 1) for tau = (1, 1)
            mask = mask * cmath.exp(-complex(2 * w[0] + w[1]))
        return mask

    if normalized:
        tau = (1.0, 1.0)
        space = ExpPolySpace(
            [((0, 0), lamv), ((1, 0), lamv), ((0, 1), lamv)]
        )
        name = "sheared_convolution:normalized"
    else:
        tau = (0.0, 0.0)
        space = ExpPolySpace([((0, 0), lamv)])
        name = "sheared_convolution"
    return SchemeSpec(name, M, rule, tau=tau, space=space)


# -- sqrt3 schemes ----------------------------------------------------------------


def _sqrt3_matrix() -> DilationMatrix:
    return DilationMatrix([[1, 2], [-2, -1]])


def sqrt3_schemes() -> dict[str, SchemeSpec]:
    """The two stationary schemes for M = [[1,2],[-2,-1]] (M^2 = -3I).

    "approximating" reproduces linear polynomials, "interpolatory" is exactly
    interpolatory and reproduces quadratics, both with shift (0, 0).
    """
    M = _sqrt3_matrix()
    sixth, third = 1 / 6, 1 / 3
    approx = LaurentSymbol(
        2,
        {
            (1, 1): sixth,
            (-1, -1): sixth,
            (-1, 2): sixth,
            (-2, 1): sixth,
            (1, -2): sixth,
            (2, -1): sixth,
            (-1, 0): third,
            (0, 1): third,
            (1, -1): third,
            (0, -1): third,
            (1, 0): third,
            (-1, 1): third,
        },
    )
    ninth = 1 / 9
    interp_terms = {(0, 0): 1.0}
    for e in [(-2, 0), (-2, 2), (0, 2), (2, 0), (2, -2), (0, -2)]:
        interp_terms[e] = -ninth
    for e in [(-1, 0), (-1, 1), (0, 1), (1, 0), (1, -1), (0, -1)]:
        interp_terms[e] = 4 * ninth
    interp = LaurentSymbol(2, interp_terms)
    return {
        "approximating": SchemeSpec.stationary(
            "sqrt3:approximating",
            M,
            approx,
            tau=(0.0, 0.0),
            space=ExpPolySpace.polynomials(2, 1),
        ),
        "interpolatory": SchemeSpec.stationary(
            "sqrt3:interpolatory",
            M,
            interp,
            tau=(0.0, 0.0),
            space=ExpPolySpace.polynomials(2, 2),
        ),
    }


# -- registry ---------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    summary: str
    parameters: dict
    documented_tau: str
    documented_space: str
    citation: str
    factory: Callable

    def to_json_obj(self) -> dict:
        return {
            "id": self.id,
            "summary": self.summary,
            "parameters": self.parameters,
            "documented_tau": self.documented_tau,
            "documented_space": self.documented_space,
            "citation": self.citation,
        }


def _sqrt3_factory(variant: str = "approximating") -> SchemeSpec:
    schemes = sqrt3_schemes()
    if variant not in schemes:
        raise CatalogParameterError("sqrt3 variant must be 'approximating' or 'interpolatory'")
    return schemes[variant]


CATALOG: dict[str, CatalogEntry] = {
    e.id: e
    for e in [
        CatalogEntry(
            id="exp_bspline",
            summary="m-ary exponential B-spline scheme, optionally n-fold and renormalized",
            parameters={"m": "arity >= 2", "lambda": "frequency", "n_fold": "factor multiplicity", "tau": "optional shift for renormalization"},
            documented_tau="0 (raw, n_fold=1); the requested tau when renormalized",
            documented_space="exp(lambda x); plus x exp(lambda x) for n_fold >= 2 at tau = n/2",
            citation="exponential B-spline smoothing factors",
            factory=exp_bspline,
        ),
        CatalogEntry(
            id="exp_product",
            summary="product of geometric-sum factors at several frequencies",
            parameters={"m": "arity >= 2", "factors": "[[lambda, multiplicity], ...]", "normalization": "null | 'two_factor'"},
            documented_tau="n for two distinct factors of equal multiplicity n",
            documented_space="exp(lambda x) and exp(mu x) (two-factor normalized)",
            citation="convolved exponential B-splines",
            factory=exp_product,
        ),
        CatalogEntry(
            id="exp_box_spline",
            summary="tensor digit-set scheme for M = nI with exponential weights",
            parameters={"n_dil": "dilation factor >= 2", "lambda": "frequency vector"},
            documented_tau="0",
            documented_space="exp(lambda . x)",
            citation="exponential box splines on the unit box",
            factory=exp_box_spline,
        ),
        CatalogEntry(
            id="dual4_binary",
            summary="binary dual four-point scheme reproducing conic sections",
            parameters={"lambda": "nonzero, real or purely imaginary"},
            documented_tau="-1/2",
            documented_space="span{1, x, exp(lambda x), exp(-lambda x)}",
            citation="non-stationary analog of the dual four-point scheme",
            factory=dual4_binary,
        ),
        CatalogEntry(
            id="dual4_ternary",
            summary="ternary dual four-point scheme reproducing conic sections",
            parameters={"lambda": "nonzero, real or purely imaginary"},
            documented_tau="-1/4",
            documented_space="span{1, x, exp(lambda x), exp(-lambda x)}",
            citation="ternary dual four-point family",
            factory=dual4_ternary,
        ),
        CatalogEntry(
            id="butterfly",
            summary="interpolatory butterfly scheme built from three-directional factors",
            parameters={"lambda": "vector in R^2 or i R^2"},
            documented_tau="(0, 0)",
            documented_space="x^gamma exp(lambda . x), |gamma| < 4",
            citation="butterfly interpolatory surface scheme",
            factory=butterfly,
        ),
        CatalogEntry(
            id="sheared_convolution",
            summary="squared digit-sum scheme for the shear dilation [[2,1],[0,2]]",
            parameters={"lambda": "vector in R^2 or i R^2", "normalized": "bool"},
            documented_tau="(0, 0) raw; (1, 1) normalized",
            documented_space="exp(lambda . x) raw; |gamma| <= 1 normalized",
            citation="convolution scheme on a sheared lattice",
            factory=sheared_convolution,
        ),
        CatalogEntry(
            id="sqrt3",
            summary="stationary sqrt(3) schemes for M = [[1,2],[-2,-1]]",
            parameters={"variant": "'approximating' | 'interpolatory'"},
            documented_tau="(0, 0)",
            documented_space="linear polynomials (approximating); quadratics (interpolatory)",
            citation="sqrt(3) triangular subdivision masks",
            factory=_sqrt3_factory,
        ),
    ]
}
