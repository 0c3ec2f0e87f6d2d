"""Least-squares bubble coefficients.

The enriched trial on a master element [0, l] is

    u(x) = (l - x)/l * u0 + x/l * ul + sum_k c_k x^k (l - x),   k = 1..p-1.

Inserting it into the operator L = epsilon d2/dx2 + kappa d/dx + lambda
leaves a polynomial residual R(x); the coefficients c_k are chosen to
minimise J = int_0^l R^2 dx.  J is a convex quadratic in the c_k, so the
minimiser solves the normal equations assembled here from exact monomial
antiderivatives.  That numeric minimiser (``ls_bubble``) is the canonical
coefficient source; the closed-form expressions in this module exist as
cross-checks of it.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DegenerateOperatorError
from .model import TransportCoefficients
from .quadrature import gauss_rule

# A denominator or Gram entry is degenerate when it is this small relative
# to the magnitudes of the terms that formed it (catastrophic cancellation).
DEGENERACY_TOL = 1e-12
_MAX_CONDITION = 1.0 / DEGENERACY_TOL


@dataclass(frozen=True)
class ElementPolynomial:
    """Polynomial c_0 + c_1 x + ... on the master interval [0, l]."""

    coefficients: np.ndarray

    def __post_init__(self):
        arr = np.atleast_1d(np.asarray(self.coefficients, dtype=float))
        if not np.all(np.isfinite(arr)):
            raise ValueError("polynomial coefficients must be finite")
        object.__setattr__(self, "coefficients", arr)

    @property
    def degree(self) -> int:
        return self.coefficients.size - 1

    def derivative(self) -> "ElementPolynomial":
        if self.coefficients.size == 1:
            return ElementPolynomial(np.zeros(1))
        return ElementPolynomial(npoly.polyder(self.coefficients))

    def __call__(self, x):
        return npoly.polyval(x, self.coefficients)


def _integral(coeffs: np.ndarray, l: float) -> float:
    """Exact integral of a coefficient polynomial over [0, l]."""
    k = np.arange(coeffs.size)
    return float(np.sum(coeffs * l ** (k + 1) / (k + 1)))


def _product_integral(p: np.ndarray, q: np.ndarray, l: float) -> tuple[float, float]:
    """Integral of p*q over [0, l] and a cancellation scale for it.

    The scale is the same sum with every product coefficient replaced by
    its magnitude: if |integral| is tiny against the scale, the value is
    pure cancellation.
    """
    prod = npoly.polymul(p, q)
    return _integral(prod, l), _integral(np.abs(prod), l)


def apply_operator(coeffs: TransportCoefficients, poly: ElementPolynomial) -> ElementPolynomial:
    """Apply epsilon*p'' + kappa*p' + lambda*p to a polynomial."""
    d1 = poly.derivative()
    d2 = d1.derivative()
    out = npoly.polyadd(
        npoly.polyadd(coeffs.epsilon * d2.coefficients, coeffs.kappa * d1.coefficients),
        coeffs.lambda_ * poly.coefficients,
    )
    return ElementPolynomial(out)


def bubble_basis(l: float, order: int) -> list[ElementPolynomial]:
    """Bubble basis x^k (l - x), k = 1..order-1, on [0, l]."""
    basis = []
    for k in range(1, order):
        c = np.zeros(k + 2)
        c[k] = l
        c[k + 1] = -1.0
        basis.append(ElementPolynomial(c))
    return basis


def _linear_part(l: float, u0: float, ul: float) -> ElementPolynomial:
    return ElementPolynomial(np.array([u0, (ul - u0) / l]))


@dataclass(frozen=True)
class BubbleSolution:
    """Minimiser of the residual functional for one element.

    ``coeffs`` holds the p-1 coefficients multiplying x^k (l - x) and
    ``residual_value`` the value of the functional at the minimiser.
    """

    order: int
    coeffs: np.ndarray
    residual_value: float


def residual_functional(
    coeffs: TransportCoefficients,
    l: float,
    u0: float,
    ul: float,
    bubble: "BubbleSolution | Sequence[float]",
) -> float:
    """Integrated squared residual J = int_0^l R^2 dx, by exact integration."""
    if not l > 0:
        raise ValueError(f"element length must be positive, got {l}")
    bubble_coeffs = np.atleast_1d(
        np.asarray(bubble.coeffs if isinstance(bubble, BubbleSolution) else bubble, dtype=float)
    )
    residual = apply_operator(coeffs, _linear_part(l, u0, ul)).coefficients
    for c, b in zip(bubble_coeffs, bubble_basis(l, bubble_coeffs.size + 1)):
        residual = npoly.polyadd(residual, c * apply_operator(coeffs, b).coefficients)
    return _integral(npoly.polymul(residual, residual), l)


def ls_bubble(
    coeffs: TransportCoefficients, l: float, u0: float, ul: float, order: int = 2
) -> BubbleSolution:
    """Solve the normal equations for the bubble coefficients.

    This is the canonical coefficient source for the whole package; every
    closed form below is checked against it, never the other way round.
    """
    if not l > 0:
        raise ValueError(f"element length must be positive, got {l}")
    if order < 2:
        raise ValueError(f"bubble order must be >= 2, got {order}")
    op_basis = [apply_operator(coeffs, b).coefficients for b in bubble_basis(l, order)]
    op_linear = apply_operator(coeffs, _linear_part(l, u0, ul)).coefficients
    m = order - 1
    gram = np.empty((m, m))
    scale = np.empty((m, m))
    rhs = np.empty(m)
    for i in range(m):
        for j in range(i, m):
            gram[i, j], scale[i, j] = _product_integral(op_basis[i], op_basis[j], l)
            gram[j, i], scale[j, i] = gram[i, j], scale[i, j]
        rhs[i] = -_product_integral(op_basis[i], op_linear, l)[0]
    diag_bad = np.abs(np.diagonal(gram)) <= DEGENERACY_TOL * np.diagonal(scale)
    if np.any(diag_bad) or np.linalg.cond(gram) > _MAX_CONDITION:
        raise DegenerateOperatorError(
            f"normal equations are singular for coefficients {coeffs} and l={l}"
        )
    solution = np.linalg.solve(gram, rhs)
    value = residual_functional(coeffs, l, u0, ul, solution)
    return BubbleSolution(order=order, coeffs=solution, residual_value=value)


@dataclass(frozen=True)
class QuadraticEnrichment:
    """Per-element map from nodal values to the quadratic bubble coefficient:
    c = (A - B) u0 + (A + B) ul with A = a_coef, B = b_coef."""

    a_coef: float
    b_coef: float
    length: float

    def coefficient(self, u0: float, ul: float) -> float:
        return (self.a_coef - self.b_coef) * u0 + (self.a_coef + self.b_coef) * ul


def quadratic_ab(coeffs: TransportCoefficients, l: float) -> QuadraticEnrichment:
    """Nodal-to-bubble coefficient map from unit-nodal-value minimisations.

    For a symmetric operator (kappa = 0) the two unit solves coincide, so
    B is pinned to zero exactly.
    """
    right = ls_bubble(coeffs, l, 0.0, 1.0, order=2).coeffs[0]
    if coeffs.kappa == 0.0:
        return QuadraticEnrichment(a_coef=float(right), b_coef=0.0, length=l)
    left = ls_bubble(coeffs, l, 1.0, 0.0, order=2).coeffs[0]
    return QuadraticEnrichment(
        a_coef=float(0.5 * (left + right)), b_coef=float(0.5 * (right - left)), length=l
    )


def _check_denominator(den: float, terms: Sequence[float], context: str) -> None:
    if abs(den) <= DEGENERACY_TOL * max(abs(t) for t in terms):
        raise DegenerateOperatorError(f"degenerate denominator in {context}")


def _closed_form_terms(build, context: str) -> tuple:
    """Evaluate closed-form denominator terms, mapping float overflow to
    the degenerate-operator error."""
    try:
        return build()
    except OverflowError as exc:
        raise DegenerateOperatorError(f"coefficient overflow in {context}") from exc


def quadratic_ab_closed(coeffs: TransportCoefficients, l: float) -> QuadraticEnrichment:
    """Closed-form counterpart of :func:`quadratic_ab` (cross-check path)."""
    if not l > 0:
        raise ValueError(f"element length must be positive, got {l}")
    eps, kap, lam = coeffs.epsilon, coeffs.kappa, coeffs.lambda_
    terms = _closed_form_terms(
        lambda: (lam**2 * l**5, -20 * eps * lam * l**3, 10 * kap**2 * l**3, 120 * eps**2 * l),
        "quadratic enrichment",
    )
    den = sum(terms)
    _check_denominator(den, terms, "quadratic enrichment")
    a = 2.5 * (-(lam**2) * l**3 + 12 * eps * lam * l) / den
    b = 2.5 * (24 * eps * kap) / den
    return QuadraticEnrichment(a_coef=a, b_coef=b, length=l)


def quadratic_coefficient_closed(
    coeffs: TransportCoefficients, l: float, u0: float, ul: float
) -> float:
    """Closed-form quadratic bubble coefficient (cross-check path)."""
    return quadratic_ab_closed(coeffs, l).coefficient(u0, ul)


def transient_coefficient(epsilon: float, l: float) -> float:
    """Quadratic bubble coefficient of the transient operator (kappa = 0,
    lambda = 1, unit nodal sum), in closed form:

        c = -(5/2) (l^2 - 12 eps) / (l^4 - 20 eps l^2 + 120 eps^2)

    Note the least-squares sign: for epsilon = -1, l = pi/2 this yields
    c = -0.2062, while the stored reference tables for the transient
    benchmark are reproduced by the sign-flipped value +0.2062 (see the
    ``sign_compat`` flags).
    """
    if not l > 0:
        raise ValueError(f"element length must be positive, got {l}")
    terms = _closed_form_terms(
        lambda: (l**4, -20 * epsilon * l**2, 120 * epsilon**2), "transient coefficient"
    )
    den = sum(terms)
    _check_denominator(den, terms, "transient coefficient")
    return -2.5 * (l**2 - 12 * epsilon) / den


def cubic_closed_forms(
    coeffs: TransportCoefficients, l: float, u0: float, ul: float
) -> tuple[float, float]:
    """Reference closed-form expressions for the cubic coefficient pair.

    Kept verbatim for comparison purposes only: both numerators are known
    to deviate from the true normal-equation solution except in special
    cases (their common denominator is correct).  Never a computation path.
    """
    eps, kap, lam = coeffs.epsilon, coeffs.kappa, coeffs.lambda_
    den_terms = (
        l**8 * lam**4,
        52 * l**6 * lam**2 * (kap**2 - 2 * lam * eps),
        l**4 * (4320 * lam**2 * eps**2 - 1680 * lam * kap**2 * eps + 420 * kap**4),
        l**2 * eps**2 * (5040 * kap**2 - 60480 * lam * eps),
        302400 * eps**4,
    )
    den = sum(den_terms)
    _check_denominator(den, den_terms, "cubic enrichment")
    c_num = (
        l**7 * lam**4 * (ul - 6 * u0)
        - 40 * l**5 * lam**3 * eps * (ul - 13 * u0)
        - 70 * l**5 * lam**2 * kap**2 * (ul + 2 * u0)
        - 60 * l**4 * lam**2 * kap * eps * (13 * ul + 22 * u0)
        - 840 * l**3 * lam**2 * eps**2 * (5 * ul - 16 * u0)
        + 840 * l**3 * lam * eps * kap**2 * (-ul + 4 * u0)
        + 5040 * l**2 * eps**2 * kap * lam * (-ul + 6 * u0)
        + 2520 * l**2 * kap**3 * eps * (ul - u0)
        + 50400 * l * lam * eps**3 * (ul + 2 * u0)
        + 25200 * l * kap**2 * eps**2 * (ul - u0)
        + 151200 * kap * eps**3 * (ul - u0)
    )
    f_num = 7 * (
        l**6 * lam**4 * (-ul + u0)
        - 80 * l**4 * lam**3 * eps * (-ul + u0)
        + 10 * l**4 * lam**2 * kap**2 * (-ul + u0)
        + 300 * l**3 * lam**2 * kap * eps * (ul + u0)
        + 1320 * l**2 * lam**2 * eps**2 * (-ul + u0)
        - 600 * l**2 * lam * eps * kap**2 * (-ul + u0)
        - 3600 * l * eps**2 * kap * lam * (ul + u0)
        + 2520 * l**2 * kap**3 * eps * (ul - u0)
        - 7200 * l * lam * eps**3 * (-ul + u0)
        + 7200 * kap**2 * eps**2 * (-ul + u0)
    )
    return c_num / (l * den), f_num / (l * den)


def cubic_coefficients(
    coeffs: TransportCoefficients,
    l: float,
    u0: float,
    ul: float,
    check_closed_forms: bool = False,
) -> BubbleSolution:
    """Cubic bubble coefficients (c, f) from the 2x2 normal-equation solve.

    With ``check_closed_forms`` the reference closed-form expressions are
    evaluated alongside and any relative deviation beyond 1e-8 is reported
    as a warning; the normal-equation result is returned regardless.
    """
    solution = ls_bubble(coeffs, l, u0, ul, order=3)
    if check_closed_forms:
        closed = cubic_closed_forms(coeffs, l, u0, ul)
        for name, got, ref in zip(("c", "f"), closed, solution.coeffs):
            denom = max(abs(got), abs(ref))
            if denom > 0 and abs(got - ref) / denom > 1e-8:
                warnings.warn(
                    f"cubic closed form for {name} deviates from the normal-equation "
                    f"solution by {abs(got - ref) / denom:.3e} relative "
                    f"(closed={got:.12g}, solve={ref:.12g})",
                    stacklevel=2,
                )
    return solution


def bubble_2d_coefficient(
    l: float, h: float, u00: float, u0h: float, ul0: float, ulh: float
) -> float:
    """Bubble coefficient on the rectangular master element [0,l] x [0,h]
    for the operator d2/dx2 - d/dy, driven by the four corner values."""
    if not (l > 0 and h > 0):
        raise ValueError(f"element sides must be positive, got l={l}, h={h}")
    return 15.0 * (u00 - u0h + ul0 - ulh) / (h * (l**4 + 12 * h**2))


def residual_functional_2d(
    l: float, h: float, corners: Sequence[float], c: float, n_quad: int = 4
) -> float:
    """Squared-residual functional of the 2D trial, by tensor-product
    Gauss quadrature (exact: the integrand is polynomial of degree 4)."""
    if not (l > 0 and h > 0):
        raise ValueError(f"element sides must be positive, got l={l}, h={h}")
    u00, u0h, ul0, ulh = (float(v) for v in corners)
    rule = gauss_rule(n_quad)
    xs = 0.5 * l * (rule.points + 1.0)
    ys = 0.5 * h * (rule.points + 1.0)
    wx = 0.5 * l * rule.weights
    wy = 0.5 * h * rule.weights
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    W = np.outer(wx, wy)
    # residual of (bilinear + c x y (l-x)(h-y)) under d2/dx2 - d/dy
    r = (
        -2.0 * c * Y * (h - Y)
        - ((l - X) * (u0h - u00) + X * (ulh - ul0)) / (l * h)
        - c * X * (l - X) * (h - 2.0 * Y)
    )
    return float(np.sum(W * r * r))
