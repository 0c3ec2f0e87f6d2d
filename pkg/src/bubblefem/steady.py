"""Enriched shape functions, element stiffness matrices, global assembly,
boundary conditions, and the steady solve.

The weak form of epsilon*u'' + kappa*u' + lambda*u = 0 on one element reads

    -eps int w' u' + kap int w u' + lam int w u  =  -eps {w u'}_0^l

with Bubnov-Galerkin weights equal to the enriched trial basis.  Entries
are integrated by Gauss quadrature at runtime; the closed-form element
matrix exists for cross-checking only.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .enrichment import ls_bubble, quadratic_ab
from .errors import DegenerateOperatorError, IllPosedProblemError
from .linalg import TridiagonalSystem, solve_tridiagonal
from .model import (
    EnrichmentKind,
    LINEAR,
    Mesh1D,
    SolutionField,
    SteadyProblem,
    TransportCoefficients,
)
from .quadrature import gauss_rule

_DOMAIN_MATCH_TOL = 1e-12


@dataclass(frozen=True)
class ShapeFunctions:
    """Enriched nodal shape functions on one element of length l.

    N_left  = (l - x)/l + x (l - x) * poly(coeff_left)
    N_right = x/l       + x (l - x) * poly(coeff_right)

    where poly(c) = c_1 + c_2 x + ...; empty coefficient arrays give the
    plain hat functions.  The bubble factor is evaluated in product form,
    so N_left(0) = 1, N_left(l) = 0 (and mirrored) hold exactly.
    """

    length: float
    coeff_left: np.ndarray
    coeff_right: np.ndarray

    @property
    def order(self) -> int:
        return self.coeff_left.size + 1

    @property
    def a_coef(self) -> float:
        """Quadratic-part A of the nodal-to-bubble map c = (A-B)u0 + (A+B)ul."""
        s = self.coeff_left[0] if self.coeff_left.size else 0.0
        t = self.coeff_right[0] if self.coeff_right.size else 0.0
        return float(0.5 * (s + t))

    @property
    def b_coef(self) -> float:
        s = self.coeff_left[0] if self.coeff_left.size else 0.0
        t = self.coeff_right[0] if self.coeff_right.size else 0.0
        return float(0.5 * (t - s))

    def _bubble(self, coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
        if not coeffs.size:
            return np.zeros_like(x)
        poly = np.zeros_like(x)
        for c in coeffs[::-1]:
            poly = poly * x + c
        return x * (self.length - x) * poly

    def _bubble_deriv(self, coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
        # d/dx [x^k (l - x)] = k l x^(k-1) - (k+1) x^k
        out = np.zeros_like(x)
        for k, c in enumerate(coeffs, start=1):
            out = out + c * (k * self.length * x ** (k - 1) - (k + 1) * x**k)
        return out

    def left(self, x):
        x = np.asarray(x, dtype=float)
        return (self.length - x) / self.length + self._bubble(self.coeff_left, x)

    def right(self, x):
        x = np.asarray(x, dtype=float)
        return x / self.length + self._bubble(self.coeff_right, x)

    def left_deriv(self, x):
        x = np.asarray(x, dtype=float)
        return -1.0 / self.length + self._bubble_deriv(self.coeff_left, x)

    def right_deriv(self, x):
        x = np.asarray(x, dtype=float)
        return 1.0 / self.length + self._bubble_deriv(self.coeff_right, x)


@dataclass(frozen=True)
class ElementStiffness:
    """2x2 element matrix and the boundary-flux placeholders of its rhs."""

    entries: np.ndarray
    rhs_flux: np.ndarray


def shape_functions(
    coeffs: TransportCoefficients, l: float, enrichment: EnrichmentKind
) -> ShapeFunctions:
    """Shape functions for one element; hats for LINEAR, otherwise the
    least-squares bubble applied to unit nodal values."""
    if not l > 0:
        raise ValueError(f"element length must be positive, got {l}")
    if enrichment.order == 1:
        empty = np.zeros(0)
        return ShapeFunctions(length=l, coeff_left=empty, coeff_right=empty)
    if enrichment.order == 2:
        ab = quadratic_ab(coeffs, l)
        return ShapeFunctions(
            length=l,
            coeff_left=np.array([ab.a_coef - ab.b_coef]),
            coeff_right=np.array([ab.a_coef + ab.b_coef]),
        )
    left = ls_bubble(coeffs, l, 1.0, 0.0, order=enrichment.order).coeffs
    right = ls_bubble(coeffs, l, 0.0, 1.0, order=enrichment.order).coeffs
    return ShapeFunctions(length=l, coeff_left=left, coeff_right=right)


def default_quad_points(order: int) -> int:
    """Rule size that integrates the element matrix exactly (degree 2*order)."""
    if order + 1 > 10:
        raise ValueError(
            f"enrichment order {order} exceeds exact-quadrature reach (order <= 9)"
        )
    return min(max(4, order + 2), 10)


def element_stiffness_quadrature(
    coeffs: TransportCoefficients, shapes: ShapeFunctions, n_quad: int | None = None
) -> ElementStiffness:
    """Element matrix by Gauss quadrature of the weak-form integrals."""
    if n_quad is None:
        n_quad = default_quad_points(shapes.order)
    rule = gauss_rule(n_quad)
    l = shapes.length
    xs = 0.5 * l * (rule.points + 1.0)
    w = 0.5 * l * rule.weights
    n = [shapes.left(xs), shapes.right(xs)]
    dn = [shapes.left_deriv(xs), shapes.right_deriv(xs)]
    k = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            k[i, j] = np.sum(
                w
                * (
                    -coeffs.epsilon * dn[i] * dn[j]
                    + coeffs.kappa * n[i] * dn[j]
                    + coeffs.lambda_ * n[i] * n[j]
                )
            )
    return ElementStiffness(entries=k, rhs_flux=np.zeros(2))


def element_stiffness_closed(
    coeffs: TransportCoefficients, l: float, a: float, b: float
) -> ElementStiffness:
    """Closed-form element matrix for quadratic enrichment (A, B) = (a, b).

    Cross-check path only; assembly always integrates numerically.
    """
    if not l > 0:
        raise ValueError(f"element length must be positive, got {l}")
    eps, kap, lam = coeffs.epsilon, coeffs.kappa, coeffs.lambda_
    am, ap = a - b, a + b
    e = (
        -30 * eps + 10 * lam * l**2 - 15 * kap * l
        + lam * l**6 * am**2 + 5 * lam * l**4 * am - 10 * eps * l**4 * am**2
    ) / (30 * l)
    f = (
        60 * eps + 10 * lam * l**2 + 30 * kap * l
        + 2 * lam * l**6 * (a**2 - b**2) + 10 * lam * l**4 * a
        + 20 * kap * l**3 * a - 20 * eps * l**4 * (a**2 - b**2)
    ) / (60 * l)
    g = (
        60 * eps + 10 * lam * l**2 - 30 * kap * l
        + 2 * lam * l**6 * (a**2 - b**2) + 10 * lam * l**4 * a
        - 20 * kap * l**3 * a - 20 * eps * l**4 * (a**2 - b**2)
    ) / (60 * l)
    h = (
        -30 * eps + 10 * lam * l**2 + 15 * kap * l
        + lam * l**6 * ap**2 + 5 * lam * l**4 * ap - 10 * eps * l**4 * ap**2
    ) / (30 * l)
    return ElementStiffness(entries=np.array([[e, f], [g, h]]), rhs_flux=np.zeros(2))


def element_shapes(
    coeffs: TransportCoefficients, mesh: Mesh1D, enrichment: EnrichmentKind
) -> list[ShapeFunctions]:
    """Per-element shape functions, memoised by element length.

    A degenerate operator on some element falls back to plain hats for
    that element and emits a warning.
    """
    cache: dict[float, ShapeFunctions] = {}
    out = []
    for l in mesh.lengths:
        l = float(l)
        if l not in cache:
            try:
                cache[l] = shape_functions(coeffs, l, enrichment)
            except DegenerateOperatorError:
                warnings.warn(
                    f"bubble coefficients degenerate for l={l}; "
                    "falling back to linear elements",
                    stacklevel=2,
                )
                cache[l] = shape_functions(coeffs, l, LINEAR)
        out.append(cache[l])
    return out


def _check_mesh_covers(problem_domain: tuple[float, float], mesh: Mesh1D) -> None:
    a, b = problem_domain
    span = b - a
    if abs(mesh.a - a) > _DOMAIN_MATCH_TOL * span or abs(mesh.b - b) > _DOMAIN_MATCH_TOL * span:
        raise ValueError(
            f"mesh [{mesh.a}, {mesh.b}] does not cover problem domain [{a}, {b}]"
        )


def _assemble_from_shapes(
    problem: SteadyProblem,
    mesh: Mesh1D,
    shapes: list[ShapeFunctions],
    n_quad: int | None,
) -> TridiagonalSystem:
    n_nodes = mesh.n_elements + 1
    sub = np.zeros(n_nodes - 1)
    diag = np.zeros(n_nodes)
    sup = np.zeros(n_nodes - 1)
    rhs = np.zeros(n_nodes)
    for j, s in enumerate(shapes):
        k = element_stiffness_quadrature(problem.coefficients, s, n_quad).entries
        diag[j] += k[0, 0]
        diag[j + 1] += k[1, 1]
        sup[j] += k[0, 1]
        sub[j] += k[1, 0]

    eps = problem.coefficients.epsilon
    # natural boundary term -eps {w u'}: +eps*g at the left end, -eps*g at the right
    if not problem.bc_left.is_dirichlet:
        rhs[0] += eps * problem.bc_left.value
    if not problem.bc_right.is_dirichlet:
        rhs[-1] += -eps * problem.bc_right.value

    # Dirichlet by row replacement and column elimination into neighbour rhs
    if problem.bc_left.is_dirichlet:
        value = problem.bc_left.value
        rhs[1] -= sub[0] * value
        sub[0] = 0.0
        diag[0] = 1.0
        sup[0] = 0.0
        rhs[0] = value
    if problem.bc_right.is_dirichlet:
        value = problem.bc_right.value
        rhs[-2] -= sup[-1] * value
        sup[-1] = 0.0
        diag[-1] = 1.0
        sub[-1] = 0.0
        rhs[-1] = value
    return TridiagonalSystem(sub=sub, diag=diag, sup=sup, rhs=rhs)


def assemble_steady(
    problem: SteadyProblem,
    mesh: Mesh1D,
    enrichment: EnrichmentKind = LINEAR,
    n_quad: int | None = None,
) -> TridiagonalSystem:
    """Assemble the global tridiagonal system with boundary conditions applied."""
    _check_mesh_covers(problem.domain, mesh)
    if not (problem.bc_left.is_dirichlet or problem.bc_right.is_dirichlet):
        raise IllPosedProblemError("at least one Dirichlet condition is required")
    shapes = element_shapes(problem.coefficients, mesh, enrichment)
    return _assemble_from_shapes(problem, mesh, shapes, n_quad)


def solve_steady(
    problem: SteadyProblem,
    mesh: Mesh1D,
    enrichment: EnrichmentKind = LINEAR,
    n_quad: int | None = None,
) -> SolutionField:
    """Solve the steady problem; the field carries per-element bubble
    coefficients reconstructed from the nodal solution."""
    _check_mesh_covers(problem.domain, mesh)
    shapes = element_shapes(problem.coefficients, mesh, enrichment)
    system = _assemble_from_shapes(problem, mesh, shapes, n_quad)
    nodal = solve_tridiagonal(system)
    n_bub = enrichment.bubble_count
    bubble = np.zeros((mesh.n_elements, n_bub))
    for j, s in enumerate(shapes):
        k = s.coeff_left.size
        if k:
            bubble[j, :k] = s.coeff_left * nodal[j] + s.coeff_right * nodal[j + 1]
    return SolutionField(mesh, nodal, enrichment, bubble)
