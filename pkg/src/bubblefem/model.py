"""Shared domain types: operator coefficients, meshes, boundary conditions,
problem definitions, and the evaluable solution field.

The steady operator is ``epsilon*u'' + kappa*u' + lambda*u = 0`` with the
coefficients stored exactly as given (no sign normalisation); diffusion-
dominated benchmarks therefore carry a negative ``epsilon``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import IllPosedProblemError

_PROFILE_END_TOL = 1e-8


@dataclass(frozen=True)
class TransportCoefficients:
    """Coefficient triple of the operator epsilon*u'' + kappa*u' + lambda*u."""

    epsilon: float
    kappa: float
    lambda_: float

    def __post_init__(self):
        vals = (self.epsilon, self.kappa, self.lambda_)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"coefficients must be finite, got {vals}")
        if all(v == 0.0 for v in vals):
            raise ValueError("null operator: at least one coefficient must be nonzero")


class BCType(Enum):
    DIRICHLET = "dirichlet"
    NEUMANN_FLUX = "neumann"


@dataclass(frozen=True)
class BoundaryCondition:
    """Dirichlet value or prescribed boundary derivative du/dx."""

    kind: BCType
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"boundary value must be finite, got {self.value}")

    @staticmethod
    def dirichlet(value: float) -> "BoundaryCondition":
        return BoundaryCondition(BCType.DIRICHLET, float(value))

    @staticmethod
    def neumann_flux(value: float) -> "BoundaryCondition":
        return BoundaryCondition(BCType.NEUMANN_FLUX, float(value))

    @property
    def is_dirichlet(self) -> bool:
        return self.kind is BCType.DIRICHLET


@dataclass(frozen=True)
class EnrichmentKind:
    """Trial-space choice: order 1 keeps plain hat functions, order p >= 2
    adds the polynomial bubble span {x^k (l - x), k = 1..p-1} per element."""

    order: int

    def __post_init__(self):
        if not isinstance(self.order, (int, np.integer)) or self.order < 1:
            raise ValueError(f"enrichment order must be an integer >= 1, got {self.order!r}")

    @property
    def bubble_count(self) -> int:
        """Number of bubble coefficients carried per element."""
        return max(0, self.order - 1)

    @property
    def name(self) -> str:
        return {1: "linear", 2: "quadratic", 3: "cubic"}.get(self.order, f"poly{self.order}")


LINEAR = EnrichmentKind(1)
QUADRATIC_BUBBLE = EnrichmentKind(2)
CUBIC_BUBBLE = EnrichmentKind(3)


def polynomial_bubble(order: int) -> EnrichmentKind:
    """Bubble enrichment of polynomial order ``order`` (>= 2)."""
    if order < 2:
        raise ValueError(f"polynomial bubble order must be >= 2, got {order}")
    return EnrichmentKind(int(order))


class Mesh1D:
    """Strictly increasing node coordinates x_0 < x_1 < ... < x_N."""

    def __init__(self, nodes: Sequence[float]):
        arr = np.array(nodes, dtype=float)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("mesh needs at least two nodes")
        if not np.all(np.isfinite(arr)):
            raise ValueError("mesh nodes must be finite")
        if not np.all(np.diff(arr) > 0):
            raise ValueError("mesh nodes must be strictly increasing")
        arr.setflags(write=False)
        self.nodes = arr

    @property
    def n_elements(self) -> int:
        return self.nodes.size - 1

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.nodes)

    @property
    def a(self) -> float:
        return float(self.nodes[0])

    @property
    def b(self) -> float:
        return float(self.nodes[-1])

    def element_index(self, x: float) -> int:
        """Index of the element containing x (right-closed at the last node)."""
        if x < self.a or x > self.b:
            raise ValueError(f"x={x} outside domain [{self.a}, {self.b}]")
        j = int(np.searchsorted(self.nodes, x, side="right")) - 1
        return min(max(j, 0), self.n_elements - 1)

    def __repr__(self):
        return f"Mesh1D({self.n_elements} elements on [{self.a}, {self.b}])"


def uniform_mesh(a: float, b: float, n_elements: int) -> Mesh1D:
    """Mesh with ``n_elements`` equal sub-intervals of [a, b]."""
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    if not isinstance(n_elements, (int, np.integer)) or n_elements < 1:
        raise ValueError(f"n_elements must be an integer >= 1, got {n_elements!r}")
    return Mesh1D(np.linspace(a, b, n_elements + 1))


@dataclass(frozen=True)
class SteadyProblem:
    """Boundary value problem for the steady transport operator on [a, b]."""

    coefficients: TransportCoefficients
    domain: tuple[float, float]
    bc_left: BoundaryCondition
    bc_right: BoundaryCondition

    def __post_init__(self):
        a, b = self.domain
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise ValueError(f"invalid domain {self.domain}")
        if not (self.bc_left.is_dirichlet or self.bc_right.is_dirichlet):
            raise IllPosedProblemError(
                "at least one boundary condition must be Dirichlet"
            )


@dataclass(frozen=True)
class TransientProblem:
    """Diffusion with lateral loss: du/dt + epsilon*u'' + lambda*u = 0 on [a, b],
    homogeneous Dirichlet ends, initial profile u(x, 0) = f(x).  No convection."""

    epsilon: float
    domain: tuple[float, float]
    initial_profile: Callable[[float], float]
    lambda_: float = 1.0

    def __post_init__(self):
        a, b = self.domain
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise ValueError(f"invalid domain {self.domain}")
        if not (math.isfinite(self.epsilon) and math.isfinite(self.lambda_)):
            raise ValueError("epsilon and lambda must be finite")
        scale = max(1.0, abs(float(self.initial_profile(0.5 * (a + b)))))
        for end in (a, b):
            v = float(self.initial_profile(end))
            if abs(v) > _PROFILE_END_TOL * scale:
                raise ValueError(
                    f"initial profile must vanish at the boundary: f({end}) = {v}"
                )


class SolutionField:
    """Nodal values plus per-element bubble coefficients, evaluable anywhere.

    Within element j with local coordinate t = x - x_j and length l:

        u(x) = u_j (1 - t/l) + u_{j+1} t/l + t (l - t) sum_k c_{j,k} t^(k-1)

    The bubble factor t (l - t) is kept in product form so it vanishes
    exactly at both element endpoints.
    """

    def __init__(
        self,
        mesh: Mesh1D,
        nodal_values: Sequence[float],
        enrichment: EnrichmentKind = LINEAR,
        bubble_coeffs: np.ndarray | None = None,
    ):
        values = np.asarray(nodal_values, dtype=float)
        if values.shape != mesh.nodes.shape:
            raise ValueError(
                f"expected {mesh.nodes.size} nodal values, got {values.size}"
            )
        n_bub = enrichment.bubble_count
        if bubble_coeffs is None:
            bubble_coeffs = np.zeros((mesh.n_elements, n_bub))
        coeffs = np.asarray(bubble_coeffs, dtype=float).reshape(mesh.n_elements, -1)
        if coeffs.shape[1] != n_bub:
            raise ValueError(
                f"expected {n_bub} bubble coefficients per element, got {coeffs.shape[1]}"
            )
        self.mesh = mesh
        self.nodal_values = values
        self.enrichment = enrichment
        self.bubble_coeffs = coeffs

    def eval_on_element(self, j: int, local: np.ndarray) -> np.ndarray:
        """Evaluate at local coordinates ``local`` in [0, l_j] of element j."""
        local = np.asarray(local, dtype=float)
        l = self.mesh.lengths[j]
        u0 = self.nodal_values[j]
        u1 = self.nodal_values[j + 1]
        out = u0 * (1.0 - local / l) + u1 * (local / l)
        coeffs = self.bubble_coeffs[j]
        if coeffs.size:
            # c_1 + c_2 t + ... evaluated by Horner, times the vanishing factor
            poly = np.zeros_like(local)
            for c in coeffs[::-1]:
                poly = poly * local + c
            out = out + local * (l - local) * poly
        return out

    def value(self, x: float) -> float:
        """Field value at x; returns the stored nodal value exactly at nodes."""
        nodes = self.mesh.nodes
        if x < nodes[0] or x > nodes[-1]:
            raise ValueError(f"x={x} outside domain [{nodes[0]}, {nodes[-1]}]")
        idx = int(np.searchsorted(nodes, x))
        if idx < nodes.size and nodes[idx] == x:
            return float(self.nodal_values[idx])
        j = self.mesh.element_index(x)
        return float(self.eval_on_element(j, np.array([x - nodes[j]]))[0])

    def __call__(self, x: float) -> float:
        return self.value(x)


def eval_field(field: SolutionField, x: float) -> float:
    """Evaluate a solution field at a point of its domain."""
    return field.value(x)
