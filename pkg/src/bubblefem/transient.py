"""Partial-discretisation transient solver.

Space is discretised by (optionally bubble-enriched) linear elements while
time stays continuous, giving the ODE system

    Mg a'(t) + (lambda Mg + Kg) a(t) = 0

over the interior nodal values, with Mg the consistent mass matrix and
Kg = -eps * int w' w' the diffusion stiffness.  Homogeneous Dirichlet rows
are eliminated.  A trapezoidal one-step scheme integrates the system; the
two-element benchmark case is also solved in closed form through its
single decaying mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .enrichment import quadratic_ab, transient_coefficient
from .errors import AssemblyError, LinearSolveError
from .linalg import (
    TridiagonalSystem,
    solve_tridiagonal,
    symmetric_tridiagonal_is_spd,
    tridiagonal_matvec,
)
from .model import (
    EnrichmentKind,
    LINEAR,
    Mesh1D,
    QUADRATIC_BUBBLE,
    SolutionField,
    TransientProblem,
    TransportCoefficients,
    uniform_mesh,
)
from .quadrature import gauss_rule

_EIG_TOL = 1e-10
_MAX_POWER_ITERATIONS = 100_000


@dataclass(frozen=True)
class TransientElementMatrices:
    """Element mass [[L, M], [M, L]] and stiffness [[N, P], [P, N]] entries
    for enriched weights w = hat + c x (l - x)."""

    mass_diag: float
    mass_off: float
    stiff_diag: float
    stiff_off: float


def transient_element_matrices(epsilon: float, l: float, c: float) -> TransientElementMatrices:
    """Closed-form element matrices; cross-checked against quadrature."""
    if not l > 0:
        raise ValueError(f"element length must be positive, got {l}")
    mass_diag = (c**2 * l**6 + 5 * c * l**4 + 10 * l**2) / (30 * l)
    mass_off = (c**2 * l**6 + 5 * c * l**4 + 5 * l**2) / (30 * l)
    stiff_diag = -epsilon * (10 * c**2 * l**4 + 30) / (30 * l)
    stiff_off = -epsilon * (10 * c**2 * l**4 - 30) / (30 * l)
    return TransientElementMatrices(mass_diag, mass_off, stiff_diag, stiff_off)


def transient_element_matrices_quadrature(
    epsilon: float, l: float, c: float, n_quad: int = 4
) -> TransientElementMatrices:
    """Same entries by direct Gauss integration of int w w and -eps int w' w'
    (the independent oracle for the closed forms)."""
    if not l > 0:
        raise ValueError(f"element length must be positive, got {l}")
    rule = gauss_rule(n_quad)
    xs = 0.5 * l * (rule.points + 1.0)
    w = 0.5 * l * rule.weights
    w0 = (l - xs) / l + c * xs * (l - xs)
    w1 = xs / l + c * xs * (l - xs)
    dw0 = -1.0 / l + c * (l - 2 * xs)
    dw1 = 1.0 / l + c * (l - 2 * xs)
    return TransientElementMatrices(
        mass_diag=float(np.sum(w * w0 * w0)),
        mass_off=float(np.sum(w * w0 * w1)),
        stiff_diag=float(-epsilon * np.sum(w * dw0 * dw0)),
        stiff_off=float(-epsilon * np.sum(w * dw0 * dw1)),
    )


@dataclass
class TransientSystem:
    """Assembled interior-node system: symmetric tridiagonal Mg and Kg,
    the mesh, the reaction coefficient, and the per-element bubble c."""

    mass_diag: np.ndarray
    mass_off: np.ndarray
    stiff_diag: np.ndarray
    stiff_off: np.ndarray
    mesh: Mesh1D
    lambda_: float
    enrichment: EnrichmentKind
    bubble_c: np.ndarray

    @property
    def size(self) -> int:
        return self.mass_diag.size


def _element_bubble_coefficient(epsilon: float, lambda_: float, l: float) -> float:
    if lambda_ == 1.0:
        return transient_coefficient(epsilon, l)
    # general reaction coefficient: same least-squares map, unit nodal sum
    coeffs = TransportCoefficients(epsilon=epsilon, kappa=0.0, lambda_=lambda_)
    return quadratic_ab(coeffs, l).a_coef


def assemble_transient(
    problem: TransientProblem,
    mesh: Mesh1D,
    enrichment: EnrichmentKind = LINEAR,
    sign_compat: bool = False,
) -> TransientSystem:
    """Assemble mass and stiffness over interior nodes.

    ``sign_compat`` negates the least-squares bubble coefficient, matching
    the sign convention of the published two-element transient solution.
    """
    a, b = problem.domain
    span = b - a
    if abs(mesh.a - a) > 1e-12 * span or abs(mesh.b - b) > 1e-12 * span:
        raise ValueError(
            f"mesh [{mesh.a}, {mesh.b}] does not cover problem domain [{a}, {b}]"
        )
    if enrichment.order > 2:
        raise ValueError(
            "transient model supports linear or quadratic-bubble elements only"
        )
    if mesh.n_elements < 2:
        raise ValueError("transient mesh needs at least one interior node")

    n_nodes = mesh.n_elements + 1
    mass_diag = np.zeros(n_nodes)
    mass_off = np.zeros(n_nodes - 1)
    stiff_diag = np.zeros(n_nodes)
    stiff_off = np.zeros(n_nodes - 1)
    bubble_c = np.zeros(mesh.n_elements)
    cache: dict[float, float] = {}
    for j, l in enumerate(mesh.lengths):
        l = float(l)
        if enrichment.order == 2:
            if l not in cache:
                cache[l] = _element_bubble_coefficient(problem.epsilon, problem.lambda_, l)
            c = -cache[l] if sign_compat else cache[l]
        else:
            c = 0.0
        bubble_c[j] = c
        em = transient_element_matrices(problem.epsilon, l, c)
        mass_diag[j] += em.mass_diag
        mass_diag[j + 1] += em.mass_diag
        mass_off[j] += em.mass_off
        stiff_diag[j] += em.stiff_diag
        stiff_diag[j + 1] += em.stiff_diag
        stiff_off[j] += em.stiff_off

    # homogeneous Dirichlet ends: drop the boundary rows and columns
    return TransientSystem(
        mass_diag=mass_diag[1:-1],
        mass_off=mass_off[1:-1],
        stiff_diag=stiff_diag[1:-1],
        stiff_off=stiff_off[1:-1],
        mesh=mesh,
        lambda_=problem.lambda_,
        enrichment=enrichment,
        bubble_c=bubble_c,
    )


def _reaction_plus_stiffness(system: TransientSystem) -> tuple[np.ndarray, np.ndarray]:
    diag = system.lambda_ * system.mass_diag + system.stiff_diag
    off = system.lambda_ * system.mass_off + system.stiff_off
    return diag, off


def slowest_decay_rate(system: TransientSystem) -> float:
    """Decay exponent of the slowest mode: smallest omega with
    (lambda Mg + Kg) v = omega Mg v, so solutions behave like exp(-omega t)."""
    if not symmetric_tridiagonal_is_spd(system.mass_diag, system.mass_off):
        raise AssemblyError("mass matrix is not positive definite")
    a_diag, a_off = _reaction_plus_stiffness(system)
    if system.size == 1:
        return float(system.lambda_ + system.stiff_diag[0] / system.mass_diag[0])
    v = np.ones(system.size)
    v /= math.sqrt(float(v @ (tridiagonal_matvec(system.mass_off, system.mass_diag, system.mass_off, v))))
    omega_old = math.inf
    for _ in range(_MAX_POWER_ITERATIONS):
        bv = tridiagonal_matvec(system.mass_off, system.mass_diag, system.mass_off, v)
        y = solve_tridiagonal(TridiagonalSystem(sub=a_off, diag=a_diag, sup=a_off, rhs=bv))
        y /= np.linalg.norm(y)
        ay = tridiagonal_matvec(a_off, a_diag, a_off, y)
        by = tridiagonal_matvec(system.mass_off, system.mass_diag, system.mass_off, y)
        omega = float((y @ ay) / (y @ by))
        if abs(omega - omega_old) <= _EIG_TOL * max(1.0, abs(omega)):
            return omega
        omega_old = omega
        v = y
    raise LinearSolveError("inverse power iteration did not converge")


def step_trapezoidal(system: TransientSystem, state: np.ndarray, dt: float) -> np.ndarray:
    """One trapezoidal step: (Mg + dt/2 A) a1 = (Mg - dt/2 A) a0 with
    A = lambda Mg + Kg.  Second order, unconditionally stable here."""
    if not dt > 0:
        raise ValueError(f"time step must be positive, got {dt}")
    state = np.asarray(state, dtype=float)
    if state.size != system.size:
        raise ValueError(f"state size {state.size} does not match system {system.size}")
    a_diag, a_off = _reaction_plus_stiffness(system)
    lhs_diag = system.mass_diag + 0.5 * dt * a_diag
    lhs_off = system.mass_off + 0.5 * dt * a_off
    rhs_diag = system.mass_diag - 0.5 * dt * a_diag
    rhs_off = system.mass_off - 0.5 * dt * a_off
    rhs = tridiagonal_matvec(rhs_off, rhs_diag, rhs_off, state)
    return solve_tridiagonal(TridiagonalSystem(sub=lhs_off, diag=lhs_diag, sup=lhs_off, rhs=rhs))


class Trajectory:
    """Stored time levels of a transient solve, evaluable at (x, t).

    Spatial reconstruction uses the enriched basis of the solve: each
    nodal shape carries the same bubble term c x (l - x), so the field on
    element j has bubble coefficient c_j (u_j + u_{j+1}).
    """

    def __init__(
        self,
        times: np.ndarray,
        states: np.ndarray,
        mesh: Mesh1D,
        enrichment: EnrichmentKind,
        bubble_c: np.ndarray,
    ):
        self.times = np.asarray(times, dtype=float)
        self.states = np.asarray(states, dtype=float)
        if self.states.ndim != 2 or self.states.shape[0] != self.times.size:
            raise ValueError("states must be one interior vector per stored time")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("stored times must be strictly increasing")
        self.mesh = mesh
        self.enrichment = enrichment
        self.bubble_c = np.asarray(bubble_c, dtype=float)

    def field_at(self, t: float) -> SolutionField:
        """Solution field at the stored time nearest to t."""
        if not math.isfinite(t):
            raise ValueError(f"time must be finite, got {t}")
        idx = int(np.argmin(np.abs(self.times - t)))
        nodal = np.concatenate(([0.0], self.states[idx], [0.0]))
        if self.enrichment.bubble_count:
            coeffs = (self.bubble_c * (nodal[:-1] + nodal[1:]))[:, None]
        else:
            coeffs = None
        return SolutionField(self.mesh, nodal, self.enrichment, coeffs)

    def value(self, x: float, t: float) -> float:
        return self.field_at(t).value(x)


def solve_transient(
    problem: TransientProblem,
    mesh: Mesh1D,
    enrichment: EnrichmentKind = LINEAR,
    dt: float = 1e-3,
    t_end: float = 1.0,
    sign_compat: bool = False,
    store_stride: int = 1,
) -> Trajectory:
    """March the semi-discrete system by trapezoidal steps from the nodal
    interpolation of the initial profile."""
    if not dt > 0:
        raise ValueError(f"time step must be positive, got {dt}")
    if t_end < 0:
        raise ValueError(f"end time must be nonnegative, got {t_end}")
    if store_stride < 1:
        raise ValueError(f"store stride must be >= 1, got {store_stride}")
    system = assemble_transient(problem, mesh, enrichment, sign_compat)
    state = np.array([problem.initial_profile(x) for x in mesh.nodes[1:-1]], dtype=float)
    n_steps = max(0, int(math.ceil(t_end / dt - 1e-12)))
    times = [0.0]
    states = [state.copy()]
    for k in range(1, n_steps + 1):
        state = step_trapezoidal(system, state, dt)
        if k % store_stride == 0 or k == n_steps:
            times.append(k * dt)
            states.append(state.copy())
    return Trajectory(
        times=np.array(times),
        states=np.array(states),
        mesh=mesh,
        enrichment=enrichment,
        bubble_c=system.bubble_c,
    )


def semi_analytic_two_element(
    problem: TransientProblem,
    enrichment: EnrichmentKind = QUADRATIC_BUBBLE,
    sign_compat: bool = False,
):
    """Closed-form single-mode solution on a uniform two-element mesh.

    The reduced system has one unknown, so it decays exactly like
    a(0) exp(-omega t); the returned callable expands that mode through
    the (enriched) basis at any (x, t).
    """
    a, b = problem.domain
    mesh = uniform_mesh(a, b, 2)
    system = assemble_transient(problem, mesh, enrichment, sign_compat)
    omega = slowest_decay_rate(system)
    amplitude = float(problem.initial_profile(mesh.nodes[1]))
    base = Trajectory(
        times=np.array([0.0]),
        states=np.array([[1.0]]),
        mesh=mesh,
        enrichment=enrichment,
        bubble_c=system.bubble_c,
    ).field_at(0.0)

    def evaluate(x: float, t: float) -> float:
        if t < 0:
            raise ValueError(f"time must be nonnegative, got {t}")
        return amplitude * math.exp(-omega * t) * base.value(x)

    evaluate.decay_rate = omega
    evaluate.amplitude = amplitude
    return evaluate
