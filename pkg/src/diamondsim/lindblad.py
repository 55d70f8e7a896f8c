"""Master-equation generator, steady states, and fixed-step time evolution.

The generator acts on the row-major vectorization of the density matrix in
basis order (a, b, c, d): entry rho[i, j] is component 4*i + j of vec(rho).
The coherent part is +i[B, rho] with B from atom.build_hamiltonian; the
dissipative part is the standard Lindblad form

    sum_k gamma_k/2 (2 A_k rho A_k^H - A_k^H A_k rho - rho A_k^H A_k)

with jump operators |a><c|, |d><c|, |b><a|, |b><d| at rates gamma1..gamma4.

eom_rhs writes the same derivative out element by element.  It is kept as an
independent route through the physics and doubles as the oracle for the
superoperator assembly: the two must agree to machine precision, which the
test suite enforces.
"""

from __future__ import annotations

import numpy as np

from .algebra import SingularMatrixError, herm_eigen, matrix_inf_norm, solve_linear
from .atom import LEVELS, Scenario, build_hamiltonian, decay_channels
from .errors import SimulationError

__all__ = [
    "InvariantError",
    "StabilityError",
    "SteadyStateError",
    "build_liouvillian",
    "check_density_matrix",
    "eom_rhs",
    "evolve",
    "evolve_trajectory",
    "ground_state",
    "steady_state",
    "unvec",
    "vec",
]

_A, _B, _C, _D = 0, 1, 2, 3
_HERMITICITY_TOL = 1e-9
_TRACE_TOL = 1e-9
_POSITIVITY_FLOOR = -1e-8
_STEADY_RESIDUAL_REL_TOL = 1e-10
# vec(rho) positions of the populations, row-major: (i, i) -> 5*i.
_DIAGONAL_POSITIONS = (0, 5, 10, 15)


class SteadyStateError(SimulationError):
    """No unique physical steady state could be extracted."""


class StabilityError(SimulationError):
    """The requested time step is too large for stable explicit integration."""


class InvariantError(SimulationError):
    """A state violated the density-matrix invariants."""


def vec(rho: np.ndarray) -> np.ndarray:
    """Row-major vectorization: rho[i, j] lands at position 4*i + j."""
    return np.asarray(rho, dtype=np.complex128).reshape(16)


def unvec(v: np.ndarray) -> np.ndarray:
    """Inverse of vec."""
    return np.asarray(v, dtype=np.complex128).reshape(4, 4)


def ground_state() -> np.ndarray:
    """Density matrix with all population in the ground level |b>."""
    rho = np.zeros((4, 4), dtype=np.complex128)
    rho[_B, _B] = 1.0
    return rho


def check_density_matrix(rho: np.ndarray, context: str = "density matrix") -> None:
    """Enforce Hermiticity, unit trace, and positivity within tolerances.

    Raises InvariantError when the Hermiticity defect or trace error reaches
    1e-9, or the smallest eigenvalue of the symmetrized matrix drops below
    -1e-8.
    """
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    defect = matrix_inf_norm(rho - rho.conj().T)
    if defect >= _HERMITICITY_TOL:
        raise InvariantError(f"{context}: Hermiticity defect {defect:.3e} >= 1e-9")
    trace_err = abs(complex(np.trace(rho)) - 1.0)
    if trace_err >= _TRACE_TOL:
        raise InvariantError(f"{context}: |trace - 1| = {trace_err:.3e} >= 1e-9")
    symmetric = 0.5 * (rho + rho.conj().T)
    lowest = float(herm_eigen(symmetric).eigenvalues[0])
    if lowest < _POSITIVITY_FLOOR:
        raise InvariantError(f"{context}: minimum eigenvalue {lowest:.3e} < -1e-8")


def _jump_operators(s: Scenario) -> list[tuple[float, np.ndarray]]:
    index = {name: k for k, name in enumerate(LEVELS)}
    ops = []
    for channel in decay_channels(s):
        op = np.zeros((4, 4), dtype=np.complex128)
        op[index[channel.to_level], index[channel.from_level]] = 1.0
        ops.append((channel.rate, op))
    return ops


def build_liouvillian(s: Scenario) -> np.ndarray:
    """Assemble the 16x16 generator L with drho/dt = L vec(rho).

    Expects a closure-completed Scenario.  The four rows at the population
    positions sum to the zero row exactly, so L conserves the trace.
    """
    coupling = build_hamiltonian(s).astype(np.complex128)
    eye = np.eye(4, dtype=np.complex128)
    liouv = 1j * (np.kron(coupling, eye) - np.kron(eye, coupling.T))
    for rate, op in _jump_operators(s):
        backflow = op.conj().T @ op
        liouv += 0.5 * rate * (
            2.0 * np.kron(op, op.conj()) - np.kron(backflow, eye) - np.kron(eye, backflow.T)
        )
    return liouv


def eom_rhs(s: Scenario, rho: np.ndarray) -> np.ndarray:
    """Element-by-element master-equation derivative for a Hermitian state.

    The populations and the six upper-triangle coherences are written out
    term by term; the lower triangle follows from conjugate symmetry.  For a
    closure-completed Scenario the result equals unvec(L vec(rho)) with L
    from build_liouvillian, and the tests hold the two routes to 1e-12.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    oa1, oa2 = s.omega_a1, s.omega_a2
    oc1, oc2 = s.omega_c1, s.omega_c2
    da1, da2, dc1 = s.delta_a1, s.delta_a2, s.delta_c1
    g1, g2, g3, g4 = s.gamma1, s.gamma2, s.gamma3, s.gamma4
    r = rho
    out = np.zeros((4, 4), dtype=np.complex128)

    out[_A, _A] = (
        -g3 * r[_A, _A]
        + g1 * r[_C, _C]
        + 1j * oa1 * (r[_B, _A] - r[_A, _B])
        + 1j * oc1 * (r[_C, _A] - r[_A, _C])
    )
    out[_B, _B] = (
        g3 * r[_A, _A]
        + g4 * r[_D, _D]
        + 1j * oa1 * (r[_A, _B] - r[_B, _A])
        + 1j * oa2 * (r[_D, _B] - r[_B, _D])
    )
    out[_C, _C] = (
        -(g1 + g2) * r[_C, _C]
        + 1j * oc1 * (r[_A, _C] - r[_C, _A])
        + 1j * oc2 * (r[_D, _C] - r[_C, _D])
    )
    out[_D, _D] = (
        g2 * r[_C, _C]
        - g4 * r[_D, _D]
        + 1j * oa2 * (r[_B, _D] - r[_D, _B])
        + 1j * oc2 * (r[_C, _D] - r[_D, _C])
    )

    out[_A, _B] = (
        (1j * da1 - 0.5 * g3) * r[_A, _B]
        + 1j * oa1 * (r[_B, _B] - r[_A, _A])
        - 1j * oa2 * r[_A, _D]
        + 1j * oc1 * r[_C, _B]
    )
    out[_A, _C] = (
        -(1j * dc1 + 0.5 * (g1 + g2 + g3)) * r[_A, _C]
        + 1j * oc1 * (r[_C, _C] - r[_A, _A])
        - 1j * oc2 * r[_A, _D]
        + 1j * oa1 * r[_B, _C]
    )
    out[_A, _D] = (
        (1j * (da1 - da2) - 0.5 * (g3 + g4)) * r[_A, _D]
        - 1j * oa2 * r[_A, _B]
        - 1j * oc2 * r[_A, _C]
        + 1j * oa1 * r[_B, _D]
        + 1j * oc1 * r[_C, _D]
    )
    out[_B, _C] = (
        -(1j * (dc1 + da1) + 0.5 * (g1 + g2)) * r[_B, _C]
        - 1j * oc1 * r[_B, _A]
        + 1j * oa1 * r[_A, _C]
        + 1j * oa2 * r[_D, _C]
        - 1j * oc2 * r[_B, _D]
    )
    out[_B, _D] = (
        -(1j * da2 + 0.5 * g4) * r[_B, _D]
        - 1j * oa2 * (r[_B, _B] - r[_D, _D])
        + 1j * oa1 * r[_A, _D]
        - 1j * oc2 * r[_B, _C]
    )
    out[_C, _D] = (
        (1j * (da1 + dc1 - da2) - 0.5 * (g1 + g2 + g4)) * r[_C, _D]
        - 1j * oc2 * (r[_C, _C] - r[_D, _D])
        + 1j * oc1 * r[_A, _D]
        - 1j * oa2 * r[_C, _B]
    )

    for i in range(4):
        for j in range(i + 1, 4):
            out[j, i] = out[i, j].conjugate()
    return out


def steady_state(liouv: np.ndarray) -> np.ndarray:
    """Unique steady state of the generator, as a valid density matrix.

    The row of L at the (a, a) population position is replaced by the trace
    condition and the resulting system solved.  The solution must satisfy
    ||L vec(rho)||_inf < 1e-10 * (1 + ||L||_inf) including the replaced row;
    it is then symmetrized and checked against the density-matrix
    invariants.  Any failure raises SteadyStateError ("non-unique or absent
    steady state"), e.g. when every decay rate vanishes.
    """
    liouv = np.asarray(liouv, dtype=np.complex128)
    if liouv.shape != (16, 16):
        raise ValueError(f"expected a 16x16 generator, got shape {liouv.shape}")
    modified = liouv.copy()
    modified[0, :] = 0.0
    modified[0, list(_DIAGONAL_POSITIONS)] = 1.0
    rhs = np.zeros(16, dtype=np.complex128)
    rhs[0] = 1.0
    try:
        solution = solve_linear(modified, rhs)
    except (SingularMatrixError, SimulationError) as exc:
        raise SteadyStateError(f"non-unique or absent steady state: {exc}") from exc

    residual = float(np.max(np.abs(liouv @ solution)))
    bound = _STEADY_RESIDUAL_REL_TOL * (1.0 + matrix_inf_norm(liouv))
    if residual >= bound:
        raise SteadyStateError(
            f"non-unique or absent steady state: residual {residual:.3e} exceeds {bound:.3e}"
        )
    rho = unvec(solution)
    rho = 0.5 * (rho + rho.conj().T)
    try:
        check_density_matrix(rho, context="steady state")
    except InvariantError as exc:
        raise SteadyStateError(f"non-unique or absent steady state: {exc}") from exc
    return rho


def _rk4_step_matrix(liouv: np.ndarray, dt: float) -> np.ndarray:
    # One classical RK4 step of a linear autonomous system equals multiplying
    # by the degree-4 Taylor polynomial of exp(dt L); precompute it once.
    hl = dt * liouv
    hl2 = hl @ hl
    hl3 = hl2 @ hl
    hl4 = hl3 @ hl
    return np.eye(16, dtype=np.complex128) + hl + hl2 / 2.0 + hl3 / 6.0 + hl4 / 24.0


def _propagate(
    liouv: np.ndarray,
    rho0: np.ndarray,
    t_final: float,
    dt: float,
    sample_steps: tuple[int, ...],
) -> tuple[np.ndarray, list[tuple[int, np.ndarray]]]:
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    if t_final < 0.0:
        raise ValueError(f"t_final must be non-negative, got {t_final!r}")
    norm = matrix_inf_norm(liouv)
    if dt * norm >= 0.5:
        raise StabilityError(
            f"dt * ||L||_inf = {dt * norm:.3f} >= 0.5; reduce dt below {0.5 / norm:.3e}"
        )
    check_density_matrix(rho0, context="initial state")
    n_steps = int(round(t_final / dt))
    step_matrix = _rk4_step_matrix(liouv, dt)
    state = vec(rho0).copy()
    samples: list[tuple[int, np.ndarray]] = []
    targets = [k for k in sorted(set(sample_steps)) if 1 <= k <= n_steps]
    cursor = 0
    for step in range(1, n_steps + 1):
        state = step_matrix @ state
        if cursor < len(targets) and step == targets[cursor]:
            rho = unvec(state).copy()
            check_density_matrix(rho, context=f"state at step {step}")
            samples.append((step, rho))
            cursor += 1
    return unvec(state).copy(), samples


def evolve(
    s: Scenario,
    rho0: np.ndarray,
    t_final: float = 200.0,
    dt: float = 1e-3,
) -> np.ndarray:
    """Integrate the master equation and return the final state.

    Classical fixed-step fourth-order Runge-Kutta on dvec(rho)/dt =
    L vec(rho), running round(t_final / dt) steps.  The step must satisfy
    the stability guard dt * ||L||_inf < 0.5.  The final state is
    symmetrized and validated before being returned.  Expects a
    closure-completed Scenario.
    """
    liouv = build_liouvillian(s)
    final, _ = _propagate(liouv, rho0, t_final, dt, sample_steps=())
    final = 0.5 * (final + final.conj().T)
    check_density_matrix(final, context="final state")
    return final


def evolve_trajectory(
    s: Scenario,
    rho0: np.ndarray,
    t_final: float = 200.0,
    dt: float = 1e-3,
    samples: int = 200,
) -> tuple[np.ndarray, np.ndarray]:
    """Integrate as evolve does, recording evenly spaced raw samples.

    Returns (times, states) with states[k] the unsymmetrized state at
    times[k]; the last sample falls on the final step.  Every sample is
    checked against the density-matrix invariants and a violation raises
    InvariantError naming the step.
    """
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples!r}")
    liouv = build_liouvillian(s)
    n_steps = int(round(t_final / dt))
    if n_steps < 1:
        raise ValueError("t_final is too short for the requested dt")
    marks = np.linspace(0, n_steps, samples + 1)[1:]
    targets = tuple(sorted({int(round(m)) for m in marks}))
    _, pairs = _propagate(liouv, rho0, t_final, dt, sample_steps=targets)
    times = np.array([step * dt for step, _ in pairs])
    states = np.array([state for _, state in pairs])
    return times, states
