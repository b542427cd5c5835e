"""Scattering-based quantum memory on a two-channel point interaction.

A normalized two-component amplitude (a1, a2) is stored at a site whose
channel couplings are C1 = g1 sigma_1 and C3 = g3 sigma_3.  Even waves
scatter the state by S_plus(k) = exp(-i sigma_1 2 arctan(g1/(2k))) and
odd waves by S_minus(k) = exp(-i sigma_3 2 arctan(g3 k / 2)); when both
couplings are nonzero, finite products of these reach all of SU(2), so
write/read/reset reduce to synthesizing scattering sequences.  Reading
extracts the state from interference patterns of the scattered waves.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .errors import (
    Ambiguous,
    DegenerateSampling,
    Inconsistent,
    NotSpecialUnitary,
    PhaseBlind,
    ZeroCoupling,
)

__all__ = [
    "MemoryState",
    "ScatterOp",
    "Observables",
    "AdmissibilityReport",
    "STANDARD_STATE",
    "s_plus",
    "s_minus",
    "op_matrix",
    "apply_scatter",
    "apply_plan",
    "plan_matrix",
    "factorize_su2",
    "interference_pattern",
    "estimator_phase",
    "observe",
    "estimate_from_pattern",
    "reconstruct_state",
    "write",
    "reset",
    "read_protocol",
    "admissibility_check",
]

_SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(frozen=True)
class MemoryState:
    """A normalized two-component complex amplitude."""

    a1: complex
    a2: complex

    def __post_init__(self):
        norm = abs(self.a1) ** 2 + abs(self.a2) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError("memory state must be normalized")

    @classmethod
    def from_vec(cls, vec) -> "MemoryState":
        vec = np.asarray(vec, dtype=complex).ravel()
        return cls(complex(vec[0]), complex(vec[1]))

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.a1, self.a2], dtype=complex)

    def distance_up_to_phase(self, other: "MemoryState") -> float:
        """Minimum 2-norm distance over a global phase."""
        inner = np.vdot(self.vec, other.vec)
        phase = inner / abs(inner) if abs(inner) > 0 else 1.0
        return float(np.linalg.norm(self.vec * phase - other.vec))


# Reference state with both components nonzero and a non-real relative
# phase, so every readout equation stays non-degenerate.
STANDARD_STATE = MemoryState(1.0 / math.sqrt(2.0),
                             cmath.exp(1j * math.pi / 4.0) / math.sqrt(2.0))


@dataclass(frozen=True)
class ScatterOp:
    """One scattering event: parity of the interrogating wave and its
    wavenumber."""

    parity: str
    k: float

    def __post_init__(self):
        if self.parity not in ("even", "odd"):
            raise ValueError("parity must be 'even' or 'odd'")
        if not (math.isfinite(self.k) and self.k > 0):
            raise ValueError("k must be positive")


@dataclass(frozen=True)
class Observables:
    """Interference readout results.

    A1 = |a1|^2 - |a2|^2, A2 = 2 Re(a1* a2), A3 the interference with
    the standard state, and optionally A4, the same interference after a
    fixed known pre-rotation.
    """

    A1: float
    A2: float
    A3: float
    A4: float | None = None

    def __post_init__(self):
        if self.A1 ** 2 + self.A2 ** 2 > 1.0 + 1e-9:
            raise ValueError("A1^2 + A2^2 exceeds 1 for a unit state")


@dataclass(frozen=True)
class AdmissibilityReport:
    """Purity verdict for an interrogating wave over a set of states."""

    purity: float
    admissible: bool
    density_matrix: np.ndarray


def s_minus(g3: float, k: float) -> np.ndarray:
    """Odd-wave scattering matrix exp(-i sigma_3 2 arctan(g3 k / 2))."""
    return ((4.0 - g3 ** 2 * k ** 2) * np.eye(2) - 4j * g3 * k * _SIGMA3) \
        / (4.0 + g3 ** 2 * k ** 2)


def s_plus(g1: float, k: float) -> np.ndarray:
    """Even-wave scattering matrix exp(-i sigma_1 2 arctan(g1/(2k)))."""
    return ((4.0 * k ** 2 - g1 ** 2) * np.eye(2) - 4j * g1 * k * _SIGMA1) \
        / (4.0 * k ** 2 + g1 ** 2)


def op_matrix(op: ScatterOp, g1: float, g3: float) -> np.ndarray:
    return s_plus(g1, op.k) if op.parity == "even" else s_minus(g3, op.k)


def op_angle(op: ScatterOp, g1: float, g3: float) -> float:
    """The rotation angle of the op: op_matrix = exp(-i sigma theta)."""
    if op.parity == "even":
        return 2.0 * math.atan(g1 / (2.0 * op.k))
    return 2.0 * math.atan(g3 * op.k / 2.0)


def apply_scatter(state: MemoryState, op: ScatterOp,
                  g1: float, g3: float) -> MemoryState:
    """Scatter one wave off the memory; the stored state is rotated."""
    return MemoryState.from_vec(op_matrix(op, g1, g3) @ state.vec)


def plan_matrix(plan, g1: float, g3: float) -> np.ndarray:
    """Ordered product of the plan's matrices, first element leftmost.

    Acting on a state, the last element of the plan scatters first.
    """
    u = np.eye(2, dtype=complex)
    for op in plan:
        u = u @ op_matrix(op, g1, g3)
    return u


def apply_plan(state: MemoryState, plan, g1: float, g3: float
               ) -> MemoryState:
    """Apply plan_matrix(plan) to the state."""
    return MemoryState.from_vec(plan_matrix(plan, g1, g3) @ state.vec)


def _axis_ops(theta: float, parity: str, coupling: float,
              tol: float = 1e-12) -> list[ScatterOp]:
    """Ops realizing exp(-i sigma theta) about one axis.

    A single op reaches angles theta with theta*sign(coupling) in
    (0, pi); anything else splits into two ops of half the (reduced)
    angle.
    """
    sigma = math.copysign(1.0, coupling)
    t = (theta * sigma) % (2.0 * math.pi)
    if t < tol or t > 2.0 * math.pi - tol:
        return []

    def one(angle: float) -> ScatterOp:
        # angle in (0, pi); invert the arctan relation for k > 0
        if parity == "odd":
            k = (2.0 / abs(coupling)) * math.tan(angle / 2.0)
        else:
            k = abs(coupling) / (2.0 * math.tan(angle / 2.0))
        return ScatterOp(parity, k)

    if t < math.pi - 1e-9:
        return [one(t)]
    return [one(t / 2.0), one(t / 2.0)]


def factorize_su2(u: np.ndarray, g1: float, g3: float,
                  tol: float = 1e-9) -> list[ScatterOp]:
    """Express an SU(2) matrix as a plan of at most six scatterings.

    Uses the Euler decomposition u = exp(-i sigma_3 a) exp(-i sigma_1 b)
    exp(-i sigma_3 c); each rotation maps to one or two ops.
    """
    if g1 == 0.0 or g3 == 0.0:
        raise ZeroCoupling("both couplings must be nonzero to reach a "
                           "generic SU(2) element")
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise NotSpecialUnitary("expected a 2x2 matrix")
    if np.max(np.abs(u.conj().T @ u - np.eye(2))) > 1e-10:
        raise NotSpecialUnitary("matrix is not unitary")
    if abs(np.linalg.det(u) - 1.0) > 1e-10:
        raise NotSpecialUnitary("matrix determinant is not 1")

    # u = [[cos b e^{-i(a+c)}, -i sin b e^{-i(a-c)}], [...]]
    cb = abs(u[0, 0])
    sb = abs(u[0, 1])
    b = math.atan2(sb, cb)
    apc = -cmath.phase(u[0, 0]) if cb > 1e-12 else 0.0
    amc = (-cmath.phase(u[0, 1]) - math.pi / 2.0) if sb > 1e-12 else 0.0
    a = 0.5 * (apc + amc)
    c = 0.5 * (apc - amc)

    plan = (_axis_ops(a, "odd", g3)
            + _axis_ops(b, "even", g1)
            + _axis_ops(c, "odd", g3))
    err = np.max(np.abs(plan_matrix(plan, g1, g3) - u))
    if err > tol:
        raise NotSpecialUnitary(f"factorization residual {err:g} exceeds "
                                f"{tol:g}")
    return plan


def interference_pattern(state: MemoryState, op: ScatterOp,
                         g1: float, g3: float, xs) -> np.ndarray:
    """Interrogating-wave intensity 2[1 + Re(<a, S a> e^{2ikx})] at
    positions x > 0.

    For an odd wave this is 2[1 + cos(2kx) cos(phi) - A1 sin(2kx)
    sin(phi)] with phi the odd scattering phase.
    """
    xs = np.asarray(xs, dtype=float)
    if np.any(xs <= 0.0):
        raise ValueError("sample positions must be positive")
    amp = np.vdot(state.vec, op_matrix(op, g1, g3) @ state.vec)
    return 2.0 * (1.0 + np.real(amp * np.exp(2j * op.k * xs)))


def estimator_phase(op: ScatterOp, g1: float, g3: float) -> float:
    """The phase to hand to estimate_from_pattern for this op.

    With this phase the estimator returns A1 for an odd interrogation
    and A2 for an even one.
    """
    if op.parity == "odd":
        return -2.0 * math.atan(g3 * op.k / 2.0)
    return -2.0 * math.atan(g1 / (2.0 * op.k))


def observe(state: MemoryState, which: str,
            s: MemoryState | None = None) -> float:
    """Direct evaluation of one readout observable."""
    a1, a2 = state.a1, state.a2
    if which == "A1":
        return abs(a1) ** 2 - abs(a2) ** 2
    if which == "A2":
        return 2.0 * (a1.conjugate() * a2).real
    if which == "A3":
        if s is None:
            raise ValueError("A3 needs the standard state")
        return abs(a1 + s.a1) ** 2 - abs(a2 + s.a2) ** 2
    raise ValueError(f"unknown observable {which!r}")


def estimate_from_pattern(samples, k: float, phi: float) -> float:
    """Least-squares extraction of the state-dependent pattern
    coefficient.

    Fits value ~ c0 + cc cos(2kx) + cs sin(2kx) and returns
    -cs / (2 sin phi).
    """
    if abs(math.sin(phi)) < 1e-9:
        raise PhaseBlind("pattern carries no state information at this "
                         "phase")
    samples = list(samples)
    if len(samples) < 3:
        raise DegenerateSampling("need at least three samples")
    xs = np.array([x for x, _ in samples], dtype=float)
    ys = np.array([v for _, v in samples], dtype=float)
    design = np.column_stack([np.ones_like(xs),
                              np.cos(2.0 * k * xs),
                              np.sin(2.0 * k * xs)])
    if np.linalg.matrix_rank(design, tol=1e-9) < 3:
        raise DegenerateSampling("sample positions do not span the fit "
                                 "basis")
    coeffs, *_ = np.linalg.lstsq(design, ys, rcond=None)
    return float(-coeffs[2] / (2.0 * math.sin(phi)))


# Fixed pre-rotation for the fourth observable: a known quarter-turn
# about sigma_3, realizable by odd scatterings.
A4_PREROTATION_ANGLE = math.pi / 4.0
_R0 = np.diag([cmath.exp(-1j * A4_PREROTATION_ANGLE),
               cmath.exp(1j * A4_PREROTATION_ANGLE)])


def _predict(state: MemoryState, s: MemoryState) -> np.ndarray:
    a3 = observe(state, "A3", s)
    rotated = MemoryState.from_vec(_R0 @ state.vec)
    a4 = observe(rotated, "A3", s)
    return np.array([observe(state, "A1"), observe(state, "A2"), a3, a4])


def _candidate_states(obs: Observables, s: MemoryState,
                      tol: float) -> list[MemoryState]:
    p = math.sqrt(min(max((1.0 + obs.A1) / 2.0, 0.0), 1.0))
    q = math.sqrt(min(max((1.0 - obs.A1) / 2.0, 0.0), 1.0))
    s1c = complex(s.a1).conjugate()
    s2c = complex(s.a2).conjugate()
    # A3 = A1 + (|s1|^2 - |s2|^2) + 2 Re(a1 s1* - a2 s2*)
    r3 = 0.5 * (obs.A3 - obs.A1 - (abs(s.a1) ** 2 - abs(s.a2) ** 2))

    if p * q < 1e-8:
        deltas = [0.0]
    else:
        x = obs.A2 / (2.0 * p * q)
        if abs(x) > 1.0 + tol:
            raise Inconsistent("A2 incompatible with A1")
        delta0 = math.acos(min(max(x, -1.0), 1.0))
        deltas = [delta0, -delta0] if delta0 > 1e-12 else [0.0]

    candidates = []
    for delta in deltas:
        z = p * s1c - q * cmath.exp(-1j * delta) * s2c
        if abs(z) < 1e-12:
            continue  # the standard state is parallel to this branch
        x = r3 / abs(z)
        if abs(x) > 1.0 + max(tol, 1e-9):
            continue
        phi = math.acos(min(max(x, -1.0), 1.0))
        for theta1 in (phi - cmath.phase(z), -phi - cmath.phase(z)):
            a1 = p * cmath.exp(1j * theta1)
            a2 = q * cmath.exp(1j * (theta1 - delta))
            norm = math.sqrt(abs(a1) ** 2 + abs(a2) ** 2)
            cand = MemoryState(a1 / norm, a2 / norm)
            if all(np.linalg.norm(cand.vec - other.vec) > 1e-7
                   for other in candidates):
                candidates.append(cand)
    return candidates


def reconstruct_state(obs: Observables, s: MemoryState,
                      tol: float = 1e-6) -> MemoryState:
    """Invert the observables into a memory state.

    A1 and A2 fix the moduli and the relative-phase cosine; A3 pins the
    overall phase against the standard state up to discrete branches.
    When A4 is supplied the branch is resolved by picking the candidate
    matching it best (unique for exact data); otherwise all matching
    candidates are reported through the Ambiguous error.
    """
    if abs(s.a1) < 1e-12 or abs(s.a2) < 1e-12:
        raise ValueError("the standard state needs both components "
                         "nonzero")
    candidates = _candidate_states(obs, s, tol)
    if not candidates:
        raise Inconsistent("no unit state matches the observables")
    if obs.A4 is None:
        if len(candidates) == 1:
            return candidates[0]
        raise Ambiguous(candidates)
    mismatches = [abs(_predict(c, s)[3] - obs.A4) for c in candidates]
    best = int(np.argmin(mismatches))
    if mismatches[best] > tol:
        raise Inconsistent("no candidate reproduces A4 within tolerance")
    return candidates[best]


def _su2_completion(source: MemoryState, target: MemoryState
                    ) -> np.ndarray:
    """The SU(2) element mapping source to target (up to global phase).

    Completes the state-to-state map with the orthogonal complements and
    normalizes the determinant phase.
    """
    s_perp = np.array([-source.a2.conjugate(), source.a1.conjugate()])
    t_perp = np.array([-target.a2.conjugate(), target.a1.conjugate()])
    u = (np.outer(target.vec, source.vec.conj())
         + np.outer(t_perp, s_perp.conj()))
    det = np.linalg.det(u)
    return u * cmath.exp(-0.5j * cmath.phase(det)) / math.sqrt(abs(det))


def write(s: MemoryState, target: MemoryState,
          g1: float, g3: float) -> list[ScatterOp]:
    """Plan whose matrix maps the standard state to the target, up to a
    global phase."""
    return factorize_su2(_su2_completion(s, target), g1, g3)


def reset(current: MemoryState, s: MemoryState,
          g1: float, g3: float) -> list[ScatterOp]:
    """Plan whose matrix maps the current state back to the standard
    state, up to a global phase."""
    return factorize_su2(_su2_completion(current, s), g1, g3)


def _interrogate(state: MemoryState, op: ScatterOp, g1: float, g3: float,
                 n_positions: int, noise_sigma: float, rng
                 ) -> tuple[float, MemoryState]:
    """Measure one interference pattern; returns the estimate and the
    scattered state."""
    period = math.pi / op.k
    xs = 0.1 * period + np.linspace(0.0, period, n_positions,
                                    endpoint=False)
    values = interference_pattern(state, op, g1, g3, xs)
    if noise_sigma > 0.0:
        values = values + rng.normal(0.0, noise_sigma, size=values.shape)
    estimate = estimate_from_pattern(zip(xs, values), op.k,
                                     estimator_phase(op, g1, g3))
    return estimate, apply_scatter(state, op, g1, g3)


def _restore_ops(op: ScatterOp, g1: float, g3: float) -> list[ScatterOp]:
    """Ops undoing a single scattering (up to global phase)."""
    coupling = g1 if op.parity == "even" else g3
    return _axis_ops(-op_angle(op, g1, g3), op.parity, coupling)


def _polish(initial: MemoryState, obs: Observables, s: MemoryState
            ) -> MemoryState:
    """Weighted least-squares refinement of a reconstruction.

    A3/A4 come from direct interference and carry no sampling noise, so
    they are weighted far above the pattern-fitted A1/A2.
    """
    weights = np.array([1.0, 1.0, 100.0, 100.0])
    targets = np.array([obs.A1, obs.A2, obs.A3, obs.A4])

    def unpack(params):
        u, theta1, delta = params
        a1 = math.cos(u) * cmath.exp(1j * theta1)
        a2 = math.sin(u) * cmath.exp(1j * (theta1 - delta))
        return MemoryState(a1, a2)

    def residuals(params):
        return weights * (_predict(unpack(params), s) - targets)

    p = abs(initial.a1)
    u0 = math.acos(min(max(p, 0.0), 1.0))
    theta1 = cmath.phase(initial.a1) if p > 1e-12 else 0.0
    delta = theta1 - cmath.phase(initial.a2) if abs(initial.a2) > 1e-12 \
        else 0.0
    fit = least_squares(residuals, x0=[u0, theta1, delta],
                        method="lm", xtol=1e-15, ftol=1e-15)
    return unpack(fit.x)


def read_protocol(state: MemoryState, s: MemoryState, g1: float, g3: float,
                  noise_sigma: float = 0.0, rng=None,
                  n_positions: int = 240
                  ) -> tuple[Observables, MemoryState, MemoryState]:
    """Full read sequence: interrogate, restore, reconstruct.

    An odd wave at k = 2/|g3| and an even wave at k = |g1|/2 (both at a
    quarter-turn phase, the best-conditioned choice) yield A1 and A2
    from their interference patterns; each interrogation scatters the
    memory and is undone before the next step.  A3 and A4 come from
    interference with the standard state, A4 after a known quarter-turn
    pre-rotation.  Returns (observables, reconstructed state, final
    memory state); the final state equals the input up to global phase.
    """
    if g1 == 0.0 or g3 == 0.0:
        raise ZeroCoupling("the protocol needs both couplings nonzero")
    if noise_sigma > 0.0 and rng is None:
        rng = np.random.default_rng()

    cur = state
    odd_op = ScatterOp("odd", 2.0 / abs(g3))
    a1_est, cur = _interrogate(cur, odd_op, g1, g3, n_positions,
                               noise_sigma, rng)
    cur = apply_plan(cur, _restore_ops(odd_op, g1, g3), g1, g3)

    even_op = ScatterOp("even", abs(g1) / 2.0)
    a2_est, cur = _interrogate(cur, even_op, g1, g3, n_positions,
                               noise_sigma, rng)
    cur = apply_plan(cur, _restore_ops(even_op, g1, g3), g1, g3)

    a3 = observe(cur, "A3", s)
    pre = _axis_ops(A4_PREROTATION_ANGLE, "odd", g3)
    rotated = apply_plan(cur, pre, g1, g3)
    a4 = observe(rotated, "A3", s)
    cur = apply_plan(rotated, _axis_ops(-A4_PREROTATION_ANGLE, "odd", g3),
                     g1, g3)

    # clip the noisy estimates into the physical range
    a1_est = min(max(a1_est, -1.0), 1.0)
    cap = math.sqrt(max(1.0 - a1_est ** 2, 0.0))
    a2_est = min(max(a2_est, -cap), cap)
    obs = Observables(a1_est, a2_est, a3, a4)
    recon_tol = max(1e-6, 50.0 * noise_sigma)
    recovered = reconstruct_state(obs, s, tol=recon_tol)
    if noise_sigma > 0.0:
        recovered = _polish(recovered, obs, s)
    return obs, recovered, cur


def admissibility_check(alpha: complex, beta: complex, k: float,
                        g1: float, g3: float, states
                        ) -> AdmissibilityReport:
    """Purity test of an interrogating wave alpha*even + beta*odd.

    The outgoing even and odd waves are orthogonal modes, so the reduced
    density matrix of the memory after scattering state a is
    |alpha|^2 (S+ a)(S+ a)^dag + |beta|^2 (S- a)(S- a)^dag.  The wave is
    admissible when the memory stays pure (purity = tr M^2 = 1) for
    every sampled state.
    """
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > 1e-9:
        raise ValueError("|alpha|^2 + |beta|^2 must be 1")
    if not (math.isfinite(k) and k > 0):
        raise ValueError("k must be positive")
    wa = abs(alpha) ** 2
    wb = abs(beta) ** 2
    sp = s_plus(g1, k)
    sm = s_minus(g3, k)
    worst_purity = 1.0
    worst_m = None
    for state in states:
        vec = state.vec if isinstance(state, MemoryState) \
            else np.asarray(state, dtype=complex).ravel()
        ap = sp @ vec
        am = sm @ vec
        m = wa * np.outer(ap, ap.conj()) + wb * np.outer(am, am.conj())
        purity = float(np.real(np.trace(m @ m)))
        if worst_m is None or purity < worst_purity:
            worst_purity = purity
            worst_m = m
    if worst_m is None:
        raise ValueError("need at least one sample state")
    return AdmissibilityReport(purity=worst_purity,
                               admissible=worst_purity >= 1.0 - 1e-10,
                               density_matrix=worst_m)
