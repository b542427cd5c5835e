"""Multichannel, multi-site point-interaction scattering.

An array of point interactions at positions x_1 < ... < x_m, each with
n x n hermitian coupling matrices (C1, C2, C3), reduces the coupled
Schroedinger equations to a finite linear system.  Between sites the
solution is a superposition of plane waves per channel,

    psi_s(x) = A_s exp(ikx) + B_s exp(-ikx),   s = 0..m,

and at each site the pairing rules give the matching conditions

    Delta psi  = -C2 psi_bar - C3 psi_bar'
    Delta psi' =  C1 psi_bar + C2 psi_bar'

(the C2 signs fix the same orientation convention as the single-channel
closed forms; the opposite choice is its mirror image).

where psi_bar and psi_bar' are the means of the one-sided values and
(regularized) one-sided derivatives.  This module assembles and solves
that system and builds the full 2n x 2n S-matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SingularSystem

__all__ = [
    "MatrixCouplings",
    "SiteArray",
    "IncidentWave",
    "ScatteringSolution",
    "assemble_system",
    "solve_scattering",
    "full_s_matrix",
    "parity_blocks",
]

_MIN_SEPARATION = 1e-9
_CONDITION_LIMIT = 1e12
_MODES = ("left", "right", "even", "odd")


def _as_hermitian(m, name: str) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be a square matrix")
    if np.max(np.abs(m - m.conj().T)) > 1e-12:
        raise ValueError(f"{name} must be hermitian")
    return m


@dataclass(frozen=True)
class MatrixCouplings:
    """Hermitian n x n coupling matrices of one interaction site."""

    c1: np.ndarray
    c2: np.ndarray
    c3: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "c1", _as_hermitian(self.c1, "c1"))
        object.__setattr__(self, "c2", _as_hermitian(self.c2, "c2"))
        object.__setattr__(self, "c3", _as_hermitian(self.c3, "c3"))
        n = self.c1.shape[0]
        if self.c2.shape[0] != n or self.c3.shape[0] != n:
            raise ValueError("coupling matrices must share one dimension")

    @classmethod
    def from_scalars(cls, g1: float, g2: float, g3: float
                     ) -> "MatrixCouplings":
        return cls(np.array([[g1]]), np.array([[g2]]), np.array([[g3]]))

    @property
    def n(self) -> int:
        return self.c1.shape[0]


@dataclass(frozen=True)
class SiteArray:
    """Ordered interaction sites with a common channel count."""

    sites: tuple

    def __init__(self, sites):
        sites = tuple((float(pos), c) for pos, c in sites)
        positions = [pos for pos, _ in sites]
        for left, right in zip(positions, positions[1:]):
            if right - left < _MIN_SEPARATION:
                raise ValueError("site positions must be strictly "
                                 f"increasing with separation >= "
                                 f"{_MIN_SEPARATION}")
        ns = {c.n for _, c in sites}
        if len(ns) > 1:
            raise ValueError("all sites must share the channel count")
        object.__setattr__(self, "sites", sites)

    @property
    def n(self) -> int:
        return self.sites[0][1].n if self.sites else 1

    def __len__(self) -> int:
        return len(self.sites)


@dataclass(frozen=True)
class IncidentWave:
    """Incident wave: wavenumber, mode, and unit channel amplitudes.

    Modes: 'left' and 'right' are travelling waves entering from one
    side; 'even' and 'odd' are the parity combinations cos(kx) and
    sin(kx) scaled by the channel amplitude vector.
    """

    k: float
    mode: str
    amplitudes: np.ndarray = field(default=None)

    def __post_init__(self):
        if not (math.isfinite(self.k) and self.k > 0):
            raise ValueError("k must be positive")
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}")
        amps = self.amplitudes
        if amps is None:
            amps = np.array([1.0 + 0.0j])
        amps = np.asarray(amps, dtype=complex).ravel()
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-9:
            raise ValueError("channel amplitudes must have unit norm")
        object.__setattr__(self, "amplitudes", amps)

    def endpoint_amplitudes(self) -> tuple[np.ndarray, np.ndarray]:
        """Incoming plane-wave coefficients (A_0, B_m) for this mode."""
        a = self.amplitudes
        zero = np.zeros_like(a)
        if self.mode == "left":
            return a, zero
        if self.mode == "right":
            return zero, a
        if self.mode == "even":
            return a / 2.0, a / 2.0
        return a / 2.0j, -a / 2.0j  # odd: sin(kx) = (e^{ikx}-e^{-ikx})/2i


@dataclass(frozen=True)
class ScatteringSolution:
    """Segment coefficients and derived per-channel probabilities."""

    k: float
    coefficients_a: tuple  # A_s per segment, each an n-vector
    coefficients_b: tuple
    reflection: np.ndarray  # |outgoing left|^2 per channel
    transmission: np.ndarray  # |outgoing right|^2 per channel
    flux_residual: float

    @property
    def outgoing_left(self) -> np.ndarray:
        return self.coefficients_b[0]

    @property
    def outgoing_right(self) -> np.ndarray:
        return self.coefficients_a[-1]


def assemble_system(sites: SiteArray, incident: IncidentWave
                    ) -> tuple[np.ndarray, np.ndarray]:
    """Build the dense linear system for the segment coefficients.

    Unknown layout: [A_0, B_0, A_1, B_1, ..., A_m, B_m], each block an
    n-vector.  The first 2n rows pin the incoming amplitudes A_0 and
    B_m; the remaining rows are the two matching conditions per site.
    """
    n = sites.n
    m = len(sites)
    k = incident.k
    if incident.amplitudes.size != n:
        raise ValueError("incident amplitude dimension does not match "
                         "the site array channel count")
    dim = 2 * n * (m + 1)
    mat = np.zeros((dim, dim), dtype=complex)
    rhs = np.zeros(dim, dtype=complex)
    eye = np.eye(n)

    def a_block(seg):
        return slice(2 * n * seg, 2 * n * seg + n)

    def b_block(seg):
        return slice(2 * n * seg + n, 2 * n * seg + 2 * n)

    a_in, b_in = incident.endpoint_amplitudes()
    mat[0:n, a_block(0)] = eye
    rhs[0:n] = a_in
    mat[n:2 * n, b_block(m)] = eye
    rhs[n:2 * n] = b_in

    row = 2 * n
    for t, (pos, coup) in enumerate(sites.sites):
        ep = np.exp(1j * k * pos)
        em = np.exp(-1j * k * pos)
        # the site couples segment t (left) and segment t+1 (right)
        val_rows = slice(row, row + n)
        der_rows = slice(row + n, row + 2 * n)
        ikp = 1j * k * ep
        ikm = -1j * k * em
        c1, c2, c3 = coup.c1, coup.c2, coup.c3
        for seg, sign in ((t + 1, +1.0), (t, -1.0)):
            # Delta psi + C2 psi_bar + C3 psi_bar' = 0
            mat[val_rows, a_block(seg)] += (sign * ep * eye
                                            + 0.5 * ep * c2
                                            + 0.5 * ikp * c3)
            mat[val_rows, b_block(seg)] += (sign * em * eye
                                            + 0.5 * em * c2
                                            + 0.5 * ikm * c3)
            # Delta psi' - C1 psi_bar - C2 psi_bar' = 0
            mat[der_rows, a_block(seg)] += (sign * ikp * eye
                                            - 0.5 * ep * c1
                                            - 0.5 * ikp * c2)
            mat[der_rows, b_block(seg)] += (sign * ikm * eye
                                            - 0.5 * em * c1
                                            - 0.5 * ikm * c2)
        row += 2 * n
    return mat, rhs


def solve_scattering(sites: SiteArray, incident: IncidentWave
                     ) -> ScatteringSolution:
    """Solve the assembled system and report outgoing amplitudes.

    Raises SingularSystem when the system's condition number exceeds
    1e12, which signals k at or near a resonance pole of the array.
    """
    n = sites.n
    m = len(sites)
    mat, rhs = assemble_system(sites, incident)
    if np.linalg.cond(mat) > _CONDITION_LIMIT:
        raise SingularSystem(f"condition number above {_CONDITION_LIMIT:g} "
                             f"at k = {incident.k}")
    sol = np.linalg.solve(mat, rhs)
    coeff_a = tuple(sol[2 * n * s: 2 * n * s + n] for s in range(m + 1))
    coeff_b = tuple(sol[2 * n * s + n: 2 * n * s + 2 * n]
                    for s in range(m + 1))
    a_in, b_in = incident.endpoint_amplitudes()
    flux_in = float(np.sum(np.abs(a_in) ** 2 + np.abs(b_in) ** 2))
    out_left = coeff_b[0]
    out_right = coeff_a[-1]
    flux_out = float(np.sum(np.abs(out_left) ** 2 + np.abs(out_right) ** 2))
    return ScatteringSolution(
        k=incident.k,
        coefficients_a=coeff_a,
        coefficients_b=coeff_b,
        reflection=np.abs(out_left) ** 2,
        transmission=np.abs(out_right) ** 2,
        flux_residual=flux_out - flux_in,
    )


def full_s_matrix(sites: SiteArray, k: float) -> np.ndarray:
    """The unitary 2n x 2n S-matrix of the array at wavenumber k.

    Basis order (channel 1 +, ..., channel n +, channel 1 -, ...,
    channel n -), where + waves travel rightward.  Entry [out, in].
    """
    n = sites.n
    s = np.zeros((2 * n, 2 * n), dtype=complex)
    for j in range(n):
        amps = np.zeros(n, dtype=complex)
        amps[j] = 1.0
        for col, mode in ((j, "left"), (n + j, "right")):
            sol = solve_scattering(sites,
                                   IncidentWave(k, mode, amps))
            s[:n, col] = sol.outgoing_right
            s[n:, col] = sol.outgoing_left
    return s


def parity_blocks(s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Even and odd blocks of a left-right-symmetric S-matrix.

    For a single symmetric site the basis change to parity modes block
    diagonalizes S into (T + R, T - R) with T the transmission block and
    R the reflection block.
    """
    n = s.shape[0] // 2
    t = s[:n, :n]
    r = s[n:, :n]
    return t + r, t - r
