"""Independent numerical oracles for the closed-form results.

Every closed form shipped by pointcore can be checked against something
it was not derived from: the algebraic resolvent identity, the
first-order ODE system it must satisfy in kappa, the log-variable
second-order reduction, direct quadrature of the defining integral
equation, and (for delta-only arrays) textbook transfer matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import pointcore
from .errors import LogDomain, QuadratureFailure
from .pointcore import ResolventConstants, ResolventQuad, quad_sector

__all__ = [
    "ResidualReport",
    "resolvent_residual_closed",
    "resolvent_residual_integral",
    "ode_residual",
    "appendix_log_residual",
    "transfer_matrix_oracle",
    "default_suite",
    "run_suite",
]


@dataclass(frozen=True)
class ResidualReport:
    """Outcome of one oracle run."""

    name: str
    max_residual: float
    grid: str
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance


def _sector(quad_val: ResolventQuad, sx: int, sxp: int) -> float:
    return quad_sector(quad_val, sx, sxp)


def resolvent_residual_closed(provider, kappa1: float, kappa2: float
                              ) -> np.ndarray:
    """Residuals of the algebraic resolvent identity in all four sign
    sectors.

    The provider maps kappa to a ResolventQuad.  For a true resolvent
    family the combination below vanishes identically for any pair of
    distinct spectral points.
    """
    if kappa1 == kappa2:
        raise ValueError("the identity needs two distinct spectral points")
    q1 = provider(kappa1)
    q2 = provider(kappa2)
    dm = kappa1 - kappa2
    dp = kappa1 + kappa2
    out = np.empty(4)
    for idx, (sx, sxp) in enumerate(((1, 1), (-1, 1), (-1, -1), (1, -1))):
        val = (_sector(q1, sx, sxp) / dm
               + _sector(q1, sx, -sxp) / dp
               - _sector(q2, sx, sxp) / dm
               + _sector(q2, -sx, sxp) / dp
               - (_sector(q1, sx, -1) * _sector(q2, -1, sxp)
                  + _sector(q1, sx, 1) * _sector(q2, 1, sxp)) / dp)
        out[idx] = abs(val)
    return out


def resolvent_residual_integral(g, kappa1: float, kappa2: float,
                                pairs=None, truncation: float | None = None,
                                tolerance: float = 1e-8) -> float:
    """Residual of the defining integral identity by adaptive quadrature.

    Integrates R_{k1}(x, x'') R_{k2}(x'', x') over x'', splitting at the
    kinks 0, x, x' and truncating where the analytic tail bound
    exp(-(k1+k2)L) falls below half the tolerance; returns the max
    absolute residual over the sampled (x, x') pairs.
    """
    if kappa1 == kappa2:
        raise ValueError("the identity needs two distinct spectral points")
    if pairs is None:
        pairs = [(0.7, 1.3), (-0.4, 0.9), (-1.1, -0.6), (1.5, -0.8)]
    if truncation is None:
        truncation = max(40.0,
                         math.log(2.0 / tolerance) / (kappa1 + kappa2))

    def r(kappa, x, xp):
        return pointcore.greens_function(g, kappa, x, xp)

    worst = 0.0
    for x, xp in pairs:
        kinks = sorted({-truncation, 0.0, x, xp, truncation})
        kinks = [t for t in kinks if -truncation <= t <= truncation]
        total = 0.0
        total_err = 0.0
        for lo, hi in zip(kinks, kinks[1:]):
            if hi - lo < 1e-14:
                continue
            val, err = quad(
                lambda t: r(kappa1, x, t) * r(kappa2, t, xp),
                lo, hi, epsabs=1e-12, epsrel=1e-12, limit=200)
            total += val
            total_err += err
        if total_err > tolerance:
            raise QuadratureFailure(
                f"quadrature error estimate {total_err:g} exceeds "
                f"{tolerance:g}")
        residual = (r(kappa1, x, xp) - r(kappa2, x, xp)
                    + (kappa1 ** 2 - kappa2 ** 2) * total)
        worst = max(worst, abs(residual))
    return worst


def _derivative(fn, x: float, h: float) -> float:
    """Central difference with one Richardson step."""
    d1 = (fn(x + h) - fn(x - h)) / (2.0 * h)
    d2 = (fn(x + h / 2.0) - fn(x - h / 2.0)) / h
    return (4.0 * d2 - d1) / 3.0


def ode_residual(provider, kappas, h_rel: float = 1e-5) -> np.ndarray:
    """Residuals of the four coupled first-order ODEs in kappa.

    The quads of any resolvent family satisfy

        f1' + (f2 + f4)/(2k) - (f2 f4 + f1^2)/(2k) = 0

    and its three sign-sector companions; derivatives are taken by
    Richardson-extrapolated central differences with step h_rel * kappa.
    Returns the max absolute residual per equation over the grid.
    """
    worst = np.zeros(4)
    for kappa in np.atleast_1d(kappas):
        kappa = float(kappa)
        h = h_rel * kappa
        f = provider(kappa).as_array()
        fp = np.array([
            _derivative(lambda t, j=j: provider(t).as_array()[j], kappa, h)
            for j in range(4)])
        f1, f2, f3, f4 = f
        res = np.abs([
            fp[0] + (f2 + f4 - f2 * f4 - f1 ** 2) / (2.0 * kappa),
            fp[1] + (f1 + f3 - f2 * f3 - f1 * f2) / (2.0 * kappa),
            fp[2] + (f2 + f4 - f3 ** 2 - f2 * f4) / (2.0 * kappa),
            fp[3] + (f1 + f3 - f3 * f4 - f1 * f4) / (2.0 * kappa),
        ])
        worst = np.maximum(worst, res)
    return worst


def appendix_log_residual(c: ResolventConstants, kappas,
                          h_rel: float = 1e-4) -> dict:
    """Check the log-variable reduction of the ODE system.

    Reconstructs F(kappa) = log((f2 - 1)/c2), verifies the second-order
    equation 2k (k F')' = (k F')^2 - 1 + (c3^2 + c2 c4) e^{2F}, and the
    two side relations (f2-1)/c2 = (f4-1)/c4 and f1 - f3 = 2 c3 e^F.
    Raises LogDomain where (f2-1)/c2 is not positive.
    """
    if c.c2 == 0.0:
        raise ValueError("the log variable needs c2 != 0")
    kappas = np.atleast_1d(kappas).astype(float)

    def f_of(kappa):
        return pointcore.resolvent_from_constants(c, float(kappa))

    def big_f(kappa):
        ratio = (f_of(kappa).f2 - 1.0) / c.c2
        if ratio <= 0.0:
            raise LogDomain(f"(f2 - 1)/c2 = {ratio:g} <= 0 at kappa = "
                            f"{kappa:g}")
        return math.log(ratio)

    def kfp(kappa):
        return kappa * _derivative(big_f, kappa, h_rel * kappa)

    const = c.c3 ** 2 + c.c2 * c.c4
    second = 0.0
    side_24 = 0.0
    side_13 = 0.0
    for kappa in kappas:
        kappa = float(kappa)
        lhs = 2.0 * kappa * _derivative(kfp, kappa, h_rel * kappa)
        rhs = kfp(kappa) ** 2 - 1.0 + const * math.exp(2.0 * big_f(kappa))
        second = max(second, abs(lhs - rhs))
        quads = f_of(kappa)
        ef = math.exp(big_f(kappa))
        if c.c4 != 0.0:
            side_24 = max(side_24, abs((quads.f2 - 1.0) / c.c2
                                       - (quads.f4 - 1.0) / c.c4))
        side_13 = max(side_13, abs(quads.f1 - quads.f3 - 2.0 * c.c3 * ef))
    return {"second_order": second, "side_f2_f4": side_24,
            "side_f1_f3": side_13}


def transfer_matrix_oracle(sites, k: float) -> tuple[complex, complex]:
    """Transmission and reflection of delta-only sites by transfer
    matrices.

    Sites are (position, strength) pairs; the standard single-delta 2x2
    transfer matrix in the plane-wave basis is multiplied across the
    array.  Completely independent of the channels solver.
    """
    if not (math.isfinite(k) and k > 0):
        raise ValueError("k must be positive")
    total = np.eye(2, dtype=complex)
    for pos, strength in sites:
        u = strength / (2j * k)
        m = np.eye(2, dtype=complex) + u * np.array(
            [[1.0, np.exp(-2j * k * pos)],
             [-np.exp(2j * k * pos), -1.0]])
        total = m @ total
    transmission = 1.0 / total[1, 1]
    reflection = -total[1, 0] / total[1, 1]
    return complex(transmission), complex(reflection)


def _corrupted_provider(g):
    """A deliberately wrong provider: f1 shifted by 1e-3.

    Used as a sensitivity self-test -- the oracles must flag it.
    """
    def provider(kappa):
        q = pointcore.resolvent_from_couplings(g, kappa)
        return ResolventQuad(q.f1 + 1e-3, q.f2, q.f3, q.f4)

    return provider


def default_suite() -> dict:
    """Named oracle runs with their tolerances, for the CLI."""

    def closed_form():
        worst = 0.0
        for g in [(1.0, 2.0, 3.0), (2.0, 0.0, 0.0), (-1.5, 0.7, 2.2),
                  (0.0, 1.0, 0.0)]:
            def provider(kappa, g=g):
                return pointcore.resolvent_from_couplings(g, kappa)
            for k1, k2 in [(0.5, 2.0), (0.3, 1.1), (1.7, 4.0)]:
                worst = max(worst,
                            float(np.max(resolvent_residual_closed(
                                provider, k1, k2))))
        return ResidualReport("resolvent_closed", worst,
                              "4 coupling triples x 3 spectral pairs",
                              1e-12)

    def integral():
        worst = 0.0
        for g in [(2.0, 0.0, 0.0), (0.0, 1.0, 0.0), (1.0, 2.0, 3.0)]:
            worst = max(worst, resolvent_residual_integral(g, 1.0, 2.0))
        return ResidualReport("resolvent_integral", worst,
                              "3 coupling triples, 4 (x, x') pairs each",
                              1e-6)

    def ode():
        grid = np.linspace(0.4, 8.0, 25)
        worst = 0.0
        for g in [(1.0, 0.0, 0.0), (1.0, 2.0, 3.0), (-1.5, 0.7, 2.2)]:
            def provider(kappa, g=g):
                return pointcore.resolvent_from_couplings(g, kappa)
            worst = max(worst, float(np.max(ode_residual(provider, grid))))
        return ResidualReport("ode_system", worst,
                              "3 coupling triples, kappa in [0.4, 8]",
                              1e-6)

    def log_reduction():
        c = ResolventConstants(1.0, 0.0, 2.0, 0.0, 2.0)
        res = appendix_log_residual(c, np.linspace(0.2, 0.9, 15))
        worst = max(res.values())
        return ResidualReport("log_reduction", worst,
                              "c=(1,0,2,0,2), kappa in [0.2, 0.9]", 1e-5)

    def transfer():
        from . import channels
        worst = 0.0
        for positions, strengths, k in [((0.0,), (2.0,), 1.0),
                                        ((0.0, 1.0), (1.0, 1.0), 1.0),
                                        ((0.0, 0.7, 1.9),
                                         (1.0, -0.5, 2.0), 1.3)]:
            t, r = transfer_matrix_oracle(list(zip(positions, strengths)),
                                          k)
            arr = channels.SiteArray(
                [(pos, channels.MatrixCouplings.from_scalars(s, 0.0, 0.0))
                 for pos, s in zip(positions, strengths)])
            sol = channels.solve_scattering(
                arr, channels.IncidentWave(k, "left"))
            worst = max(worst,
                        abs(sol.outgoing_right[0] - t),
                        abs(sol.outgoing_left[0] - r))
        return ResidualReport("transfer_matrix", worst,
                              "1-3 delta sites vs channel solver", 1e-12)

    def corrupted_self_test():
        provider = _corrupted_provider((1.0, 2.0, 3.0))
        worst = float(np.max(resolvent_residual_closed(provider, 0.5,
                                                       2.0)))
        # this run must FAIL: the perturbation is designed to be seen
        return ResidualReport("corrupted_self_test", worst,
                              "f1 perturbed by 1e-3 (must fail)", 1e-4)

    return {
        "resolvent_closed": closed_form,
        "resolvent_integral": integral,
        "ode": ode,
        "log_reduction": log_reduction,
        "transfer_matrix": transfer,
        "corrupted_self_test": corrupted_self_test,
    }


def run_suite(names=None) -> list[ResidualReport]:
    """Run the named oracle checks (default: all regular ones)."""
    suite = default_suite()
    if names is None:
        names = [n for n in suite if n != "corrupted_self_test"]
    unknown = [n for n in names if n not in suite]
    if unknown:
        raise ValueError(f"unknown checks: {unknown}")
    return [suite[name]() for name in names]
