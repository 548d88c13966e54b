"""Quadrature helpers for integrals against the orbital polar density.

The polar density diverges like an inverse square root at the band edges.
Substituting the argument of latitude w (phi = pi/2 - arcsin(sin b sin w))
turns f(phi) dphi into dw/pi on a half-period, removing the singularity;
every integral against the density in this package goes through that
substitution.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.integrate import quad

from .geometry import ShellConfig


def omega_of_phi(phi, shell: ShellConfig):
    """Half-period argument of latitude for polar angle phi (decreasing map)."""
    arg = np.clip(np.cos(phi) / math.sin(shell.inclination_rad), -1.0, 1.0)
    return np.arcsin(arg)


def phi_of_omega(omega, shell: ShellConfig):
    """Polar angle reached at argument of latitude omega."""
    return np.pi / 2 - np.arcsin(math.sin(shell.inclination_rad) * np.sin(omega))


def density_integral(g, phi_lo: float, phi_hi: float, shell: ShellConfig,
                     breakpoints=(), rel_tol: float = 1e-9,
                     abs_tol: float = 1e-15, limit: int = 200) -> float:
    """Adaptive integral of f(phi) * g(phi) over [phi_lo, phi_hi].

    g is called with scalar phi. The interval is split at the given
    breakpoints (in phi) and each panel is integrated under a sine map,
    whose vanishing endpoint Jacobian absorbs both the square-root kinks
    of arc-length integrands and the inverse-square-root endpoints of
    their derivatives.
    """
    b_bar = shell.polar_inclination_rad
    lo = max(phi_lo, b_bar)
    hi = min(phi_hi, math.pi - b_bar)
    if lo >= hi:
        return 0.0
    # phi -> w is decreasing, so the w interval is [w(hi), w(lo)]
    w_lo = float(omega_of_phi(hi, shell))
    w_hi = float(omega_of_phi(lo, shell))
    edges = [w_lo] + sorted(
        float(omega_of_phi(p, shell)) for p in breakpoints if lo < p < hi
    ) + [w_hi]

    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)

        def integrand(t):
            w = mid + half * math.sin(t)
            jac = half * math.cos(t)
            return g(float(phi_of_omega(w, shell))) * jac

        # full_output suppresses QUADPACK's roundoff advisories (raised for
        # vanishing panels, where the returned value is still exact to
        # ~1e-10); the explicit error-estimate gate below replaces them
        out = quad(integrand, -math.pi / 2, math.pi / 2,
                   epsrel=rel_tol, epsabs=abs_tol, limit=limit,
                   full_output=1)
        val, abserr = out[0], out[1]
        if abserr > max(1e3 * abs_tol, 1e-6 * abs(val), 1e-10):
            warnings.warn(
                f"panel integral error estimate {abserr:.2e} exceeds budget "
                f"(value {val:.3e})", stacklevel=2)
        total += val
    return total / math.pi


def _gauss_rule(n: int):
    return np.polynomial.legendre.leggauss(n)


def sine_mapped_panels(a: float, b: float, breakpoints, n_nodes: int):
    """Fixed nodes/weights on [a, b] split at breakpoints.

    Each panel gets an n_nodes Gauss-Legendre rule under the substitution
    x = mid + half*sin(pi u / 2), whose vanishing endpoint Jacobian absorbs
    the square-root kinks the integrands here have at panel boundaries.
    """
    edges = [a] + sorted(p for p in breakpoints if a < p < b) + [b]
    x, w = _gauss_rule(n_nodes)
    s = np.sin(0.5 * np.pi * x)
    j = 0.5 * np.pi * np.cos(0.5 * np.pi * x)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        nodes.append(mid + half * s)
        weights.append(w * j * half)
    return np.concatenate(nodes), np.concatenate(weights)


def density_nodes(phi_lo: float, phi_hi: float, shell: ShellConfig,
                  breakpoints=(), n_nodes: int = 96):
    """Fixed-rule nodes for integrals of f(phi)*g(phi): returns (phi_k, w_k)
    with sum_k w_k * g(phi_k) approximating the integral."""
    b_bar = shell.polar_inclination_rad
    lo = max(phi_lo, b_bar)
    hi = min(phi_hi, math.pi - b_bar)
    if lo >= hi:
        return np.empty(0), np.empty(0)
    w_lo = float(omega_of_phi(hi, shell))
    w_hi = float(omega_of_phi(lo, shell))
    pts = [float(omega_of_phi(p, shell)) for p in breakpoints if lo < p < hi]
    w_nodes, w_weights = sine_mapped_panels(w_lo, w_hi, pts, n_nodes)
    return phi_of_omega(w_nodes, shell), w_weights / math.pi
