"""Analytic distributions of gain, delay and Doppler for a visible satellite.

Gain and delay depend on the central angle alone, so their CDFs are
reparameterisations of the cap probability and their PDFs follow from its
cos-sigma derivative. The Doppler shift also depends on azimuth, so its
CDF is a double integral: per polar angle, the sublevel set of the Doppler
function along the cap slice is located by a bracketing scan plus
bisection, and the outer integral runs adaptively in argument-of-latitude
space.

Dense grids (Doppler PDF, joint delay-Doppler PDF) would need tens of
thousands of such CDF evaluations, so they use a fixed-rule evaluator
instead: sine-mapped Gauss-Legendre nodes for the outer integral and a
piecewise-linear sublevel measure in azimuth whose contribution to every
grid point is accumulated at once (each azimuth cell is a linear ramp in
nu; sorting ramp endpoints turns the whole grid into two cumulative sums).
The two routes are cross-checked in the test suite.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import quad

from .geometry import ShellConfig, UserGeometry
from .nbpp import phi_pdf
from .propagation import delay_inverse, doppler_hz_arrays, gain_inverse
from .quadrature import density_integral, density_nodes
from .visibility import CapModel, _active_band, arc_halfwidth_clamped

log = logging.getLogger(__name__)

_DOPPLER_SCAN = 512
_BISECT_ITERS = 48


# ---------------------------------------------------------------------------
# grid specifications

@dataclass(frozen=True)
class DopplerGridSpec:
    """Uniform nu grid; unresolved bounds default to +-nu_max with one
    padding cell so the support is strictly covered."""

    nu_step_hz: float = 2.65e3
    nu_min_hz: float | None = None
    nu_max_hz: float | None = None

    def __post_init__(self):
        if self.nu_step_hz <= 0:
            raise ValueError("nu_step_hz must be positive")
        if self.nu_min_hz is not None and self.nu_max_hz is not None:
            if self.nu_min_hz >= self.nu_max_hz:
                raise ValueError("nu_min_hz must be below nu_max_hz")

    def resolve(self, model: CapModel) -> "DopplerGridSpec":
        if self.nu_min_hz is not None and self.nu_max_hz is not None:
            return self
        half = (math.ceil(model.nu_max_hz / self.nu_step_hz) + 1) * self.nu_step_hz
        return replace(self, nu_min_hz=-half, nu_max_hz=half)

    def nu_edges(self) -> np.ndarray:
        n = math.ceil((self.nu_max_hz - self.nu_min_hz) / self.nu_step_hz - 1e-9)
        return self.nu_min_hz + self.nu_step_hz * np.arange(n + 1)

    def nu_centers(self) -> np.ndarray:
        e = self.nu_edges()
        return 0.5 * (e[:-1] + e[1:])


@dataclass(frozen=True)
class JointGridSpec:
    """Uniform (tau, nu) grid covering the full delay-Doppler support."""

    nu_step_hz: float = 2.61e3
    tau_step_s: float = 2.8e-5
    nu_min_hz: float | None = None
    nu_max_hz: float | None = None
    tau_min_s: float | None = None
    tau_max_s: float | None = None

    def __post_init__(self):
        if self.nu_step_hz <= 0 or self.tau_step_s <= 0:
            raise ValueError("grid steps must be positive")

    def resolve(self, model: CapModel) -> "JointGridSpec":
        out = self
        if out.nu_min_hz is None or out.nu_max_hz is None:
            # tight cover (no padding cell): trapezoid integrals then lose
            # half of whatever mass a too-coarse step leaves in the
            # outermost columns, which is what the resolution check detects
            half = math.ceil(model.nu_max_hz / out.nu_step_hz) * out.nu_step_hz
            out = replace(out, nu_min_hz=-half, nu_max_hz=half)
        if out.tau_min_s is None or out.tau_max_s is None:
            tau_lo, tau_hi = model.delay_bounds
            out = replace(out, tau_min_s=tau_lo, tau_max_s=tau_hi)
        return out

    def nu_edges(self) -> np.ndarray:
        n = math.ceil((self.nu_max_hz - self.nu_min_hz) / self.nu_step_hz - 1e-9)
        return self.nu_min_hz + self.nu_step_hz * np.arange(n + 1)

    def tau_edges(self) -> np.ndarray:
        # one padding cell each side: the outermost rows carry no mass, so
        # trapezoid integrals see the support edges instead of cutting them
        n = math.ceil((self.tau_max_s - self.tau_min_s) / self.tau_step_s - 1e-9)
        return self.tau_min_s + self.tau_step_s * (np.arange(n + 3) - 1)

    def nu_centers(self) -> np.ndarray:
        e = self.nu_edges()
        return 0.5 * (e[:-1] + e[1:])

    def tau_centers(self) -> np.ndarray:
        e = self.tau_edges()
        return 0.5 * (e[:-1] + e[1:])


# ---------------------------------------------------------------------------
# gain and delay

def gain_cdf(model: CapModel, g: float) -> float:
    g_min, g_max = model.gain_bounds
    if g <= g_min:
        return 0.0
    if g >= g_max:
        return 1.0
    val = 1.0 - model.p_cap(gain_inverse(model.shell, g)) / model.p_sat
    return min(1.0, max(0.0, val))


def gain_pdf(model: CapModel, g: float) -> float:
    g_min, g_max = model.gain_bounds
    g = min(max(g, g_min), g_max)
    r, big_r = model.shell.earth_radius_m, model.shell.shell_radius_m
    sigma = gain_inverse(model.shell, g)
    return -model.p_cap_prime(sigma) / (2.0 * g * g * r * big_r * model.p_sat)


def delay_cdf(model: CapModel, tau: float) -> float:
    tau_lo, tau_hi = model.delay_bounds
    if tau <= tau_lo:
        return 0.0
    if tau >= tau_hi:
        return 1.0
    val = model.p_cap(delay_inverse(model.shell, tau)) / model.p_sat
    return min(1.0, max(0.0, val))


def delay_pdf(model: CapModel, tau: float) -> float:
    tau_lo, tau_hi = model.delay_bounds
    tau = min(max(tau, tau_lo), tau_hi)
    shell = model.shell
    sigma = delay_inverse(shell, tau)
    c = shell.light_speed_mps
    return (-model.p_cap_prime(sigma) * c * c * tau
            / (shell.earth_radius_m * shell.shell_radius_m * model.p_sat))


# ---------------------------------------------------------------------------
# Doppler: adaptive scalar route

def _sublevel_measure(shell: ShellConfig, user: UserGeometry, phi: float,
                      mark: int, half: float, nu_hz: float,
                      n_scan: int = _DOPPLER_SCAN) -> float:
    """Length of {theta in the cap slice: doppler(theta) <= nu_hz}.

    Bracketing scan followed by vectorised bisection on each sign change.
    """
    if half <= 0.0:
        return 0.0
    tu = user.user_azimuth_rad
    t = np.linspace(tu - half, tu + half, n_scan)
    g = doppler_hz_arrays(shell, user, t, phi, mark) - nu_hz
    below = g <= 0.0
    flips = np.nonzero(below[:-1] != below[1:])[0]
    if flips.size == 0:
        return 2.0 * half if below[0] else 0.0
    lo, hi = t[flips], t[flips + 1]
    lo_below = below[flips]
    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        mid_below = (doppler_hz_arrays(shell, user, mid, phi, mark) - nu_hz) <= 0.0
        same = mid_below == lo_below
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    roots = 0.5 * (lo + hi)
    bounds = np.concatenate(([t[0]], roots, [t[-1]]))
    seg = np.diff(bounds)
    idx = np.arange(seg.size)
    inside = (idx % 2 == 0) if below[0] else (idx % 2 == 1)
    return float(seg[inside].sum())


def doppler_cdf(model: CapModel, nu_hz: float, mark: int,
                cap_sigma: float | None = None) -> float:
    """CDF of the Doppler shift of a visible satellite on the given mark.

    With cap_sigma set, conditions on the sub-cap of that central angle
    while keeping the full-cap normalisation (the joint-CDF convention).
    """
    shell, user = model.shell, model.user
    if cap_sigma is None:
        cap_sigma = user.sigma_max_rad
    lo, hi, breaks = _active_band(shell, user, cap_sigma)
    if lo >= hi:
        return 0.0

    def measure(phi: float) -> float:
        half = float(arc_halfwidth_clamped(user, phi, cap_sigma))
        return _sublevel_measure(shell, user, phi, mark, half, nu_hz)

    val = density_integral(measure, lo, hi, shell, breakpoints=breaks,
                           rel_tol=1e-8, limit=300)
    return val / (2.0 * math.pi * model.p_sat)


def doppler_cdf_mixed(model: CapModel, nu_hz: float) -> float:
    """Equal-weight mixture over ascending and descending marks."""
    return 0.5 * (doppler_cdf(model, nu_hz, 1) + doppler_cdf(model, nu_hz, -1))


def joint_cdf(model: CapModel, nu_hz: float, tau: float, mark: int) -> float:
    """Joint delay-Doppler CDF: the Doppler integral over the sub-cap
    reached within delay tau, normalised by the full-cap probability."""
    tau_lo, tau_hi = model.delay_bounds
    tau = min(max(tau, tau_lo), tau_hi)
    return doppler_cdf(model, nu_hz, mark,
                       cap_sigma=delay_inverse(model.shell, tau))


# ---------------------------------------------------------------------------
# Doppler: vectorised grid route

def doppler_cdf_grid(model: CapModel, nu_edges: np.ndarray, mark: int,
                     cap_sigma: float | None = None, n_theta: int = 1024,
                     n_nodes: int = 384) -> np.ndarray:
    """Doppler CDF on a whole nu grid in one pass (fixed-rule evaluator)."""
    shell, user = model.shell, model.user
    if cap_sigma is None:
        cap_sigma = user.sigma_max_rad
    nu_edges = np.asarray(nu_edges, dtype=float)
    lo, hi, breaks = _active_band(shell, user, cap_sigma)
    if lo >= hi:
        return np.zeros_like(nu_edges)
    phi_k, w_k = density_nodes(lo, hi, shell, breakpoints=breaks,
                               n_nodes=n_nodes)
    half = arc_halfwidth_clamped(user, phi_k, cap_sigma)
    t = np.linspace(-1.0, 1.0, n_theta)
    theta = user.user_azimuth_rad + half[:, None] * t[None, :]
    v = doppler_hz_arrays(shell, user, theta, phi_k[:, None], mark)

    cell_lo = np.minimum(v[:, :-1], v[:, 1:]).ravel()
    cell_hi = np.maximum(v[:, :-1], v[:, 1:]).ravel()
    cell_mass = np.broadcast_to(
        (w_k * half * (2.0 / (n_theta - 1)))[:, None] /
        (2.0 * math.pi * model.p_sat),
        (phi_k.size, n_theta - 1),
    ).ravel()

    span = cell_hi - cell_lo
    scale = float(np.max(np.abs(v))) or 1.0
    is_atom = span < 1e-9 * scale

    out = np.zeros_like(nu_edges)
    # linear ramps: each cell adds slope at lo and removes it at hi
    if np.any(~is_atom):
        slope = cell_mass[~is_atom] / span[~is_atom]
        xs = np.concatenate([cell_lo[~is_atom], cell_hi[~is_atom]])
        ss = np.concatenate([slope, -slope])
        order = np.argsort(xs, kind="stable")
        xs, ss = xs[order], ss[order]
        cum_s = np.cumsum(ss)
        cum_sx = np.cumsum(ss * xs)
        idx = np.searchsorted(xs, nu_edges, side="right")
        pos = idx > 0
        out[pos] += cum_s[idx[pos] - 1] * nu_edges[pos] - cum_sx[idx[pos] - 1]
    if np.any(is_atom):
        xa = 0.5 * (cell_lo[is_atom] + cell_hi[is_atom])
        ma = cell_mass[is_atom]
        order = np.argsort(xa, kind="stable")
        xa, ma = xa[order], ma[order]
        cum_m = np.cumsum(ma)
        idx = np.searchsorted(xa, nu_edges, side="right")
        pos = idx > 0
        out[pos] += cum_m[idx[pos] - 1]
    return out


def doppler_pdf_grid(model: CapModel, spec: DopplerGridSpec | None = None,
                     n_theta: int = 1024, n_nodes: int = 384) -> tuple[np.ndarray, np.ndarray]:
    """Mark-mixed Doppler PDF by forward differences of the grid CDF.

    Returns (nu_centers, pdf). Tiny negatives from numerical noise are
    clamped to zero and counted.
    """
    spec = (spec or DopplerGridSpec()).resolve(model)
    edges = spec.nu_edges()
    f = 0.5 * (doppler_cdf_grid(model, edges, 1, n_theta=n_theta, n_nodes=n_nodes)
               + doppler_cdf_grid(model, edges, -1, n_theta=n_theta, n_nodes=n_nodes))
    pdf = np.diff(f) / spec.nu_step_hz
    negative = (pdf < 0.0) & (pdf > -1e-9)
    if np.any(negative):
        log.info("doppler_pdf_grid clamped %d tiny negative bins",
                 int(np.count_nonzero(negative)))
        pdf = np.where(negative, 0.0, pdf)
    return spec.nu_centers(), pdf


def joint_pdf_grid(model: CapModel, spec: JointGridSpec | None = None,
                   mark: int = 1, n_theta: int = 1024,
                   n_nodes: int = 384) -> tuple[JointGridSpec, np.ndarray]:
    """Joint delay-Doppler PDF for one mark: mixed second-order forward
    differences of the joint CDF over the (tau, nu) edge grid.

    Returns (resolved spec, pdf matrix with shape (n_tau_cells, n_nu_cells)).
    """
    from .parallel import ordered_map

    spec = (spec or JointGridSpec()).resolve(model)
    nu_edges = spec.nu_edges()
    tau_lo, tau_hi = model.delay_bounds
    tau_edges = np.clip(spec.tau_edges(), tau_lo, tau_hi)
    sigmas = delay_inverse(model.shell, tau_edges)

    rows = ordered_map(
        lambda s: doppler_cdf_grid(model, nu_edges, mark, cap_sigma=float(s),
                                   n_theta=n_theta, n_nodes=n_nodes),
        sigmas,
    )
    f = np.vstack(rows)
    pdf = ((f[1:, 1:] - f[1:, :-1] - f[:-1, 1:] + f[:-1, :-1])
           / (spec.nu_step_hz * spec.tau_step_s))
    floor = -1e-6 * float(pdf.max(initial=0.0))
    negative = (pdf < 0.0) & (pdf > floor)
    if np.any(negative):
        log.info("joint_pdf_grid clamped %d tiny negative cells",
                 int(np.count_nonzero(negative)))
        pdf = np.where(negative, 0.0, pdf)
    return spec, pdf


# ---------------------------------------------------------------------------
# batch evaluation for large sample sets (KS tests, CSV sweeps)

def pcap_interpolator(model: CapModel, n: int = 2001):
    """Vectorised sigma -> p_cap via a dense precomputed table.

    p_cap is smooth on the support, so linear interpolation at this
    density is accurate to ~1e-9 of p_sat; callers needing the adaptive
    route evaluate model.p_cap directly.
    """
    lo, hi = model.user.sigma_min_rad, model.user.sigma_max_rad
    grid = np.linspace(lo, hi, n)
    table = np.array([model.p_cap(float(s)) for s in grid])

    def interp(sigma):
        return np.interp(np.asarray(sigma, dtype=float), grid, table,
                         left=0.0, right=model.p_sat)

    return interp


def gain_cdf_batch(model: CapModel, g, pcap=None) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    g_min, g_max = model.gain_bounds
    pcap = pcap or pcap_interpolator(model)
    sigma = gain_inverse(model.shell, np.clip(g, g_min, g_max))
    out = 1.0 - pcap(sigma) / model.p_sat
    return np.clip(np.where(g <= g_min, 0.0, np.where(g >= g_max, 1.0, out)),
                   0.0, 1.0)


def delay_cdf_batch(model: CapModel, tau, pcap=None) -> np.ndarray:
    tau = np.asarray(tau, dtype=float)
    tau_lo, tau_hi = model.delay_bounds
    pcap = pcap or pcap_interpolator(model)
    sigma = delay_inverse(model.shell, np.clip(tau, tau_lo, tau_hi))
    out = pcap(sigma) / model.p_sat
    return np.clip(np.where(tau <= tau_lo, 0.0, np.where(tau >= tau_hi, 1.0, out)),
                   0.0, 1.0)


def doppler_cdf_mixed_batch(model: CapModel, nu, n_grid: int = 2001,
                            n_theta: int = 1024, n_nodes: int = 384) -> np.ndarray:
    """Mark-mixed Doppler CDF at arbitrary nu values via a dense grid pass."""
    nu = np.asarray(nu, dtype=float)
    bound = 1.0001 * model.nu_max_hz
    edges = np.linspace(-bound, bound, n_grid)
    f = 0.5 * (doppler_cdf_grid(model, edges, 1, n_theta=n_theta, n_nodes=n_nodes)
               + doppler_cdf_grid(model, edges, -1, n_theta=n_theta, n_nodes=n_nodes))
    return np.interp(nu, edges, f, left=0.0, right=1.0)


# ---------------------------------------------------------------------------
# Rayleigh-faded gain

def rayleigh_gain_cdf(model: CapModel, y: float) -> float:
    """CDF of the gain with unit-mean-power Rayleigh fading on top.

    The fading power is exponential with mean one; conditioning on it
    reduces to a single integral against the cap probability.
    """
    if y <= 0.0:
        return 0.0
    g_min, g_max = model.gain_bounds
    z_lo, z_hi = y / g_max, y / g_min

    def integrand(z: float) -> float:
        g = min(max(y / z, g_min), g_max)
        return math.exp(-z) * model.p_cap(gain_inverse(model.shell, g))

    val, _ = quad(integrand, z_lo, z_hi, epsabs=1e-14, epsrel=1e-9, limit=200)
    return 1.0 - math.exp(-z_hi) - val / model.p_sat


def rayleigh_gain_cdf_grid(model: CapModel, y: np.ndarray,
                           n_nodes: int = 384) -> np.ndarray:
    """Vectorised Rayleigh gain CDF over an array of y values.

    Uses a fixed Gauss-Legendre rule in gain space with the cap
    probability precomputed at the nodes; cross-checked against the
    adaptive scalar route in the tests.
    """
    y = np.atleast_1d(np.asarray(y, dtype=float))
    g_min, g_max = model.gain_bounds
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    g = 0.5 * (g_min + g_max) + 0.5 * (g_max - g_min) * x
    w = 0.5 * (g_max - g_min) * w
    pcap = np.array([model.p_cap(gain_inverse(model.shell, float(gg)))
                     for gg in g])
    out = np.empty_like(y)
    for lo in range(0, y.size, 65536):  # bound the (chunk, nodes) workspace
        yy = y[lo:lo + 65536, None]
        integ = np.sum(w * pcap * np.exp(-yy / g) * (yy / (g * g)), axis=1)
        out[lo:lo + 65536] = 1.0 - np.exp(-yy[:, 0] / g_min) - integ / model.p_sat
    return np.where(y <= 0.0, 0.0, np.clip(out, 0.0, 1.0))
