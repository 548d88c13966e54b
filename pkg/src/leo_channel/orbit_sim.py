"""Deterministic Walker-delta circular-orbit simulator.

Evenly spaced orbital planes of equal inclination, evenly phased
satellites per plane, all advancing in argument of latitude at the
constant rate v/R. This is the deterministic system the stochastic model
abstracts; snapshot observations of a randomly chosen visible satellite
provide the empirical side of the model-versus-truth comparison.

The user is held static in the constellation frame (no Earth rotation),
matching the stochastic model's geometry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError
from .geometry import ShellConfig, UserGeometry, slant_range
from .nbpp import SatellitePoint
from .propagation import doppler_hz_arrays

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class WalkerConstellation:
    shell: ShellConfig
    inter_orbit_phase: float
    ascending_nodes: np.ndarray = field(repr=False)
    phase_offsets: np.ndarray = field(repr=False)  # per (orbit, slot)

    @property
    def n_total(self) -> int:
        return self.phase_offsets.size


@dataclass(frozen=True)
class SnapshotObservation:
    time_s: float
    gain: float
    delay_s: float
    doppler_hz: float
    mark: int
    visible_count: int


def build(shell: ShellConfig, inter_orbit_phase: float = 0.0) -> WalkerConstellation:
    """Deterministic layout: orbit k has ascending node k*s_orb; slot j on
    orbit k starts at argument of latitude j*s_sat + k*inter_orbit_phase."""
    n_orbits = round(_TWO_PI / shell.orbit_spacing_rad)
    if n_orbits * shell.n_per_orbit != shell.n_sats:
        raise ConfigError(
            f"{n_orbits} orbits x {shell.n_per_orbit} per orbit != {shell.n_sats}"
        )
    nodes = shell.orbit_spacing_rad * np.arange(n_orbits)
    s_sat = _TWO_PI / shell.n_per_orbit
    slots = s_sat * np.arange(shell.n_per_orbit)
    phases = (slots[None, :] + inter_orbit_phase * np.arange(n_orbits)[:, None]) % _TWO_PI
    return WalkerConstellation(
        shell=shell,
        inter_orbit_phase=inter_orbit_phase,
        ascending_nodes=nodes,
        phase_offsets=phases,
    )


def propagate_arrays(constellation: WalkerConstellation, t: float):
    """(theta, phi, mark) arrays of every satellite at time t.

    Latitude comes from sin(lat) = sin(b) sin(omega); longitude from the
    node plus atan2(cos(b) sin(omega), cos(omega)); the mark is the sign
    of the latitude rate, i.e. of cos(omega).
    """
    shell = constellation.shell
    b = shell.inclination_rad
    rate = shell.sat_speed_mps / shell.shell_radius_m
    omega = (constellation.phase_offsets + rate * t) % _TWO_PI
    nodes = constellation.ascending_nodes[:, None]
    phi = np.pi / 2 - np.arcsin(math.sin(b) * np.sin(omega))
    theta = (nodes + np.arctan2(math.cos(b) * np.sin(omega), np.cos(omega))) % _TWO_PI
    mark = np.where(np.cos(omega) > 0.0, 1, -1)
    return theta.ravel(), phi.ravel(), mark.ravel()


def propagate(constellation: WalkerConstellation, t: float) -> list[SatellitePoint]:
    theta, phi, mark = propagate_arrays(constellation, t)
    return [SatellitePoint(float(a), float(b_), int(m))
            for a, b_, m in zip(theta, phi, mark)]


def positions_cartesian(constellation: WalkerConstellation, t: float) -> np.ndarray:
    """(N, 3) satellite positions in metres; handy for invariant checks."""
    theta, phi, _ = propagate_arrays(constellation, t)
    big_r = constellation.shell.shell_radius_m
    sin_phi = np.sin(phi)
    return np.column_stack([
        big_r * sin_phi * np.cos(theta),
        big_r * sin_phi * np.sin(theta),
        big_r * np.cos(phi),
    ])


def snapshot_sample(constellation: WalkerConstellation, user: UserGeometry,
                    times, rng: np.random.Generator) -> list[SnapshotObservation]:
    """One observation per snapshot: a uniformly chosen visible satellite's
    gain, delay, Doppler and mark. Empty snapshots record visible_count=0."""
    shell = constellation.shell
    phi_u = user.user_polar_rad
    cos_s1 = math.cos(user.sigma_max_rad)
    out: list[SnapshotObservation] = []
    for t in np.asarray(times, dtype=float):
        theta, phi, mark = propagate_arrays(constellation, float(t))
        cos_sig = (math.cos(phi_u) * np.cos(phi)
                   + math.sin(phi_u) * np.sin(phi) * np.sin(theta))
        vis = np.nonzero(cos_sig >= cos_s1)[0]
        if vis.size == 0:
            out.append(SnapshotObservation(float(t), math.nan, math.nan,
                                           math.nan, 0, 0))
            continue
        pick = int(vis[rng.integers(vis.size)])
        sigma = math.acos(min(1.0, max(-1.0, float(cos_sig[pick]))))
        dist = float(slant_range(shell, sigma))
        g = 1.0 / (dist * dist)
        tau = dist / shell.light_speed_mps
        nu = float(doppler_hz_arrays(shell, user, theta[pick], phi[pick],
                                     int(mark[pick])))
        out.append(SnapshotObservation(float(t), g, tau, nu,
                                       int(mark[pick]), int(vis.size)))
    return out


def observation_arrays(observations: list[SnapshotObservation]):
    """(gain, delay, doppler, mark, visible_count) arrays, empty snapshots
    dropped from the first four."""
    counts = np.array([o.visible_count for o in observations])
    kept = [o for o in observations if o.visible_count > 0]
    return (np.array([o.gain for o in kept]),
            np.array([o.delay_s for o in kept]),
            np.array([o.doppler_hz for o in kept]),
            np.array([o.mark for o in kept]),
            counts)


def default_snapshot_times(n: int, rng: np.random.Generator,
                           spacing_s: float = 1.0) -> np.ndarray:
    """n snapshots at fixed spacing from a randomised initial epoch."""
    t0 = rng.uniform(0.0, spacing_s * n)
    return t0 + spacing_s * np.arange(n)


def ks_distance(samples, analytic_cdf) -> float:
    """Kolmogorov-Smirnov sup distance between the empirical CDF of the
    samples and the analytic CDF (evaluated at the points and left limits).

    analytic_cdf may be scalar- or vector-valued.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n == 0:
        raise DomainError("ks_distance needs at least one sample")
    try:
        f = np.asarray(analytic_cdf(x), dtype=float)
        if f.shape != x.shape:
            raise TypeError
    except (TypeError, ValueError):
        f = np.array([analytic_cdf(float(v)) for v in x])
    grid = np.arange(1, n + 1) / n
    return float(max(np.max(np.abs(f - grid)), np.max(np.abs(f - (grid - 1.0 / n)))))
