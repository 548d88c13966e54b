"""Marked binomial point process of satellite positions on the shell.

Each of the N satellites is i.i.d.: azimuth uniform on [0, 2pi), polar
angle following the inclination-band density, and an ascending/descending
mark. Sampling goes through a uniform argument of latitude, which both
realises the polar density exactly and avoids its edge singularities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import ShellConfig


@dataclass(frozen=True)
class SatellitePoint:
    """One marked point: azimuth, polar angle, ascending(+1)/descending(-1)."""

    theta_rad: float
    phi_rad: float
    mark: int


@dataclass(frozen=True)
class NbppModel:
    shell: ShellConfig
    n_points: int = 0

    def __post_init__(self):
        if self.n_points <= 0:
            object.__setattr__(self, "n_points", self.shell.n_sats)


def phi_pdf(shell: ShellConfig, phi):
    """Polar-angle density on the band, zero outside.

    Diverges (integrably) at the band edges; returns +inf exactly there.
    """
    phi = np.asarray(phi, dtype=float)
    b = shell.inclination_rad
    inside = (phi >= shell.polar_inclination_rad) & (phi <= np.pi - shell.polar_inclination_rad)
    s2 = np.sin(phi) ** 2 - math.cos(b) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.sin(phi) / (np.pi * np.sqrt(np.maximum(s2, 0.0)))
    out = np.where(inside, val, 0.0)
    return float(out) if out.ndim == 0 else out


def phi_cdf(shell: ShellConfig, phi):
    """Closed-form polar-angle CDF: arccos(cos phi / sin b)/pi on the band."""
    phi = np.asarray(phi, dtype=float)
    b_bar = shell.polar_inclination_rad
    arg = np.clip(np.cos(phi) / math.sin(shell.inclination_rad), -1.0, 1.0)
    val = np.arccos(arg) / np.pi
    out = np.where(phi < b_bar, 0.0, np.where(phi > np.pi - b_bar, 1.0, val))
    return float(out) if out.ndim == 0 else out


def sample_arrays(model: NbppModel, count: int, rng: np.random.Generator,
                  physical_marks: bool = False):
    """Vectorised i.i.d. draw: returns (theta, phi, mark) arrays.

    physical_marks ties the mark to the drawn argument of latitude
    (+1 on the northbound half) instead of an independent coin flip.
    """
    theta = rng.uniform(0.0, 2.0 * np.pi, size=count)
    omega = rng.uniform(0.0, 2.0 * np.pi, size=count)
    phi = np.pi / 2 - np.arcsin(math.sin(model.shell.inclination_rad) * np.sin(omega))
    if physical_marks:
        mark = np.where(np.cos(omega) > 0.0, 1, -1)
    else:
        mark = rng.choice(np.array([1, -1]), size=count)
    return theta, phi, mark


def sample(model: NbppModel, count: int, rng: np.random.Generator,
           physical_marks: bool = False) -> list[SatellitePoint]:
    """i.i.d. marked points; empty list for count = 0."""
    if count == 0:
        return []
    theta, phi, mark = sample_arrays(model, count, rng, physical_marks)
    return [SatellitePoint(float(t), float(p), int(m))
            for t, p, m in zip(theta, phi, mark)]


def sample_visible(shell: ShellConfig, user, count: int,
                   rng: np.random.Generator, physical_marks: bool = False,
                   chunk: int = 4_000_000):
    """Rejection-sample `count` satellites that fall inside the user's
    visible cap; returns (sigma, theta, phi, mark) arrays.

    Draws whole-shell batches and keeps hits, so the cost scales with
    1/p_sat; batches keep peak memory bounded.
    """
    model = NbppModel(shell)
    phi_u = user.user_polar_rad
    cos_s1 = math.cos(user.sigma_max_rad)
    keep_sig, keep_th, keep_ph, keep_mk = [], [], [], []
    got = 0
    while got < count:
        theta, phi, mark = sample_arrays(model, chunk, rng, physical_marks)
        cos_sig = (math.cos(phi_u) * np.cos(phi)
                   + math.sin(phi_u) * np.sin(phi) * np.sin(theta))
        sel = cos_sig >= cos_s1
        keep_sig.append(np.arccos(np.clip(cos_sig[sel], -1.0, 1.0)))
        keep_th.append(theta[sel])
        keep_ph.append(phi[sel])
        keep_mk.append(mark[sel])
        got += int(np.count_nonzero(sel))
    sig = np.concatenate(keep_sig)[:count]
    th = np.concatenate(keep_th)[:count]
    ph = np.concatenate(keep_ph)[:count]
    mk = np.concatenate(keep_mk)[:count]
    return sig, th, ph, mk
