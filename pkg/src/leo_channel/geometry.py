"""Spherical geometry of a user and a circular orbital shell.

Angles are radians, lengths metres, times seconds, frequencies Hz
throughout the package; only the CLI converts to and from degrees.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NoVisibleSatellites

LIGHT_SPEED_MPS = 299_792_458.0
MEAN_EARTH_RADIUS_M = 6_371_000.0

# Grace band for arccos/arcsin arguments: roundoff at cap boundaries may
# push them marginally outside [-1, 1]; anything further out is a bug.
_CLAMP_GRACE = 1e-12


def clamp_unit(x, grace: float = _CLAMP_GRACE):
    """Clamp x into [-1, 1], raising DomainError beyond the grace band."""
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) > 1.0 + grace):
        raise DomainError(f"argument {x!r} outside [-1, 1] beyond grace band")
    out = np.clip(xa, -1.0, 1.0)
    return float(out) if np.isscalar(x) or xa.ndim == 0 else out


@dataclass(frozen=True)
class ShellConfig:
    """Physical constants and constellation shell parameters."""

    earth_radius_m: float = MEAN_EARTH_RADIUS_M
    altitude_m: float = 550e3
    sat_speed_mps: float = 7.29e3
    carrier_hz: float = 12.7e9
    inclination_rad: float = math.radians(53.0)
    n_sats: int = 3168
    n_per_orbit: int = 22
    orbit_spacing_rad: float = math.radians(2.5)
    light_speed_mps: float = field(default=LIGHT_SPEED_MPS)

    def __post_init__(self):
        if self.earth_radius_m <= 0 or self.altitude_m <= 0:
            raise DomainError("earth radius and altitude must be positive")
        if self.sat_speed_mps <= 0 or self.carrier_hz <= 0:
            raise DomainError("satellite speed and carrier must be positive")
        if not 0.0 < self.inclination_rad < math.pi / 2:
            raise DomainError("inclination must lie in (0, pi/2)")
        expected = round(2.0 * math.pi / self.orbit_spacing_rad) * self.n_per_orbit
        if expected != self.n_sats:
            warnings.warn(
                f"n_sats={self.n_sats} inconsistent with "
                f"round(2*pi/orbit_spacing)*n_per_orbit={expected}",
                stacklevel=2,
            )

    @property
    def shell_radius_m(self) -> float:
        return self.earth_radius_m + self.altitude_m

    @property
    def polar_inclination_rad(self) -> float:
        """Complement of the inclination: the band of reachable polar angles
        is [polar_inclination, pi - polar_inclination]."""
        return math.pi / 2 - self.inclination_rad


def starlink_shell(**overrides) -> ShellConfig:
    """Shell with the Starlink first/fourth-shell parameters (the defaults)."""
    return ShellConfig(**overrides)


def slant_range(shell: ShellConfig, sigma) -> float:
    """User-satellite distance at central angle sigma (law of cosines)."""
    r, big_r = shell.earth_radius_m, shell.shell_radius_m
    return np.sqrt(r * r + big_r * big_r - 2.0 * r * big_r * np.cos(sigma))


def sigma_from_elevation(shell: ShellConfig, psi: float) -> float:
    """Central angle of a satellite seen at elevation psi above the horizon."""
    if not -_CLAMP_GRACE <= psi <= math.pi / 2 + _CLAMP_GRACE:
        raise DomainError("elevation must lie in [0, pi/2]")
    r, big_r = shell.earth_radius_m, shell.shell_radius_m
    d = r * (math.sqrt((big_r / r) ** 2 - math.cos(psi) ** 2) - math.sin(psi))
    arg = (r * r + big_r * big_r - d * d) / (2.0 * r * big_r)
    return math.acos(clamp_unit(arg))


def elevation_from_sigma(shell: ShellConfig, sigma: float, tol: float = 1e-12) -> float:
    """Invert sigma_from_elevation by bisection to tol radians."""
    sigma_horizon = math.acos(shell.earth_radius_m / shell.shell_radius_m)
    if not -_CLAMP_GRACE <= sigma <= sigma_horizon + _CLAMP_GRACE:
        raise DomainError(f"sigma {sigma} outside [0, {sigma_horizon}]")
    # arccos conditioning flattens sigma_from_elevation within ~1e-8 rad of
    # the zenith; the boundary values are analytic, so return them exactly
    if sigma <= 1e-8:
        return math.pi / 2
    lo, hi = 0.0, math.pi / 2  # sigma_from_elevation is decreasing in psi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if sigma_from_elevation(shell, mid) > sigma:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def central_angle_bounds(shell: ShellConfig, phi_u: float, sigma1: float):
    """(sigma_min, sigma_max) of visible satellites for a northern user.

    Raises NoVisibleSatellites when the visible cone misses the
    inclination band entirely.
    """
    b_bar = shell.polar_inclination_rad
    if phi_u >= b_bar:
        return 0.0, sigma1
    if b_bar - phi_u <= sigma1:
        return b_bar - phi_u, sigma1
    raise NoVisibleSatellites(
        f"user polar angle {phi_u:.4f} rad is {b_bar - phi_u:.4f} rad above the "
        f"band edge, beyond the cap angle {sigma1:.4f} rad"
    )


@dataclass(frozen=True)
class UserGeometry:
    """User position plus derived visible-cap angles.

    Southern-hemisphere users are reflected to the north at construction;
    the user sits at azimuth theta_u = pi/2 by convention.
    """

    user_polar_rad: float
    min_elevation_rad: float
    sigma1_rad: float
    sigma_min_rad: float
    sigma_max_rad: float
    user_azimuth_rad: float = math.pi / 2

    @classmethod
    def for_shell(cls, shell: ShellConfig, user_polar_rad: float,
                  min_elevation_rad: float) -> "UserGeometry":
        if not -_CLAMP_GRACE <= min_elevation_rad < math.pi / 2:
            raise DomainError("minimum elevation must lie in [0, pi/2)")
        phi_u = float(user_polar_rad)
        if not 0.0 <= phi_u <= math.pi:
            raise DomainError("user polar angle must lie in [0, pi]")
        if phi_u > math.pi / 2:
            phi_u = math.pi - phi_u
        sigma1 = sigma_from_elevation(shell, min_elevation_rad)
        sigma_min, sigma_max = central_angle_bounds(shell, phi_u, sigma1)
        return cls(phi_u, float(min_elevation_rad), sigma1, sigma_min, sigma_max)


def central_angle(user: UserGeometry, theta, phi):
    """Central angle between the user and a point (theta, phi) on the shell.

    The user azimuth is fixed at pi/2, which turns the usual
    cos(theta - theta_u) factor into sin(theta).
    """
    phi_u = user.user_polar_rad
    cos_sigma = (np.cos(phi_u) * np.cos(phi)
                 + np.sin(phi_u) * np.sin(phi) * np.sin(theta))
    return np.arccos(clamp_unit(cos_sigma))
