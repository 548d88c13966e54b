"""Independent verification routes used by the tests.

Each oracle deliberately avoids the code path it checks: Doppler is
rebuilt from Cartesian vectors, the cap arc length from a brute-force
azimuth scan, and the Doppler CDF from a naive two-dimensional Riemann
sum over the cap.
"""

import math

import numpy as np

from leo_channel.geometry import ShellConfig, UserGeometry
from leo_channel.nbpp import phi_pdf


def doppler_cartesian(shell: ShellConfig, user: UserGeometry,
                      theta: float, phi: float, mark: int) -> float:
    """Doppler in Hz from explicit velocity / line-of-sight vectors.

    The satellite moves at speed v along the heading set by its direction
    angle in the local tangent frame; positive Doppler means the range is
    shrinking, so the projection onto the user-to-satellite vector enters
    with a minus sign.
    """
    b = shell.inclination_rad
    beta = mark * math.acos(min(1.0, max(-1.0, math.cos(b) / math.sin(phi))))
    east = np.array([-math.sin(theta), math.cos(theta), 0.0])
    south = np.array([math.cos(phi) * math.cos(theta),
                      math.cos(phi) * math.sin(theta),
                      -math.sin(phi)])
    vel = shell.sat_speed_mps * (math.cos(beta) * east - math.sin(beta) * south)

    big_r, r = shell.shell_radius_m, shell.earth_radius_m
    sat = big_r * np.array([math.sin(phi) * math.cos(theta),
                            math.sin(phi) * math.sin(theta),
                            math.cos(phi)])
    tu, pu = user.user_azimuth_rad, user.user_polar_rad
    usr = r * np.array([math.sin(pu) * math.cos(tu),
                        math.sin(pu) * math.sin(tu),
                        math.cos(pu)])
    los = sat - usr
    range_rate = float(np.dot(vel, los) / np.linalg.norm(los))
    return -shell.carrier_hz / shell.light_speed_mps * range_rate


def arc_fraction_scan(user: UserGeometry, phi: float, sigma: float,
                      n: int = 1_000_000) -> float:
    """Fraction of the latitude line inside the cap, by indicator scan."""
    theta = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    pu = user.user_polar_rad
    cos_sig = (math.cos(pu) * math.cos(phi)
               + math.sin(pu) * math.sin(phi) * np.sin(theta))
    return float(np.mean(cos_sig >= math.cos(sigma)))


def doppler_cdf_riemann(shell: ShellConfig, user: UserGeometry, nu_hz: float,
                        mark: int, cap_sigma: float, p_sat: float,
                        n_phi: int = 1200, n_theta: int = 2400) -> float:
    """Naive 2-D Riemann sum of the Doppler CDF over the cap."""
    from leo_channel.propagation import doppler_hz_arrays

    b_bar = shell.polar_inclination_rad
    pu = user.user_polar_rad
    lo = max(b_bar, pu - cap_sigma)
    hi = min(math.pi - b_bar, pu + cap_sigma)
    # midpoint rule keeps the density's edge singularity integrable
    phi = lo + (hi - lo) * (np.arange(n_phi) + 0.5) / n_phi
    theta = 2.0 * np.pi * (np.arange(n_theta) + 0.5) / n_theta
    tt, pp = np.meshgrid(theta, phi)
    cos_sig = (math.cos(pu) * np.cos(pp)
               + math.sin(pu) * np.sin(pp) * np.sin(tt))
    inside = cos_sig >= math.cos(cap_sigma)
    v = doppler_hz_arrays(shell, user, tt, pp, mark)
    w = phi_pdf(shell, phi)[:, None] / (2.0 * np.pi)
    cell = (hi - lo) / n_phi * (2.0 * np.pi / n_theta)
    total = float(np.sum(w * (inside & (v <= nu_hz)))) * cell
    return total / p_sat


def central_diff(f, x: float, h: float) -> float:
    return (f(x + h) - f(x - h)) / (2.0 * h)
