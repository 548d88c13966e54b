import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import chisquare

from leo_channel.nbpp import NbppModel, phi_cdf, phi_pdf, sample, sample_arrays


@pytest.fixture(scope="module")
def model(shell):
    return NbppModel(shell)


class TestPhiPdf:
    def test_equator_value(self, shell):
        b = shell.inclination_rad
        assert phi_pdf(shell, math.pi / 2) == pytest.approx(
            1.0 / (math.pi * math.sin(b)), rel=1e-12)
        assert phi_pdf(shell, math.pi / 2) == pytest.approx(0.3986, rel=1e-3)

    def test_zero_outside_band(self, shell):
        assert phi_pdf(shell, shell.polar_inclination_rad / 2) == 0.0
        assert phi_pdf(shell, math.pi - 0.01) == 0.0

    def test_integrates_to_one(self, shell):
        b_bar = shell.polar_inclination_rad
        val, err = quad(lambda p: phi_pdf(shell, p), b_bar, math.pi - b_bar,
                        epsabs=1e-12, limit=500)
        assert val == pytest.approx(1.0, abs=1e-9)


class TestPhiCdf:
    def test_median_at_equator(self, shell):
        assert phi_cdf(shell, math.pi / 2) == pytest.approx(0.5, abs=1e-12)

    def test_support_endpoints(self, shell):
        b_bar = shell.polar_inclination_rad
        assert phi_cdf(shell, b_bar) == pytest.approx(0.0, abs=1e-7)
        assert phi_cdf(shell, math.pi - b_bar) == pytest.approx(1.0, abs=1e-7)
        assert phi_cdf(shell, 0.0) == 0.0
        assert phi_cdf(shell, math.pi) == 1.0

    def test_closed_form_matches_quadrature(self, shell):
        # the closed form is a derivation, not a quotation: validate it
        b_bar = shell.polar_inclination_rad
        for x in (0.9, 1.2, 1.8, 2.2):
            want, _ = quad(lambda p: phi_pdf(shell, p), b_bar, x,
                           epsabs=1e-12, limit=500)
            assert phi_cdf(shell, x) == pytest.approx(want, abs=1e-8)

    def test_nondecreasing(self, shell):
        grid = np.linspace(0.0, math.pi, 2000)
        vals = phi_cdf(shell, grid)
        assert np.all(np.diff(vals) >= 0.0)

    def test_derivative_matches_pdf(self, shell):
        b_bar = shell.polar_inclination_rad
        phi = np.linspace(b_bar + 0.01, math.pi - b_bar - 0.01, 1000)
        h = 1e-7
        fd = (phi_cdf(shell, phi + h) - phi_cdf(shell, phi - h)) / (2 * h)
        pdf = phi_pdf(shell, phi)
        assert np.max(np.abs(fd / pdf - 1.0)) < 1e-5


class TestSampling:
    def test_reproducible(self, model):
        a = sample(model, 100, np.random.default_rng(11))
        b = sample(model, 100, np.random.default_rng(11))
        assert a == b

    def test_empty(self, model):
        assert sample(model, 0, np.random.default_rng(0)) == []

    def test_ks_against_cdf(self, model, shell):
        from leo_channel.orbit_sim import ks_distance

        _, phi, _ = sample_arrays(model, 1_000_000, np.random.default_rng(12))
        d = ks_distance(phi, lambda x: phi_cdf(shell, x))
        assert d < 0.002

    def test_mark_balance(self, model):
        _, _, mark = sample_arrays(model, 1_000_000, np.random.default_rng(13))
        assert np.mean(mark == 1) == pytest.approx(0.5, abs=0.002)

    def test_theta_uniform(self, model):
        theta, _, _ = sample_arrays(model, 200_000, np.random.default_rng(14))
        assert theta.min() >= 0.0 and theta.max() <= 2 * math.pi
        assert np.mean(theta) == pytest.approx(math.pi, abs=0.01)

    def test_chi_square_against_pdf(self, model, shell):
        n = 1_000_000
        _, phi, _ = sample_arrays(model, n, np.random.default_rng(15))
        b_bar = shell.polar_inclination_rad
        edges = np.linspace(b_bar, math.pi - b_bar, 51)
        counts, _ = np.histogram(phi, bins=edges)
        expected = np.diff(phi_cdf(shell, edges)) * n
        stat, p_value = chisquare(counts, expected * counts.sum() / expected.sum())
        assert p_value > 0.01

    def test_mark_phi_independence(self, model):
        n = 1_000_000
        _, phi, mark = sample_arrays(model, n, np.random.default_rng(16))
        corr = np.corrcoef(mark, phi)[0, 1]
        assert abs(corr) < 3.0 / math.sqrt(n)

    def test_physical_marks_follow_latitude_rate(self, model):
        rng = np.random.default_rng(17)
        theta, phi, mark = sample_arrays(model, 10_000, rng, physical_marks=True)
        # physical marks are deterministic in omega, still balanced overall
        assert abs(np.mean(mark)) < 0.05

    def test_band_respected(self, model, shell):
        _, phi, _ = sample_arrays(model, 100_000, np.random.default_rng(18))
        b_bar = shell.polar_inclination_rad
        assert phi.min() >= b_bar - 1e-12
        assert phi.max() <= math.pi - b_bar + 1e-12
