import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ramanpump import analytic, spectra
from ramanpump.analytic import DeltaLine, LorentzLine, SpectrumModel

from conftest import ORGANIC_DRIVE, ORGANIC_ENV, ORGANIC_MOL


def grid(lo=0.0, hi=2.0, n=401):
    return spectra.FrequencyGrid(lo, hi, n)


class TestGrid:
    @pytest.mark.parametrize("args", [(1.0, 1.0, 10), (2.0, 1.0, 10), (0.0, 1.0, 1)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            spectra.FrequencyGrid(*args)

    def test_explicit_points(self):
        g = spectra.FrequencyGrid(points=(0.1, 0.2, 0.5))
        np.testing.assert_array_equal(g.values(), [0.1, 0.2, 0.5])
        with pytest.raises(ValueError):
            spectra.FrequencyGrid(points=(0.1, 0.1, 0.5))

    def test_probe_default(self):
        g = spectra.FrequencyGrid.around_probe(ORGANIC_MOL, ORGANIC_DRIVE)
        w = g.values()
        assert w.size == 2001
        assert math.isclose(w[0], 1.85) and math.isclose(w[-1], 2.15)


class TestSample:
    def test_empty_model(self):
        s = spectra.sample(SpectrumModel((), ()), grid())
        assert not s.intensity.any() and s.delta_markers == ()

    def test_peak_value(self):
        m = SpectrumModel((), (LorentzLine(1.0, 0.7, 0.01, "stokes_vis"),))
        s = spectra.sample(m, grid(0.0, 2.0, 2001))
        assert math.isclose(s.intensity.max(), 4 * 0.7 / 0.01, rel_tol=1e-12)

    def test_overlapping_sum(self):
        a = LorentzLine(1.0, 0.7, 0.05, "stokes_vis")
        b = LorentzLine(1.02, 0.3, 0.03, "stokes_ir")
        s = spectra.sample(SpectrumModel((), (a, b)), grid())
        w = grid().values()
        brute = [a.weight * a.width / ((a.center - x) ** 2 + a.width**2 / 4)
                 + b.weight * b.width / ((b.center - x) ** 2 + b.width**2 / 4) for x in w]
        np.testing.assert_allclose(s.intensity, brute, rtol=1e-14)

    def test_deltas_kept_separate(self):
        m = analytic.incoherent_spectrum(ORGANIC_MOL, ORGANIC_DRIVE, ORGANIC_ENV)
        s = spectra.sample(m, spectra.FrequencyGrid.around_probe(ORGANIC_MOL, ORGANIC_DRIVE))
        assert {lab for *_, lab in s.delta_markers} == {"rayleigh_vis", "rayleigh_ir"}
        assert "rayleigh_vis" not in s.components
        assert s.metadata["deltas_rendered"] is False
        assert (s.intensity >= 0).all()

    def test_render_flagged(self):
        m = SpectrumModel((DeltaLine(1.0, 2.0, "rayleigh_vis"),), ())
        s = spectra.sample(m, grid(0.0, 2.0, 20001), render_delta_as=0.01)
        assert s.metadata["deltas_rendered"] and s.metadata["delta_render_width_eV"] == 0.01
        assert s.delta_markers == ((1.0, 2.0, "rayleigh_vis"),)
        # rendered area equals the delta weight
        area = np.trapezoid(s.intensity, s.omega) if hasattr(np, "trapezoid") else np.trapz(s.intensity, s.omega)
        assert abs(area - 2.0) < 0.02

    @given(st.floats(1e-3, 1e3))
    def test_linearity(self, k):
        m = analytic.incoherent_spectrum(ORGANIC_MOL, ORGANIC_DRIVE, ORGANIC_ENV)
        g = spectra.FrequencyGrid.around_probe(ORGANIC_MOL, ORGANIC_DRIVE, 201)
        a, b = spectra.sample(m, g), spectra.sample(m.scaled(k), g)
        np.testing.assert_allclose(b.intensity, k * a.intensity, rtol=1e-13)
        for (c1, w1, l1), (c2, w2, l2) in zip(a.delta_markers, b.delta_markers):
            assert c1 == c2 and l1 == l2 and math.isclose(w2, k * w1, rel_tol=1e-13)


class TestLinePower:
    def test_lorentz_closed(self):
        m = SpectrumModel((), (LorentzLine(1.0, 3.0, 0.01, "stokes_vis"),))
        assert math.isclose(spectra.integrated_line_power(m, "stokes_vis"), 6 * math.pi)

    def test_delta(self):
        m = SpectrumModel((DeltaLine(1.0, 2.5, "rayleigh_vis"),), ())
        assert spectra.integrated_line_power(m, "rayleigh_vis") == 2.5
        assert spectra.integrated_line_power(m, 0) == 2.5

    def test_unknown(self):
        m = SpectrumModel((DeltaLine(1.0, 2.5, "rayleigh_vis"),), ())
        with pytest.raises(KeyError):
            spectra.integrated_line_power(m, "stokes_ir")
        with pytest.raises(KeyError):
            spectra.integrated_line_power(m, 3)

    @given(st.floats(1e-6, 1e-3))
    def test_quad_matches_closed(self, width):
        # finite span 1: gamma/span <= 1e-3
        m = SpectrumModel((), (LorentzLine(0.5, 1.3, width, "stokes_vis"),))
        closed = spectra.integrated_line_power(m, "stokes_vis")
        quad = spectra.integrated_line_power(m, "stokes_vis", method="quad", span=(0.0, 1.0))
        assert abs(quad / closed - 1) <= 1e-3

    def test_quad_full_axis(self):
        m = SpectrumModel((), (LorentzLine(2.0, 1.0, 1e-6, "stokes_vis"),))
        q = spectra.integrated_line_power(m, "stokes_vis", method="quad")
        assert math.isclose(q, 2 * math.pi, rel_tol=1e-8)

    @given(st.floats(1e-5, 1e-1))
    def test_width_independent(self, width):
        m = SpectrumModel((), (LorentzLine(1.0, 0.4, width, "stokes_vis"),))
        assert spectra.integrated_line_power(m, "stokes_vis") == 2 * math.pi * 0.4


class TestCrossSectionQuadrature:
    @pytest.mark.parametrize("ratio", [1e-2, 1e-3, 1e-4])
    def test_matches_closed_form(self, ratio):
        from dataclasses import replace

        mol = replace(ORGANIC_MOL, gamma_v=ratio * ORGANIC_MOL.omega_v)
        closed = analytic.stokes_cross_section(mol, ORGANIC_DRIVE)
        quad = spectra.stokes_cross_section_quadrature(mol, ORGANIC_DRIVE, n_bar=0.0)
        assert abs(quad / closed - 1) < 0.01
