import cmath
import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramanpump import analytic
from ramanpump.core import DomainError, DriveParams, Environment, MoleculeParams

from conftest import ORGANIC_DRIVE, ORGANIC_ENV, ORGANIC_MOL

# frozen values, computed independently at 40 digits (mpmath) from the closed forms
C_IR_MINUS_ORGANIC = -1.694915254237288e-3
FORCE_2WIR_ORGANIC = 2.778549597110308e-8
B_COH_ORGANIC = 2.778549597110308e-5
N_COH_ORGANIC = 7.716049382716050e-10


def resonant(mol, drive):
    return replace(drive, omega_ir=0.5 * mol.omega_v)


@st.composite
def params(draw):
    w0 = draw(st.floats(1.0, 5.0))
    wv = draw(st.floats(0.02, 0.3))
    mol = MoleculeParams(w0, wv, draw(st.floats(1e-3, 0.05)), wv * draw(st.floats(1e-3, 0.1)),
                         draw(st.floats(0.0, 0.1)), draw(st.floats(0.05, 1.0)))
    w_ir = draw(st.floats(0.01, 0.4))
    w_vis = draw(st.floats(0.5, 0.9)) * w0
    drive = DriveParams(w_vis, draw(st.floats(0.0, 0.05)), w_ir, draw(st.floats(0.0, 0.05)))
    return mol, drive


class TestLinearResponse:
    def test_unlit_probe(self):
        lr = analytic.linear_response(ORGANIC_MOL, replace(ORGANIC_DRIVE, rabi_vis=0.0))
        assert lr.c_vis_minus == 0 and lr.c_vis_plus == 0

    def test_ir_amplitude(self):
        lr = analytic.linear_response(ORGANIC_MOL, ORGANIC_DRIVE)
        assert math.isclose(lr.c_ir_minus, C_IR_MINUS_ORGANIC, rel_tol=1e-13)

    def test_vis_ratio(self):
        # counter-rotating amplitude enters with opposite sign
        lr = analytic.linear_response(ORGANIC_MOL, ORGANIC_DRIVE)
        w, w0 = ORGANIC_DRIVE.omega_vis, ORGANIC_MOL.omega0
        assert math.isclose(lr.c_vis_minus / lr.c_vis_plus, -(w + w0) / (w - w0), rel_tol=1e-14)

    def test_resonance(self):
        with pytest.raises(DomainError):
            analytic.linear_response(ORGANIC_MOL, replace(ORGANIC_DRIVE, omega_vis=3.0))

    def test_solves_driven_equation(self):
        # d(sigma)/dt + i w0 sigma = -i [Ov cos(wv t) + Oi cos(wi t)]
        lr = analytic.linear_response(ORGANIC_MOL, ORGANIC_DRIVE)
        t = np.linspace(0.0, 50.0, 7)
        dsig = sum(-1j * nu * c * np.exp(-1j * nu * t) for c, nu in lr.terms())
        lhs = dsig + 1j * ORGANIC_MOL.omega0 * lr(t)
        d = ORGANIC_DRIVE
        rhs = -1j * (d.rabi_vis * np.cos(d.omega_vis * t) + d.rabi_ir * np.cos(d.omega_ir * t))
        np.testing.assert_allclose(lhs, rhs, atol=1e-15)


class TestForce:
    def test_labels(self):
        comps = analytic.effective_force_components(ORGANIC_MOL, ORGANIC_DRIVE)
        assert [c.label for c in comps] == list(analytic.FORCE_LABELS)

    def test_ir_off(self):
        comps = {c.label: c for c in analytic.effective_force_components(
            ORGANIC_MOL, replace(ORGANIC_DRIVE, rabi_ir=0.0))}
        for label in ("2w_ir", "w_vis-w_ir", "w_vis+w_ir"):
            assert comps[label].complex_weight == 0

    def test_organic_2wir(self):
        comps = {c.label: c for c in analytic.effective_force_components(ORGANIC_MOL, ORGANIC_DRIVE)}
        w = comps["2w_ir"].complex_weight
        assert math.isclose(abs(w), FORCE_2WIR_ORGANIC, rel_tol=1e-13)
        m, d = ORGANIC_MOL, ORGANIC_DRIVE
        expected = -0.25j * m.g * d.rabi_ir**2 / (m.omega0**2 - d.omega_ir**2)
        assert cmath.isclose(w, expected, rel_tol=1e-13)

    @settings(max_examples=50, deadline=None)
    @given(params(), st.floats(0.0, 100.0))
    def test_time_domain(self, p, t0):
        # -i g |sigma_1|^2 sampled in time equals the component sum plus partners
        mol, drive = p
        lr = analytic.linear_response(mol, drive)
        comps = analytic.effective_force_components(mol, drive)
        t = t0 + np.linspace(0.0, 20.0, 11)
        direct = -1j * mol.g * np.abs(lr(t)) ** 2
        total = np.zeros_like(t, dtype=complex)
        for c in comps:
            if c.label == "DC":
                total += c.complex_weight
            else:
                r = c.complex_weight / (-1j) if mol.g == 0 else c.complex_weight / (-1j * mol.g)
                partner = -1j * mol.g * np.conj(r)
                total += c.complex_weight * np.exp(-1j * c.frequency * t) + partner * np.exp(1j * c.frequency * t)
        np.testing.assert_allclose(total, direct, atol=1e-14)


class TestCoherentVibration:
    def test_organic(self):
        b = analytic.coherent_vibration_amplitude(ORGANIC_MOL, resonant(ORGANIC_MOL, ORGANIC_DRIVE))
        assert math.isclose(abs(b.amplitude), B_COH_ORGANIC, rel_tol=1e-13)
        assert b.frequency == ORGANIC_MOL.omega_v

    def test_no_coupling(self):
        mol = replace(ORGANIC_MOL, g=0.0)
        assert analytic.coherent_vibration_amplitude(mol, ORGANIC_DRIVE).amplitude == 0

    def test_half_power(self):
        mol, d = ORGANIC_MOL, ORGANIC_DRIVE
        on = abs(analytic.coherent_vibration_amplitude(mol, d).amplitude)
        off = abs(analytic.coherent_vibration_amplitude(mol, replace(d, omega_ir=0.5 * (mol.omega_v - mol.gamma_v))).amplitude)
        # the Omega_ir^2/(w0^2 - w_ir^2) factor shifts slightly with w_ir; divide it out
        scale = (mol.omega0**2 - 0.05**2) / (mol.omega0**2 - (0.5 * (mol.omega_v - mol.gamma_v)) ** 2)
        assert math.isclose(off / on / scale, 1 / math.sqrt(2), rel_tol=1e-12)

    def test_solves_resonant_equation(self):
        # db/dt + (i w_v + gamma_v) b = F e^{-i 2 w_ir t}
        mol, d = ORGANIC_MOL, replace(ORGANIC_DRIVE, omega_ir=0.047)
        b = analytic.coherent_vibration_amplitude(mol, d)
        force = {c.label: c for c in analytic.effective_force_components(mol, d)}["2w_ir"].complex_weight
        w = b.frequency
        assert cmath.isclose((-1j * w + 1j * mol.omega_v + mol.gamma_v) * b.amplitude, force, rel_tol=1e-12)

    def test_quanta(self):
        d = resonant(ORGANIC_MOL, ORGANIC_DRIVE)
        assert math.isclose(analytic.coherent_quanta(ORGANIC_MOL, d), N_COH_ORGANIC, rel_tol=1e-13)
        exact = analytic.coherent_quanta_exact(ORGANIC_MOL, d)
        assert abs(exact / N_COH_ORGANIC - 1) < 3 * (d.omega_ir / ORGANIC_MOL.omega0) ** 2

    def test_quanta_off_resonance_is_exact(self):
        d = replace(ORGANIC_DRIVE, omega_ir=0.049)
        assert analytic.coherent_quanta(ORGANIC_MOL, d) == analytic.coherent_quanta_exact(ORGANIC_MOL, d)

    def test_ir_doubling(self):
        d = resonant(ORGANIC_MOL, ORGANIC_DRIVE)
        n1 = analytic.coherent_quanta(ORGANIC_MOL, d)
        n2 = analytic.coherent_quanta(ORGANIC_MOL, replace(d, rabi_ir=2 * d.rabi_ir))
        assert math.isclose(n2 / n1, 16.0, rel_tol=1e-13)

    @given(st.floats(0.2, 5.0))
    def test_lorentzian_half_points(self, k):
        mol = replace(ORGANIC_MOL, gamma_v=k * 1e-3)
        d0 = resonant(mol, ORGANIC_DRIVE)
        peak = abs(analytic.coherent_vibration_amplitude(mol, d0).amplitude) ** 2 * (mol.omega0**2 - d0.omega_ir**2) ** 2
        for s in (-1, 1):
            w_ir = 0.5 * (mol.omega_v - s * mol.gamma_v)
            b2 = abs(analytic.coherent_vibration_amplitude(mol, replace(d0, omega_ir=w_ir)).amplitude) ** 2
            assert math.isclose(b2 * (mol.omega0**2 - w_ir**2) ** 2 / peak, 0.5, rel_tol=1e-12)


class TestIncoherentSpectrum:
    def test_structure(self):
        m = analytic.incoherent_spectrum(ORGANIC_MOL, ORGANIC_DRIVE, ORGANIC_ENV)
        assert len(m.delta_lines) == 2 and len(m.lorentz_lines) == 4
        assert {l.label for l in m.lorentz_lines} == {"stokes_vis", "antistokes_vis", "stokes_ir", "antistokes_ir"}
        assert all(l.width == ORGANIC_MOL.gamma_v for l in m.lorentz_lines)

    def test_zero_temperature(self):
        m = analytic.incoherent_spectrum(ORGANIC_MOL, ORGANIC_DRIVE, Environment(1e-4))
        assert m.line("antistokes_vis").weight == 0 and m.line("antistokes_ir").weight == 0

    def test_boltzmann_ratio(self):
        assert math.isclose(analytic.incoherent_stokes_antistokes_ratio(ORGANIC_ENV, ORGANIC_MOL),
                            6.737946999085467e-3, rel_tol=1e-14)
        assert math.isclose(analytic.incoherent_stokes_antistokes_ratio(Environment(1e6), ORGANIC_MOL),
                            1.0, rel_tol=1e-6)

    def test_ratio_without_prefactors(self):
        m = analytic.incoherent_spectrum(ORGANIC_MOL, ORGANIC_DRIVE, ORGANIC_ENV)
        w, wv, w0 = ORGANIC_DRIVE.omega_vis, ORGANIC_MOL.omega_v, ORGANIC_MOL.omega0
        pref = ((w + wv) ** 4 * (w0 - w + wv) ** 2) / ((w - wv) ** 4 * (w0 - w - wv) ** 2)
        ratio = m.line("antistokes_vis").weight / m.line("stokes_vis").weight / pref
        assert math.isclose(ratio, math.exp(-wv / ORGANIC_ENV.kT), rel_tol=1e-12)

    def test_lorentz_shape_and_area(self):
        line = analytic.LorentzLine(1.0, 3.0, 0.01, "stokes_vis")
        assert math.isclose(line(1.0), 4 * 3.0 / 0.01)
        from scipy.integrate import quad

        area = sum(quad(line, a, b, limit=200)[0] for a, b in ((-np.inf, 0.5), (0.5, 1.5), (1.5, np.inf)))
        assert math.isclose(area, 2 * math.pi * 3.0, rel_tol=1e-8)

    def test_negative_weights_rejected(self):
        with pytest.raises(DomainError):
            analytic.SpectrumModel((analytic.DeltaLine(1.0, -1.0, "rayleigh_vis"),), ())


class TestCoherentSidebands:
    def test_bracket_g_zero(self):
        mol = replace(ORGANIC_MOL, g=0.0)
        for branch in ("stokes", "antistokes"):
            assert analytic.sideband_bracket(mol, ORGANIC_DRIVE, branch) == 1.0

    def test_nitrogen_contrast(self):
        mol = MoleculeParams(3.0, 0.29, 0.01, 5e-5, 0.05)
        drive = DriveParams(2.0, 1e-3, 0.145, 0.01)
        assert math.isclose(analytic.resonant_to_nonresonant_ratio(mol, drive), 6.25, rel_tol=1e-13)

    def test_resonant_bracket_form(self):
        d = resonant(ORGANIC_MOL, ORGANIC_DRIVE)
        m = ORGANIC_MOL
        expected = 1 - 1j / (8 * m.gamma_v) * m.g**2 / (m.omega0 - d.omega_vis)
        assert cmath.isclose(analytic.sideband_bracket(m, d, "antistokes"), expected, rel_tol=1e-14)

    def test_stokes_antistokes_example(self):
        d = resonant(ORGANIC_MOL, ORGANIC_DRIVE)
        r = analytic.coherent_stokes_antistokes_ratio(ORGANIC_MOL, d)
        assert math.isclose(r, (0.9 / 1.1) ** 2, rel_tol=1e-13)
        assert round(r, 4) == 0.6694

    def test_degenerate_stokes(self):
        with pytest.raises(DomainError):
            analytic.coherent_sideband_weights(ORGANIC_MOL, DriveParams(0.2, 1e-3, 0.1, 0.01))

    @settings(max_examples=100)
    @given(params())
    def test_bracket_shared_with_chi3(self, p):
        mol, drive = p
        chi = analytic.chi3(mol, drive, 1e18)
        w_ast = drive.omega_vis + 2 * drive.omega_ir
        pre = 1e18 / 1e21 * (1.43996 * mol.d_eg**2) ** 2 / (mol.omega0**2 - drive.omega_ir**2) / (w_ast - mol.omega0)
        via_chi3 = chi["antistokes"].value / pre
        direct = analytic.sideband_bracket(mol, drive, "antistokes")
        assert cmath.isclose(via_chi3, direct, rel_tol=1e-12)


class TestChi3:
    def test_linear_in_concentration(self):
        a = analytic.chi3(ORGANIC_MOL, ORGANIC_DRIVE, 1e18)
        b = analytic.chi3(ORGANIC_MOL, ORGANIC_DRIVE, 2e18)
        for k in a:
            assert cmath.isclose(b[k].value, 2 * a[k].value, rel_tol=1e-15)

    def test_imaginary_only_from_resonance(self):
        chi = analytic.chi3(replace(ORGANIC_MOL, g=0.0), ORGANIC_DRIVE, 1e18)
        assert all(v.value.imag == 0 for v in chi.values())

    def test_resonant_imag_extremal(self):
        def im(w_ir):
            return analytic.chi3(ORGANIC_MOL, replace(ORGANIC_DRIVE, omega_ir=w_ir), 1e18, resonant_only=True)[
                "antistokes"].value.imag
        center = abs(im(0.05))
        # normalize out the slow w_ir dependence of the prefactor
        for dw in (2e-4, 5e-4, 1e-3):
            assert abs(im(0.05 + dw)) < center and abs(im(0.05 - dw)) < center

    def test_esu_conversion(self):
        v = analytic.Chi3Value(1.0 + 0j, "stokes")
        assert math.isclose(v.esu.real, 1e-21 / 1.602176634e-12, rel_tol=1e-15)


class TestCrossSection:
    def test_g_zero(self):
        assert analytic.stokes_cross_section(replace(ORGANIC_MOL, g=0.0), ORGANIC_DRIVE) == 0

    def test_probe_independent(self):
        a = analytic.stokes_cross_section(ORGANIC_MOL, ORGANIC_DRIVE)
        b = analytic.stokes_cross_section(ORGANIC_MOL, replace(ORGANIC_DRIVE, rabi_vis=0.5))
        assert a == b

    def test_zero_sigma(self):
        assert analytic.chi3_from_cross_section(ORGANIC_MOL, ORGANIC_DRIVE, 1e18, 0.0).value == 0

    def test_half_point(self):
        mol, d = ORGANIC_MOL, resonant(ORGANIC_MOL, ORGANIC_DRIVE)
        sigma = analytic.stokes_cross_section(mol, d)
        on = abs(analytic.chi3_from_cross_section(mol, d, 1e18, sigma).value)
        w_ir = 0.5 * (mol.omega_v - mol.gamma_v)
        off = abs(analytic.chi3_from_cross_section(mol, replace(d, omega_ir=w_ir), 1e18, sigma).value)
        scale = (mol.omega0**2 - w_ir**2) / (mol.omega0**2 - d.omega_ir**2)
        assert math.isclose(off / on * scale, 1 / math.sqrt(2), rel_tol=1e-12)

    def test_negative_sigma(self):
        with pytest.raises(DomainError):
            analytic.chi3_from_cross_section(ORGANIC_MOL, ORGANIC_DRIVE, 1e18, -1.0)


class TestPowerLaws:
    @pytest.mark.parametrize("field,exponent", [("rabi_ir", 4.0), ("g", 2.0), ("gamma_v", -2.0)])
    def test_exponents(self, field, exponent):
        xs = np.geomspace(1.0, 10.0, 6)
        base = {"rabi_ir": 0.01, "g": 0.01, "gamma_v": 1e-3}[field]
        ns = []
        for x in xs:
            mol, d = ORGANIC_MOL, resonant(ORGANIC_MOL, ORGANIC_DRIVE)
            if field == "rabi_ir":
                d = replace(d, rabi_ir=base * x)
            else:
                mol = replace(mol, **{field: base * x})
            ns.append(analytic.coherent_quanta(mol, d))
        slope = np.polyfit(np.log(xs), np.log(ns), 1)[0]
        assert abs(slope - exponent) < 1e-6
