import numpy as np
import pytest

from scatterlab.core.config import Settings
from scatterlab.services.analytic_dirac import DiracSquareSystem, dirac_phase_curve
from scatterlab.services.channels import channel_from_chi
from scatterlab.services.critical_solver import pwave_closed_form_couplings
from scatterlab.services.phase_branch import samples_from_phase
from scatterlab.services.radial_integrator import CurvePoint, ResonanceCurve, analytic_C_square
from scatterlab.services.resonance import (
    BranchDiscontinuityError,
    ResonanceError,
    breit_wigner_width,
    detect_resonances,
    find_curve_peaks,
    refine_resonance,
    scan_resonances,
    width_ratio,
)

E_R, GAMMA = 2.0, 0.05


def breit_wigner(energies, sign=1.0):
    energies = np.asarray(energies, dtype=float)
    deltas = 0.5 * np.pi + sign * np.arctan((energies - E_R) / (0.5 * GAMMA))
    return samples_from_phase(energies, energies, deltas)


def test_detects_breit_wigner_resonance():
    curve = breit_wigner(np.linspace(1.5, 2.5, 2001))
    (peak,) = detect_resonances(curve, "s1/2")
    assert peak.is_resonance
    assert peak.channel == "s1/2"
    assert peak.energy == pytest.approx(E_R, abs=1e-6)
    assert peak.level == pytest.approx(0.5 * np.pi)
    assert peak.gamma == pytest.approx(GAMMA, rel=1e-3)
    assert peak.gamma_slope == pytest.approx(GAMMA, rel=1e-3)
    assert peak.tau == pytest.approx(4.0 / GAMMA, rel=1e-3)
    assert peak.gamma_time_delay == pytest.approx(0.25 * peak.gamma_slope)
    assert breit_wigner_width(curve, peak) == pytest.approx(GAMMA, rel=1e-3)


def test_falling_crossing_is_not_a_resonance():
    curve = breit_wigner(np.linspace(1.5, 2.5, 501), sign=-1.0)
    (peak,) = detect_resonances(curve)
    assert peak.classification == "anti-crossing"
    assert peak.tau < 0
    assert peak.gamma is None and peak.gamma_slope is None
    with pytest.raises(ResonanceError):
        breit_wigner_width(curve, peak)


def test_unbracketed_width_falls_back_to_slope():
    curve = breit_wigner(np.linspace(1.99, 2.5, 200))
    (peak,) = detect_resonances(curve)
    assert peak.gamma is None
    assert peak.width == pytest.approx(peak.gamma_slope)


def test_curve_validation():
    with pytest.raises(ResonanceError):
        detect_resonances(breit_wigner(np.linspace(1.5, 2.5, 5)))
    with pytest.raises(ResonanceError):
        detect_resonances(breit_wigner(np.linspace(2.5, 1.5, 50)))
    energies = np.linspace(1.0, 2.0, 20)
    deltas = np.where(energies < 1.5, 0.0, 2.0)
    with pytest.raises(BranchDiscontinuityError):
        detect_resonances(samples_from_phase(energies, energies, deltas))


def test_refine_recovers_exact_parameters():
    coarse = detect_resonances(breit_wigner(np.linspace(1.0, 3.0, 60)))
    refined = refine_resonance(breit_wigner, coarse[0], 1.0, Settings())
    assert refined.energy == pytest.approx(E_R, abs=1e-9)
    assert refined.gamma == pytest.approx(GAMMA, rel=1e-6)
    assert refined.gamma_slope == pytest.approx(GAMMA, rel=1e-6)


def test_width_ratio():
    narrow = detect_resonances(breit_wigner(np.linspace(1.5, 2.5, 2001)))[0]

    def wide(energies):
        energies = np.asarray(energies, dtype=float)
        return samples_from_phase(energies, energies, 0.5 * np.pi + np.arctan((energies - E_R) / (2.0 * GAMMA)))

    broad = detect_resonances(wide(np.linspace(1.5, 2.5, 2001)))[0]
    assert width_ratio(broad, narrow) == pytest.approx(4.0, rel=1e-3)


def _dirac_phase(V, chi):
    system = DiracSquareSystem(V=V, a=1.0, m=1.0, channel=channel_from_chi(chi))
    return lambda energies: dirac_phase_curve(system, energies, Settings())


def test_near_critical_swave_is_much_broader_than_pwave():
    energies = 1.0 + np.geomspace(1e-6, 0.5, 400)
    lower = 1.0 + 1e-9
    s_peaks = [p for p in scan_resonances(_dirac_phase(4.195, -1), energies, lower, Settings(), "s1/2") if p.is_resonance]
    p_peaks = [p for p in scan_resonances(_dirac_phase(2.25, 1), energies, lower, Settings(), "p1/2") if p.is_resonance]
    assert s_peaks[0].gamma is None
    assert s_peaks[0].gamma_slope == pytest.approx(1.1308, rel=0.03)
    assert p_peaks[0].gamma_slope == pytest.approx(0.004873, rel=0.03)
    assert width_ratio(s_peaks[0], p_peaks[0]) == pytest.approx(232.0, rel=0.05)


def _lorentz_curve(axis, centre, width):
    values = 10.0 / (1.0 + ((axis - centre) / (0.5 * width)) ** 2)
    return ResonanceCurve("v", [CurvePoint(float(x), float(c), 0.0, 1.0) for x, c in zip(axis, values)])


def test_find_curve_peaks():
    axis = np.linspace(0.0, 10.0, 1001)
    curve = _lorentz_curve(axis, 4.0, 0.4)
    (peak,) = find_curve_peaks(curve)
    assert peak.position == pytest.approx(4.0)
    assert peak.height == pytest.approx(10.0)
    assert peak.width == pytest.approx(0.4, rel=0.02)
    assert peak.left < 4.0 < peak.right


def test_find_curve_peaks_ignores_failed_points():
    axis = np.linspace(0.0, 10.0, 201)
    curve = _lorentz_curve(axis, 6.0, 1.0)
    points = list(curve.points)
    points[10] = CurvePoint(float(axis[10]), float("nan"), float("nan"), float("nan"), "sin nodo")
    peaks = find_curve_peaks(ResonanceCurve("v", points), prominence=1.0)
    assert [p.position for p in peaks] == pytest.approx([6.0])
    assert find_curve_peaks(ResonanceCurve("v", points[:2])) == []


@pytest.mark.parametrize(
    "V, chi, gamma_kev",
    [(75.187, -1, 41.83), (76.205, 1, 11.5), (-79.802, -1, 43.1), (-78.777, 1, 11.8)],
)
def test_widths_of_8_fm_square_potentials(V, chi, gamma_kev):
    m = 0.511
    a = 8.0 / Settings().hbar_c
    system = DiracSquareSystem(V=V, a=a, m=m, channel=channel_from_chi(chi))
    energies = m + np.geomspace(1e-4, 2.0, 800)
    peaks = scan_resonances(
        lambda e: dirac_phase_curve(system, e, Settings()), energies, m * (1 + 1e-9), Settings()
    )
    near = [p for p in peaks if p.is_resonance and p.energy - m < 1.0]
    assert near
    assert near[0].width * 1e3 == pytest.approx(gamma_kev, rel=0.05)


def test_pwave_barrier_peak_sharpens_towards_critical_coupling():
    p_half = channel_from_chi(1)
    couplings = np.arange(4.25, 4.60, 2e-4)
    critical = pwave_closed_form_couplings(1, -1, 1.0, 1.0)[0]
    peaks = []
    for momentum in (0.4, 0.2, 0.1):
        energy = np.hypot(momentum, 1.0)
        points = [
            CurvePoint(v, analytic_C_square(DiracSquareSystem(V=-v, a=1.0, m=1.0, channel=p_half), energy), 0.0, 0.0)
            for v in couplings
        ]
        found = find_curve_peaks(ResonanceCurve(axis_name="v", points=points))
        peaks.append(max(found, key=lambda peak: peak.height))
    widths = [peak.width for peak in peaks]
    assert widths[0] > 3 * widths[1] > 9 * widths[2]
    assert peaks[0].height < peaks[1].height < peaks[2].height
    positions = [peak.position for peak in peaks]
    assert positions[0] > positions[1] > positions[2] > critical
    assert positions[2] == pytest.approx(critical, abs=0.02)
