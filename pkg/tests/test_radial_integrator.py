from dataclasses import replace

import numpy as np
import pytest

from scatterlab.core.config import Settings
from scatterlab.core.errors import ConfigurationError
from scatterlab.services.analytic_dirac import exterior_coefficients
from scatterlab.services.channels import channel_from_chi
from scatterlab.services.potentials import make_potential
from scatterlab.services.radial_integrator import (
    CurvePoint,
    IntegrationConfig,
    IntegrationError,
    MagnitudeOverflowError,
    NodeNotFoundError,
    ResonanceCurve,
    analytic_C_square,
    find_node,
    integrate_radial,
    numerical_phase,
    radial_grid,
    resonance_curve_vs_coupling,
    resonance_curve_vs_momentum,
    scattering_phase,
    square_system,
    window_phase,
)

S_HALF = channel_from_chi(-1)
P_HALF = channel_from_chi(1)


@pytest.fixture
def fine_cfg() -> IntegrationConfig:
    return IntegrationConfig(inner_step=1e-3, outer_step=1e-2, inner_region=3.0, start_radius=1e-6, nu=4)


def test_config_validation():
    with pytest.raises(ConfigurationError):
        IntegrationConfig(inner_step=1e-3, outer_step=1e-2, inner_region=1.0, start_radius=1e-3)
    with pytest.raises(ConfigurationError):
        IntegrationConfig(inner_step=1e-3, outer_step=1e-2, inner_region=1.0, start_radius=1e-6, nu=0)
    with pytest.raises(ConfigurationError):
        IntegrationConfig(inner_step=1e-3, outer_step=1e-2, inner_region=1.0, start_radius=1e-6, fit_model="cubic")


def test_config_from_settings_scales_with_range():
    cfg = IntegrationConfig.from_settings(2.0, Settings(), nu=None, fit_model="sine")
    assert cfg.inner_step == pytest.approx(2e-3)
    assert cfg.inner_region == pytest.approx(40.0)
    assert cfg.nu == 20
    assert cfg.fit_model == "sine"
    assert cfg.halved().inner_step == pytest.approx(1e-3)


def test_radial_grid_is_aligned(fine_cfg):
    grid = radial_grid(fine_cfg, 5.0)
    assert grid[0] == fine_cfg.start_radius
    assert grid[1000] == 1.0
    assert grid[3000] == pytest.approx(3.0)
    assert grid[3001] - grid[3000] == pytest.approx(1e-2)
    assert grid[-1] >= 5.0 > grid[-2]


@pytest.mark.parametrize("channel, V", [(S_HALF, 3.0), (P_HALF, 3.0), (S_HALF, 0.5)])
def test_numerical_phase_matches_square_well(fine_cfg, channel, V):
    potential = make_potential("square", "well", V, 1.0)
    result = scattering_phase(potential, channel, 1.0, 1.0, cfg=fine_cfg)
    system = square_system(potential, channel, 1.0)
    energy = np.hypot(1.0, 1.0)
    exact = exterior_coefficients(system, energy).delta
    assert np.sin(result.delta - exact) == pytest.approx(0.0, abs=1e-6)
    assert result.C == pytest.approx(analytic_C_square(system, energy), rel=1e-4)
    assert -0.5 * np.pi <= result.delta < 0.5 * np.pi


def test_phase_converges_under_step_halving(fine_cfg):
    potential = make_potential("gaussian", "well", 3.0, 1.0)
    coarse = scattering_phase(potential, S_HALF, 1.0, 1.0, cfg=fine_cfg)
    fine = scattering_phase(potential, S_HALF, 1.0, 1.0, cfg=fine_cfg.halved())
    assert np.sin(coarse.delta - fine.delta) == pytest.approx(0.0, abs=1e-7)
    assert coarse.C == pytest.approx(fine.C, rel=1e-6)


def test_phase_does_not_depend_on_fit_node(fine_cfg):
    potential = make_potential("gaussian", "barrier", 2.0, 1.0)
    near = scattering_phase(potential, P_HALF, 1.0, 1.0, cfg=fine_cfg)
    far = scattering_phase(potential, P_HALF, 1.0, 1.0, cfg=replace(fine_cfg, nu=12))
    assert far.node_radius > near.node_radius
    assert np.sin(near.delta - far.delta) == pytest.approx(0.0, abs=1e-7)
    assert near.C == pytest.approx(far.C, rel=1e-6)


@pytest.mark.parametrize("momentum", [0.05, 0.1, 0.3])
@pytest.mark.parametrize("channel", [S_HALF, P_HALF])
def test_low_momentum_matches_square_well(fine_cfg, channel, momentum):
    potential = make_potential("square", "well", 3.0, 1.0)
    result = scattering_phase(potential, channel, momentum, 1.0, cfg=fine_cfg)
    system = square_system(potential, channel, 1.0)
    energy = np.hypot(momentum, 1.0)
    exact = exterior_coefficients(system, energy).delta
    assert np.sin(result.delta - exact) == pytest.approx(0.0, abs=1e-6)
    assert result.C == pytest.approx(analytic_C_square(system, energy), rel=1e-4)


def test_numerical_phase_for_barrier(fine_cfg):
    potential = make_potential("square", "barrier", 1.5, 1.0)
    result = scattering_phase(potential, S_HALF, 2.0, 1.0, cfg=fine_cfg)
    system = square_system(potential, S_HALF, 1.0)
    assert system.V == -1.5
    exact = exterior_coefficients(system, np.hypot(2.0, 1.0)).delta
    assert np.sin(result.delta - exact) == pytest.approx(0.0, abs=1e-6)


def test_sine_fit_is_exact_for_s_wave(fine_cfg):
    potential = make_potential("square", "well", 3.0, 1.0)
    riccati = scattering_phase(potential, S_HALF, 1.0, 1.0, cfg=fine_cfg)
    sine = scattering_phase(potential, S_HALF, 1.0, 1.0, cfg=replace(fine_cfg, fit_model="sine"))
    assert np.sin(sine.delta - riccati.delta) == pytest.approx(0.0, abs=1e-8)
    assert sine.C == pytest.approx(riccati.C, rel=1e-8)
    assert sine.fit_model == "sine"


def test_sine_fit_misses_centrifugal_term_for_p_wave(fine_cfg):
    potential = make_potential("square", "well", 3.0, 1.0)
    system = square_system(potential, P_HALF, 1.0)
    exact = exterior_coefficients(system, np.hypot(1.0, 1.0)).delta
    riccati = scattering_phase(potential, P_HALF, 1.0, 1.0, cfg=fine_cfg)
    sine = scattering_phase(potential, P_HALF, 1.0, 1.0, cfg=replace(fine_cfg, fit_model="sine"))
    assert abs(np.sin(riccati.delta - exact)) < 1e-6
    # f ~ sin(x) + cos(x)/x: el modelo senoidal arrastra un error ~ 1/(p r_nu)
    assert abs(np.sin(sine.delta - exact)) > 1e-3


def test_integrate_until_node(fine_cfg):
    potential = make_potential("gaussian", "well", 2.0, 1.0)
    energy = np.hypot(1.5, 1.0)
    solution = integrate_radial(potential, P_HALF, energy, 1.0, fine_cfg, until_node=3)
    node = find_node(solution, 3)
    assert solution.grid[-2] <= node <= solution.grid[-1]
    assert np.sign(solution.g[-1]) != np.sign(solution.g[-2])
    phase = numerical_phase(solution, 1.5, replace(fine_cfg, nu=3), P_HALF)
    assert phase.node_radius == pytest.approx(node)


def test_amplitude_scales_solution_linearly(fine_cfg):
    potential = make_potential("exponential", "well", 1.0, 1.0)
    energy = np.hypot(1.0, 1.0)
    base = integrate_radial(potential, S_HALF, energy, 1.0, fine_cfg, r_end=4.0)
    scaled = integrate_radial(potential, S_HALF, energy, 1.0, replace(fine_cfg, amplitude=2.5), r_end=4.0)
    assert np.allclose(scaled.f, 2.5 * base.f)
    assert scaled.a1 == 2.5


def test_node_not_found(fine_cfg):
    potential = make_potential("square", "well", 1.0, 1.0)
    with pytest.raises(NodeNotFoundError):
        integrate_radial(potential, S_HALF, 2.0, 1.0, fine_cfg, r_end=2.0, until_node=50)


def test_magnitude_cap():
    cfg = IntegrationConfig(inner_step=1e-3, outer_step=1e-2, inner_region=2.0, start_radius=1e-6, magnitude_cap=1e-3)
    potential = make_potential("square", "well", 1.0, 1.0)
    with pytest.raises(MagnitudeOverflowError):
        integrate_radial(potential, S_HALF, 2.0, 1.0, cfg, r_end=1.0)
    assert replace(cfg, magnitude_cap=1e150).magnitude_cap == 1e150


def test_singular_origin_for_positive_chi(fine_cfg):
    # E + m - U(0) = 0
    barrier = make_potential("square", "barrier", 3.0, 1.0)
    with pytest.raises(IntegrationError):
        integrate_radial(barrier, P_HALF, 2.0, 1.0, fine_cfg, r_end=1.0)


def test_window_phase():
    assert window_phase(np.pi) == pytest.approx(0.0)
    assert window_phase(0.5 * np.pi) == pytest.approx(-0.5 * np.pi)
    assert window_phase(-2.0) == pytest.approx(np.pi - 2.0)


def test_vectorised_scan_matches_scalar_path(fine_cfg):
    potential = make_potential("gaussian", "barrier", 2.0, 1.0)
    momenta = np.array([0.8, 1.2, 1.6])
    curve = resonance_curve_vs_momentum(potential, S_HALF, momenta, 1.0, Settings(scan_block=2), fine_cfg)
    assert curve.axis_name == "p"
    for point, momentum in zip(curve.points, momenta):
        single = scattering_phase(potential, S_HALF, momentum, 1.0, cfg=fine_cfg)
        assert point.C == pytest.approx(single.C, rel=1e-9)
        assert point.delta == pytest.approx(single.delta, abs=1e-9)
        assert point.error is None


def test_coupling_scan_with_thread_pool(fine_cfg):
    potential = make_potential("gaussian", "well", 0.0, 1.0)
    couplings = np.linspace(0.0, 3.0, 7)
    serial = resonance_curve_vs_coupling(potential, S_HALF, 1.0, couplings, 1.0, Settings(scan_block=3), fine_cfg)
    pooled = resonance_curve_vs_coupling(
        potential, S_HALF, 1.0, couplings, 1.0, Settings(scan_block=3, scan_workers=3), fine_cfg
    )
    assert np.allclose(serial.C, pooled.C)
    assert np.allclose(serial.axis, couplings)
    # v = 0: onda libre, delta = 0 y C = k / A con A = k
    assert serial.delta[0] == pytest.approx(0.0, abs=1e-6)
    assert serial.C[0] == pytest.approx(1.0, rel=1e-4)


def test_scan_records_failures():
    cfg = IntegrationConfig(inner_step=1e-3, outer_step=1e-2, inner_region=1.0, start_radius=1e-6, nu=20)
    potential = make_potential("square", "well", 0.0, 1.0)
    curve = resonance_curve_vs_coupling(
        potential, S_HALF, 1.0, [0.5, 1.0], 1.0, Settings(), replace(cfg, max_radius=2.0)
    )
    assert len(curve.failures) == 2
    assert np.all(np.isnan(curve.C))


def test_scan_validation(fine_cfg):
    potential = make_potential("square", "well", 1.0, 1.0)
    with pytest.raises(ConfigurationError):
        resonance_curve_vs_coupling(potential, S_HALF, 1.0, [1.0], 1.0, Settings(), fine_cfg)
    with pytest.raises(ConfigurationError):
        resonance_curve_vs_coupling(potential, S_HALF, 0.0, [1.0, 2.0], 1.0, Settings(), fine_cfg)
    with pytest.raises(ConfigurationError):
        resonance_curve_vs_momentum(potential, S_HALF, [-1.0, 1.0], 1.0, Settings(), fine_cfg)
    with pytest.raises(ConfigurationError):
        square_system(make_potential("gaussian", "well", 1.0, 1.0), S_HALF, 1.0)


def test_resonance_curve_properties():
    curve = ResonanceCurve(
        axis_name="v",
        points=[CurvePoint(1.0, 2.0, 0.1, 30.0), CurvePoint(2.0, float("nan"), float("nan"), float("nan"), "sin nodo")],
    )
    assert curve.axis.tolist() == [1.0, 2.0]
    assert curve.C[0] == 2.0
    assert len(curve.failures) == 1


def test_gaussian_barrier_peak_near_critical_coupling():
    potential = make_potential("gaussian", "barrier", 0.0, 1.0)
    couplings = np.round(np.arange(6.750, 6.7645, 0.001), 3)
    curve = resonance_curve_vs_coupling(potential, S_HALF, 0.1, couplings, 1.0, Settings())
    assert not curve.failures
    peak = int(np.argmax(curve.C))
    assert curve.C[peak] == pytest.approx(13.10, abs=0.2)
    assert curve.points[peak].node_radius == pytest.approx(629.5, abs=0.5)
    off_peak = resonance_curve_vs_coupling(potential, S_HALF, 0.1, [6.8, 6.9], 1.0, Settings())
    assert off_peak.C[0] == pytest.approx(2.65, abs=0.2)
    assert off_peak.points[0].node_radius == pytest.approx(643.1, abs=0.5)
