import numpy as np
import pytest

from scatterlab.core.config import Settings
from scatterlab.core.errors import ConfigurationError
from scatterlab.services.analytic_dirac import DiracSquareSystem, dirac_tan_parts
from scatterlab.services.channels import channel_from_chi
from scatterlab.services.critical_solver import (
    CriticalCondition,
    CriticalDomainError,
    CriticalSearchError,
    critical_table,
    find_general_criticals,
    find_square_criticals,
    pwave_closed_form_couplings,
    square_critical_residual,
)
from scatterlab.services.potentials import make_potential
from scatterlab.services.radial_integrator import zero_momentum_mismatch

S_HALF = channel_from_chi(-1)
P_HALF = channel_from_chi(1)


def _values(couplings):
    return [coupling.value for coupling in couplings]


def test_condition_labels_and_thresholds():
    well = CriticalCondition(S_HALF, 1, -1)
    barrier = CriticalCondition(S_HALF, 1, 1)
    deep = CriticalCondition(S_HALF, -1, -1)
    assert well.label == "s1/2(-)"
    assert barrier.label == "s1/2(+)"
    assert deep.label == "s1/2(-) E=-m"
    assert well.threshold(1.0) == 0.0
    assert barrier.threshold(1.0) == 2.0
    assert deep.threshold(1.0) == 2.0
    crossed = barrier.crossed()
    assert crossed.channel.chi == 1 and crossed.energy_sign == -1 and crossed.potential_sign == -1


def test_invalid_condition():
    with pytest.raises(ConfigurationError):
        CriticalCondition(S_HALF, 0)
    with pytest.raises(CriticalDomainError):
        CriticalCondition(S_HALF, 1, 1).p_crit(1.0, 1.0)


def test_square_table_natural_units():
    table = critical_table("square", 1.0, 1.0, 3, settings=Settings())
    expected = {
        "s1/2(+)": [5.27, 8.40, 11.54],
        "s1/2(-)": [1.11, 4.20, 7.33],
        "p1/2(+)": [4.30, 7.36, 10.48],
        "p1/2(-)": [2.30, 5.36, 8.48],
    }
    assert list(table) == list(expected)
    for label, values in expected.items():
        assert _values(table[label]) == pytest.approx(values, abs=0.01)
        assert [c.index for c in table[label]] == [1, 2, 3]


def test_pwave_columns_have_closed_form():
    well = find_square_criticals(CriticalCondition(P_HALF, 1, -1), 1.0, 1.0, 3, Settings())
    barrier = find_square_criticals(CriticalCondition(P_HALF, 1, 1), 1.0, 1.0, 3, Settings())
    assert _values(well) == pytest.approx(pwave_closed_form_couplings(3, 1, 1.0, 1.0), abs=1e-8)
    assert _values(barrier) == pytest.approx(pwave_closed_form_couplings(3, -1, 1.0, 1.0), abs=1e-8)


def test_barrier_equals_crossed_well():
    barrier = CriticalCondition(S_HALF, 1, 1)
    for V in (3.0, 6.5, 9.0):
        assert square_critical_residual(barrier, V, 1.0, 1.0) == pytest.approx(
            square_critical_residual(barrier.crossed(), V, 1.0, 1.0)
        )


@pytest.mark.parametrize("channel", [S_HALF, P_HALF])
def test_barrier_roots_cancel_irregular_threshold_wave(channel):
    energy = 1.0 + 1e-6
    for root in find_square_criticals(CriticalCondition(channel, 1, 1), 1.0, 1.0, 3, Settings()):
        V = root.value

        def denominator(depth):
            return dirac_tan_parts(DiracSquareSystem(V=-depth, a=1.0, m=1.0, channel=channel), energy)[1]

        assert abs(denominator(V) / denominator(V + 0.05)) < 1e-3
        assert abs(denominator(V) / denominator(V - 0.05)) < 1e-3


def test_supercritical_swave_well():
    roots = find_square_criticals(CriticalCondition(S_HALF, -1, -1), 1.0, 1.0, 2, Settings())
    # j_0(pa) = 0 con p = sqrt(V (V - 2m))
    expected = [1.0 + np.sqrt(1.0 + (n * np.pi) ** 2) for n in (1, 2)]
    assert _values(roots) == pytest.approx(expected, abs=1e-8)


def test_thresholds_layout_order():
    table = critical_table("square", 1.0, 1.0, 1, layout="thresholds", settings=Settings())
    assert list(table) == ["s1/2(-)", "s1/2(-) E=-m", "p1/2(-)", "p1/2(-) E=-m"]
    values = [column[0].value for column in table.values()]
    assert values[0] < values[1]
    assert values[2] < values[3]


def test_search_exhausted():
    settings = Settings(critical_max_coupling=3.0)
    with pytest.raises(CriticalSearchError):
        find_square_criticals(CriticalCondition(S_HALF, 1, -1), 1.0, 1.0, 3, settings)


def test_unknown_layout():
    with pytest.raises(ConfigurationError):
        critical_table("square", 1.0, 1.0, 1, layout="diagonal")


def test_general_solver_reproduces_square_well():
    settings = Settings()
    potential = make_potential("square", "well", 0.0, 1.0)
    roots = find_general_criticals(potential, CriticalCondition(S_HALF, 1, -1), 2, 1.0, settings)
    exact = find_square_criticals(CriticalCondition(S_HALF, 1, -1), 1.0, 1.0, 2, settings)
    # RK4 sobre malla alineada: error de orden h^4
    assert _values(roots) == pytest.approx(_values(exact), abs=100 * settings.critical_step**4)


def test_gaussian_table_at_default_scan_step():
    table = critical_table("gaussian", 1.0, 1.0, 3, settings=Settings())
    expected = {
        "s1/2(+)": [6.7496, 10.4167, 14.0441],
        "s1/2(-)": [1.2578, 4.3727, 7.6977],
        "p1/2(+)": [5.6213, 9.2334, 12.8287],
        "p1/2(-)": [2.9563, 6.1112, 9.4418],
    }
    for label, values in expected.items():
        assert _values(table[label]) == pytest.approx(values, abs=2e-4)


def test_mismatch_is_regular_where_upper_start_vanishes():
    # E + m - U(0) = 0 para p1/2 en la barrera con v = 2m
    potential = make_potential("gaussian", "barrier", 0.0, 1.0)
    values = zero_momentum_mismatch(potential, P_HALF, 1, 1.0, np.array([1.95, 2.0, 2.05]), Settings())
    assert np.all(np.isfinite(values))
    assert np.all(np.sign(values) == np.sign(values[0]))


def test_general_solver_rejects_slow_decay_and_wrong_sign():
    settings = Settings(critical_radius=2.0)
    with pytest.raises(ConfigurationError):
        find_general_criticals(make_potential("exponential", "well", 0.0, 1.0), CriticalCondition(S_HALF, 1, -1), 1, 1.0, settings)
    with pytest.raises(ConfigurationError):
        find_general_criticals(make_potential("gaussian", "barrier", 0.0, 1.0), CriticalCondition(S_HALF, 1, -1), 1)


def test_threshold_table_in_mev_fm():
    settings = Settings(hbar_c=197.312)
    hbar_c = settings.hbar_c
    table = critical_table("square", 0.511, 8.0 / hbar_c, 3, layout="thresholds", settings=settings)
    expected = [
        [75.947, 153.434, 230.919],
        [77.997, 155.480, 232.964],
        [76.975, 154.458, 231.942],
        [79.012, 156.498, 233.983],
    ]
    for column, values in zip(table.values(), expected):
        assert _values(column) == pytest.approx(values, abs=0.005)


def test_crossing_theorem_for_gaussian():
    potential_barrier = make_potential("gaussian", "barrier", 0.0, 1.0)
    potential_well = make_potential("gaussian", "well", 0.0, 1.0)
    barrier = find_general_criticals(potential_barrier, CriticalCondition(S_HALF, 1, 1), 1, 1.0, Settings())
    supercritical = find_general_criticals(potential_well, CriticalCondition(P_HALF, -1, -1), 1, 1.0, Settings())
    assert barrier[0].value == pytest.approx(supercritical[0].value, rel=1e-3)
