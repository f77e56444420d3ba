import numpy as np
import pytest
from scipy.stats import spearmanr

from magiclab.core.errors import InputError
from magiclab.schemas.reports import TestMethod
from magiclab.schemas.state import StateKind
from magiclab.services.moments import haar_moment
from magiclab.services.monomial import primitive, single_qubit_factor
from magiclab.services.proptest import (
    OrbitMode,
    design_condition,
    design_error,
    design_error_bounds,
    fidelity_sandwich,
    haar_p6,
    helstrom,
    omega6_povm_success,
    orbit_moment,
    property_test_report,
    simulate_povm_test,
    stab_test_success6,
    stab_test_success_bounds,
    stab_test_summary,
    stabilizer_moment,
)
from magiclab.services.sre import stabilizer_entropy
from magiclab.services.states import StateVec, make_state


def test_helstrom_examples():
    """Equal states give 1/2, orthogonal states give 1"""
    zero = np.diag([1.0, 0.0])
    one = np.diag([0.0, 1.0])
    assert helstrom(zero, zero) == pytest.approx(0.5)
    assert helstrom(zero, one) == pytest.approx(1.0)
    with pytest.raises(InputError):
        helstrom(zero, np.eye(2))
    with pytest.raises(InputError):
        helstrom(zero, np.eye(4) / 4)
    print("[OK] Helstrom examples")


def test_t_state_stabilizer_test():
    """Six copies of T: the Omega_6 test succeeds with 19/32, the Helstrom optimum is 79/128"""
    t = make_state(StateKind.T_POWER, 1)
    assert stab_test_success6(t) == pytest.approx(19 / 32, abs=1e-12)

    rho0 = stabilizer_moment(1, 6)
    rho1 = orbit_moment(t, 6, OrbitMode.ENUMERATE)
    assert omega6_povm_success(rho0, rho1) == pytest.approx(19 / 32, abs=1e-10)

    summary = stab_test_summary(t, 6, exact=True)
    assert summary.method == TestMethod.EXACT
    assert summary.success_prob == pytest.approx(79 / 128, abs=1e-8)
    assert summary.success_prob >= 19 / 32
    assert summary.lower_bound == pytest.approx(0.59375, abs=1e-12)
    print("[OK] T stabilizer test")


def test_omega6_test_lower_bounds_helstrom():
    """On one qubit the Omega_6 measurement matches the formula and never beats Helstrom"""
    rng = np.random.default_rng(31)
    rho0 = stabilizer_moment(1, 6)
    states = [make_state(StateKind.GOLDEN_POWER, 1)] + [make_state(StateKind.HAAR, 1, seed=rng) for _ in range(4)]
    for psi in states:
        rho1 = orbit_moment(psi, 6, OrbitMode.ENUMERATE)
        formula = stab_test_success6(psi)
        assert omega6_povm_success(rho0, rho1) == pytest.approx(formula, abs=1e-10)
        assert helstrom(rho0, rho1) >= formula - 1e-9
    with pytest.raises(InputError):
        omega6_povm_success(np.eye(2) / 2, np.eye(2) / 2)


def test_exact_summary_only_for_one_qubit_six_copies():
    with pytest.raises(InputError):
        stab_test_summary(make_state(StateKind.T_POWER, 2), 6, exact=True)
    with pytest.raises(InputError):
        stab_test_summary(make_state(StateKind.T_POWER, 1), 12, exact=True)


def test_success_bounds():
    t = make_state(StateKind.T_POWER, 1)
    lower, upper = stab_test_success_bounds(t, 6)
    assert lower == pytest.approx(0.59375)
    lower, _ = stab_test_success_bounds(t, 12)
    assert lower == pytest.approx(1 - 0.5 * (13 / 16) ** 2, abs=1e-12)
    assert lower == pytest.approx(0.6699, abs=1e-4)

    # upper bound with the default constant is reported as computed
    _, upper = stab_test_success_bounds(t, 6, C=116)
    assert 0.5 <= upper <= 1.0
    _, upper_small_c = stab_test_success_bounds(t, 6, C=1)
    assert upper_small_c > upper

    lower, _ = stab_test_success_bounds(t, 5)
    assert lower == 0.5
    with pytest.raises(InputError):
        stab_test_success_bounds(t, 6, C=0)


def test_stabilizer_states_are_not_distinguished():
    sigma = make_state(StateKind.RANDOM_STABILIZER, 1, seed=3)
    assert stab_test_success6(sigma) == pytest.approx(0.5)
    assert fidelity_sandwich(sigma) == pytest.approx((1.0, 1.0))
    low, high = fidelity_sandwich(make_state(StateKind.T_POWER, 1))
    assert 0 < low < high < 1


def test_haar_average_of_p6():
    """(d + 23) / ((d + 3)(d + 5)) equals tr(Omega_6 rho_Haar) at d = 2"""
    assert haar_p6(2) == pytest.approx(5 / 7)
    omega6 = single_qubit_factor(primitive(6))
    assert np.trace(omega6 @ haar_moment(1, 6).matrix).real == pytest.approx(haar_p6(2), abs=1e-10)


def test_orbit_moment_modes():
    psi = make_state(StateKind.HAAR, 1, seed=5)
    exact = orbit_moment(psi, 2, OrbitMode.ENUMERATE)
    assert exact.metadata["group_size"] == 24
    assert exact.trace == pytest.approx(1.0)
    assert exact.hermiticity_error() < 1e-12

    twirled = orbit_moment(psi, 2, OrbitMode.WEINGARTEN)
    assert np.max(np.abs(twirled.matrix - exact.matrix)) < 1e-10

    sampled = orbit_moment(psi, 2, "sample", samples=4000, seed=1)
    assert np.max(np.abs(sampled.matrix - exact.matrix)) < 0.1
    with pytest.raises(InputError):
        orbit_moment(psi, 2, OrbitMode.SAMPLE)


def test_stabilizer_moment_trace():
    rho = stabilizer_moment(2, 2)
    assert rho.trace == pytest.approx(1.0)
    assert rho.metadata["group_size"] == 11520


@pytest.mark.parametrize("n", [1, 2])
def test_clifford_orbits_are_three_designs(n):
    rng = np.random.default_rng(60 + n)
    for _ in range(3):
        psi = make_state(StateKind.HAAR, n, seed=rng)
        for k in (1, 2, 3):
            assert design_error(psi, k, OrbitMode.ENUMERATE) < 1e-9


def test_fourth_moment_separates_stabilizer_states():
    """|00> is far from a 4-design, and the lower bound holds"""
    zero = make_state(StateKind.BASIS0, 2)
    delta = design_error(zero, 4, OrbitMode.ENUMERATE)
    assert delta > 0.1
    assert 2 * delta >= design_error_bounds(zero, 4).delta_lower - 1e-9
    print("[OK] Fourth moment separation")


def test_design_bound_flags():
    bounds = design_error_bounds(make_state(StateKind.T_POWER, 1), 4)
    assert "delta_upper_non_binding" in bounds.flags
    assert bounds.delta_lower < bounds.delta_upper


def test_design_condition():
    t = make_state(StateKind.T_POWER, 4)
    condition = design_condition(t, 2, 0.25)
    assert condition.m3 == pytest.approx(4 * np.log2(8 / 5) / 2)
    assert condition.is_far_from_design is False
    assert condition.is_approximate_design is False
    for eps in (0.0, 1.0, 1.5):
        with pytest.raises(InputError):
            design_condition(t, 2, eps)


def test_povm_simulation_band():
    t = make_state(StateKind.T_POWER, 1)
    simulation = simulate_povm_test(t, 100_000, seed=2025)
    assert simulation.expected == pytest.approx(19 / 32, abs=1e-12)
    assert simulation.within_band
    assert abs(simulation.rate - 19 / 32) <= 4 * simulation.sigma
    again = simulate_povm_test(t, 100_000, seed=2025)
    assert again.successes == simulation.successes
    with pytest.raises(InputError):
        simulate_povm_test(t, 0, seed=1)
    print("[OK] POVM simulation")


def test_povm_simulation_converges():
    """The simulated rate tracks 19/32 inside 4 sigma while sigma shrinks as 1/sqrt(shots)"""
    t = make_state(StateKind.T_POWER, 1)
    ladder = [simulate_povm_test(t, shots, seed=77) for shots in (1_000, 10_000, 100_000)]
    for simulation in ladder:
        assert simulation.expected == pytest.approx(19 / 32, abs=1e-12)
        assert abs(simulation.rate - simulation.expected) <= 4 * simulation.sigma
    for coarse, fine in zip(ladder, ladder[1:]):
        assert coarse.sigma / fine.sigma == pytest.approx(np.sqrt(10), rel=1e-9)
    print("[OK] POVM simulation convergence")


def phase_product_state(theta: float) -> StateVec:
    single = np.array([1.0, np.exp(1j * theta)]) / np.sqrt(2)
    return StateVec(2, np.kron(single, single))


def test_design_error_decreases_with_magic():
    """Across stabilizer-to-T and Haar two-qubit states, more M_2 means a smaller k=4 design error"""
    rng = np.random.default_rng(12)
    states = [phase_product_state(theta) for theta in np.linspace(0.0, np.pi / 4, 10)]
    states += [make_state(StateKind.HAAR, 2, seed=rng) for _ in range(10)]
    magic = [stabilizer_entropy(psi, 2) for psi in states]
    errors = [design_error(psi, 4, OrbitMode.WEINGARTEN) for psi in states]
    rho, _ = spearmanr(magic, errors)
    assert rho < 0
    print(f"[OK] Design error trend (spearman {rho:.3f})")


def test_property_test_report_design():
    psi = make_state(StateKind.HAAR, 1, seed=9)
    report = property_test_report(psi, "haar:n=1,seed=9", "design", 2, state_seed=9)
    assert report.delta == pytest.approx(0.0, abs=1e-9)
    assert report.seed == 9
    assert "delta_lower_violated" not in report.flags

    big = make_state(StateKind.HAAR, 3, seed=1)
    report = property_test_report(big, "haar:n=3,seed=1", "design", 6)
    assert report.delta is None
    assert "delta_unavailable" in report.flags


def test_property_test_report_stab():
    t = make_state(StateKind.T_POWER, 1)
    report = property_test_report(t, "t:n=1", "stab", 6, shots=2000, seed=3)
    assert report.p6 == pytest.approx(19 / 32)
    assert report.summary.success_prob == pytest.approx(19 / 32)
    assert report.simulation.shots == 2000
    assert report.C == 116

    report = property_test_report(t, "t:n=1", "stab", 4)
    assert report.summary is None
    assert "p_lower_needs_k_ge_6" in report.flags

    with pytest.raises(InputError):
        property_test_report(t, "t:n=1", "unknown", 6)


if __name__ == "__main__":
    test_helstrom_examples()
    test_t_state_stabilizer_test()
    test_omega6_test_lower_bounds_helstrom()
    test_success_bounds()
    test_fourth_moment_separates_stabilizer_states()
    test_povm_simulation_band()
    test_povm_simulation_converges()
    print("\nAll property testing tests passed!")
