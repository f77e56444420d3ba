import numpy as np
import pytest

from magiclab.core.errors import InputError
from magiclab.schemas.state import StateKind, StateSpec
from magiclab.services.sre import (
    distillation_rate_bound,
    entropy_response,
    hierarchy_slack,
    is_stabilizer_state,
    purity_via_omega,
    stabilizer_entropy,
    stabilizer_purities,
    stabilizer_purity,
)
from magiclab.services.states import apply_clifford, make_state, random_clifford


def test_t_state_values():
    """P4(T) = 3/4, P6(T) = 5/8, M2(T) = log2(4/3)"""
    t = make_state(StateKind.T_POWER, 1)
    values = stabilizer_purities(t, [2, 3])
    assert values[2] == pytest.approx(0.75, abs=1e-12)
    assert values[3] == pytest.approx(0.625, abs=1e-12)
    assert stabilizer_entropy(t, 2) == pytest.approx(np.log2(4 / 3), abs=1e-12)
    assert stabilizer_entropy(t, 2) == pytest.approx(0.415037, abs=1e-6)
    print("[OK] T state values")


def test_t_power_is_multiplicative():
    t2 = make_state(StateKind.T_POWER, 2)
    assert stabilizer_purity(t2, 2) == pytest.approx(9 / 16, abs=1e-12)
    assert stabilizer_entropy(t2, 2) == pytest.approx(2 * np.log2(4 / 3), abs=1e-12)


def test_golden_and_stabilizer_states():
    golden = make_state(StateKind.GOLDEN_POWER, 1)
    assert stabilizer_purity(golden, 2) == pytest.approx(2 / 3, abs=1e-12)

    for psi in (make_state(StateKind.BASIS0, 3), make_state(StateKind.RANDOM_STABILIZER, 3, seed=4)):
        assert is_stabilizer_state(psi)
        assert stabilizer_entropy(psi, 2) == 0.0
        assert stabilizer_entropy(psi, 3) == 0.0
    assert not is_stabilizer_state(golden)


def test_invalid_alpha():
    t = make_state(StateKind.T_POWER, 1)
    for alpha in (1, 0, 2.5):
        with pytest.raises(InputError):
            stabilizer_purity(t, alpha)
    with pytest.raises(InputError):
        purity_via_omega(t, 1)


def test_purity_via_omega_agrees_with_spectrum():
    """<psi^{2a}| Omega_{2a} |psi^{2a}> reproduces the spectral sum"""
    for seed in range(3):
        psi = make_state(StateKind.HAAR, 2, seed=seed)
        for alpha in (2, 3):
            assert purity_via_omega(psi, alpha) == pytest.approx(stabilizer_purity(psi, alpha), abs=1e-10)
    t = make_state(StateKind.T_POWER, 1)
    assert purity_via_omega(t, 4) == pytest.approx(stabilizer_purity(t, 4), abs=1e-12)
    print("[OK] Omega route agrees with spectrum")


def test_hierarchy_on_random_states():
    rng = np.random.default_rng(17)
    for n in (1, 2, 3):
        for _ in range(10):
            psi = make_state(StateKind.HAAR, n, seed=rng)
            for alpha in (2, 3):
                lower_slack, upper_slack = hierarchy_slack(psi, alpha)
                assert lower_slack >= -1e-12
                assert upper_slack >= -1e-12


def test_clifford_invariance():
    rng = np.random.default_rng(23)
    psi = make_state(StateKind.HAAR, 3, seed=rng)
    before = stabilizer_purities(psi, [2, 3])
    for _ in range(5):
        after = stabilizer_purities(apply_clifford(random_clifford(3, rng), psi), [2, 3])
        for alpha in (2, 3):
            assert after[alpha] == pytest.approx(before[alpha], abs=1e-12)


def test_distillation_rate_bound():
    """1 for T, 2 for T^2, 0 for |0>"""
    assert distillation_rate_bound(make_state(StateKind.T_POWER, 1), 2) == pytest.approx(1.0)
    assert distillation_rate_bound(make_state(StateKind.T_POWER, 2), 2) == pytest.approx(2.0)
    assert distillation_rate_bound(make_state(StateKind.BASIS0, 1), 2) == 0.0
    print("[OK] Distillation rate bound")


def test_entropy_response_keys():
    t = make_state(StateKind.T_POWER, 1)
    response = entropy_response(t, StateSpec(kind=StateKind.T_POWER, n=1, descriptor="t:n=1"), [2, 3])
    assert set(response.results) == {"2", "3"}
    assert response.results["3"].purity == pytest.approx(0.625)
    assert response.results["2"].entropy == pytest.approx(np.log2(4 / 3))


if __name__ == "__main__":
    test_t_state_values()
    test_t_power_is_multiplicative()
    test_golden_and_stabilizer_states()
    test_purity_via_omega_agrees_with_spectrum()
    test_distillation_rate_bound()
    print("\nAll stabilizer entropy tests passed!")
