import json

import numpy as np
import pytest

from magiclab.core.errors import InputError, ResourceCapError, SingularGramError
from magiclab.schemas.monomial import BasisExport
from magiclab.schemas.state import StateKind
from magiclab.services.commutant import (
    clifford_twirl,
    commutant_summary,
    count_bounds_log2,
    enumerate_monomials,
    gram_matrix,
    independence_check,
    monomial_count,
    twirl_inverse,
    twirl_pure_state,
    weingarten,
)
from magiclab.services.moments import MomentOp, pure_moment, qubit_to_copy_major
from magiclab.services.monomial import is_copy_permutation, single_qubit_factor
from magiclab.services.monomial_io import from_record, write_basis
from magiclab.services.proptest import OrbitMode, orbit_moment
from magiclab.services.states import clifford_unitary, make_state, random_clifford


def test_monomial_count_formula():
    """prod (2^i + 1): 2, 6, 30, 270, 4590"""
    assert [monomial_count(k) for k in range(2, 7)] == [2, 6, 30, 270, 4590]
    assert monomial_count(1) == 1


@pytest.mark.parametrize("k,expected", [(2, 2), (3, 6), (4, 30), (5, 270)])
def test_enumeration_counts(k, expected):
    basis = enumerate_monomials(k)
    assert basis.size == expected
    assert len(basis.fingerprints) == expected
    assert all(w.k == k for w in basis.elements)


@pytest.mark.slow
def test_enumeration_count_k6():
    assert enumerate_monomials(6).size == 4590


def test_enumeration_limits():
    with pytest.raises(InputError):
        enumerate_monomials(0)
    with pytest.raises(ResourceCapError):
        enumerate_monomials(7)


def test_count_bounds():
    for k in range(2, 7):
        lower, upper = count_bounds_log2(k)
        assert lower <= np.log2(monomial_count(k)) <= upper
    summary = commutant_summary(4)
    assert summary.count == summary.formula == 30
    print("[OK] Count bounds")


def test_small_bases_are_permutations():
    """For k <= 3 every basis element is a copy permutation"""
    for k in (2, 3):
        assert all(is_copy_permutation(w) for w in enumerate_monomials(k).elements)
    assert sum(is_copy_permutation(w) for w in enumerate_monomials(4).elements) == 24


def test_conjugation_classes():
    classes = enumerate_monomials(3).conjugation_classes()
    assert sorted(len(members) for members in classes) == [1, 2, 3]

    classes = enumerate_monomials(4).conjugation_classes()
    assert sorted(i for members in classes for i in members) == list(range(30))


def test_gram_examples():
    """k=2, n=2: tr(I) = 16, tr(SWAP) = 4"""
    W = gram_matrix(2, 2).W
    assert np.allclose(W, [[16, 4], [4, 16]])
    with pytest.raises(InputError):
        gram_matrix(2, 0)
    print("[OK] Gram examples")


def test_gram_matches_dense_traces():
    basis = enumerate_monomials(3)
    W = gram_matrix(3, 2).W
    factors = [np.kron(basis.dense_factor(i), basis.dense_factor(i)) for i in range(basis.size)]
    for i, a in enumerate(factors):
        for j, b in enumerate(factors):
            assert W[i, j] == pytest.approx(np.trace(a.conj().T @ b).real, abs=1e-9)


def test_gram_entry_bounds():
    for k in (2, 3, 4):
        for n in (3, 5):
            W = gram_matrix(k, n).W
            d = 2.0 ** n
            assert np.all(np.diag(W) == d ** k)
            off = W[~np.eye(W.shape[0], dtype=bool)]
            assert off.min() >= 1 - 1e-9
            assert off.max() <= d ** (k - 1) * (1 + 1e-12)


def test_weingarten_inverse():
    data = weingarten(3, 2)
    assert data.rank == 6
    assert data.residual < 1e-8
    assert np.allclose(data.W @ data.Winv, np.eye(6), atol=1e-8)

    data = weingarten(4, 5)
    assert data.rank == 30
    assert data.residual < 1e-8


def test_weingarten_refuses_singular_gram():
    """At n=2 the thirty k=4 monomials are linearly dependent"""
    assert not independence_check(4, 2)
    with pytest.raises(SingularGramError) as excinfo:
        weingarten(4, 2)
    assert excinfo.value.rank < excinfo.value.size == 30
    # the twirl still has a projector to work with
    assert twirl_inverse(4, 2).shape == (30, 30)
    print("[OK] Singular Gram handling")


@pytest.mark.parametrize("k", [2, 3])
def test_twirl_matches_orbit_average(k):
    psi = make_state(StateKind.HAAR, 2, seed=21 + k)
    exact = orbit_moment(psi, k, OrbitMode.ENUMERATE).matrix
    assert np.max(np.abs(twirl_pure_state(psi, k).matrix - exact)) < 1e-8
    generic = clifford_twirl(MomentOp(2, k, pure_moment(psi, k)), k, 2)
    assert np.max(np.abs(generic.matrix - exact)) < 1e-8


@pytest.mark.slow
def test_twirl_matches_orbit_average_k4():
    psi = make_state(StateKind.HAAR, 2, seed=4)
    exact = orbit_moment(psi, 4, OrbitMode.ENUMERATE).matrix
    assert np.max(np.abs(twirl_pure_state(psi, 4).matrix - exact)) < 1e-8


def test_twirl_is_idempotent():
    psi = make_state(StateKind.HAAR, 1, seed=6)
    once = twirl_pure_state(psi, 3)
    twice = clifford_twirl(once, 3, 1)
    assert np.max(np.abs(once.matrix - twice.matrix)) < 1e-10
    assert once.trace == pytest.approx(1.0)


def test_twirl_shape_check():
    with pytest.raises(InputError):
        clifford_twirl(MomentOp(1, 2, np.eye(8)), 2, 1)


def copy_power(unitary: np.ndarray, k: int) -> np.ndarray:
    out = unitary
    for _ in range(k - 1):
        out = np.kron(out, unitary)
    return out


def test_basis_commutes_with_clifford_powers():
    """Every k = 4 monomial on two qubits commutes with C^{(x) 4}"""
    rng = np.random.default_rng(29)
    basis = enumerate_monomials(4)
    elements = [
        qubit_to_copy_major(np.kron(basis.dense_factor(i), basis.dense_factor(i)), 2, 4) for i in range(basis.size)
    ]
    for _ in range(3):
        power = copy_power(clifford_unitary(random_clifford(2, rng)), 4)
        for omega in elements:
            assert np.max(np.abs(power @ omega - omega @ power)) < 1e-10
    print("[OK] Commutant elements commute with Clifford powers")


def test_twirl_commutes_with_clifford_powers():
    rng = np.random.default_rng(37)
    psi = make_state(StateKind.HAAR, 2, seed=rng)
    for k in (3, 4):
        twirled = twirl_pure_state(psi, k).matrix
        for _ in range(3):
            power = copy_power(clifford_unitary(random_clifford(2, rng)), k)
            assert np.max(np.abs(power @ twirled - twirled @ power)) < 1e-9


def test_basis_export(tmp_path):
    basis = enumerate_monomials(3)
    path = write_basis(3, basis.elements, str(tmp_path / "basis" / "k3.json"))
    with open(path) as fh:
        export = BasisExport.model_validate(json.load(fh))
    assert export.count == 6
    for record, w in zip(export.elements, basis.elements):
        assert np.allclose(single_qubit_factor(from_record(record)), single_qubit_factor(w))


if __name__ == "__main__":
    test_monomial_count_formula()
    test_count_bounds()
    test_gram_examples()
    test_weingarten_refuses_singular_gram()
    test_twirl_is_idempotent()
    test_basis_commutes_with_clifford_powers()
    print("\nAll commutant tests passed!")
