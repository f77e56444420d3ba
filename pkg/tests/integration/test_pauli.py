import numpy as np
import pytest
from hypothesis import given, settings as hsettings
from hypothesis import strategies as st

from magiclab.core.errors import InputError
from magiclab.services.pauli import PauliOp, apply, chi, expectation, multiply, pauli_spectrum, to_dense, xi
from magiclab.services.states import StateVec, make_state


@st.composite
def paulis(draw, n=None):
    n = n or draw(st.integers(1, 3))
    xmask = draw(st.integers(0, (1 << n) - 1))
    zmask = draw(st.integers(0, (1 << n) - 1))
    return PauliOp.from_masks(n, xmask, zmask, draw(st.integers(0, 3)))


@st.composite
def pauli_pairs(draw):
    n = draw(st.integers(1, 3))
    return draw(paulis(n)), draw(paulis(n))


def hermitian(p: PauliOp) -> PauliOp:
    return PauliOp.hermitian(p.n, p.xmask, p.zmask)


def test_multiply_examples():
    """X.Z = -iY and P.I = P"""
    x, z = PauliOp.from_label("X"), PauliOp.from_label("Z")
    assert multiply(x, z).label == "-iY"
    assert np.allclose(to_dense(multiply(x, z)), -1j * to_dense(PauliOp.from_label("Y")))

    p = PauliOp.from_label("XYZ", sign=-1)
    assert multiply(p, PauliOp.identity(3)) == p

    a, b = PauliOp.from_label("XZ"), PauliOp.from_label("ZZ")
    assert np.allclose(to_dense(multiply(a, b)), to_dense(a) @ to_dense(b))
    print("[OK] Pauli group law examples")


def test_chi_and_xi_examples():
    """Commutation and transpose signs on small words"""
    assert chi(PauliOp.from_label("X"), PauliOp.from_label("Z")) == -1
    assert chi(PauliOp.from_label("Y"), PauliOp.from_label("Y")) == 1
    assert chi(PauliOp.from_label("XX"), PauliOp.from_label("ZI")) == -1
    assert xi(PauliOp.from_label("Y")) == -1
    assert xi(PauliOp.from_label("X")) == 1
    assert xi(PauliOp.from_label("Z")) == 1
    assert xi(PauliOp.from_label("YY")) == 1
    print("[OK] chi / xi examples")


def test_to_dense_examples():
    assert np.allclose(to_dense(PauliOp.identity(1)), np.eye(2))
    assert np.allclose(to_dense(PauliOp.from_label("Y")), [[0, -1j], [1j, 0]])
    xz = np.kron([[0, 1], [1, 0]], [[1, 0], [0, -1]])
    assert np.allclose(to_dense(PauliOp.from_label("XZ")), xz)


def test_expectation_examples():
    """<0|Z|0> = 1, <+|Z|+> = 0, <T|X|T> = 1/sqrt(2)"""
    zero = make_state("basis0", 1)
    plus = StateVec(1, np.array([1, 1]) / np.sqrt(2))
    t = make_state("t_power", 1)
    assert expectation(zero, PauliOp.from_label("Z")) == pytest.approx(1.0)
    assert expectation(plus, PauliOp.from_label("Z")) == pytest.approx(0.0, abs=1e-15)
    assert expectation(t, PauliOp.from_label("X")) == pytest.approx(1 / np.sqrt(2))
    with pytest.raises(InputError):
        expectation(zero, PauliOp.from_masks(1, 1, 0, 1))
    print("[OK] Expectation examples")


def test_spectrum_examples():
    """Spectra of |0> and |T>, normalization on a random 2-qubit state"""
    spectrum = pauli_spectrum(make_state("basis0", 1))
    # table is indexed [x, z]: I=(0,0), Z=(0,1), X=(1,0), Y=(1,1)
    assert np.allclose(spectrum, [[1, 1], [0, 0]])

    spectrum = pauli_spectrum(make_state("t_power", 1))
    s = 1 / np.sqrt(2)
    assert np.allclose(spectrum, [[1, 0], [s, s]])

    psi = make_state("haar", 2, seed=3)
    spectrum = pauli_spectrum(psi)
    assert spectrum[0, 0] == pytest.approx(1.0)
    assert np.sum(spectrum ** 2) == pytest.approx(4.0, abs=1e-10)
    print("[OK] Spectrum examples")


def test_spectrum_matches_dense_expectations():
    psi = make_state("haar", 3, seed=11)
    spectrum = pauli_spectrum(psi)
    for xmask in range(8):
        for zmask in range(8):
            p = PauliOp.hermitian(3, xmask, zmask)
            value = np.vdot(psi.amps, to_dense(p) @ psi.amps).real
            assert spectrum[xmask, zmask] == pytest.approx(value, abs=1e-12)


def test_stabilizer_spectrum_is_sparse():
    psi = make_state("random_stabilizer", 3, seed=5)
    values = np.abs(pauli_spectrum(psi).ravel())
    assert np.sum(np.isclose(values, 1.0)) == 8
    assert np.all(np.isclose(values, 0.0) | np.isclose(values, 1.0))


@hsettings(max_examples=300, deadline=None)
@given(pauli_pairs())
def test_multiply_matches_dense(pair):
    a, b = pair
    assert np.allclose(to_dense(multiply(a, b)), to_dense(a) @ to_dense(b))


@hsettings(max_examples=300, deadline=None)
@given(pauli_pairs())
def test_chi_matches_group_commutator(pair):
    a, b = (to_dense(p) for p in pair)
    d = a.shape[0]
    commutator = np.trace(a @ b @ a.conj().T @ b.conj().T) / d
    assert commutator == pytest.approx(chi(*pair))


@hsettings(max_examples=300, deadline=None)
@given(pauli_pairs())
def test_xi_product_rule(pair):
    """xi(P) xi(Q) chi(P, Q) = xi(PQ) for any pair"""
    a, b = (hermitian(p) for p in pair)
    assert xi(a) * xi(b) * chi(a, b) == xi(hermitian(multiply(a, b)))


@hsettings(max_examples=300, deadline=None)
@given(pauli_pairs())
def test_xi_multiplicative_on_commuting_pairs(pair):
    a, b = (hermitian(p) for p in pair)
    if chi(a, b) == 1:
        assert xi(a) * xi(b) == xi(hermitian(multiply(a, b)))


def test_hermitian_paulis_are_involutions():
    """Every Hermitian Pauli on 2 and 3 qubits squares to the identity"""
    for n in (2, 3):
        dim = 1 << n
        for xmask in range(dim):
            for zmask in range(dim):
                dense = to_dense(PauliOp.hermitian(n, xmask, zmask))
                assert np.allclose(dense @ dense, np.eye(dim))
                assert np.allclose(dense, dense.conj().T)
    zz = to_dense(PauliOp.from_label("ZZ"))
    assert np.allclose(np.diag(zz), [1, -1, -1, 1])
    yz = np.kron([[0, -1j], [1j, 0]], [[1, 0], [0, -1]])
    assert np.allclose(to_dense(PauliOp.from_label("YZ")), yz)
    print("[OK] Hermitian Paulis square to identity")


def test_apply_matches_dense():
    psi = make_state("haar", 3, seed=4)
    for label in ("ZZI", "ZZZ", "YZY", "XYZ", "IZZ"):
        p = PauliOp.from_label(label)
        assert np.allclose(apply(p, psi.amps), to_dense(p) @ psi.amps)
    assert expectation(make_state("basis0", 2), PauliOp.from_label("ZZ")) == pytest.approx(1.0)
    print("[OK] apply agrees with dense matrices")


@hsettings(max_examples=200, deadline=None)
@given(paulis())
def test_transpose_sign(p):
    p = hermitian(p)
    dense = to_dense(p)
    assert np.allclose(dense.T, xi(p) * dense)
    assert np.allclose(dense, dense.conj().T)


if __name__ == "__main__":
    test_multiply_examples()
    test_chi_and_xi_examples()
    test_to_dense_examples()
    test_expectation_examples()
    test_spectrum_examples()
    test_hermitian_paulis_are_involutions()
    test_apply_matches_dense()
    print("\nAll Pauli tests passed!")
