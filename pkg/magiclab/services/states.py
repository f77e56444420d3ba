"""
Dense statevectors, Clifford tableaux and the named states.

A `CliffordTableau` stores, for each qubit j, the image of X_j (row j) and
of Z_j (row n+j) under conjugation, as (x | z) bit rows plus a sign bit.
The unitary is realized canonically: U|0...0> is the joint +1 eigenvector
of the Z images with its first nonzero amplitude real positive, and
U|x> = D^x U|0...0> with D_j the image of X_j.
"""

from functools import lru_cache
from typing import List, Optional, Union

import numpy as np

from magiclab.core.config import settings
from magiclab.core.errors import InputError
from magiclab.core.limits import check_qubits
from magiclab.core.logging import get_logger
from magiclab.schemas.state import StateKind
from magiclab.services.f2core import BitMatrix, BitVector
from magiclab.services.pauli import PauliOp, apply

logger = get_logger(__name__)

SeedLike = Union[int, np.random.Generator, None]

# cos(theta) = 1/sqrt(3) puts the Bloch vector on (1,1,1)/sqrt(3)
_GOLDEN_THETA = float(np.arccos(1.0 / np.sqrt(3.0)))


def _rng(seed: SeedLike) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


class StateVec:
    """Unit-norm complex amplitude vector of length 2^n (qubit 0 is the MSB)."""

    __slots__ = ("n", "_amps")

    def __init__(self, n: int, amps: np.ndarray, renormalize: bool = False):
        amps = np.asarray(amps, dtype=np.complex128).reshape(-1)
        if n < 1:
            raise InputError(f"A state needs at least one qubit, got n={n}")
        if amps.size != 1 << n:
            raise InputError(f"Expected {1 << n} amplitudes for n={n}, got {amps.size}")
        norm = float(np.linalg.norm(amps))
        if renormalize:
            amps = amps / norm
        elif abs(norm - 1.0) > settings.STATE_NORM_TOL:
            raise InputError(f"State is not normalized: norm = {norm:.3e}")
        amps = amps.copy()
        amps.setflags(write=False)
        self.n = n
        self._amps = amps

    @property
    def amps(self) -> np.ndarray:
        return self._amps

    @property
    def dim(self) -> int:
        return self._amps.size

    def tensor(self, other: "StateVec") -> "StateVec":
        return StateVec(self.n + other.n, np.kron(self._amps, other.amps), renormalize=True)

    def __repr__(self) -> str:
        return f"StateVec(n={self.n})"


class CliffordTableau:
    __slots__ = ("n", "symplectic", "phases")

    def __init__(self, n: int, symplectic: BitMatrix, phases: BitVector, check: bool = True):
        if symplectic.shape != (2 * n, 2 * n) or len(phases) != 2 * n:
            raise InputError(f"Tableau for n={n} needs a {2 * n}x{2 * n} matrix and {2 * n} phase bits")
        if check and not is_symplectic(symplectic.entries):
            raise InputError("Tableau matrix is not symplectic")
        self.n = n
        self.symplectic = symplectic
        self.phases = phases

    @classmethod
    def identity(cls, n: int) -> "CliffordTableau":
        return cls(n, BitMatrix.identity(2 * n), BitVector.zeros(2 * n))

    def image(self, row: int) -> PauliOp:
        """Signed Hermitian Pauli that row `row` maps to (X_j for j < n, else Z_{j-n})."""
        bits = self.symplectic.entries[row]
        p = PauliOp(self.n, BitVector(bits[: self.n]), BitVector(bits[self.n:]))
        return PauliOp(p.n, p.x, p.z, p.y_count + 2 * self.phases[row])

    def __eq__(self, other) -> bool:
        if not isinstance(other, CliffordTableau):
            return NotImplemented
        return self.symplectic == other.symplectic and self.phases == other.phases

    def __hash__(self) -> int:
        return hash((self.symplectic, self.phases))

    def __repr__(self) -> str:
        return f"CliffordTableau(n={self.n}, phases={self.phases.to_string()})"


def _form(n: int) -> np.ndarray:
    eye = np.eye(n, dtype=np.int64)
    zero = np.zeros((n, n), dtype=np.int64)
    return np.block([[zero, eye], [eye, zero]])


def is_symplectic(mat: np.ndarray) -> bool:
    """S J S^T = J over F2, J = [[0, I], [I, 0]]."""
    mat = np.asarray(mat, dtype=np.int64)
    n = mat.shape[0] // 2
    form = _form(n)
    return bool(np.array_equal((mat @ form @ mat.T) % 2, form))


def _inner(u: np.ndarray, v: np.ndarray, n: int) -> int:
    return int((u[:n] @ v[n:] + u[n:] @ v[:n]) % 2)


def random_clifford(n: int, seed: SeedLike = None) -> CliffordTableau:
    """Uniform Clifford modulo global phase.

    The symplectic part is built by symplectic Gram-Schmidt: each new pair
    (image of X_j, image of Z_j) is drawn uniformly from the symplectic
    complement of the previous pairs. Sign bits are independent coin flips.
    """
    if n < 1:
        raise InputError(f"random_clifford needs n >= 1, got {n}")
    rng = _rng(seed)
    xs: List[np.ndarray] = []
    zs: List[np.ndarray] = []

    def project(u: np.ndarray) -> np.ndarray:
        out = u.copy()
        for v, w in zip(xs, zs):
            if _inner(u, w, n):
                out ^= v
            if _inner(u, v, n):
                out ^= w
        return out

    for _ in range(n):
        while True:
            v = project(rng.integers(0, 2, size=2 * n).astype(np.int64))
            if v.any():
                break
        while True:
            w = project(rng.integers(0, 2, size=2 * n).astype(np.int64))
            if _inner(v, w, n) == 1:
                break
        xs.append(v)
        zs.append(w)
    symplectic = BitMatrix(np.array(xs + zs))
    phases = BitVector(rng.integers(0, 2, size=2 * n))
    return CliffordTableau(n, symplectic, phases)


def _stabilizer_vector(c: CliffordTableau) -> np.ndarray:
    """U|0...0>: the projection of the first basis state with nonzero overlap."""
    n = c.n
    dim = 1 << n
    stabilizers = [c.image(n + j) for j in range(n)]
    for b in range(dim):
        vec = np.zeros(dim, dtype=np.complex128)
        vec[b] = 1.0
        for s in stabilizers:
            vec = 0.5 * (vec + apply(s, vec))
        # overlaps with a stabilizer state are 0 or at least 2^{-n}
        if np.vdot(vec, vec).real > 0.5 / dim:
            vec /= np.linalg.norm(vec)
            lead = vec[np.flatnonzero(np.abs(vec) > 1e-8)[0]]
            return vec * (abs(lead) / lead)
    raise InputError("Tableau rows do not define a stabilizer state")


def _destabilizer_walk(c: CliffordTableau):
    """Yield (x, D^x U|0>) over all x in Gray-code order."""
    n = c.n
    destabilizers = [c.image(j) for j in range(n)]
    current = _stabilizer_vector(c)
    yield 0, current
    for g in range(1, 1 << n):
        bit = (g & -g).bit_length() - 1
        current = apply(destabilizers[n - 1 - bit], current)
        yield g ^ (g >> 1), current


def apply_clifford(c: CliffordTableau, psi: StateVec) -> StateVec:
    if c.n != psi.n:
        raise InputError(f"Tableau acts on {c.n} qubits, state has {psi.n}")
    check_qubits(psi.n, settings.MAX_STATE_QUBITS, "apply_clifford")
    out = np.zeros(psi.dim, dtype=np.complex128)
    amps = psi.amps
    for x, column in _destabilizer_walk(c):
        if amps[x] != 0:
            out += amps[x] * column
    return StateVec(psi.n, out, renormalize=True)


def clifford_unitary(c: CliffordTableau) -> np.ndarray:
    check_qubits(c.n, settings.MAX_STATE_QUBITS, "clifford_unitary")
    dim = 1 << c.n
    unitary = np.zeros((dim, dim), dtype=np.complex128)
    for x, column in _destabilizer_walk(c):
        unitary[:, x] = column
    return unitary


@lru_cache(maxsize=4)
def _enumerate_clifford(n: int) -> tuple:
    size = 2 * n
    count = 1 << (size * size)
    codes = np.arange(count, dtype=np.int64)
    shifts = np.arange(size * size - 1, -1, -1, dtype=np.int64)
    mats = ((codes[:, None] >> shifts[None, :]) & 1).reshape(count, size, size)
    form = _form(n)
    products = np.einsum("aij,jk,alk->ail", mats, form, mats) % 2
    symplectic = mats[np.all(products == form, axis=(1, 2))]
    phase_codes = np.arange(1 << size, dtype=np.int64)
    phase_shifts = np.arange(size - 1, -1, -1, dtype=np.int64)
    phase_bits = (phase_codes[:, None] >> phase_shifts[None, :]) & 1
    tableaux = []
    for mat in symplectic:
        matrix = BitMatrix(mat)
        for bits in phase_bits:
            tableaux.append(CliffordTableau(n, matrix, BitVector(bits), check=False))
    logger.info(f"Enumerated {len(tableaux)} Clifford tableaux for n={n}")
    return tuple(tableaux)


def enumerate_clifford(n: int) -> List[CliffordTableau]:
    """Every n-qubit Clifford modulo phase: 24 for n=1, 11520 for n=2."""
    if n < 1:
        raise InputError(f"enumerate_clifford needs n >= 1, got {n}")
    check_qubits(n, settings.MAX_CLIFFORD_ENUMERATION_QUBITS, "enumerate_clifford")
    return list(_enumerate_clifford(n))


def _single_qubit_power(single: np.ndarray, n: int) -> np.ndarray:
    amps = np.ones(1, dtype=np.complex128)
    for _ in range(n):
        amps = np.kron(amps, single)
    return amps


def t_state() -> np.ndarray:
    return np.array([1.0, np.exp(1j * np.pi / 4)], dtype=np.complex128) / np.sqrt(2.0)


def golden_state() -> np.ndarray:
    return np.array(
        [np.cos(_GOLDEN_THETA / 2), np.exp(1j * np.pi / 4) * np.sin(_GOLDEN_THETA / 2)],
        dtype=np.complex128,
    )


def make_state(
    kind: Union[StateKind, str],
    n: Optional[int] = None,
    seed: SeedLike = None,
    path: Optional[str] = None,
) -> StateVec:
    try:
        kind = StateKind(kind)
    except ValueError:
        raise InputError(f"Unknown state kind: {kind!r}")

    if kind == StateKind.FILE:
        if path is None:
            raise InputError("State kind 'file' needs a path")
        from magiclab.services.state_loader import load_state_file

        return load_state_file(path)

    if n is None or n < 1:
        raise InputError(f"State kind '{kind.value}' needs n >= 1, got {n}")
    check_qubits(n, settings.MAX_STATE_QUBITS, f"make_state({kind.value})")
    dim = 1 << n

    if kind == StateKind.BASIS0:
        amps = np.zeros(dim, dtype=np.complex128)
        amps[0] = 1.0
    elif kind == StateKind.T_POWER:
        amps = _single_qubit_power(t_state(), n)
    elif kind == StateKind.GOLDEN_POWER:
        amps = _single_qubit_power(golden_state(), n)
    elif kind == StateKind.HAAR:
        rng = _rng(seed)
        amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    else:
        zero = make_state(StateKind.BASIS0, n)
        return apply_clifford(random_clifford(n, seed), zero)
    return StateVec(n, amps, renormalize=True)

