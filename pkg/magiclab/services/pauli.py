"""
Symplectic n-qubit Pauli operators with exact phase tracking.

A `PauliOp` is ``i^phase_exp * X^x Z^z`` with one (x_j, z_j) bit pair per
qubit; qubit 0 is the most significant bit of a basis-state index. The
Hermitian representative of a Pauli word carries ``phase_exp = |x AND z|``,
so Y = i X Z.
"""

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from magiclab.core.config import settings
from magiclab.core.errors import InputError
from magiclab.core.limits import check_qubits
from magiclab.core.logging import get_logger
from magiclab.services.f2core import BitVector, parity, popcount

if TYPE_CHECKING:
    from magiclab.services.states import StateVec

logger = get_logger(__name__)

_LETTERS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_I_POWERS = np.array([1, 1j, -1, -1j], dtype=np.complex128)

# rows per chunk of the spectrum table
_SPECTRUM_CHUNK = 256


@dataclass(frozen=True)
class PauliOp:
    n: int
    x: BitVector
    z: BitVector
    phase_exp: int = 0

    def __post_init__(self):
        if len(self.x) != self.n or len(self.z) != self.n:
            raise InputError(f"PauliOp on {self.n} qubits needs x and z of length {self.n}")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    @classmethod
    def from_masks(cls, n: int, xmask: int, zmask: int, phase_exp: int = 0) -> "PauliOp":
        return cls(n, BitVector.from_int(xmask, n), BitVector.from_int(zmask, n), phase_exp)

    @classmethod
    def hermitian(cls, n: int, xmask: int, zmask: int) -> "PauliOp":
        """Hermitian representative of the word X^x Z^z."""
        return cls.from_masks(n, xmask, zmask, bin(xmask & zmask).count("1"))

    @classmethod
    def from_label(cls, label: str, sign: int = 1) -> "PauliOp":
        """Parse a word such as ``"XIZY"``; letters are the Hermitian Paulis."""
        label = label.upper()
        if not label or any(ch not in _LETTERS for ch in label):
            raise InputError(f"Invalid Pauli label: {label!r}")
        xs = [_LETTERS[ch][0] for ch in label]
        zs = [_LETTERS[ch][1] for ch in label]
        phase = sum(a & b for a, b in zip(xs, zs)) + (2 if sign < 0 else 0)
        return cls(len(label), BitVector(xs), BitVector(zs), phase)

    @classmethod
    def identity(cls, n: int) -> "PauliOp":
        return cls.from_masks(n, 0, 0, 0)

    @property
    def xmask(self) -> int:
        return self.x.to_int()

    @property
    def zmask(self) -> int:
        return self.z.to_int()

    @property
    def y_count(self) -> int:
        return int(np.sum(self.x.bits & self.z.bits))

    @property
    def is_hermitian(self) -> bool:
        return (self.phase_exp - self.y_count) % 2 == 0

    @property
    def label(self) -> str:
        letters = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
        word = "".join(letters[(a, b)] for a, b in zip(self.x, self.z))
        # i^phase * (-i)^#Y is the scalar in front of the Hermitian letters
        prefix = {0: "+", 1: "+i", 2: "-", 3: "-i"}[(self.phase_exp - self.y_count) % 4]
        return prefix + word


def _check_same_n(a: PauliOp, b: PauliOp) -> None:
    if a.n != b.n:
        raise InputError(f"Pauli operators act on different qubit counts: {a.n} vs {b.n}")


def multiply(a: PauliOp, b: PauliOp) -> PauliOp:
    """Exact group law, phase included: Z^z X^x' = (-1)^{z.x'} X^x' Z^z."""
    _check_same_n(a, b)
    swap = bin(a.zmask & b.xmask).count("1")
    return PauliOp(
        a.n,
        a.x + b.x,
        a.z + b.z,
        (a.phase_exp + b.phase_exp + 2 * swap) % 4,
    )


def chi(a: PauliOp, b: PauliOp) -> int:
    """+1 when a and b commute, -1 when they anticommute."""
    _check_same_n(a, b)
    form = bin(a.xmask & b.zmask).count("1") + bin(a.zmask & b.xmask).count("1")
    return -1 if form % 2 else 1


def xi(p: PauliOp) -> int:
    """Transpose sign: P^T = xi(P) P for Hermitian representatives."""
    return -1 if p.y_count % 2 else 1


def apply(p: PauliOp, amps: np.ndarray) -> np.ndarray:
    """Return P|amps> for a dense vector of length 2^n."""
    dim = 1 << p.n
    if amps.shape[-1] != dim:
        raise InputError(f"Vector of length {amps.shape[-1]} does not match {p.n} qubits")
    idx = np.arange(dim, dtype=np.int64)
    signs = 1 - 2 * parity(idx & p.zmask)
    out = np.empty_like(amps, dtype=np.complex128)
    out[..., idx ^ p.xmask] = _I_POWERS[p.phase_exp] * signs * amps
    return out


def expectation(psi: "StateVec", p: PauliOp) -> float:
    if not p.is_hermitian:
        raise InputError(f"Expectation needs a Hermitian Pauli, got phase exponent {p.phase_exp} on {p.label}")
    if psi.n != p.n:
        raise InputError(f"State has {psi.n} qubits, Pauli has {p.n}")
    return float(np.vdot(psi.amps, apply(p, psi.amps)).real)


def to_dense(p: PauliOp) -> np.ndarray:
    check_qubits(p.n, settings.MAX_STATE_QUBITS, "to_dense")
    dim = 1 << p.n
    idx = np.arange(dim, dtype=np.int64)
    mat = np.zeros((dim, dim), dtype=np.complex128)
    mat[idx ^ p.xmask, idx] = _I_POWERS[p.phase_exp] * (1 - 2 * parity(idx & p.zmask))
    return mat


def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along the last axis."""
    dim = values.shape[-1]
    lead = values.shape[:-1]
    out = values
    h = 1
    while h < dim:
        out = out.reshape(*lead, dim // (2 * h), 2, h)
        lo, hi = out[..., 0, :], out[..., 1, :]
        out = np.stack((lo + hi, lo - hi), axis=-2)
        h *= 2
    return out.reshape(*lead, dim)


def pauli_spectrum(psi: "StateVec") -> np.ndarray:
    """All expectation values <psi|P|psi>, as a (2^n, 2^n) table indexed [x, z].

    For a fixed x the values over z are a Walsh-Hadamard transform of
    conj(psi[b ^ x]) psi[b], so the table costs O(4^n n).
    """
    n = psi.n
    check_qubits(n, settings.MAX_SPECTRUM_QUBITS, "pauli_spectrum")
    dim = 1 << n
    amps = psi.amps
    basis = np.arange(dim, dtype=np.int64)
    table = np.empty((dim, dim), dtype=np.float64)
    for start in range(0, dim, _SPECTRUM_CHUNK):
        xs = np.arange(start, min(start + _SPECTRUM_CHUNK, dim), dtype=np.int64)
        products = np.conj(amps[basis[None, :] ^ xs[:, None]]) * amps[None, :]
        transformed = fwht(products)
        phases = _I_POWERS[popcount(xs[:, None] & basis[None, :]) % 4]
        table[xs] = (phases * transformed).real
    logger.debug(f"Pauli spectrum computed for n={n}")
    return table
