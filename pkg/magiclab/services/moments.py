"""
k-copy moment operators.

Matrices are stored in copy-major order (the natural ordering of
psi (x) psi (x) ...); `copy_to_qubit_major` regroups the wires so that the
k copies of each physical qubit are adjacent, which is where Pauli
monomials factorize.
"""

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from magiclab.core.config import settings
from magiclab.core.errors import InputError
from magiclab.core.limits import check_matrix
from magiclab.services.states import StateVec


@dataclass
class MomentOp:
    n: int
    k: int
    matrix: np.ndarray
    label: str = ""
    metadata: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))


def check_moment_size(n: int, k: int, what: str) -> None:
    if n < 1 or k < 1:
        raise InputError(f"{what}: needs n >= 1 and k >= 1, got n={n}, k={k}")
    check_matrix(n * k, settings.MAX_MOMENT_QUBITS, what)


def _wire_order(n: int, k: int) -> list:
    return [c * n + q for q in range(n) for c in range(k)]


def copy_to_qubit_major(matrix: np.ndarray, n: int, k: int) -> np.ndarray:
    wires = n * k
    order = _wire_order(n, k)
    axes = order + [wires + w for w in order]
    return matrix.reshape((2,) * (2 * wires)).transpose(axes).reshape(matrix.shape)


def qubit_to_copy_major(matrix: np.ndarray, n: int, k: int) -> np.ndarray:
    wires = n * k
    inverse = list(np.argsort(_wire_order(n, k)))
    axes = inverse + [wires + w for w in inverse]
    return matrix.reshape((2,) * (2 * wires)).transpose(axes).reshape(matrix.shape)


def copy_permutation_operator(perm: Sequence[int], k: int, local_dim: int) -> np.ndarray:
    """Operator moving the content of copy alpha to copy perm[alpha]."""
    if sorted(perm) != list(range(k)):
        raise InputError(f"{list(perm)} is not a permutation of {k} copies")
    inverse = list(np.argsort(perm))
    dim = local_dim ** k
    eye = np.eye(dim, dtype=np.complex128).reshape((local_dim,) * k + (dim,))
    return eye.transpose(inverse + [k]).reshape(dim, dim)


def pure_moment(psi: StateVec, k: int) -> np.ndarray:
    """(|psi><psi|)^{(x) k} in copy-major order."""
    check_moment_size(psi.n, k, "pure_moment")
    vec = psi.amps
    for _ in range(k - 1):
        vec = np.kron(vec, psi.amps)
    return np.outer(vec, vec.conj())


def symmetric_projector(n: int, k: int) -> np.ndarray:
    """Projector onto Sym^k(C^d), built from the type classes of the computational basis.

    Basis strings that are rearrangements of one another form a class T, and
    the projector is the sum of |T><T| with |T> the uniform superposition over
    T, so entry [i, j] is 1/|T| when i and j share a class.
    """
    check_moment_size(n, k, "symmetric_projector")
    d = 1 << n
    idx = np.arange(d ** k, dtype=np.int64)
    places = d ** np.arange(k - 1, -1, -1, dtype=np.int64)
    digits = np.sort((idx[:, None] // places[None, :]) % d, axis=1)
    _, classes, sizes = np.unique(digits, axis=0, return_inverse=True, return_counts=True)
    classes = classes.ravel()
    same = classes[:, None] == classes[None, :]
    return same / sizes[classes][None, :].astype(np.complex128)


def haar_moment(n: int, k: int) -> MomentOp:
    """Pi_sym / tr(Pi_sym), the k-th moment of Haar-random n-qubit states."""
    check_moment_size(n, k, "haar_moment")
    d = 1 << n
    projector = symmetric_projector(n, k)
    return MomentOp(n, k, projector / math.comb(d + k - 1, k), label="haar")


def trace_norm(matrix: np.ndarray) -> float:
    """Schatten 1-norm of a Hermitian matrix."""
    return float(np.sum(np.abs(np.linalg.eigvalsh(matrix))))
