"""
The reduced Pauli monomial basis of the k-copy Clifford commutant, its Gram
and Weingarten matrices, and the k-fold Clifford twirl.

Every basis element is stored by its single-qubit Pauli expansion (a sparse
row over the 4^k words X^a Z^b), so Gram entries tr(omega^dag omega') are
2^k times a row inner product and the n-qubit Gram matrix is its
elementwise n-th power.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np
import scipy.linalg
import scipy.sparse

from magiclab.core.config import settings
from magiclab.core.errors import InputError, ResourceCapError, SingularGramError
from magiclab.core.logging import get_logger
from magiclab.schemas.api import CommutantSummary
from magiclab.services.f2core import BitMatrix, BitVector
from magiclab.services.genpurity import PurityEvaluator
from magiclab.services.moments import MomentOp, check_moment_size, copy_to_qubit_major, qubit_to_copy_major
from magiclab.services.monomial import PauliMonomial, pauli_coefficients, single_qubit_factor
from magiclab.services.states import StateVec

logger = get_logger(__name__)

_FINGERPRINT_DECIMALS = 8


def monomial_count(k: int) -> int:
    """prod_{i=0}^{k-2} (2^i + 1)."""
    count = 1
    for i in range(k - 1):
        count *= (1 << i) + 1
    return count


def count_bounds_log2(k: int) -> Tuple[float, float]:
    return (k * k - 3 * k - 1) / 2, (k * k - 3 * k + 12) / 2


def _even_subspaces(k: int, m: int):
    """Row-reduced m x k bases of the m-dimensional subspaces of even-weight vectors."""
    for pivots in itertools.combinations(range(k), m):
        slots = [(r, c) for r, p in enumerate(pivots) for c in range(p + 1, k) if c not in pivots]
        for code in range(1 << len(slots)):
            basis = np.zeros((m, k), dtype=np.uint8)
            for r, p in enumerate(pivots):
                basis[r, p] = 1
            for bit, (r, c) in enumerate(slots):
                basis[r, c] = (code >> bit) & 1
            if not np.any(basis.sum(axis=1) % 2):
                yield basis


def _sign_matrices(m: int):
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    for code in range(1 << len(pairs)):
        M = np.zeros((m, m), dtype=np.uint8)
        for bit, (i, j) in enumerate(pairs):
            if (code >> (len(pairs) - 1 - bit)) & 1:
                M[i, j] = M[j, i] = 1
        yield M


def _expansion(w: PauliMonomial) -> Tuple[np.ndarray, np.ndarray]:
    a, b, coeffs = pauli_coefficients(w)
    keys = (a << w.k) | b
    order = np.argsort(keys)
    return keys[order], coeffs[order]


def _fingerprint(keys: np.ndarray, coeffs: np.ndarray) -> bytes:
    rounded = np.round(coeffs, _FINGERPRINT_DECIMALS) + 0.0
    return keys.tobytes() + rounded.tobytes()


class CommutantBasis:
    def __init__(self, k: int, elements: List[PauliMonomial], rows: List[Tuple[np.ndarray, np.ndarray]]):
        self.k = k
        self.elements = tuple(elements)
        self.fingerprints: Dict[bytes, int] = {
            _fingerprint(keys, coeffs): i for i, (keys, coeffs) in enumerate(rows)
        }
        indptr = np.cumsum([0] + [keys.size for keys, _ in rows])
        indices = np.concatenate([keys for keys, _ in rows]) if rows else np.zeros(0, dtype=np.int64)
        data = np.concatenate([coeffs for _, coeffs in rows]) if rows else np.zeros(0)
        self.coefficients = scipy.sparse.csr_matrix((data, indices, indptr), shape=(len(rows), 1 << (2 * k)))
        self._rows = rows

    @property
    def size(self) -> int:
        return len(self.elements)

    def dense_factor(self, index: int) -> np.ndarray:
        return single_qubit_factor(self.elements[index])

    def index_of(self, keys: np.ndarray, coeffs: np.ndarray) -> Optional[int]:
        order = np.argsort(keys)
        return self.fingerprints.get(_fingerprint(keys[order], coeffs[order]))

    def conjugation_classes(self) -> List[List[int]]:
        """Orbits of the basis under conjugation by copy permutations."""
        parent = list(range(self.size))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        k = self.k
        for i, (keys, coeffs) in enumerate(self._rows):
            a, b = keys >> k, keys & ((1 << k) - 1)
            for alpha in range(k - 1):
                hi, lo = k - 1 - alpha, k - 2 - alpha
                swapped = [
                    word ^ ((((word >> hi) ^ (word >> lo)) & 1) * ((1 << hi) | (1 << lo)))
                    for word in (a, b)
                ]
                j = self.index_of((swapped[0] << k) | swapped[1], coeffs)
                if j is None:
                    logger.warning(f"Basis element {i} has no image under copy swap {alpha}<->{alpha + 1}")
                    continue
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)

        classes: Dict[int, List[int]] = {}
        for i in range(self.size):
            classes.setdefault(find(i), []).append(i)
        return sorted(classes.values(), key=lambda members: members[0])


def _check_enumeration(k: int) -> None:
    if k < 1:
        raise InputError(f"enumerate_monomials needs k >= 1, got {k}")
    if k > settings.MAX_ENUMERATION_COPIES:
        raise ResourceCapError(
            f"Enumeration for k={k} exceeds the cap k <= {settings.MAX_ENUMERATION_COPIES} "
            f"({monomial_count(k)} elements, Gram matrix ~{monomial_count(k) ** 2 * 8 / 2**20:.0f} MiB)"
        )


@lru_cache(maxsize=None)
def _enumerate(k: int) -> CommutantBasis:
    elements: List[PauliMonomial] = []
    rows: List[Tuple[np.ndarray, np.ndarray]] = []
    seen: Dict[bytes, int] = {}
    for m in range(k):
        for basis in _even_subspaces(k, m):
            V = BitMatrix(basis.T, cols=m)
            for M in _sign_matrices(m):
                w = PauliMonomial(k, V, BitMatrix(M, cols=m), BitVector.zeros(m))
                keys, coeffs = _expansion(w)
                fingerprint = _fingerprint(keys, coeffs)
                if fingerprint in seen:
                    other_keys, other_coeffs = rows[seen[fingerprint]]
                    if np.array_equal(keys, other_keys) and np.allclose(coeffs, other_coeffs, atol=settings.MONOMIAL_EQ_TOL):
                        logger.warning(f"Duplicate monomial dropped during enumeration: {w}")
                        continue
                seen[fingerprint] = len(elements)
                elements.append(w)
                rows.append((keys, coeffs))
    expected = monomial_count(k)
    if len(elements) != expected:
        logger.error(f"Enumeration for k={k} produced {len(elements)} elements, expected {expected}")
    logger.info(f"Enumerated {len(elements)} reduced monomials for k={k}")
    return CommutantBasis(k, elements, rows)


def enumerate_monomials(k: int) -> CommutantBasis:
    _check_enumeration(k)
    return _enumerate(k)


def commutant_summary(k: int) -> CommutantSummary:
    basis = enumerate_monomials(k)
    lower, upper = count_bounds_log2(k)
    return CommutantSummary(k=k, count=basis.size, formula=monomial_count(k), log2_lower=lower, log2_upper=upper)


@dataclass
class GramData:
    k: int
    n: int
    W: np.ndarray
    Winv: Optional[np.ndarray] = None
    rank: Optional[int] = None
    residual: Optional[float] = None


@lru_cache(maxsize=16)
def _single_qubit_gram(k: int) -> np.ndarray:
    C = enumerate_monomials(k).coefficients
    gram = (C @ C.T).toarray() * float(1 << k)
    gram.setflags(write=False)
    return gram


def gram_matrix(k: int, n: int) -> GramData:
    """W[i, j] = tr(Omega_i^dag Omega_j) = tr(omega_i^dag omega_j)^n."""
    if n < 1:
        raise InputError(f"gram_matrix needs n >= 1, got {n}")
    return GramData(k, n, _single_qubit_gram(k) ** n)


def weingarten(k: int, n: int) -> GramData:
    """Gram data with the inverse filled in; rank-deficient W is refused."""
    data = gram_matrix(k, n)
    size = data.W.shape[0]
    scale = 2.0 ** (n * k)
    normalized = data.W / scale
    data.rank = int(np.linalg.matrix_rank(normalized))
    if data.rank < size:
        logger.error(f"Gram matrix for k={k}, n={n} has rank {data.rank} < {size}")
        raise SingularGramError(
            f"Gram matrix for k={k}, n={n} is singular (rank {data.rank} of {size}); "
            f"the basis is linearly dependent at this n",
            rank=data.rank,
            size=size,
        )

    inverse = scipy.linalg.inv(normalized)
    if size >= settings.WEINGARTEN_EXTENDED_PRECISION_MIN:
        # one step of iterative refinement with the residual in extended precision
        wide = normalized.astype(np.longdouble)
        residual = np.eye(size, dtype=np.longdouble) - wide @ inverse.astype(np.longdouble)
        inverse = (inverse.astype(np.longdouble) + inverse.astype(np.longdouble) @ residual).astype(np.float64)

    data.residual = float(np.max(np.abs(normalized @ inverse - np.eye(size))))
    if data.residual > settings.WEINGARTEN_RESIDUAL_TOL:
        logger.warning(f"Weingarten residual {data.residual:.2e} for k={k}, n={n} exceeds tolerance")
    data.Winv = inverse / scale
    logger.info(f"Weingarten matrix for k={k}, n={n}: size {size}, residual {data.residual:.2e}")
    return data


def independence_check(k: int, n: int) -> bool:
    data = gram_matrix(k, n)
    return int(np.linalg.matrix_rank(data.W / 2.0 ** (n * k))) == data.W.shape[0]


def twirl_inverse(k: int, n: int) -> np.ndarray:
    """Weingarten matrix, or the Gram pseudo-inverse when the basis is dependent at this n.

    The twirl is the orthogonal projection onto the commutant, which the
    pseudo-inverse still realizes on a spanning but dependent set.
    """
    try:
        return weingarten(k, n).Winv
    except SingularGramError as e:
        logger.warning(f"Falling back to the Gram pseudo-inverse: {str(e)}")
    scale = 2.0 ** (n * k)
    return scipy.linalg.pinvh(gram_matrix(k, n).W / scale) / scale


def _kron_power(omega: np.ndarray, n: int) -> np.ndarray:
    out = omega
    for _ in range(n - 1):
        out = np.kron(out, omega)
    return out


def _overlap(omega: np.ndarray, matrix_qm: np.ndarray, n: int) -> complex:
    """tr((omega^{(x) n})^dag O) for O in qubit-major layout, contracted qubit by qubit."""
    side = omega.shape[0]
    tensor = matrix_qm.reshape((side,) * (2 * n))
    order = [axis for q in range(n) for axis in (q, n + q)]
    tensor = tensor.transpose(order).reshape((side * side,) * n)
    flat = omega.conj().reshape(-1)
    for _ in range(n):
        tensor = np.tensordot(flat, tensor, axes=([0], [0]))
    return complex(tensor)


def _combine(basis: CommutantBasis, weights: np.ndarray, n: int) -> np.ndarray:
    dim = 1 << (n * basis.k)
    total = np.zeros((dim, dim), dtype=np.complex128)
    for i, y in enumerate(weights):
        if y != 0:
            total += y * _kron_power(basis.dense_factor(i), n)
    return total


def clifford_twirl(op: MomentOp, k: int, n: int) -> MomentOp:
    """Sum_{Omega, Omega'} Winv[Omega, Omega'] tr(Omega^dag O) Omega' (copy-major in and out)."""
    check_moment_size(n, k, "clifford_twirl")
    if op.matrix.shape != (1 << (n * k),) * 2:
        raise InputError(f"Operator of shape {op.matrix.shape} does not act on {k} copies of {n} qubits")
    basis = enumerate_monomials(k)
    winv = twirl_inverse(k, n)
    matrix_qm = copy_to_qubit_major(op.matrix, n, k)
    overlaps = np.array([_overlap(basis.dense_factor(i), matrix_qm, n) for i in range(basis.size)])
    weights = winv.T @ overlaps
    twirled = qubit_to_copy_major(_combine(basis, weights, n), n, k)
    return MomentOp(n, k, twirled, label=f"twirl({op.label})")


def twirl_pure_state(psi: StateVec, k: int) -> MomentOp:
    """Clifford twirl of (|psi><psi|)^{(x) k}; overlaps come from the copy stack."""
    n = psi.n
    check_moment_size(n, k, "twirl_pure_state")
    basis = enumerate_monomials(k)
    winv = twirl_inverse(k, n)
    evaluator = PurityEvaluator(psi)
    overlaps = np.array([np.conj(evaluator.expectation(w)) for w in basis.elements])
    weights = winv.T @ overlaps
    twirled = qubit_to_copy_major(_combine(basis, weights, n), n, k)
    return MomentOp(n, k, twirled, label="weingarten")
