"""
Pauli monomials Omega(V, M, Gamma) on k copies.

V is a k x m bit matrix of even, independent columns, M a symmetric m x m
bit matrix with zero diagonal (commutation-sign exponents) and Gamma an
m-bit vector (transpose-sign exponents). On one qubit

    omega = 2^{-m} sum_{P_1..P_m} prod_{i<j} chi(P_i, P_j)^{M_ij}
            prod_i xi(P_i)^{Gamma_i}  (x)_alpha prod_{i: V_alpha,i = 1} P_i

with the per-copy product taken in ascending i, and Omega = omega^{(x) n}.
The class of a monomial is read off

    Lambda = M + diag(|v_i|/2 + Gamma_i) + upper(V^T V)    (mod 2)

which is invertible exactly when Omega is unitary.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

import numpy as np

from magiclab.core.config import settings
from magiclab.core.errors import InputError, MonomialDefectError, ResourceCapError
from magiclab.core.logging import get_logger
from magiclab.services import f2core
from magiclab.services.f2core import BitMatrix, BitVector, parity

logger = get_logger(__name__)

# (x, z) of I, X, Y, Z
_DIGITS = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=np.int64)

# exhaustive normal-form search up to this many free bits, seeded sampling beyond
_EXHAUSTIVE_SEARCH_BITS = 12
_RANDOM_SEARCH_TRIES = 4096

# tuples x basis states handled per dense accumulation step
_DENSE_CHUNK = 1 << 22


@dataclass(frozen=True)
class PauliMonomial:
    k: int
    V: BitMatrix
    M: BitMatrix
    Gamma: BitVector

    @property
    def m(self) -> int:
        return self.V.cols

    def __repr__(self) -> str:
        cols = ",".join(c.to_string() for c in self.V.columns())
        return f"PauliMonomial(k={self.k}, V=[{cols}], Gamma={self.Gamma.to_string() or '-'})"


@dataclass(frozen=True)
class NormalForm:
    unitary_part: PauliMonomial
    projective_part: PauliMonomial
    projective_order: int
    transform: BitMatrix


def make_monomial(k: int, columns, M=None, Gamma=None) -> PauliMonomial:
    """Build a monomial from columns given as bitstrings or bit sequences."""
    cols = [BitVector.from_string(c) if isinstance(c, str) else BitVector(c) for c in columns]
    m = len(cols)
    V = BitMatrix.from_columns(cols, rows=k)
    M = BitMatrix.zeros(m, m) if M is None else f2core.as_bitmatrix(M)
    Gamma = BitVector.zeros(m) if Gamma is None else (Gamma if isinstance(Gamma, BitVector) else BitVector(Gamma))
    return PauliMonomial(k, V, M, Gamma)


def identity_monomial(k: int) -> PauliMonomial:
    return PauliMonomial(k, BitMatrix.zeros(k, 0), BitMatrix.zeros(0, 0), BitVector.zeros(0))


def primitive(k: int) -> PauliMonomial:
    """Omega_k = (1/d) sum_P P^{(x) k}."""
    if k < 2 or k % 2:
        raise InputError(f"primitive(k) needs an even k >= 2, got {k}")
    return make_monomial(k, ["1" * k])


def omega_4444() -> PauliMonomial:
    return make_monomial(8, ["11110000", "00111100", "00110011", "10101010"])


def validate(w: PauliMonomial) -> List[str]:
    errors: List[str] = []
    k, m = w.k, w.m
    if k < 1:
        errors.append(f"k must be positive, got {k}")
    if w.V.rows != k:
        errors.append(f"V has {w.V.rows} rows, expected k={k}")
    if m > k:
        errors.append(f"order m={m} exceeds k={k}")
    if w.M.shape != (m, m):
        errors.append(f"M has shape {w.M.shape}, expected ({m}, {m})")
    if len(w.Gamma) != m:
        errors.append(f"Gamma has length {len(w.Gamma)}, expected {m}")
    for j, column in enumerate(w.V.columns()):
        if column.weight % 2:
            errors.append(f"column {j} ({column.to_string()}) has odd weight")
    if m and f2core.rank(w.V) < m:
        errors.append(f"V is rank deficient (rank {f2core.rank(w.V)} < m={m})")
    if w.M.shape == (m, m):
        entries = w.M.entries
        if not np.array_equal(entries, entries.T):
            errors.append("M is not symmetric")
        if np.any(np.diag(entries)):
            errors.append("M has a nonzero diagonal")
    return errors


def ensure_valid(w: PauliMonomial) -> PauliMonomial:
    errors = validate(w)
    if errors:
        raise InputError("Invalid monomial: " + "; ".join(errors))
    return w


def _lambda_entries(w: PauliMonomial) -> np.ndarray:
    V = w.V.entries.astype(np.int64)
    weights = V.sum(axis=0) // 2
    H = (V.T @ V) % 2
    lam = w.M.entries.astype(np.int64) + np.triu(H, 1)
    lam[np.diag_indices(w.m)] += weights + w.Gamma.bits
    return lam % 2


def lambda_matrix(w: PauliMonomial) -> BitMatrix:
    ensure_valid(w)
    return BitMatrix(_lambda_entries(w), cols=w.m)


def _from_lambda(k: int, V: np.ndarray, lam: np.ndarray) -> PauliMonomial:
    """Monomial whose Lambda matrix is `lam` for the given V."""
    m = lam.shape[0]
    lower = np.tril(lam, -1)
    M = (lower + lower.T) % 2
    Gamma = (np.diag(lam) - V.sum(axis=0) // 2) % 2
    return PauliMonomial(k, BitMatrix(V % 2, cols=m), BitMatrix(M, cols=m), BitVector(Gamma))


def substitute(w: PauliMonomial, a: BitMatrix) -> PauliMonomial:
    """Omega(V, M, Gamma) rewritten with V -> VA; Lambda -> A^T Lambda A."""
    ensure_valid(w)
    a = f2core.as_bitmatrix(a)
    if a.shape != (w.m, w.m):
        raise InputError(f"Substitution matrix must be {w.m}x{w.m}, got {a.rows}x{a.cols}")
    if w.m and f2core.det(a) == 0:
        raise InputError("Substitution matrix is singular over GF(2)")
    A = a.entries.astype(np.int64)
    lam = (A.T @ _lambda_entries(w) @ A) % 2
    V = (w.V.entries.astype(np.int64) @ A) % 2
    return _from_lambda(w.k, V, lam)


def is_unitary(w: PauliMonomial) -> bool:
    return f2core.det(lambda_matrix(w)) == 1


def projective_order(w: PauliMonomial) -> int:
    return w.m - f2core.rank(lambda_matrix(w))


def partial_transpose(w: PauliMonomial, t: BitVector) -> PauliMonomial:
    """Transpose on every copy alpha with t_alpha = 1."""
    ensure_valid(w)
    t = t if isinstance(t, BitVector) else BitVector(t)
    if len(t) != w.k:
        raise InputError(f"Transpose vector has length {len(t)}, expected k={w.k}")
    M = w.M.entries.astype(np.int64).copy()
    Gamma = w.Gamma.bits.astype(np.int64).copy()
    for alpha in np.flatnonzero(t.bits):
        row = w.V.entries[alpha].astype(np.int64)
        M += np.outer(row, row)
        Gamma += row
    M %= 2
    M[np.diag_indices(w.m)] = 0
    return PauliMonomial(w.k, w.V, BitMatrix(M, cols=w.m), BitVector(Gamma % 2))


def find_unitarizing_transpose(w: PauliMonomial) -> BitVector:
    """Partial transpose, supported on pivot copies of V, that makes w unitary."""
    ensure_valid(w)
    _, pivots = f2core.rref(w.V.T)
    for g in range(1 << len(pivots)):
        bits = np.zeros(w.k, dtype=np.uint8)
        for j, copy in enumerate(pivots):
            bits[copy] = (g >> (len(pivots) - 1 - j)) & 1
        t = BitVector(bits)
        if is_unitary(partial_transpose(w, t)):
            return t
    logger.error(f"No unitarizing transpose found for {w}")
    raise MonomialDefectError(f"No unitarizing transpose exists on the pivot copies of {w}")


def _check_copies(k: int) -> None:
    if k > settings.MAX_MONOMIAL_COPIES:
        raise ResourceCapError(
            f"Dense factor on k={k} copies exceeds the cap of {settings.MAX_MONOMIAL_COPIES} "
            f"(a 2^{k} x 2^{k} matrix)"
        )


@lru_cache(maxsize=8192)
def pauli_coefficients(w: PauliMonomial) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Expansion of omega in k-copy Pauli words X^a Z^b.

    Returns (a, b, coefficient) arrays over the 4^m Pauli tuples; a and b are
    k-bit integers with copy 1 as the most significant bit. Distinct tuples
    give distinct words since V has independent columns.
    """
    ensure_valid(w)
    k, m = w.k, w.m
    count = 1 << (2 * m)
    tuples = np.arange(count, dtype=np.int64)
    shifts = 2 * np.arange(m - 1, -1, -1, dtype=np.int64)
    digits = (tuples[:, None] >> shifts[None, :]) & 3
    X = _DIGITS[digits, 0]
    Z = _DIGITS[digits, 1]

    V = w.V.entries.astype(np.int64)
    weights = V.sum(axis=0)
    H_upper = np.triu(V.T @ V, 1)
    M_upper = np.triu(w.M.entries.astype(np.int64), 1)
    XZ = X * Z

    # Y = iXZ per factor, reordering Z_i past X_j within each copy
    phase = (XZ @ weights + 2 * np.sum((Z @ H_upper) * X, axis=1)) % 4
    sign = (np.sum((X @ M_upper) * Z, axis=1) + np.sum((Z @ M_upper) * X, axis=1) + XZ @ w.Gamma.bits.astype(np.int64)) % 2
    # phase is even because every column has even weight
    coeffs = (1 - 2 * ((phase // 2 + sign) % 2)).astype(np.float64) / float(1 << m)

    place = 1 << np.arange(k - 1, -1, -1, dtype=np.int64)
    a = ((X @ V.T) % 2) @ place
    b = ((Z @ V.T) % 2) @ place
    for arr in (a, b, coeffs):
        arr.setflags(write=False)
    return a, b, coeffs


def dense_from_coefficients(k: int, a: np.ndarray, b: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Sum of coeff * X^a Z^b on k qubits: entry [col ^ a, col] gets (-1)^{b.col}."""
    dim = 1 << k
    cols = np.arange(dim, dtype=np.int64)
    flat = np.zeros(dim * dim, dtype=np.float64)
    step = max(1, _DENSE_CHUNK // dim)
    for start in range(0, a.size, step):
        sa, sb, sc = a[start:start + step], b[start:start + step], coeffs[start:start + step]
        rows = cols[None, :] ^ sa[:, None]
        weights = sc[:, None] * (1 - 2 * parity(sb[:, None] & cols[None, :]))
        flat += np.bincount((rows * dim + cols[None, :]).ravel(), weights=weights.ravel(), minlength=dim * dim)
    return flat.reshape(dim, dim).astype(np.complex128)


@lru_cache(maxsize=1024)
def _single_qubit_factor(w: PauliMonomial) -> np.ndarray:
    a, b, coeffs = pauli_coefficients(w)
    dense = dense_from_coefficients(w.k, a, b, coeffs)
    dense.setflags(write=False)
    return dense


def single_qubit_factor(w: PauliMonomial) -> np.ndarray:
    """omega as a 2^k x 2^k matrix; Omega on n qubits is omega^{(x) n}."""
    _check_copies(w.k)
    ensure_valid(w)
    return _single_qubit_factor(w)


def partial_transpose_dense(mat: np.ndarray, k: int, t: BitVector) -> np.ndarray:
    """Entrywise partial transpose of a k-copy single-qubit operator."""
    tensor = np.asarray(mat).reshape((2,) * (2 * k))
    axes = list(range(2 * k))
    for alpha in np.flatnonzero(np.asarray(list(t))):
        axes[alpha], axes[k + alpha] = axes[k + alpha], axes[alpha]
    return tensor.transpose(axes).reshape(1 << k, 1 << k)


def monomials_equal(w1: PauliMonomial, w2: PauliMonomial) -> bool:
    if w1.k != w2.k:
        return False
    diff = single_qubit_factor(w1) - single_qubit_factor(w2)
    return bool(np.max(np.abs(diff)) < settings.MONOMIAL_EQ_TOL)


def trace_norm(w: PauliMonomial, n: int) -> float:
    """||Omega||_1 on n qubits: d^{k - projective_order}, d = 2^n."""
    if n < 1:
        raise InputError(f"trace_norm needs n >= 1, got {n}")
    return float(2.0 ** (n * (w.k - projective_order(w))))


def _split(w: PauliMonomial, r: int) -> Tuple[PauliMonomial, PauliMonomial]:
    V, M, G = w.V.entries, w.M.entries, w.Gamma.bits
    projective = PauliMonomial(w.k, BitMatrix(V[:, :r], cols=r), BitMatrix(M[:r, :r], cols=r), BitVector(G[:r]))
    rest = w.m - r
    unitary = PauliMonomial(w.k, BitMatrix(V[:, r:], cols=rest), BitMatrix(M[r:, r:], cols=rest), BitVector(G[r:]))
    return projective, unitary


def _complement_candidates(K: np.ndarray, C0: np.ndarray):
    """Complements C0 + K Y of span(K); exhaustive when small, seeded sampling otherwise."""
    r, u = K.shape[1], C0.shape[1]
    free = r * u
    if free <= _EXHAUSTIVE_SEARCH_BITS:
        for code in range(1 << free):
            Y = np.array([(code >> i) & 1 for i in range(free)], dtype=np.int64).reshape(r, u)
            yield (C0 + K @ Y) % 2
    else:
        rng = np.random.default_rng(settings.VERIFY_SEED)
        yield C0
        for _ in range(_RANDOM_SEARCH_TRIES):
            Y = rng.integers(0, 2, size=(r, u))
            yield (C0 + K @ Y) % 2


def normal_form(w: PauliMonomial) -> NormalForm:
    """Split w as Omega_P Omega_U: Omega_P projective (Lambda = 0), Omega_U unitary."""
    ensure_valid(w)
    lam = lambda_matrix(w)
    m = w.m
    K = f2core.kernel_basis(lam).entries.astype(np.int64)
    r = K.shape[1]
    if r == 0:
        return NormalForm(w, identity_monomial(w.k), 0, BitMatrix.identity(m))
    if r == m:
        return NormalForm(identity_monomial(w.k), w, m, BitMatrix.identity(m))

    _, pivots = f2core.rref(BitMatrix(K.T))
    free = [c for c in range(m) if c not in pivots]
    C0 = np.zeros((m, len(free)), dtype=np.int64)
    for j, c in enumerate(free):
        C0[c, j] = 1

    L = lam.entries.astype(np.int64)
    for C in _complement_candidates(K, C0):
        if f2core.det(BitMatrix((C.T @ L @ C) % 2)) == 1:
            A = BitMatrix(np.concatenate([K, C], axis=1))
            projective, unitary = _split(substitute(w, A), r)
            return NormalForm(unitary, projective, r, A)

    logger.error(f"Normal form search failed for {w}")
    raise MonomialDefectError(f"No unitary complement found for the kernel of Lambda in {w}")


def is_copy_permutation(w: PauliMonomial) -> bool:
    """True when omega permutes the copies (then P_Omega is identically 1)."""
    from magiclab.services.moments import copy_permutation_operator

    omega = single_qubit_factor(w)
    k = w.k
    perm = []
    for alpha in range(k):
        column = omega[:, 1 << (k - 1 - alpha)]
        target = int(np.argmax(np.abs(column)))
        if abs(column[target] - 1.0) > settings.MONOMIAL_EQ_TOL or bin(target).count("1") != 1:
            return False
        perm.append(k - 1 - (target.bit_length() - 1))
    if sorted(perm) != list(range(k)):
        return False
    candidate = copy_permutation_operator(perm, k, 2)
    return bool(np.max(np.abs(omega - candidate)) < settings.MONOMIAL_EQ_TOL)


def random_gl_substitutions(w: PauliMonomial, count: int, seed: int) -> List[PauliMonomial]:
    """`count` random GL(m) rewritings of w; all represent the same operator."""
    rng = np.random.default_rng(seed)
    if w.m == 0:
        return [w] * count
    return [substitute(w, f2core.random_invertible(w.m, rng)) for _ in range(count)]
