"""
Exact linear algebra over GF(2).

Matrices are stored as read-only numpy uint8 arrays. The elimination kernel
packs each row into a Python int (bit j of the row word holds column
``cols-1-j``), so a row operation is a single XOR whatever the width.
Gauss-Jordan elimination (`_eliminate`) is the one primitive behind rank,
kernel, determinant and inverse.
"""

from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from magiclab.core.errors import InputError

ArrayLike = Union["BitMatrix", np.ndarray, Sequence[Sequence[int]]]


class BitVector:
    """Immutable vector over GF(2)."""

    __slots__ = ("_bits",)

    def __init__(self, bits: Union[Iterable[int], np.ndarray]):
        arr = np.array(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.int64)
        if arr.ndim != 1:
            raise InputError(f"BitVector expects a 1-d sequence, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() > 1):
            raise InputError("BitVector entries must be 0 or 1")
        arr = arr.astype(np.uint8)
        arr.setflags(write=False)
        self._bits = arr

    @classmethod
    def zeros(cls, length: int) -> "BitVector":
        return cls(np.zeros(length, dtype=np.uint8))

    @classmethod
    def from_string(cls, text: str) -> "BitVector":
        if any(ch not in "01" for ch in text):
            raise InputError(f"Invalid bitstring: {text!r}")
        return cls([int(ch) for ch in text])

    @classmethod
    def from_int(cls, value: int, length: int) -> "BitVector":
        return cls([(value >> (length - 1 - i)) & 1 for i in range(length)])

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @property
    def weight(self) -> int:
        return int(self._bits.sum())

    def to_string(self) -> str:
        return "".join(str(int(b)) for b in self._bits)

    def to_int(self) -> int:
        value = 0
        for b in self._bits:
            value = (value << 1) | int(b)
        return value

    def __len__(self) -> int:
        return int(self._bits.size)

    def __getitem__(self, index):
        return int(self._bits[index])

    def __iter__(self):
        return (int(b) for b in self._bits)

    def __add__(self, other: "BitVector") -> "BitVector":
        if len(self) != len(other):
            raise InputError(f"Length mismatch: {len(self)} vs {len(other)}")
        return BitVector(self._bits ^ other.bits)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return np.array_equal(self._bits, other.bits)

    def __hash__(self) -> int:
        return hash((len(self), self._bits.tobytes()))

    def __repr__(self) -> str:
        return f"BitVector('{self.to_string()}')"


class BitMatrix:
    """Immutable row-major matrix over GF(2). Zero-width matrices are allowed."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Union[np.ndarray, Sequence[Sequence[int]]], cols: int = None):
        arr = np.array(entries, dtype=np.int64)
        if arr.size == 0:
            rows = arr.shape[0] if arr.ndim >= 1 else 0
            arr = np.zeros((rows, cols or 0), dtype=np.int64)
        if arr.ndim != 2:
            raise InputError(f"BitMatrix expects a 2-d array, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() > 1):
            raise InputError("BitMatrix entries must be 0 or 1")
        arr = arr.astype(np.uint8)
        arr.setflags(write=False)
        self._entries = arr

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, size: int) -> "BitMatrix":
        return cls(np.eye(size, dtype=np.uint8))

    @classmethod
    def from_columns(cls, columns: Sequence[BitVector], rows: int = None) -> "BitMatrix":
        if not columns:
            return cls.zeros(rows or 0, 0)
        return cls(np.stack([c.bits for c in columns], axis=1))

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def rows(self) -> int:
        return int(self._entries.shape[0])

    @property
    def cols(self) -> int:
        return int(self._entries.shape[1])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def T(self) -> "BitMatrix":
        return BitMatrix(self._entries.T)

    def column(self, j: int) -> BitVector:
        return BitVector(self._entries[:, j])

    def row(self, i: int) -> BitVector:
        return BitVector(self._entries[i, :])

    def columns(self) -> List[BitVector]:
        return [self.column(j) for j in range(self.cols)]

    def packed_rows(self) -> List[int]:
        return _pack(self._entries)

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        return matmul(self, other)

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if self.shape != other.shape:
            raise InputError(f"Shape mismatch: {self.shape} vs {other.shape}")
        return BitMatrix(self._entries ^ other.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self._entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.shape, self._entries.tobytes()))

    def __repr__(self) -> str:
        body = ",".join("".join(str(int(b)) for b in row) for row in self._entries)
        return f"BitMatrix({self.rows}x{self.cols}: {body})"


def as_bitmatrix(mat: ArrayLike) -> BitMatrix:
    return mat if isinstance(mat, BitMatrix) else BitMatrix(mat)


def _pack(entries: np.ndarray) -> List[int]:
    rows: List[int] = []
    for row in entries:
        word = 0
        for b in row:
            word = (word << 1) | int(b)
        rows.append(word)
    return rows


def _unpack(words: Sequence[int], cols: int) -> np.ndarray:
    out = np.zeros((len(words), cols), dtype=np.uint8)
    for i, word in enumerate(words):
        for j in range(cols):
            out[i, j] = (word >> (cols - 1 - j)) & 1
    return out


def _eliminate(words: Sequence[int], cols: int, pivot_cols: int = None) -> Tuple[List[int], List[int]]:
    """Gauss-Jordan elimination on packed rows.

    Returns the reduced row echelon form (zero rows last) and the pivot columns.
    Pivots are only searched in the first ``pivot_cols`` columns; row
    operations still act on the full width.
    """
    rows = list(words)
    limit = cols if pivot_cols is None else pivot_cols
    pivots: List[int] = []
    r = 0
    for c in range(limit):
        if r == len(rows):
            break
        mask = 1 << (cols - 1 - c)
        found = next((i for i in range(r, len(rows)) if rows[i] & mask), None)
        if found is None:
            continue
        rows[r], rows[found] = rows[found], rows[r]
        pivot_word = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & mask:
                rows[i] ^= pivot_word
        pivots.append(c)
        r += 1
    return rows, pivots


def rref(mat: ArrayLike) -> Tuple[BitMatrix, List[int]]:
    mat = as_bitmatrix(mat)
    words, pivots = _eliminate(mat.packed_rows(), mat.cols)
    return BitMatrix(_unpack(words, mat.cols), cols=mat.cols), pivots


def rank(mat: ArrayLike) -> int:
    mat = as_bitmatrix(mat)
    _, pivots = _eliminate(mat.packed_rows(), mat.cols)
    return len(pivots)


def kernel_basis(mat: ArrayLike) -> BitMatrix:
    """Columns spanning the right kernel {v : mat @ v = 0}."""
    mat = as_bitmatrix(mat)
    cols = mat.cols
    words, pivots = _eliminate(mat.packed_rows(), cols)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.uint8)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, p in enumerate(pivots):
            basis[p, j] = (words[i] >> (cols - 1 - f)) & 1
    return BitMatrix(basis, cols=len(free))


def det(mat: ArrayLike) -> int:
    mat = as_bitmatrix(mat)
    if mat.rows != mat.cols:
        raise InputError(f"Determinant needs a square matrix, got {mat.rows}x{mat.cols}")
    return int(rank(mat) == mat.rows)


def inverse(mat: ArrayLike) -> BitMatrix:
    mat = as_bitmatrix(mat)
    size = mat.rows
    if size != mat.cols:
        raise InputError(f"Inverse needs a square matrix, got {mat.rows}x{mat.cols}")
    augmented = [(word << size) | (1 << (size - 1 - i)) for i, word in enumerate(mat.packed_rows())]
    words, pivots = _eliminate(augmented, 2 * size, pivot_cols=size)
    if len(pivots) != size:
        raise InputError("Matrix is singular over GF(2)")
    low = (1 << size) - 1
    return BitMatrix(_unpack([w & low for w in words], size), cols=size)


def matmul(a: ArrayLike, b: ArrayLike) -> BitMatrix:
    a, b = as_bitmatrix(a), as_bitmatrix(b)
    if a.cols != b.rows:
        raise InputError(f"Shape mismatch for product: {a.shape} @ {b.shape}")
    product = (a.entries.astype(np.int64) @ b.entries.astype(np.int64)) % 2
    return BitMatrix(product, cols=b.cols)


def random_invertible(m: int, seed: Union[int, np.random.Generator]) -> BitMatrix:
    """Uniform element of GL(m, F2) by rejection sampling."""
    if m < 1:
        raise InputError(f"random_invertible needs m >= 1, got {m}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    while True:
        candidate = BitMatrix(rng.integers(0, 2, size=(m, m)))
        if det(candidate) == 1:
            return candidate


def popcount(values: np.ndarray) -> np.ndarray:
    """Vectorized population count of non-negative integers below 2**64."""
    v = np.asarray(values).astype(np.uint64)
    v = v - ((v >> np.uint64(1)) & np.uint64(0x5555555555555555))
    v = (v & np.uint64(0x3333333333333333)) + ((v >> np.uint64(2)) & np.uint64(0x3333333333333333))
    v = (v + (v >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    v = (v * np.uint64(0x0101010101010101)) >> np.uint64(56)
    return v.astype(np.int64)


def parity(values: np.ndarray) -> np.ndarray:
    return popcount(values) & 1
