"""
Generalized stabilizer purities P_Omega(psi) = |<psi^k| Omega |psi^k>|.

psi^{(x) k} is reshuffled once into qubit-major order, so the k copies of
each physical qubit form one axis of size 2^k. Omega = omega^{(x) n} then
acts as the single-qubit factor omega on every axis in turn.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence

import numpy as np

from magiclab.core.config import settings
from magiclab.core.errors import InputError, ResourceCapError
from magiclab.core.limits import check_amplitudes
from magiclab.core.logging import get_logger
from magiclab.schemas.reports import DominanceEntry, DominanceReport, GenPurityReport
from magiclab.services.f2core import BitVector
from magiclab.services.monomial import (
    PauliMonomial,
    find_unitarizing_transpose,
    is_copy_permutation,
    is_unitary,
    partial_transpose,
    partial_transpose_dense,
    projective_order,
    single_qubit_factor,
)
from magiclab.services.states import StateVec

logger = get_logger(__name__)


class CopyStack:
    """psi^{(x) k} as a tensor with one axis of size 2^k per physical qubit."""

    __slots__ = ("n", "k", "tensor")

    def __init__(self, psi: StateVec, k: int):
        if k < 1:
            raise InputError(f"A copy stack needs k >= 1, got {k}")
        n = psi.n
        check_amplitudes(n * k, f"copy stack (n={n}, k={k})")
        amps = psi.amps
        for _ in range(k - 1):
            amps = np.multiply.outer(amps, psi.amps).reshape(-1)
        order = [c * n + q for q in range(n) for c in range(k)]
        tensor = amps.reshape((2,) * (n * k)).transpose(order).reshape((1 << k,) * n)
        tensor.setflags(write=False)
        self.n = n
        self.k = k
        self.tensor = tensor

    @property
    def amps(self) -> np.ndarray:
        return self.tensor.reshape(-1)

    def apply(self, omega: np.ndarray) -> np.ndarray:
        """(omega^{(x) n}) applied to the stack, same qubit-major layout."""
        out = self.tensor
        for q in range(self.n):
            out = np.moveaxis(np.tensordot(omega, out, axes=([1], [q])), 0, q)
        return out

    def expectation(self, omega: np.ndarray) -> complex:
        return complex(np.vdot(self.tensor, self.apply(omega)))


class PurityEvaluator:
    """Evaluates many monomials on one state, reusing copy stacks per k."""

    def __init__(self, psi: StateVec):
        self.psi = psi
        self.stacks: Dict[int, CopyStack] = {}

    def stack(self, k: int) -> CopyStack:
        if k not in self.stacks:
            self.stacks[k] = CopyStack(self.psi, k)
        return self.stacks[k]

    def expectation(self, w: PauliMonomial) -> complex:
        return self.stack(w.k).expectation(single_qubit_factor(w))

    def purity(self, w: PauliMonomial) -> float:
        return abs(self.expectation(w))


def generalized_expectation(psi: StateVec, w: PauliMonomial) -> complex:
    """<psi^k| Omega |psi^k> before taking the modulus."""
    return PurityEvaluator(psi).expectation(w)


def generalized_purity(psi: StateVec, w: PauliMonomial) -> float:
    return abs(generalized_expectation(psi, w))


def genpurity_report(psi: StateVec, w: PauliMonomial) -> GenPurityReport:
    value = generalized_expectation(psi, w)
    return GenPurityReport(
        value=abs(value),
        complex_value=[value.real, value.imag],
        is_unitary=is_unitary(w),
        projective_order=projective_order(w),
    )


def check_p4_dominance(
    psi: StateVec,
    monomials: Iterable[PauliMonomial],
    p4: Optional[float] = None,
    keep_entries: bool = False,
) -> DominanceReport:
    """Record P_Omega(psi) - P_4(psi) per monomial; copy permutations are skipped."""
    if p4 is None:
        from magiclab.services.sre import stabilizer_purity

        p4 = stabilizer_purity(psi, 2)
    evaluator = PurityEvaluator(psi)
    entries, violations = [], []
    checked = skipped = 0
    max_difference = -np.inf
    for index, w in enumerate(monomials):
        if is_copy_permutation(w):
            skipped += 1
            if keep_entries:
                entries.append(DominanceEntry(index=index, value=1.0, difference=1.0 - p4, skipped=True))
            continue
        value = evaluator.purity(w)
        difference = value - p4
        checked += 1
        max_difference = max(max_difference, difference)
        entry = DominanceEntry(
            index=index,
            value=value,
            difference=difference,
            violation=difference > settings.DOMINANCE_TOL,
        )
        if entry.violation:
            logger.warning(f"P4 dominance violated by monomial {index}: {w} (difference {difference:.3e})")
            violations.append(entry)
        if keep_entries:
            entries.append(entry)
    return DominanceReport(
        p4=p4,
        checked=checked,
        skipped=skipped,
        max_difference=float(max_difference) if checked else 0.0,
        violations=violations,
        entries=entries,
    )


@dataclass(frozen=True)
class PovmPair:
    transpose: BitVector
    pi_r: np.ndarray
    pi_i: np.ndarray


def measurement_povm_pair(w: PauliMonomial) -> PovmPair:
    """Two-outcome POVM elements on one qubit built from Omega^{(t_u)}."""
    if w.k > settings.MAX_POVM_COPIES:
        raise ResourceCapError(f"POVM pair on k={w.k} copies exceeds the cap of {settings.MAX_POVM_COPIES}")
    t_u = find_unitarizing_transpose(w)
    unitary = single_qubit_factor(partial_transpose(w, t_u))
    eye = np.eye(unitary.shape[0], dtype=np.complex128)
    adjoint = unitary.conj().T
    pi_r = (2 * eye + unitary + adjoint) / 4
    pi_i = (2 * eye - 1j * unitary + 1j * adjoint) / 4
    return PovmPair(t_u, pi_r, pi_i)


def povm_reconstruction(psi: StateVec, w: PauliMonomial, pair: Optional[PovmPair] = None) -> complex:
    """2 tr(Pi_r rho~) + 2i tr(Pi_i rho~) - (1 + i), rho~ the transposed copy stack; n = 1."""
    if psi.n != 1:
        raise InputError(f"POVM reconstruction is defined on one qubit, got n={psi.n}")
    pair = pair or measurement_povm_pair(w)
    stack = CopyStack(psi, w.k).amps
    rho = np.outer(stack, stack.conj())
    rho_t = partial_transpose_dense(rho, w.k, pair.transpose)
    tr_r = np.trace(pair.pi_r @ rho_t)
    tr_i = np.trace(pair.pi_i @ rho_t)
    return complex(2 * tr_r + 2j * tr_i - (1 + 1j))


def purities(psi: StateVec, monomials: Sequence[PauliMonomial]) -> np.ndarray:
    evaluator = PurityEvaluator(psi)
    return np.array([evaluator.purity(w) for w in monomials])
