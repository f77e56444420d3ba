"""
Stabilizer purities P_{2 alpha} and stabilizer Renyi entropies M_alpha (in bits).
"""

from typing import Dict, List, Sequence, Tuple

import numpy as np

from magiclab.core.config import settings
from magiclab.core.errors import InputError
from magiclab.core.logging import get_logger
from magiclab.schemas.reports import EntropyResponse, PurityReport
from magiclab.schemas.state import StateKind, StateSpec
from magiclab.services.genpurity import generalized_purity
from magiclab.services.monomial import primitive
from magiclab.services.pauli import pauli_spectrum
from magiclab.services.states import StateVec, make_state

logger = get_logger(__name__)


def _check_alpha(alpha: int) -> None:
    if int(alpha) != alpha or alpha < 2:
        raise InputError(f"alpha must be an integer >= 2, got {alpha}")


def purities_from_spectrum(spectrum: np.ndarray, alphas: Sequence[int]) -> Dict[int, float]:
    dim = spectrum.shape[0]
    squares = spectrum.ravel() ** 2
    return {int(alpha): float(np.sum(squares ** alpha) / dim) for alpha in alphas}


def stabilizer_purities(psi: StateVec, alphas: Sequence[int]) -> Dict[int, float]:
    """P_{2 alpha}(psi) = (1/d) sum_P <psi|P|psi>^{2 alpha} for every alpha, one spectrum pass."""
    for alpha in alphas:
        _check_alpha(alpha)
    return purities_from_spectrum(pauli_spectrum(psi), alphas)


def stabilizer_purity(psi: StateVec, alpha: int) -> float:
    return stabilizer_purities(psi, [alpha])[alpha]


def entropy_from_purity(purity: float, alpha: int) -> float:
    if abs(1.0 - purity) < settings.STABILIZER_TOL:
        return 0.0
    return float(-np.log2(purity) / (alpha - 1))


def stabilizer_entropy(psi: StateVec, alpha: int) -> float:
    return entropy_from_purity(stabilizer_purity(psi, alpha), alpha)


def purity_report(psi: StateVec, alphas: Sequence[int]) -> List[PurityReport]:
    values = stabilizer_purities(psi, alphas)
    return [
        PurityReport(alpha=alpha, purity=purity, entropy=entropy_from_purity(purity, alpha))
        for alpha, purity in values.items()
    ]


def entropy_response(psi: StateVec, spec: StateSpec, alphas: Sequence[int]) -> EntropyResponse:
    results = {str(r.alpha): r for r in purity_report(psi, alphas)}
    return EntropyResponse(state=spec.descriptor, seed=spec.seed, results=results)


def is_stabilizer_state(psi: StateVec) -> bool:
    return abs(1.0 - stabilizer_purity(psi, 2)) < settings.STABILIZER_TOL


def purity_via_omega(psi: StateVec, alpha: int) -> float:
    """P_{2 alpha} as <psi^{2 alpha}| Omega_{2 alpha} |psi^{2 alpha}>."""
    _check_alpha(alpha)
    return generalized_purity(psi, primitive(2 * alpha))


def hierarchy_slack(psi: StateVec, alpha: int) -> Tuple[float, float]:
    """Slacks of P_{2a}^{a/(a-1)} <= P_{2(a+1)} <= P_{2a}; both are >= 0 when the chain holds."""
    _check_alpha(alpha)
    values = stabilizer_purities(psi, [alpha, alpha + 1])
    low, high = values[alpha], values[alpha + 1]
    return high - low ** (alpha / (alpha - 1)), low - high


def distillation_rate_bound(psi: StateVec, alpha: int) -> float:
    """M_alpha(psi) / M_alpha(T): upper bound on T states distilled per copy of psi."""
    reference = stabilizer_entropy(make_state(StateKind.T_POWER, 1), alpha)
    value = stabilizer_entropy(psi, alpha)
    logger.debug(f"Distillation bound alpha={alpha}: M(psi)={value:.6f}, M(T)={reference:.6f}")
    return value / reference
