"""
Property-testing quantities: Clifford-orbit design error against Haar,
stabilizer-testing success probabilities and their bounds, Helstrom
discrimination and shot-level simulation of the Omega_6 test.
"""

import math
from enum import Enum
from functools import lru_cache
from typing import Optional, Tuple, Union

import numpy as np

from magiclab.core.config import settings
from magiclab.core.errors import InputError, ResourceCapError
from magiclab.core.logging import get_logger
from magiclab.schemas.reports import (
    DesignBounds,
    DesignCondition,
    PovmSimulation,
    PropertyTestReport,
    TestMethod,
    TestReport,
)
from magiclab.schemas.state import StateKind
from magiclab.services.commutant import twirl_pure_state
from magiclab.services.genpurity import PurityEvaluator
from magiclab.services.moments import MomentOp, check_moment_size, haar_moment, trace_norm
from magiclab.services.monomial import primitive, single_qubit_factor
from magiclab.services.sre import entropy_from_purity, stabilizer_purities
from magiclab.services.states import (
    StateVec,
    apply_clifford,
    clifford_unitary,
    enumerate_clifford,
    make_state,
    random_clifford,
)

logger = get_logger(__name__)

# orbit states folded into one outer-product update
_ORBIT_BATCH = 512
# random stabilizer states drawn for the stabilizer arm of the POVM simulation
_STABILIZER_POOL = 16


class OrbitMode(str, Enum):
    ENUMERATE = "enumerate"
    SAMPLE = "sample"
    WEINGARTEN = "weingarten"


def _matrix(rho: Union[MomentOp, np.ndarray]) -> np.ndarray:
    return rho.matrix if isinstance(rho, MomentOp) else np.asarray(rho)


def helstrom(rho0: Union[MomentOp, np.ndarray], rho1: Union[MomentOp, np.ndarray]) -> float:
    """Optimal symmetric discrimination probability 1/2 + ||rho0 - rho1||_1 / 4."""
    a, b = _matrix(rho0), _matrix(rho1)
    if a.shape != b.shape:
        raise InputError(f"Cannot discriminate operators of shapes {a.shape} and {b.shape}")
    for name, rho in (("rho0", a), ("rho1", b)):
        if abs(np.trace(rho) - 1.0) > 1e-8:
            raise InputError(f"{name} does not have unit trace (trace {np.trace(rho).real:.6f})")
    return 0.5 + 0.25 * trace_norm(a - b)


@lru_cache(maxsize=4)
def group_unitaries(n: int) -> np.ndarray:
    """Dense unitaries of every n-qubit Clifford modulo phase, stacked."""
    unitaries = np.array([clifford_unitary(c) for c in enumerate_clifford(n)])
    unitaries.setflags(write=False)
    return unitaries


def _tensor_powers(states: np.ndarray, k: int) -> np.ndarray:
    """Row-wise k-th tensor powers of a stack of state vectors."""
    out = states
    for _ in range(k - 1):
        out = (out[:, :, None] * states[:, None, :]).reshape(states.shape[0], -1)
    return out


def _average_outer(states: np.ndarray, k: int) -> np.ndarray:
    """Mean of |v><v| over v = s^{(x) k} for the rows s of `states`."""
    dim = states.shape[1] ** k
    moment = np.zeros((dim, dim), dtype=np.complex128)
    for start in range(0, states.shape[0], _ORBIT_BATCH):
        powers = _tensor_powers(states[start:start + _ORBIT_BATCH], k)
        moment += powers.T @ powers.conj()
    return moment / states.shape[0]


def orbit_moment(
    psi: StateVec,
    k: int,
    mode: Union[OrbitMode, str] = OrbitMode.ENUMERATE,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> MomentOp:
    """Average of (C psi)(C psi)^dag^{(x) k} over the Clifford group."""
    n = psi.n
    check_moment_size(n, k, "orbit_moment")
    mode = OrbitMode(mode)
    if mode == OrbitMode.WEINGARTEN:
        return twirl_pure_state(psi, k)

    if mode == OrbitMode.ENUMERATE:
        unitaries = group_unitaries(n)
        moment = _average_outer(unitaries @ psi.amps, k)
        return MomentOp(n, k, moment, label="enumerate", metadata={"group_size": unitaries.shape[0]})

    if not samples or samples < 1:
        raise InputError("Sampled orbit moments need samples >= 1")
    rng = np.random.default_rng(seed)
    states = np.array([apply_clifford(random_clifford(n, rng), psi).amps for _ in range(samples)])
    moment = _average_outer(states, k)
    return MomentOp(n, k, moment, label="sample", metadata={"samples": samples, "seed": seed})


def stabilizer_moment(n: int, k: int) -> MomentOp:
    """Uniform average of sigma^{(x) k} over stabilizer states: the orbit of |0...0>."""
    return orbit_moment(make_state(StateKind.BASIS0, n), k, OrbitMode.ENUMERATE)


def default_orbit_mode(n: int) -> OrbitMode:
    return OrbitMode.ENUMERATE if n <= settings.MAX_CLIFFORD_ENUMERATION_QUBITS else OrbitMode.WEINGARTEN


def design_error(psi: StateVec, k: int, mode: Optional[OrbitMode] = None) -> float:
    """Delta = 1/2 || orbit moment - Haar moment ||_1."""
    orbit = orbit_moment(psi, k, mode or default_orbit_mode(psi.n))
    haar = haar_moment(psi.n, k)
    return 0.5 * trace_norm(orbit.matrix - haar.matrix)


def _magic(psi: StateVec) -> Tuple[float, float, float, float]:
    values = stabilizer_purities(psi, [2, 3])
    p4, p6 = values[2], values[3]
    return p4, p6, entropy_from_purity(p4, 2), entropy_from_purity(p6, 3)


def design_bounds_from_purities(p4: float, p6: float, n: int, k: int) -> DesignBounds:
    d = float(1 << n)
    amplitude = 2.0 ** (k * k / 2)
    tail = 2.0 ** (2 * k * k) / d
    bounds = DesignBounds(
        delta_lower=p6 - 1.0 / d - 16.0 / d ** 2,
        delta_upper=amplitude * p4 + tail,
        q_lower=0.5 + 0.5 * p6 - 1.0 / d,
        q_upper=0.5 + 0.5 * amplitude * p4 + tail / 2,
    )
    if bounds.delta_lower <= 0:
        bounds.flags.append("delta_lower_non_binding")
    if bounds.delta_upper >= 1:
        bounds.flags.append("delta_upper_non_binding")
    if bounds.q_lower <= 0.5:
        bounds.flags.append("q_lower_non_binding")
    if bounds.q_upper >= 1:
        bounds.flags.append("q_upper_non_binding")
    return bounds


def design_error_bounds(psi: StateVec, k: int) -> DesignBounds:
    """Bounds on how far the Clifford orbit of psi is from a k-design.

    delta_lower is the trace-norm form 2^{-2 M_3} - 1/d - 16/d^2 and bounds
    ||orbit - Haar||_1 = 2 Delta from below. delta_upper bounds Delta through
    M_2. q_lower and q_upper bound the success probability of telling the
    orbit from Haar with k copies.
    """
    p4, p6, _, _ = _magic(psi)
    return design_bounds_from_purities(p4, p6, psi.n, k)


def design_condition(psi: StateVec, k: int, eps: float) -> DesignCondition:
    if not 0 < eps < 1:
        raise InputError(f"eps must lie in (0, 1), got {eps}")
    _, _, m2, m3 = _magic(psi)
    n = psi.n
    threshold = math.log2(1.0 / eps)
    return DesignCondition(
        k=k,
        eps=eps,
        m2=m2,
        m3=m3,
        is_approximate_design=m2 >= k * k / 2 + threshold,
        design_eps=2 * (eps + 2.0 ** (-(n - 2 * k * k))),
        is_far_from_design=m3 >= threshold,
        far_eps=2 * (eps - 2.0 ** (-(n - 1))),
    )


def success6_from_purity(p6: float) -> float:
    return 0.5 + 0.25 * (1.0 - p6)


def stab_test_success6(psi: StateVec) -> float:
    """Success probability 1/2 + (1 - 2^{-2 M_3}) / 4 of the six-copy Omega_6 test.

    This is the (I +/- Omega_6)/2 measurement, so it lower-bounds the six-copy
    Helstrom value; for |T> the two are 19/32 and 79/128.
    """
    return success6_from_purity(stabilizer_purities(psi, [3])[3])


def omega6_povm_success(rho0: Union[MomentOp, np.ndarray], rho1: Union[MomentOp, np.ndarray]) -> float:
    """Success of the (I +/- Omega_6)/2 measurement telling rho0 (outcome +) from rho1 on one qubit."""
    omega = single_qubit_factor(primitive(6))
    a, b = _matrix(rho0), _matrix(rho1)
    if a.shape != omega.shape or b.shape != omega.shape:
        raise InputError(f"Omega_6 POVM acts on {omega.shape[0]}-dimensional six-copy moments, got {a.shape} and {b.shape}")
    plus0 = (1 + np.trace(omega @ a).real) / 2
    plus1 = (1 + np.trace(omega @ b).real) / 2
    return float(0.5 * plus0 + 0.5 * (1 - plus1))


def success_bounds_from_purity(p6: float, k: int, C: float) -> Tuple[float, float]:
    if C <= 0:
        raise InputError(f"The testing constant C must be positive, got {C}")
    rounds = k // 6
    lower = 1.0 - 0.5 * ((1.0 + p6) / 2.0) ** rounds if rounds else 0.5
    upper = 0.5 + 0.5 * math.sqrt(max(0.0, 1.0 - p6 ** (k / C)))
    return lower, upper


def stab_test_success_bounds(psi: StateVec, k: int, C: Optional[float] = None) -> Tuple[float, float]:
    """Repeated Omega_6 test (lower) and the M_3-based limit for any k-copy test (upper)."""
    C = settings.TESTING_CONSTANT_C if C is None else C
    return success_bounds_from_purity(stabilizer_purities(psi, [3])[3], k, C)


def stab_test_summary(psi: StateVec, k: int = 6, C: Optional[float] = None, exact: bool = False) -> TestReport:
    """Success of the repeated Omega_6 test with its bounds; exact=True reports the n=1, k=6 Helstrom value, which is never below the formula."""
    lower, upper = stab_test_success_bounds(psi, k, C)
    if not exact:
        return TestReport(success_prob=lower, lower_bound=lower, upper_bound=upper, method=TestMethod.FORMULA)
    if psi.n != 1 or k != 6:
        raise InputError(f"The exact stabilizer test is computed for n=1, k=6, got n={psi.n}, k={k}")
    value = helstrom(stabilizer_moment(1, 6), orbit_moment(psi, 6, OrbitMode.ENUMERATE))
    return TestReport(success_prob=value, lower_bound=lower, upper_bound=upper, method=TestMethod.EXACT)


def fidelity_sandwich(psi: StateVec, C: Optional[float] = None) -> Tuple[float, float]:
    """Interval (P_6^C, P_6^{1/6}) containing the stabilizer fidelity of psi."""
    C = settings.TESTING_CONSTANT_C if C is None else C
    p6 = stabilizer_purities(psi, [3])[3]
    return p6 ** C, p6 ** (1.0 / 6.0)


def haar_p6(d: int) -> float:
    """Haar average of P_6 for dimension d."""
    return (d + 23) / ((d + 3) * (d + 5))


def simulate_povm_test(psi: StateVec, shots: int, seed: int) -> PovmSimulation:
    """Shots of the (I +/- Omega_6)/2 test, half on psi and half on random stabilizer states.

    Outcome + means "guess stabilizer".
    """
    if shots < 1:
        raise InputError(f"shots must be positive, got {shots}")
    omega6 = primitive(6)
    rng = np.random.default_rng(seed)
    zero = make_state(StateKind.BASIS0, psi.n)
    pool = [apply_clifford(random_clifford(psi.n, rng), zero) for _ in range(_STABILIZER_POOL)]
    stab_plus = np.array([(1 + PurityEvaluator(s).expectation(omega6).real) / 2 for s in pool])
    psi_plus = (1 + PurityEvaluator(psi).expectation(omega6).real) / 2

    arms = rng.integers(0, 2, size=shots)
    members = rng.integers(0, _STABILIZER_POOL, size=shots)
    p_plus = np.where(arms == 0, stab_plus[members], psi_plus)
    plus = rng.random(shots) < p_plus
    successes = int(np.sum((arms == 0) & plus) + np.sum((arms == 1) & ~plus))

    expected = success6_from_purity(2 * psi_plus - 1)
    rate = successes / shots
    sigma = math.sqrt(expected * (1 - expected) / shots)
    logger.info(f"POVM simulation: {shots} shots, rate {rate:.5f}, expected {expected:.5f}")
    return PovmSimulation(
        shots=shots,
        seed=seed,
        successes=successes,
        rate=rate,
        expected=expected,
        sigma=sigma,
        within_band=abs(rate - expected) <= 4 * sigma,
    )


def property_test_report(
    psi: StateVec,
    descriptor: str,
    task: str,
    k: int,
    C: Optional[float] = None,
    shots: Optional[int] = None,
    seed: int = 0,
    state_seed: Optional[int] = None,
) -> PropertyTestReport:
    C = settings.TESTING_CONSTANT_C if C is None else C
    p4, p6, m2, m3 = _magic(psi)
    bounds = design_bounds_from_purities(p4, p6, psi.n, k)
    p_lower, p_upper = success_bounds_from_purity(p6, k, C)
    report = PropertyTestReport(
        task=task,
        state=descriptor,
        seed=state_seed,
        n=psi.n,
        k=k,
        M2=m2,
        M3=m3,
        purity6=p6,
        p6=success6_from_purity(p6),
        delta_lower=bounds.delta_lower,
        delta_upper=bounds.delta_upper,
        q_lower=bounds.q_lower,
        q_upper=bounds.q_upper,
        p_lower=p_lower,
        p_upper=p_upper,
        C=C,
        fidelity_interval=list(fidelity_sandwich(psi, C)),
        flags=list(bounds.flags),
    )

    if task == "design":
        try:
            report.delta = design_error(psi, k)
        except ResourceCapError as e:
            logger.warning(f"Exact design error unavailable: {str(e)}")
            report.flags.append("delta_unavailable")
        if report.delta is not None and 2 * report.delta < bounds.delta_lower - 1e-9:
            report.flags.append("delta_lower_violated")
    elif task == "stab":
        if k < 6:
            report.flags.append("p_lower_needs_k_ge_6")
        else:
            report.summary = stab_test_summary(psi, k, C)
        if shots:
            report.simulation = simulate_povm_test(psi, shots, seed)
    else:
        raise InputError(f"Unknown test task: {task!r}")
    return report
