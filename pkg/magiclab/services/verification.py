"""
Acceptance suite: twelve numerical criteria run against a seeded state corpus.

Each criterion returns (passed, detail, metrics). The "fast" profile shrinks
the sweeps so the whole suite stays interactive; "all" runs them at full size.
"""

import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from magiclab.core.config import settings
from magiclab.core.errors import InputError
from magiclab.core.logging import get_logger
from magiclab.schemas.state import StateKind
from magiclab.schemas.verification import (
    CriterionResult,
    CriterionStatus,
    SuiteName,
    VerificationReport,
    VerificationResponse,
    VerificationStatus,
)
from magiclab.services.commutant import enumerate_monomials, gram_matrix, monomial_count, twirl_pure_state
from magiclab.services.f2core import BitVector
from magiclab.services.genpurity import (
    check_p4_dominance,
    generalized_expectation,
    generalized_purity,
    measurement_povm_pair,
    povm_reconstruction,
)
from magiclab.services.monomial import (
    PauliMonomial,
    find_unitarizing_transpose,
    is_unitary,
    omega_4444,
    partial_transpose,
    partial_transpose_dense,
    primitive,
    random_gl_substitutions,
    single_qubit_factor,
)
from magiclab.services.proptest import (
    OrbitMode,
    design_error,
    design_error_bounds,
    helstrom,
    omega6_povm_success,
    orbit_moment,
    simulate_povm_test,
    stab_test_success6,
    stabilizer_moment,
)
from magiclab.services.sre import hierarchy_slack, purity_via_omega, stabilizer_purities, stabilizer_purity
from magiclab.services.state_loader import load_state_file
from magiclab.services.states import StateVec, make_state

logger = get_logger(__name__)

Outcome = Tuple[bool, str, Dict]
Corpus = List[Tuple[str, StateVec]]

EXPECTED_COUNTS = {2: 2, 3: 6, 4: 30, 5: 270, 6: 4590}


@dataclass(frozen=True)
class SuiteProfile:
    max_count_k: int
    max_dominance_k: int
    haar_n2: int
    haar_n3: int
    max_power_n: int
    helstrom_haar: int
    design_states: int
    twirl_ks: Tuple[int, ...]
    max_transpose_k: int
    povm_pairs: int
    max_povm_enum_k: int
    shots: int
    max_gram_k: int


PROFILES = {
    SuiteName.FAST: SuiteProfile(
        max_count_k=5,
        max_dominance_k=4,
        haar_n2=20,
        haar_n3=5,
        max_power_n=3,
        helstrom_haar=5,
        design_states=5,
        twirl_ks=(2, 3),
        max_transpose_k=4,
        povm_pairs=10,
        max_povm_enum_k=4,
        shots=100_000,
        max_gram_k=4,
    ),
    SuiteName.ALL: SuiteProfile(
        max_count_k=6,
        max_dominance_k=6,
        haar_n2=200,
        haar_n3=50,
        max_power_n=4,
        helstrom_haar=20,
        design_states=20,
        twirl_ks=(2, 3, 4),
        max_transpose_k=6,
        povm_pairs=50,
        max_povm_enum_k=6,
        shots=100_000,
        max_gram_k=5,
    ),
}


def build_corpus(profile: SuiteProfile, seed: int) -> Corpus:
    """Haar states at n=2 and n=3 plus T and Golden powers, all labelled."""
    rng = np.random.default_rng(seed)
    corpus: Corpus = []
    for n, count in ((2, profile.haar_n2), (3, profile.haar_n3)):
        corpus.extend((f"haar:n={n}#{i}", make_state(StateKind.HAAR, n, seed=rng)) for i in range(count))
    for n in range(1, profile.max_power_n + 1):
        corpus.append((f"t:n={n}", make_state(StateKind.T_POWER, n)))
        corpus.append((f"golden:n={n}", make_state(StateKind.GOLDEN_POWER, n)))
    return corpus


def _single_copy(k: int, alpha: int) -> BitVector:
    return BitVector.from_int(1 << (k - 1 - alpha), k)


def _unitarity_error(omega: np.ndarray) -> float:
    return float(np.max(np.abs(omega.conj().T @ omega - np.eye(omega.shape[0]))))


class VerificationSuite:
    def __init__(self, golden_file: Optional[str] = None, seed: Optional[int] = None):
        self.golden_file = golden_file
        self.seed = settings.VERIFY_SEED if seed is None else seed
        self._corpus: Dict[SuiteName, Corpus] = {}

        self.criteria: Dict[str, Tuple[int, Callable[[SuiteProfile, SuiteName], Outcome]]] = {
            "counting": (1, self.check_counting),
            "dominance": (2, self.check_dominance),
            "golden_counterexample": (3, self.check_golden_counterexample),
            "hierarchy": (4, self.check_hierarchy),
            "omega6_optimality": (5, self.check_omega6_optimality),
            "three_design": (6, self.check_three_design),
            "twirl": (7, self.check_twirl),
            "transpose_calculus": (8, self.check_transpose_calculus),
            "povm_reconstruction": (9, self.check_povm_reconstruction),
            "shot_consistency": (10, self.check_shot_consistency),
            "gram_bounds": (11, self.check_gram_bounds),
            "primitive_equivalence": (12, self.check_primitive_equivalence),
        }

    def corpus(self, suite: SuiteName) -> Corpus:
        if suite not in self._corpus:
            self._corpus[suite] = build_corpus(PROFILES[suite], self.seed)
        return self._corpus[suite]

    def select(self, only: Optional[Sequence[str]]) -> List[str]:
        if not only:
            return list(self.criteria)
        names = []
        for name in only:
            name = name.strip()
            if name.isdigit():
                matches = [key for key, (number, _) in self.criteria.items() if number == int(name)]
                if not matches:
                    raise InputError(f"No criterion numbered {name}")
                name = matches[0]
            if name not in self.criteria:
                raise InputError(f"Unknown criterion: {name!r} (known: {', '.join(self.criteria)})")
            names.append(name)
        return names

    def run(self, suite: SuiteName = SuiteName.FAST, only: Optional[Sequence[str]] = None) -> VerificationReport:
        suite = SuiteName(suite)
        profile = PROFILES[suite]
        names = self.select(only)
        logger.info(f"Running {len(names)} criteria of the '{suite.value}' suite (seed {self.seed})")

        started = time.perf_counter()
        results = []
        for name in names:
            number, check = self.criteria[name]
            t0 = time.perf_counter()
            try:
                passed, detail, metrics = check(profile, suite)
                status = CriterionStatus.PASSED if passed else CriterionStatus.FAILED
            except Exception as e:
                logger.error(f"Criterion {number} ({name}) raised: {str(e)}")
                status, detail, metrics = CriterionStatus.ERROR, f"{type(e).__name__}: {str(e)}", {}
            elapsed = time.perf_counter() - t0
            logger.info(f"[{status.value.upper()}] {number:2d} {name} ({elapsed:.1f} s) {detail}")
            results.append(
                CriterionResult(
                    number=number,
                    name=name,
                    status=status,
                    detail=detail,
                    elapsed_s=round(elapsed, 3),
                    metrics=metrics,
                )
            )

        return VerificationReport(
            suite=suite,
            passed=all(r.status == CriterionStatus.PASSED for r in results),
            criteria=results,
            elapsed_s=round(time.perf_counter() - started, 3),
        )

    def check_counting(self, profile: SuiteProfile, suite: SuiteName) -> Outcome:
        counts = {k: enumerate_monomials(k).size for k in range(2, profile.max_count_k + 1)}
        bad = {k: c for k, c in counts.items() if c != monomial_count(k) or c != EXPECTED_COUNTS[k]}
        return not bad, f"counts {counts}" + (f", mismatched {bad}" if bad else ""), {"counts": counts}

    def check_dominance(self, profile: SuiteProfile, suite: SuiteName) -> Outcome:
        representatives = {}
        for k in range(2, profile.max_dominance_k + 1):
            basis = enumerate_monomials(k)
            representatives[k] = [basis.elements[members[0]] for members in basis.conjugation_classes()]

        checked = violations = 0
        worst = -np.inf
        for label, psi in self.corpus(suite):
            p4 = stabilizer_purity(psi, 2)
            for k, reps in representatives.items():
                report = check_p4_dominance(psi, reps, p4=p4)
                checked += report.checked
                violations += len(report.violations)
                if report.checked:
                    worst = max(worst, report.max_difference)
                for entry in report.violations:
                    logger.warning(f"Dominance violation on {label}, k={k}: {reps[entry.index]}")
        metrics = {"checked": checked, "violations": violations, "max_difference": float(worst)}
        return violations == 0, f"{checked} evaluations, max P_Omega - P_4 = {worst:.3e}", metrics

    def check_golden_counterexample(self, profile: SuiteProfile, suite: SuiteName) -> Outcome:
        golden = load_state_file(self.golden_file) if self.golden_file else make_state(StateKind.GOLDEN_POWER, 1)
        value = generalized_purity(golden, omega_4444())
        p4 = stabilizer_purity(golden, 2)
        passed = value < 1e-10 and p4 > 0.1 and abs(p4 - 2.0 / 3.0) < 1e-10
        metrics = {"p_omega4444": value, "p4": p4}
        return passed, f"P_Omega4444(G) = {value:.3e}, P_4(G) = {p4:.12f}", metrics

    def check_hierarchy(self, profile: SuiteProfile, suite: SuiteName) -> Outcome:
        worst = np.inf
        for label, psi in self.corpus(suite):
            for alpha in (2, 3, 4):
                worst = min(worst, *hierarchy_slack(psi, alpha))
        return worst >= -1e-10, f"minimum slack {worst:.3e}", {"min_slack": float(worst)}

    def check_omega6_optimality(self, profile: SuiteProfile, suite: SuiteName) -> Outcome:
        rng = np.random.default_rng(self.seed + 5)
        states = [("t:n=1", make_state(StateKind.T_POWER, 1)), ("golden:n=1", make_state(StateKind.GOLDEN_POWER, 1))]
        states += [(f"haar:n=1#{i}", make_state(StateKind.HAAR, 1, seed=rng)) for i in range(profile.helstrom_haar)]
        rho0 = stabilizer_moment(1, 6)
        worst = 0.0
        min_gap = np.inf
        for label, psi in states:
            rho1 = orbit_moment(psi, 6, OrbitMode.ENUMERATE)
            formula = stab_test_success6(psi)
            worst = max(worst, abs(omega6_povm_success(rho0, rho1) - formula))
            gap = helstrom(rho0, rho1) - formula
            if gap < -1e-9:
                logger.warning(f"Helstrom below the Omega_6 success on {label}: gap {gap:.3e}")
            min_gap = min(min_gap, gap)
        passed = worst < 1e-8 and min_gap >= -1e-9
        detail = f"{len(states)} states, max |POVM - formula| = {worst:.3e}, min Helstrom - formula = {min_gap:.3e}"
        return passed, detail, {"max_error": worst, "min_helstrom_gap": float(min_gap)}

    def check_three_design(self, profile: SuiteProfile, suite: SuiteName) -> Outcome:
        rng = np.random.default_rng(self.seed + 6)
        worst = 0.0
        for n in (1, 2):
            for _ in range(profile.design_states):
                psi = make_state(StateKind.HAAR, n, seed=rng)
                for k in (1, 2, 3):
                    worst = max(worst, design_error(psi, k, OrbitMode.ENUMERATE))
        zero = make_state(StateKind.BASIS0, 2)
        far = design_error(zero, 4, OrbitMode.ENUMERATE)
        lower = design_error_bounds(zero, 4).delta_lower
        passed = worst < 1e-9 and far > 0.1 and 2 * far >= lower - 1e-9
        metrics = {"max_delta_k_le_3": worst, "delta_zero_k4": far, "delta_lower_zero_k4": lower}
        return passed, f"max Delta (k<=3) = {worst:.3e}, Delta(|00>, 4) = {far:.4f}", metrics

    def check_twirl(self, profile: SuiteProfile, suite: SuiteName) -> Outcome:
        rng = np.random.default_rng(self.seed + 7)
        psi = make_state(StateKind.HAAR, 2, seed=rng)
        errors = {}
        for k in profile.twirl_ks:
            exact = orbit_moment(psi, k, OrbitMode.ENUMERATE).matrix
            errors[k] = float(np.max(np.abs(twirl_pure_state(psi, k).matrix - exact)))
        worst = max(errors.values())
        return worst < 1e-8, f"max-entry errors {errors}", {"errors": errors}

    def check_transpose_calculus(self, profile: SuiteProfile, suite: SuiteName) -> Outcome:
        misclassified = search_failures = transpose_failures = total = 0
        for k in range(2, profile.max_transpose_k + 1):
            for w in enumerate_monomials(k).elements:
                total += 1
                omega = single_qubit_factor(w)
                if is_unitary(w) != (_unitarity_error(omega) < 1e-10):
                    misclassified += 1
                if w.m and not is_unitary(partial_transpose(w, find_unitarizing_transpose(w))):
                    search_failures += 1
                for alpha in range(k):
                    t = _single_copy(k, alpha)
                    expected = partial_transpose_dense(omega, k, t)
                    if np.max(np.abs(single_qubit_factor(partial_transpose(w, t)) - expected)) > 1e-12:
                        transpose_failures += 1
        metrics = {
            "monomials": total,
            "misclassified": misclassified,
            "search_failures": search_failures,
            "transpose_failures": transpose_failures,
        }
        passed = not (misclassified or search_failures or transpose_failures)
        return passed, ", ".join(f"{key}={value}" for key, value in metrics.items()), metrics

    def _povm_monomials(self, profile: SuiteProfile, rng: np.random.Generator) -> List[PauliMonomial]:
        pool: List[PauliMonomial] = []
        for k in range(2, profile.max_povm_enum_k + 1):
            pool.extend(w for w in enumerate_monomials(k).elements if w.m)
        pool.append(primitive(8))
        pool.extend(random_gl_substitutions(omega_4444(), 4, int(rng.integers(1 << 31))))
        picks = rng.choice(len(pool), size=profile.povm_pairs, replace=len(pool) < profile.povm_pairs)
        return [pool[i] for i in picks]

    def check_povm_reconstruction(self, profile: SuiteProfile, suite: SuiteName) -> Outcome:
        rng = np.random.default_rng(self.seed + 9)
        worst_identity = 0.0
        worst_eigen = 0.0
        for w in self._povm_monomials(profile, rng):
            psi = make_state(StateKind.HAAR, 1, seed=rng)
            pair = measurement_povm_pair(w)
            reconstructed = povm_reconstruction(psi, w, pair)
            worst_identity = max(worst_identity, abs(reconstructed - generalized_expectation(psi, w)))
            for element in (pair.pi_r, pair.pi_i):
                eigenvalues = np.linalg.eigvalsh(element)
                worst_eigen = max(worst_eigen, -float(eigenvalues.min()), float(eigenvalues.max()) - 1.0)
        passed = worst_identity < 1e-9 and worst_eigen <= 1e-10
        metrics = {"pairs": profile.povm_pairs, "max_error": worst_identity, "max_eigen_excess": worst_eigen}
        return passed, f"max reconstruction error {worst_identity:.3e}", metrics

    def check_shot_consistency(self, profile: SuiteProfile, suite: SuiteName) -> Outcome:
        simulation = simulate_povm_test(make_state(StateKind.T_POWER, 1), profile.shots, self.seed + 10)
        target = 19.0 / 32.0
        passed = abs(simulation.rate - target) <= 4 * simulation.sigma and abs(simulation.expected - target) < 1e-12
        detail = f"rate {simulation.rate:.5f} vs {target} (sigma {simulation.sigma:.5f})"
        return passed, detail, simulation.model_dump()

    def check_gram_bounds(self, profile: SuiteProfile, suite: SuiteName) -> Outcome:
        failures = []
        for k in range(2, profile.max_gram_k + 1):
            for n in range(3, 9):
                W = gram_matrix(k, n).W
                d = 2.0 ** n
                diagonal = np.diag(W)
                off = W[~np.eye(W.shape[0], dtype=bool)]
                if not np.all(diagonal == d ** k):
                    failures.append(f"diagonal k={k} n={n}")
                if off.size and (off.min() < 1 - 1e-9 or off.max() > d ** (k - 1) * (1 + 1e-12)):
                    failures.append(f"off-diagonal k={k} n={n}: [{off.min():.3g}, {off.max():.3g}]")
        return not failures, "; ".join(failures) or "all bounds hold", {"failures": failures}

    def check_primitive_equivalence(self, profile: SuiteProfile, suite: SuiteName) -> Outcome:
        worst = 0.0
        for label, psi in self.corpus(suite):
            values = stabilizer_purities(psi, [2, 3])
            for alpha in (2, 3):
                worst = max(worst, abs(purity_via_omega(psi, alpha) - values[alpha]))
        return worst < 1e-9, f"max |P_Omega - P_2alpha| = {worst:.3e}", {"max_error": worst}


class VerificationService:
    def __init__(self):
        self.jobs: Dict[str, VerificationResponse] = {}

    def run_sync(
        self,
        suite: SuiteName = SuiteName.FAST,
        only: Optional[Sequence[str]] = None,
        golden_file: Optional[str] = None,
    ) -> VerificationReport:
        logger.info(f"Starting verification suite '{SuiteName(suite).value}'")
        report = VerificationSuite(golden_file=golden_file).run(suite, only)
        failed = [r.name for r in report.criteria if r.status != CriterionStatus.PASSED]
        if failed:
            logger.error(f"Verification failed: {', '.join(failed)}")
        else:
            logger.info(f"Verification passed in {report.elapsed_s:.1f} s")
        return report

    async def run_async(self, job_id: str, suite: SuiteName = SuiteName.FAST, only: Optional[Sequence[str]] = None):
        logger.info(f"Starting async verification for job {job_id}")

        self.jobs[job_id] = VerificationResponse(
            job_id=job_id,
            status=VerificationStatus.IN_PROGRESS,
            message="Verification in progress",
        )

        try:
            report = self.run_sync(suite, only)
            self.jobs[job_id] = VerificationResponse(
                job_id=job_id,
                status=VerificationStatus.COMPLETED,
                report=report,
                message="Verification passed" if report.passed else "Verification finished with failures",
            )
        except Exception as e:
            logger.error(f"Async verification failed for job {job_id}: {str(e)}")
            self.jobs[job_id] = VerificationResponse(
                job_id=job_id,
                status=VerificationStatus.FAILED,
                error=str(e),
                message="Verification could not run",
            )

    def get_job_status(self, job_id: str) -> Optional[VerificationResponse]:
        return self.jobs.get(job_id)

    def store_job_status(self, job_id: str, status: VerificationResponse):
        self.jobs[job_id] = status
