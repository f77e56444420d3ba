import asyncio

import pytest

from magiclab.core.errors import InputError
from magiclab.schemas.verification import CriterionStatus, SuiteName, VerificationStatus
from magiclab.services.verification import (
    EXPECTED_COUNTS,
    PROFILES,
    VerificationService,
    VerificationSuite,
    build_corpus,
)

FAST_CRITERIA = [
    "counting",
    "golden_counterexample",
    "hierarchy",
    "omega6_optimality",
    "transpose_calculus",
    "povm_reconstruction",
    "shot_consistency",
    "gram_bounds",
    "primitive_equivalence",
]


def test_select_by_name_and_number():
    suite = VerificationSuite()
    assert suite.select(None) == list(suite.criteria)
    assert suite.select(["3", "counting"]) == ["golden_counterexample", "counting"]
    assert len(suite.criteria) == 12
    assert sorted(number for number, _ in suite.criteria.values()) == list(range(1, 13))
    with pytest.raises(InputError):
        suite.select(["13"])
    with pytest.raises(InputError):
        suite.select(["dominence"])
    print("[OK] Criterion selection")


def test_corpus_is_seeded():
    profile = PROFILES[SuiteName.FAST]
    a = build_corpus(profile, 2025)
    b = build_corpus(profile, 2025)
    assert [label for label, _ in a] == [label for label, _ in b]
    assert all(x.amps.tobytes() == y.amps.tobytes() for (_, x), (_, y) in zip(a, b))
    assert len(a) == profile.haar_n2 + profile.haar_n3 + 2 * profile.max_power_n


def test_expected_counts_cover_all_profiles():
    for profile in PROFILES.values():
        assert profile.max_count_k in EXPECTED_COUNTS


@pytest.mark.parametrize("name", FAST_CRITERIA)
def test_fast_criterion_passes(name):
    report = VerificationSuite().run(SuiteName.FAST, [name])
    result = report.criteria[0]
    assert result.name == name
    assert result.status == CriterionStatus.PASSED, result.detail
    assert report.passed


def test_golden_override_fails(tmp_path):
    path = tmp_path / "plus.json"
    path.write_text('{"n": 1, "amps": [[0.7071067811865476, 0.0], [0.7071067811865476, 0.0]]}')
    report = VerificationSuite(golden_file=str(path)).run(SuiteName.FAST, ["golden_counterexample"])
    assert not report.passed
    assert report.criteria[0].status == CriterionStatus.FAILED
    assert report.criteria[0].metrics["p4"] == pytest.approx(1.0)


def test_missing_golden_file_is_an_error():
    report = VerificationSuite(golden_file="/nonexistent/golden.json").run(SuiteName.FAST, ["3"])
    assert report.criteria[0].status == CriterionStatus.ERROR
    assert "InputError" in report.criteria[0].detail


def test_service_jobs():
    service = VerificationService()
    asyncio.run(service.run_async("job-1", SuiteName.FAST, ["counting"]))
    status = service.get_job_status("job-1")
    assert status.status == VerificationStatus.COMPLETED
    assert status.report.passed

    asyncio.run(service.run_async("job-2", SuiteName.FAST, ["bogus"]))
    assert service.get_job_status("job-2").status == VerificationStatus.FAILED
    assert service.get_job_status("job-3") is None


@pytest.mark.slow
def test_fast_suite_passes():
    report = VerificationService().run_sync(SuiteName.FAST)
    failed = [(r.name, r.detail) for r in report.criteria if r.status != CriterionStatus.PASSED]
    assert not failed


@pytest.mark.slow
def test_full_suite_passes():
    report = VerificationService().run_sync(SuiteName.ALL)
    failed = [(r.name, r.detail) for r in report.criteria if r.status != CriterionStatus.PASSED]
    assert not failed


if __name__ == "__main__":
    test_select_by_name_and_number()
    test_corpus_is_seeded()
    test_golden_override_fails()
    print("\nAll verification tests passed!")
