from pydantic import BaseModel, Field
from enum import Enum
from typing import Any, Dict, List, Optional


class VerificationStatus(str, Enum):
    PENDING = "pending"
    IN_PROGRESS = "in_progress"
    COMPLETED = "completed"
    FAILED = "failed"


class CriterionStatus(str, Enum):
    PASSED = "passed"
    FAILED = "failed"
    ERROR = "error"


class SuiteName(str, Enum):
    FAST = "fast"
    ALL = "all"


class CriterionResult(BaseModel):
    number: int
    name: str
    status: CriterionStatus
    detail: str = ""
    elapsed_s: float = 0.0
    metrics: Dict[str, Any] = Field(default_factory=dict)


class VerificationReport(BaseModel):
    suite: SuiteName
    passed: bool
    criteria: List[CriterionResult]
    elapsed_s: float


class VerificationRequest(BaseModel):
    suite: SuiteName = SuiteName.FAST
    only: Optional[List[str]] = None
    async_processing: Optional[bool] = False


class VerificationResponse(BaseModel):
    job_id: str
    status: VerificationStatus
    message: Optional[str] = None
    report: Optional[VerificationReport] = None
    error: Optional[str] = None
