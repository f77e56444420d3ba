from pydantic import BaseModel, Field
from enum import Enum
from typing import List, Optional

from magiclab.schemas.monomial import MonomialRecord


class EntropyRequest(BaseModel):
    state: str
    alphas: List[int] = Field(default_factory=lambda: [2])


class GenPurityRequest(BaseModel):
    state: str
    monomial: MonomialRecord


class MonomialAction(str, Enum):
    INSPECT = "inspect"
    NORMAL_FORM = "normal-form"
    TRANSPOSE_SEARCH = "transpose-search"


class MonomialRequest(BaseModel):
    monomial: MonomialRecord
    n: int = 1


class TestTask(str, Enum):
    __test__ = False

    DESIGN = "design"
    STAB = "stab"


class PropertyTestRequest(BaseModel):
    state: str
    task: TestTask
    k: int = 6
    C: Optional[float] = None
    shots: Optional[int] = None
    seed: int = 0


class CommutantSummary(BaseModel):
    k: int
    count: int
    formula: int
    log2_lower: float
    log2_upper: float
