from pydantic import BaseModel, Field
from enum import Enum
from typing import Dict, List, Optional


class PurityReport(BaseModel):
    alpha: int
    purity: float
    entropy: float


class EntropyResponse(BaseModel):
    state: str
    seed: Optional[int] = None
    results: Dict[str, PurityReport]


class GenPurityReport(BaseModel):
    value: float
    complex_value: List[float]
    is_unitary: bool
    projective_order: int


class MonomialInspection(BaseModel):
    k: int
    m: int
    n: int
    lambda_matrix: List[List[int]] = Field(serialization_alias="lambda")
    det_lambda: int
    unitary: bool
    projective_order: int
    trace_norm: float = Field(
        description="Schatten 1-norm of Omega on n qubits, d^(k - projective_order) with d = 2^n; Omega_6 on n=2 gives 4^6 = 4096"
    )


class DominanceEntry(BaseModel):
    index: int
    value: float
    difference: float
    skipped: bool = False
    violation: bool = False


class DominanceReport(BaseModel):
    p4: float
    checked: int
    skipped: int
    max_difference: float
    violations: List[DominanceEntry] = Field(default_factory=list)
    entries: List[DominanceEntry] = Field(default_factory=list)


class TestMethod(str, Enum):
    __test__ = False

    EXACT = "exact"
    FORMULA = "formula"
    BOUND = "bound"
    SAMPLED = "sampled"


class TestReport(BaseModel):
    __test__ = False

    success_prob: float
    lower_bound: float
    upper_bound: float
    method: TestMethod


class DesignBounds(BaseModel):
    delta_lower: float
    delta_upper: float
    q_lower: float
    q_upper: float
    flags: List[str] = Field(default_factory=list)


class DesignCondition(BaseModel):
    k: int
    eps: float
    m2: float
    m3: float
    is_approximate_design: bool
    design_eps: float
    is_far_from_design: bool
    far_eps: float


class PovmSimulation(BaseModel):
    shots: int
    seed: int
    successes: int
    rate: float
    expected: float
    sigma: float
    within_band: bool


class PropertyTestReport(BaseModel):
    task: str
    state: str
    seed: Optional[int] = None
    n: int
    k: int
    M2: float
    M3: float
    purity6: float
    p6: float
    delta: Optional[float] = None
    delta_lower: Optional[float] = None
    delta_upper: Optional[float] = None
    q_lower: Optional[float] = None
    q_upper: Optional[float] = None
    p_lower: Optional[float] = None
    p_upper: Optional[float] = None
    C: float
    fidelity_interval: List[float] = Field(default_factory=list)
    simulation: Optional[PovmSimulation] = None
    summary: Optional[TestReport] = None
    flags: List[str] = Field(default_factory=list)
