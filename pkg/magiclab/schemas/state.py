from pydantic import BaseModel
from enum import Enum
from typing import List, Optional


class StateKind(str, Enum):
    BASIS0 = "basis0"
    T_POWER = "t_power"
    GOLDEN_POWER = "golden_power"
    HAAR = "haar"
    RANDOM_STABILIZER = "random_stabilizer"
    FILE = "file"


class StateFile(BaseModel):
    """On-disk statevector: amplitudes as [re, im] pairs, 2^n of them."""
    n: int
    amps: List[List[float]]


class StateSpec(BaseModel):
    kind: StateKind
    n: Optional[int] = None
    seed: Optional[int] = None
    path: Optional[str] = None
    descriptor: str
