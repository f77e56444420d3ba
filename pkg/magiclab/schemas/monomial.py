from pydantic import BaseModel, Field
from typing import List


class MonomialRecord(BaseModel):
    """Monomial file format.

    ``V`` lists columns as copy-major bitstrings (leftmost character is copy 1),
    ``M`` lists the 0-based (i, j), i < j, positions of the ones of M and
    ``Gamma`` is a bitstring of length m.
    """
    k: int
    V: List[str] = Field(default_factory=list)
    M: List[List[int]] = Field(default_factory=list)
    Gamma: str = ""


class BasisExport(BaseModel):
    k: int
    count: int
    elements: List[MonomialRecord]


class NormalFormRecord(BaseModel):
    unitary_part: MonomialRecord
    projective_part: MonomialRecord
    projective_order: int
    transform: List[str]


class TransposeSearchResult(BaseModel):
    t_u: str
    unitary: bool
    transposed: MonomialRecord
