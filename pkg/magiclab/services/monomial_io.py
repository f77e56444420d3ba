import json
import os
from typing import List, Sequence

import numpy as np
from pydantic import ValidationError

from magiclab.core.errors import InputError
from magiclab.core.logging import get_logger
from magiclab.schemas.monomial import BasisExport, MonomialRecord, NormalFormRecord, TransposeSearchResult
from magiclab.schemas.reports import MonomialInspection
from magiclab.services.f2core import BitMatrix, BitVector, det
from magiclab.services.monomial import (
    PauliMonomial,
    ensure_valid,
    find_unitarizing_transpose,
    is_unitary,
    lambda_matrix,
    normal_form,
    partial_transpose,
    projective_order,
    trace_norm,
)

logger = get_logger(__name__)


def from_record(record: MonomialRecord) -> PauliMonomial:
    """Parse and validate a monomial record."""
    k = record.k
    if k < 1:
        raise InputError(f"Monomial record needs k >= 1, got {k}")
    columns = []
    for text in record.V:
        if len(text) != k:
            raise InputError(f"V column {text!r} has length {len(text)}, expected k={k}")
        columns.append(BitVector.from_string(text))
    m = len(columns)

    M = np.zeros((m, m), dtype=np.uint8)
    for pair in record.M:
        if len(pair) != 2:
            raise InputError(f"M entries are [i, j] pairs, got {pair}")
        i, j = pair
        if not (0 <= i < j < m):
            raise InputError(f"M pair {pair} must satisfy 0 <= i < j < m={m}")
        M[i, j] = M[j, i] = 1

    if len(record.Gamma) != m:
        raise InputError(f"Gamma {record.Gamma!r} has length {len(record.Gamma)}, expected m={m}")
    gamma = BitVector.from_string(record.Gamma) if m else BitVector.zeros(0)

    w = PauliMonomial(k, BitMatrix.from_columns(columns, rows=k), BitMatrix(M, cols=m), gamma)
    return ensure_valid(w)


def to_record(w: PauliMonomial) -> MonomialRecord:
    entries = w.M.entries
    pairs = [[int(i), int(j)] for i, j in zip(*np.nonzero(np.triu(entries, 1)))]
    return MonomialRecord(
        k=w.k,
        V=[c.to_string() for c in w.V.columns()],
        M=pairs,
        Gamma=w.Gamma.to_string(),
    )


def load_monomial_file(path: str) -> PauliMonomial:
    if not os.path.exists(path):
        raise InputError(f"Monomial file not found: {path}")
    try:
        with open(path) as fh:
            record = MonomialRecord.model_validate(json.load(fh))
    except (json.JSONDecodeError, ValidationError) as e:
        logger.error(f"Invalid monomial file {path}: {str(e)}")
        raise InputError(f"Invalid monomial file {path}: {e}")
    return from_record(record)


def dump_monomial_file(w: PauliMonomial, path: str) -> str:
    with open(path, "w") as fh:
        fh.write(to_record(w).model_dump_json())
    return path


def export_basis(k: int, elements: Sequence[PauliMonomial]) -> BasisExport:
    records: List[MonomialRecord] = [to_record(w) for w in elements]
    return BasisExport(k=k, count=len(records), elements=records)


def write_basis(k: int, elements: Sequence[PauliMonomial], path: str) -> str:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as fh:
        fh.write(export_basis(k, elements).model_dump_json())
    logger.info(f"Basis for k={k} ({len(elements)} elements) written to {path}")
    return path


def inspect_monomial(w: PauliMonomial, n: int = 1) -> MonomialInspection:
    lam = lambda_matrix(w)
    return MonomialInspection(
        k=w.k,
        m=w.m,
        n=n,
        lambda_matrix=lam.entries.astype(int).tolist(),
        det_lambda=det(lam),
        unitary=is_unitary(w),
        projective_order=projective_order(w),
        trace_norm=trace_norm(w, n),
    )


def normal_form_record(w: PauliMonomial) -> NormalFormRecord:
    form = normal_form(w)
    return NormalFormRecord(
        unitary_part=to_record(form.unitary_part),
        projective_part=to_record(form.projective_part),
        projective_order=form.projective_order,
        transform=[form.transform.row(i).to_string() for i in range(form.transform.rows)],
    )


def transpose_search_record(w: PauliMonomial) -> TransposeSearchResult:
    t_u = find_unitarizing_transpose(w)
    transposed = partial_transpose(w, t_u)
    return TransposeSearchResult(t_u=t_u.to_string(), unitary=is_unitary(transposed), transposed=to_record(transposed))
