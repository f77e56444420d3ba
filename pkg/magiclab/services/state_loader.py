import json
import os
from typing import Dict, Tuple

import numpy as np
from pydantic import ValidationError

from magiclab.core.config import settings
from magiclab.core.errors import InputError
from magiclab.core.limits import check_qubits
from magiclab.core.logging import get_logger
from magiclab.schemas.state import StateFile, StateKind, StateSpec
from magiclab.services.states import StateVec, make_state

logger = get_logger(__name__)


class StateLoader:
    """Turns textual state descriptors into statevectors.

    Descriptors look like ``t:n=2``, ``haar:n=3,seed=7`` or ``file:PATH``.
    """

    def __init__(self):
        self.kinds: Dict[str, StateKind] = {
            'basis0': StateKind.BASIS0,
            't': StateKind.T_POWER,
            'golden': StateKind.GOLDEN_POWER,
            'haar': StateKind.HAAR,
            'stab': StateKind.RANDOM_STABILIZER,
            'file': StateKind.FILE,
        }
        self.seeded = {StateKind.HAAR, StateKind.RANDOM_STABILIZER}

    def parse(self, descriptor: str) -> StateSpec:
        prefix, sep, rest = descriptor.strip().partition(':')
        if not sep or prefix not in self.kinds:
            raise InputError(f"Unknown state descriptor: {descriptor!r} (expected one of {sorted(self.kinds)})")
        kind = self.kinds[prefix]

        if kind == StateKind.FILE:
            if not rest:
                raise InputError("State descriptor 'file:' needs a path")
            return StateSpec(kind=kind, path=rest, descriptor=descriptor)

        params = self._parse_params(rest, descriptor)
        unknown = set(params) - {'n', 'seed'}
        if unknown:
            raise InputError(f"Unknown parameters {sorted(unknown)} in {descriptor!r}")
        if 'n' not in params:
            raise InputError(f"State descriptor {descriptor!r} needs n=K")
        if kind in self.seeded and 'seed' not in params:
            raise InputError(f"State descriptor {descriptor!r} needs seed=S")
        return StateSpec(kind=kind, n=params['n'], seed=params.get('seed'), descriptor=descriptor)

    def _parse_params(self, text: str, descriptor: str) -> Dict[str, int]:
        params: Dict[str, int] = {}
        for item in filter(None, text.split(',')):
            key, sep, value = item.partition('=')
            if not sep:
                raise InputError(f"Malformed parameter {item!r} in {descriptor!r}")
            try:
                params[key.strip()] = int(value)
            except ValueError:
                raise InputError(f"Parameter {key.strip()!r} must be an integer in {descriptor!r}")
        return params

    def load(self, descriptor: str) -> Tuple[StateVec, StateSpec]:
        spec = self.parse(descriptor)
        psi = make_state(spec.kind, n=spec.n, seed=spec.seed, path=spec.path)
        logger.info(f"Loaded state {descriptor} (n={psi.n})")
        return psi, spec


def load_state_file(path: str) -> StateVec:
    """Read a JSON statevector, renormalizing small deviations from unit norm."""
    if not os.path.exists(path):
        raise InputError(f"State file not found: {path}")
    try:
        with open(path) as fh:
            record = StateFile.model_validate(json.load(fh))
    except (json.JSONDecodeError, ValidationError) as e:
        logger.error(f"Invalid state file {path}: {str(e)}")
        raise InputError(f"Invalid state file {path}: {e}")

    check_qubits(record.n, settings.MAX_STATE_QUBITS, "state file")
    if len(record.amps) != 1 << record.n:
        raise InputError(f"State file {path}: expected {1 << record.n} amplitudes, got {len(record.amps)}")
    if any(len(pair) != 2 for pair in record.amps):
        raise InputError(f"State file {path}: amplitudes must be [re, im] pairs")

    pairs = np.asarray(record.amps, dtype=np.float64)
    amps = pairs[:, 0] + 1j * pairs[:, 1]
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) >= settings.STATE_FILE_RENORM_TOL:
        raise InputError(f"State file {path}: norm {norm:.8f} deviates from 1 by more than {settings.STATE_FILE_RENORM_TOL}")
    return StateVec(record.n, amps, renormalize=True)


def dump_state_file(psi: StateVec, path: str) -> str:
    record = StateFile(n=psi.n, amps=[[float(a.real), float(a.imag)] for a in psi.amps])
    with open(path, 'w') as fh:
        fh.write(record.model_dump_json())
    return path


state_loader = StateLoader()


def load_state(descriptor: str) -> Tuple[StateVec, StateSpec]:
    return state_loader.load(descriptor)
