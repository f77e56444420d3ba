from magiclab.core.config import settings
from magiclab.core.errors import ResourceCapError

_COMPLEX_BYTES = 16


def _human_bytes(count: float) -> str:
    for unit in ("B", "KiB", "MiB", "GiB", "TiB"):
        if count < 1024:
            return f"{count:.1f} {unit}"
        count /= 1024
    return f"{count:.1f} PiB"


def check_qubits(n: int, cap: int, what: str) -> None:
    if n > cap:
        raise ResourceCapError(
            f"{what}: n={n} exceeds the cap of {cap} qubits "
            f"(needs ~{_human_bytes(_COMPLEX_BYTES * 2.0 ** n)} per vector)"
        )


def check_amplitudes(log2_size: int, what: str) -> None:
    """Reject a dense vector of 2**log2_size complex amplitudes above MAGICLAB_MAX_DIM."""
    size = 2 ** log2_size
    if size > settings.MAGICLAB_MAX_DIM:
        raise ResourceCapError(
            f"{what}: 2^{log2_size} amplitudes exceed MAGICLAB_MAX_DIM={settings.MAGICLAB_MAX_DIM} "
            f"(estimate {_human_bytes(_COMPLEX_BYTES * float(size))})"
        )


def check_matrix(log2_dim: int, cap: int, what: str) -> None:
    """Reject a dense 2**log2_dim square operator when log2_dim exceeds cap."""
    if log2_dim > cap:
        raise ResourceCapError(
            f"{what}: operator dimension 2^{log2_dim} exceeds the cap 2^{cap} "
            f"(estimate {_human_bytes(_COMPLEX_BYTES * 4.0 ** log2_dim)})"
        )
