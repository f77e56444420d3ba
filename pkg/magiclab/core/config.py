from pydantic_settings import BaseSettings
from typing import List


class Settings(BaseSettings):
    PROJECT_NAME: str = "MagicLab"
    VERSION: str = "0.1.0"
    API_V1_STR: str = "/api/v1"

    HOST: str = "0.0.0.0"
    PORT: int = 8000

    ALLOWED_ORIGINS: List[str] = ["*"]

    OUTPUT_DIR: str = "outputs"

    # Amplitude cap for copy stacks and dense moment vectors (2^26 complex ~ 1 GiB)
    MAGICLAB_MAX_DIM: int = 2**26

    MAX_STATE_QUBITS: int = 12
    MAX_SPECTRUM_QUBITS: int = 12
    MAX_MOMENT_QUBITS: int = 13  # n*k for dense moment operators
    MAX_MONOMIAL_COPIES: int = 10
    MAX_ENUMERATION_COPIES: int = 6
    MAX_CLIFFORD_ENUMERATION_QUBITS: int = 2
    MAX_POVM_COPIES: int = 8

    STATE_NORM_TOL: float = 1e-10
    STATE_FILE_RENORM_TOL: float = 1e-6
    STABILIZER_TOL: float = 1e-10
    DOMINANCE_TOL: float = 1e-9
    MONOMIAL_EQ_TOL: float = 1e-10
    WEINGARTEN_RESIDUAL_TOL: float = 1e-8
    WEINGARTEN_EXTENDED_PRECISION_MIN: int = 30

    TESTING_CONSTANT_C: float = 116.0

    VERIFY_SEED: int = 2025

    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "text"

    class Config:
        env_file = ".env"
        case_sensitive = True


settings = Settings()
