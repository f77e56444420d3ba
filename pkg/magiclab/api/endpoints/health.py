from fastapi import APIRouter

from magiclab.core.config import settings

router = APIRouter()


@router.get("/health")
async def health_check():
    return {
        "status": "healthy",
        "service": settings.PROJECT_NAME,
        "version": settings.VERSION,
        "caps": {
            "MAGICLAB_MAX_DIM": settings.MAGICLAB_MAX_DIM,
            "MAX_STATE_QUBITS": settings.MAX_STATE_QUBITS,
            "MAX_MOMENT_QUBITS": settings.MAX_MOMENT_QUBITS,
            "MAX_MONOMIAL_COPIES": settings.MAX_MONOMIAL_COPIES,
            "MAX_ENUMERATION_COPIES": settings.MAX_ENUMERATION_COPIES,
        },
    }
