from contextlib import asynccontextmanager
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from magiclab.api.endpoints import entropy, health, monomial, proptest, verification
from magiclab.core.config import settings
from magiclab.core.logging import setup_logging
from magiclab.services.commutant import enumerate_monomials
import logging

setup_logging()
logger = logging.getLogger(__name__)

# bases enumerated at startup so the first requests do not pay for them
_WARM_COPIES = 4


@asynccontextmanager
async def lifespan(app: FastAPI):
    for k in range(1, _WARM_COPIES + 1):
        enumerate_monomials(k)
    logger.info(f"Commutant bases for k <= {_WARM_COPIES} ready")

    yield

    logger.info("MagicLab API shutting down")


app = FastAPI(
    title=settings.PROJECT_NAME,
    version=settings.VERSION,
    description="API for stabilizer Renyi entropies, generalized stabilizer purities and Clifford property testing",
    lifespan=lifespan
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.ALLOWED_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(health.router, prefix=settings.API_V1_STR, tags=["health"])
app.include_router(entropy.router, prefix=settings.API_V1_STR, tags=["entropy"])
app.include_router(monomial.router, prefix=settings.API_V1_STR, tags=["monomial"])
app.include_router(proptest.router, prefix=settings.API_V1_STR, tags=["proptest"])
app.include_router(verification.router, prefix=settings.API_V1_STR, tags=["verification"])


@app.get("/")
async def root():
    return {
        "name": settings.PROJECT_NAME,
        "version": settings.VERSION,
        "description": "Stabilizer entropy and Clifford commutant API",
        "docs": "/docs",
        "openapi": "/openapi.json"
    }
