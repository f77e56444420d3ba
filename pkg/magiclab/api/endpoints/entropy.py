from fastapi import APIRouter

from magiclab.api.errors import to_http_exception
from magiclab.core.logging import get_logger
from magiclab.schemas.api import EntropyRequest, GenPurityRequest
from magiclab.schemas.reports import EntropyResponse
from magiclab.services.genpurity import genpurity_report
from magiclab.services.monomial_io import from_record
from magiclab.services.sre import entropy_response
from magiclab.services.state_loader import load_state

router = APIRouter()
logger = get_logger(__name__)


@router.post("/entropy", response_model=EntropyResponse)
async def compute_entropy(request: EntropyRequest):
    try:
        psi, spec = load_state(request.state)
        return entropy_response(psi, spec, request.alphas)
    except Exception as e:
        logger.error(f"Entropy request failed for {request.state}: {str(e)}")
        raise to_http_exception(e)


@router.post("/genpurity")
async def compute_genpurity(request: GenPurityRequest):
    try:
        w = from_record(request.monomial)
        psi, spec = load_state(request.state)
        payload = genpurity_report(psi, w).model_dump()
        payload.update(state=spec.descriptor, seed=spec.seed)
        return payload
    except Exception as e:
        logger.error(f"Generalized purity request failed for {request.state}: {str(e)}")
        raise to_http_exception(e)
