from fastapi import APIRouter

from magiclab.api.errors import to_http_exception
from magiclab.core.logging import get_logger
from magiclab.schemas.api import PropertyTestRequest
from magiclab.schemas.reports import PropertyTestReport
from magiclab.services.proptest import property_test_report
from magiclab.services.state_loader import load_state

router = APIRouter()
logger = get_logger(__name__)


@router.post("/test", response_model=PropertyTestReport)
async def run_property_test(request: PropertyTestRequest):
    try:
        psi, spec = load_state(request.state)
        return property_test_report(
            psi,
            spec.descriptor,
            request.task.value,
            request.k,
            C=request.C,
            shots=request.shots,
            seed=request.seed,
            state_seed=spec.seed,
        )
    except Exception as e:
        logger.error(f"Property test failed for {request.state}: {str(e)}")
        raise to_http_exception(e)
