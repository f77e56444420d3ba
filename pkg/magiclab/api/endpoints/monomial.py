from fastapi import APIRouter

from magiclab.api.errors import to_http_exception
from magiclab.core.logging import get_logger
from magiclab.schemas.api import CommutantSummary, MonomialAction, MonomialRequest
from magiclab.services.commutant import commutant_summary
from magiclab.services.monomial_io import from_record, inspect_monomial, normal_form_record, transpose_search_record

router = APIRouter()
logger = get_logger(__name__)


@router.post("/monomial/{action}")
async def monomial_action(action: MonomialAction, request: MonomialRequest):
    try:
        w = from_record(request.monomial)
        if action == MonomialAction.INSPECT:
            return inspect_monomial(w, request.n).model_dump(by_alias=True)
        if action == MonomialAction.NORMAL_FORM:
            return normal_form_record(w)
        return transpose_search_record(w)
    except Exception as e:
        logger.error(f"Monomial {action.value} failed: {str(e)}")
        raise to_http_exception(e)


@router.get("/commutant/{k}", response_model=CommutantSummary)
async def commutant(k: int):
    try:
        return commutant_summary(k)
    except Exception as e:
        logger.error(f"Commutant summary failed for k={k}: {str(e)}")
        raise to_http_exception(e)
