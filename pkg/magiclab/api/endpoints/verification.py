import uuid

from fastapi import APIRouter, BackgroundTasks, HTTPException

from magiclab.api.errors import to_http_exception
from magiclab.core.logging import get_logger
from magiclab.schemas.verification import VerificationRequest, VerificationResponse, VerificationStatus
from magiclab.services.verification import VerificationService

router = APIRouter()
logger = get_logger(__name__)
verification_service = VerificationService()


@router.post("/verify", response_model=VerificationResponse)
async def verify(request: VerificationRequest, background_tasks: BackgroundTasks):
    job_id = str(uuid.uuid4())

    if request.async_processing:
        background_tasks.add_task(verification_service.run_async, job_id, request.suite, request.only)
        return VerificationResponse(
            job_id=job_id,
            status=VerificationStatus.PENDING,
            message="Verification job queued for processing",
        )

    try:
        report = verification_service.run_sync(request.suite, request.only)
    except Exception as e:
        logger.error(f"Verification failed for job {job_id}: {str(e)}")
        raise to_http_exception(e)

    response = VerificationResponse(
        job_id=job_id,
        status=VerificationStatus.COMPLETED,
        report=report,
        message="Verification passed" if report.passed else "Verification finished with failures",
    )
    verification_service.store_job_status(job_id, response)
    return response


@router.get("/verify/status/{job_id}", response_model=VerificationResponse)
async def get_verification_status(job_id: str):
    status = verification_service.get_job_status(job_id)

    if status is None:
        raise HTTPException(status_code=404, detail="Job not found")

    return status
