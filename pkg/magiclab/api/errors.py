from fastapi import HTTPException

from magiclab.core.errors import InputError, MagicLabError, ResourceCapError


def to_http_exception(e: Exception) -> HTTPException:
    """InputError -> 400, ResourceCapError -> 413, anything else -> 500."""
    if isinstance(e, InputError):
        return HTTPException(status_code=400, detail=str(e))
    if isinstance(e, ResourceCapError):
        return HTTPException(status_code=413, detail=str(e))
    if isinstance(e, MagicLabError):
        return HTTPException(status_code=500, detail=f"{type(e).__name__}: {str(e)}")
    return HTTPException(status_code=500, detail=f"Internal error: {str(e)}")
