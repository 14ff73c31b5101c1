from celery import shared_task
from app.core.celery_app import celery_app  # noqa: F401
from app.core.exceptions import AdelicError
from app.services.adelic import dilate, lattice_points
from app.services.bounds import check_bounds
from app.services.instances import build_body, load_instance, point_to_spec
import logging

logger = logging.getLogger(__name__)


def _error_record(error: AdelicError, bound_name: str = "") -> dict:
    record = error.to_record()
    record["exit_code"] = error.exit_code
    if bound_name:
        record["bound_name"] = bound_name
    check = getattr(error, "check", None)
    if check is not None:
        record["hypothesis"] = check.to_record()
    return record


@shared_task(name="verify_instance")
def verify_instance(instance_json: str, bound: str = "all", cap: int = 0):
    """
    Build the body described by an instance file and run the requested bound checks.
    Errors become records so one bad instance does not sink a batch.
    """
    try:
        spec = load_instance(instance_json)
        body = build_body(spec)
        outcome = check_bounds(body, bound, cap or None)
    except AdelicError as e:
        logger.info(f"verify_instance: {type(e).__name__}: {e.detail}")
        return {"reports": [], "errors": [_error_record(e)], "exit_code": e.exit_code}

    logger.info(f"verify_instance: {len(outcome.reports)} reports for {spec.field.min_poly}, n={spec.n}")
    return {
        "reports": [r.to_record() for r in outcome.reports],
        "errors": [_error_record(e, name) for name, e in outcome.failures],
        "exit_code": outcome.exit_code,
    }


@shared_task(name="count_dilate")
def count_dilate(instance_json: str, k: str = "1", list_points: bool = False, cap: int = 0):
    """
    |kC ∩ K^n| for one dilation factor.
    """
    try:
        body = build_body(load_instance(instance_json))
        points = lattice_points(dilate(body, k), cap or None)
    except AdelicError as e:
        logger.info(f"count_dilate: {type(e).__name__}: {e.detail}")
        return {"errors": [_error_record(e)], "exit_code": e.exit_code}

    record = {"count": len(points), "dilation": str(k), "exit_code": 0}
    if list_points:
        record["points"] = [point_to_spec(p) for p in points]
    return record
