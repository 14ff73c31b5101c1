from celery import Celery
from app.config import settings

celery_app = Celery(
    "adelic",
    broker=settings.CELERY_BROKER_URL,
    backend=settings.CELERY_RESULT_BACKEND,
    include=["app.workers.tasks"],
)

celery_app.conf.update(
    task_serializer="json",
    accept_content=["json"],
    result_serializer="json",
    timezone="UTC",
    enable_utc=True,
    task_always_eager=settings.CELERY_TASK_ALWAYS_EAGER,
    task_eager_propagates=False,
    task_routes={
        "verify_instance": {"queue": "verification"},
        "count_dilate": {"queue": "verification"},
    },
)
