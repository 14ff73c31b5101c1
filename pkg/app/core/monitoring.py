import time
import logging
from contextlib import contextmanager
from typing import Iterator, Optional
import sentry_sdk
from pythonjsonlogger import jsonlogger
from app.config import settings

class JSONLogFormatter(jsonlogger.JsonFormatter):
    def add_fields(self, log_record, record, message_dict):
        super(JSONLogFormatter, self).add_fields(log_record, record, message_dict)
        if not log_record.get('timestamp'):
            # this doesn't use record.created, so it is slightly off
            now = time.strftime('%Y-%m-%dT%H:%M:%S', time.localtime())
            log_record['timestamp'] = now
        if log_record.get('level'):
            log_record['level'] = log_record['level'].upper()
        else:
            log_record['level'] = record.levelname

def setup_logging(level: Optional[str] = None):
    """Install the JSON formatter on the root logger (stderr; stdout carries reports).

    Without an explicit level, DEBUG=true logs everything and LOG_LEVEL applies otherwise.
    """
    logger = logging.getLogger()
    for handler in list(logger.handlers):
        if isinstance(handler.formatter, JSONLogFormatter):
            logger.removeHandler(handler)
    logHandler = logging.StreamHandler()
    formatter = JSONLogFormatter('%(timestamp)s %(level)s %(name)s %(message)s')
    logHandler.setFormatter(formatter)
    logger.addHandler(logHandler)
    if level is None:
        level = "DEBUG" if settings.DEBUG else settings.LOG_LEVEL
    logger.setLevel(level.upper())

def init_error_tracking():
    if settings.SENTRY_DSN:
        sentry_sdk.init(
            dsn=settings.SENTRY_DSN,
            environment=settings.ENVIRONMENT,
            release=f"{settings.APP_NAME}@{settings.APP_VERSION}",
            traces_sample_rate=1.0 if settings.ENVIRONMENT == "development" else 0.1,
        )

@contextmanager
def track_performance(operation: str) -> Iterator[None]:
    start_time = time.time()
    try:
        yield
    finally:
        process_time = time.time() - start_time
        # Log slow computations
        if process_time > settings.SLOW_COMPUTATION_SECONDS:
            logging.getLogger("performance").warning(
                f"Slow computation: {operation} took {process_time:.4f}s"
            )
