"""Django settings for the cometproject."""

from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = "django-insecure-cometproject-secret-key"
DEBUG = True
ALLOWED_HOSTS: list[str] = ["localhost", "127.0.0.1", "testserver"]

INSTALLED_APPS = [
    "comet",
]

# No persistence; the dummy backend keeps the test runner happy.
DATABASES: dict[str, dict] = {}

LANGUAGE_CODE = "en-us"
TIME_ZONE = "UTC"
USE_I18N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

# Comet quiver truncation defaults
COMET_OMEGA = 2
COMET_R = 1
COMET_MAX_I = 4
COMET_MAX_J = 4
COMET_MAX_LOOP = 4
COMET_MAX_WORDS = 10_000
COMET_RANK_TRIALS = 3
COMET_SEED = 0
COMET_SPECIALIZATIONS = 3
COMET_IDENTITY_GRID = 6
COMET_CRYSTAL_MAX_I = 8
COMET_CRYSTAL_MAX_J = 8
COMET_LOG_LEVEL = "WARNING"

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(asctime)s %(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "console": {"class": "logging.StreamHandler", "formatter": "plain", "stream": "ext://sys.stderr"},
    },
    "loggers": {
        "comet": {"handlers": ["console"], "level": COMET_LOG_LEVEL, "propagate": False},
    },
}
