import os
from pathlib import Path
from dotenv import load_dotenv

# Ensure environment variables are loaded
load_dotenv()

BASE_DIR = Path.cwd()


def _int_env(name, default):
    value = os.getenv(name, "")
    try:
        return int(value) if value.strip() else default
    except ValueError:
        return default


# Ball size cap; 0 or unset defers to the settings file
PLOI_MAX_ELEMENTS = _int_env('PLOI_MAX_ELEMENTS', 0) or None

PLOI_SETTINGS_FILE = os.getenv('PLOI_SETTINGS_FILE', str(BASE_DIR / "ploi_settings.json"))
PLOI_LOG_FILE = os.getenv('PLOI_LOG_FILE', str(BASE_DIR / "ploi_debug.log"))
PLOI_LOG_LEVEL = os.getenv('PLOI_LOG_LEVEL', 'INFO').upper()

VERSION = "0.3.0"
