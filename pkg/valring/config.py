import os
from dotenv import load_dotenv
from pydantic import BaseModel

load_dotenv()


def _flag(name: str, default: str = "0") -> bool:
    return os.getenv(name, default) in ("1", "true", "TRUE", "yes", "on")


class Settings(BaseModel):
    # Cache directory for the scan database and N fixtures
    cache_dir: str = os.path.expanduser(os.getenv("VALRING_CACHE", "~/.cache/valring"))
    # Working precision in pi-digits for series roots and Hensel lifts
    precision: int = int(os.getenv("VALRING_PRECISION", 64))
    seed: int = int(os.getenv("VALRING_SEED", 0))
    workers: int = int(os.getenv("VALRING_WORKERS", 1))
    ell_mode: str = os.getenv("VALRING_ELL_MODE", "per-field")

    # Range scanned when decide needs an N fixture that is not recorded yet
    scan_qmax: int = int(os.getenv("VALRING_SCAN_QMAX", 101))
    # Largest residue field handled by exhaustive enumeration
    max_enum: int = int(os.getenv("VALRING_MAX_ENUM", 4096))

    # Generic witness search of the formula evaluator
    search_depth: int = int(os.getenv("VALRING_SEARCH_DEPTH", 2))
    search_vmax: int = int(os.getenv("VALRING_SEARCH_VMAX", 2))

    log_level: str = os.getenv("VALRING_LOG_LEVEL", "WARNING")
    # Verbose scanner logging (per-q entries)
    scan_log_detail: bool = _flag("VALRING_SCAN_LOG_DETAIL")


settings = Settings()
