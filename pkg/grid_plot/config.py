import logging
import os
from pathlib import Path

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

logger = logging.getLogger(__name__)


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name, "")
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning("%s=%r is not an integer, using %d", name, raw, default)
        return default


# Layout configuration
GRIDPLOT_SEED = _int_env("GRIDPLOT_SEED", 1)

# Logging configuration
# Set to False to silence layout progress messages
GRIDPLOT_LOGGING_ENABLED = os.getenv("GRIDPLOT_LOGGING_ENABLED", "True").lower() == "true"

# Case file locations
GRIDPLOT_FIXTURES = os.getenv("GRIDPLOT_FIXTURES", "")
GRIDPLOT_CACHE_DIR = Path(os.getenv("GRIDPLOT_CACHE_DIR", "") or Path.home() / ".cache" / "grid-plot")
GRIDPLOT_PGLIB_URL = os.getenv(
    "GRIDPLOT_PGLIB_URL",
    "https://raw.githubusercontent.com/power-grid-lib/pglib-opf/master",
)

# Vega-Lite schema and runtime scripts; bump all three together
VEGA_RUNTIME = {
    "schema": "https://vega.github.io/schema/vega-lite/v5.json",
    "vega": "5.30.0",
    "vega-lite": "5.21.0",
    "vega-embed": "6.26.0",
}
