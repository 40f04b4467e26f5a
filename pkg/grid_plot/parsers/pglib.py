"""
PGLib case loader.

Resolves a PGLib-OPF case name to a local `.m` file and parses it. Lookup
order is the GRIDPLOT_FIXTURES directory, then the download cache, then the
pglib-opf repository over HTTP (the file is cached after the first fetch).

Accepted names: "case39_epri", "pglib_opf_case39_epri" and either one with
a ".m" suffix.

Example:
    ```python
    from grid_plot.parsers.pglib import pglib

    net = pglib("case1354_pegase")
    print(len(net.records("gen")))
    ```
"""

import logging
from pathlib import Path
from typing import List, Optional, Union

import requests

from grid_plot.errors import CaseParseError
from grid_plot.Network import Network
from grid_plot.parsers.matpower import read_matpower

try:
    from grid_plot.config import GRIDPLOT_CACHE_DIR, GRIDPLOT_FIXTURES, GRIDPLOT_PGLIB_URL
except ImportError:
    GRIDPLOT_CACHE_DIR = Path.home() / ".cache" / "grid-plot"
    GRIDPLOT_FIXTURES = ""
    GRIDPLOT_PGLIB_URL = "https://raw.githubusercontent.com/power-grid-lib/pglib-opf/master"

logger = logging.getLogger(__name__)

USER_AGENT = "grid-plot/0.1 (case fetcher)"
TIMEOUT_SECONDS = 30


def pglib_file_name(name: str) -> str:
    """Canonical file name, e.g. "case39_epri" -> "pglib_opf_case39_epri.m"."""
    stem = name[:-2] if name.endswith(".m") else name
    if not stem.startswith("pglib_opf_"):
        stem = f"pglib_opf_{stem}"
    return f"{stem}.m"


def candidate_paths(name: str, cache_dir: Optional[Path] = None) -> List[Path]:
    file_name = pglib_file_name(name)
    short = file_name[len("pglib_opf_"):]
    paths = []
    if GRIDPLOT_FIXTURES:
        paths += [Path(GRIDPLOT_FIXTURES) / file_name, Path(GRIDPLOT_FIXTURES) / short]
    paths.append(Path(cache_dir or GRIDPLOT_CACHE_DIR) / file_name)
    return paths


def pglib(
    name: str,
    cache_dir: Optional[Union[str, Path]] = None,
    session: Optional[requests.Session] = None,
) -> Network:
    """
    Load a PGLib-OPF case by name.

    Args:
        name: Case name with or without the "pglib_opf_" prefix and ".m" suffix
        cache_dir: Download cache (default GRIDPLOT_CACHE_DIR)
        session: Requests session to reuse (a new one is created otherwise)

    Returns:
        Parsed Network

    Raises:
        CaseParseError: The file cannot be found locally nor downloaded
    """
    cache = Path(cache_dir) if cache_dir is not None else Path(GRIDPLOT_CACHE_DIR)
    for path in candidate_paths(name, cache):
        if path.is_file():
            logger.debug("pglib %s: using %s", name, path)
            return read_matpower(path.read_text(encoding="utf-8"))

    file_name = pglib_file_name(name)
    url = f"{GRIDPLOT_PGLIB_URL.rstrip('/')}/{file_name}"
    session = session or requests.Session()
    session.headers.update({"User-Agent": USER_AGENT})
    logger.info("downloading %s", url)
    try:
        response = session.get(url, timeout=TIMEOUT_SECONDS)
        response.raise_for_status()
    except requests.exceptions.RequestException as e:
        raise CaseParseError(f"cannot fetch PGLib case '{name}' from {url}: {e}") from e

    text = response.text
    network = read_matpower(text)
    try:
        cache.mkdir(parents=True, exist_ok=True)
        (cache / file_name).write_text(text, encoding="utf-8")
    except OSError as e:
        logger.warning("could not cache %s in %s: %s", file_name, cache, e)
    return network
