"""
PlotSpec - Vega-Lite specification tree with path-based editing

A PlotSpec wraps the JSON tree of a Vega-Lite v5 specification. Paths are
lists of string keys and 0-based integer list indices:

    ["layer", 1, "encoding", "color", "scale", "domain"]

`set` never modifies the tree it is called on; it returns a new PlotSpec that
shares every untouched subtree and copies only the containers along the path.

Example:
    ```python
    spec = powerplot(net, opts)
    spec = spec.set(["layer", 1, "encoding", "color", "legend", "title"], "LMP $/MWh")
    spec.validate()
    spec.save("lmp.html")
    ```
"""

import copy
import functools
import json
import logging
import pkgutil
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import jsonschema

from grid_plot.errors import PathNotFoundError, SpecValidationError

logger = logging.getLogger(__name__)

SpecPath = Sequence[Union[str, int]]

_MISSING = object()

SCHEMA_PACKAGES = ("altair.vegalite.v5.schema", "altair.vegalite.v6.schema")


def _is_index(key: Any) -> bool:
    return isinstance(key, int) and not isinstance(key, bool)


def spec_get(tree: Any, path: SpecPath) -> Any:
    node = tree.to_dict() if isinstance(tree, PlotSpec) else tree
    for key in path:
        if isinstance(node, dict) and isinstance(key, str) and key in node:
            node = node[key]
        elif isinstance(node, list) and _is_index(key) and 0 <= key < len(node):
            node = node[key]
        else:
            raise PathNotFoundError(list(path))
    return node


def _set(node: Any, path: SpecPath, value: Any, full: SpecPath) -> Any:
    if not path:
        return copy.deepcopy(value)
    key, rest = path[0], path[1:]
    if node is _MISSING:
        node = {}
    if isinstance(node, dict) and isinstance(key, str):
        updated = dict(node)
        updated[key] = _set(node.get(key, _MISSING), rest, value, full)
        return updated
    if isinstance(node, list) and _is_index(key) and 0 <= key < len(node):
        updated_list = list(node)
        updated_list[key] = _set(node[key], rest, value, full)
        return updated_list
    raise PathNotFoundError(list(full))


def spec_set(tree: Any, path: SpecPath, value: Any) -> "PlotSpec":
    """
    Return a copy of the spec with the value at `path` replaced.

    Missing object keys along the path are created as empty objects. List
    indices must already exist.
    """
    source = tree._tree if isinstance(tree, PlotSpec) else tree
    if not path:
        return PlotSpec(copy.deepcopy(value))
    return PlotSpec(_set(source, list(path), value, list(path)))


@functools.lru_cache(maxsize=1)
def vega_lite_schema() -> Dict[str, Any]:
    """
    The Vega-Lite JSON schema vendored with altair.

    altair 5 ships the v5 schema and altair 6 the v6 one, which is a superset
    for the constructs emitted here. The first package that loads wins.

    Raises:
        SpecValidationError: If no installed altair carries a schema
    """
    for package in SCHEMA_PACKAGES:
        try:
            raw = pkgutil.get_data(package, "vega-lite-schema.json")
        except (ImportError, OSError) as e:
            logger.debug("no Vega-Lite schema in %s: %s", package, e)
            continue
        if raw is not None:
            return json.loads(raw.decode("utf-8"))
    raise SpecValidationError(f"no Vega-Lite schema found in {', '.join(SCHEMA_PACKAGES)}; install altair>=5")


@functools.lru_cache(maxsize=1)
def _validator() -> jsonschema.Draft7Validator:
    return jsonschema.Draft7Validator(vega_lite_schema())


def validate_spec(spec: Union["PlotSpec", Dict[str, Any]]) -> None:
    """Raise SpecValidationError unless the tree conforms to the Vega-Lite v5 schema."""
    tree = spec.to_dict() if isinstance(spec, PlotSpec) else spec
    errors = sorted(_validator().iter_errors(tree), key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        first = errors[0]
        location = "/".join(str(p) for p in first.absolute_path) or "<root>"
        raise SpecValidationError(f"{len(errors)} schema violation(s); first at {location}: {first.message}")


class PlotSpec:
    """
    A Vega-Lite specification.

    Attributes:
        _tree: The JSON tree; treat as read-only
    """

    def __init__(self, tree: Dict[str, Any]):
        self._tree = tree

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PlotSpec) and self._tree == other._tree

    def __repr__(self) -> str:
        return f"PlotSpec(layers={len(self.layers)})"

    @property
    def layers(self) -> List[Dict[str, Any]]:
        return list(self._tree.get("layer", []))

    @property
    def params(self) -> List[Dict[str, Any]]:
        return list(self._tree.get("params", []))

    def to_dict(self) -> Dict[str, Any]:
        return copy.deepcopy(self._tree)

    def get(self, path: SpecPath) -> Any:
        return copy.deepcopy(spec_get(self._tree, path))

    def set(self, path: SpecPath, value: Any) -> "PlotSpec":
        return spec_set(self, path, value)

    def validate(self) -> None:
        validate_spec(self._tree)

    def to_json(self) -> str:
        """UTF-8 JSON with sorted keys and 2-space indentation."""
        return json.dumps(self._tree, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n"

    def to_html(self, title: str = "") -> str:
        from grid_plot.html_export import to_html

        return to_html(self, title=title)

    def save(self, path: Union[str, Path]) -> Path:
        """Write `.html` documents or `.vl.json`/`.json` specs depending on the extension."""
        path = Path(path)
        text = self.to_html(title=path.stem) if path.suffix.lower() == ".html" else self.to_json()
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        logger.debug("wrote %s", path)
        return path
