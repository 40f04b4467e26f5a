import html
import json
from typing import Any, Dict, Union

try:
    from grid_plot.config import VEGA_RUNTIME
except ImportError:
    VEGA_RUNTIME = {
        "schema": "https://vega.github.io/schema/vega-lite/v5.json",
        "vega": "5.30.0",
        "vega-lite": "5.21.0",
        "vega-embed": "6.26.0",
    }

CDN = "https://cdn.jsdelivr.net/npm"

HTML_TEMPLATE = """<!DOCTYPE html>
<html>
<head>
  <meta charset="utf-8">
  <title>{title}</title>
  <script src="{cdn}/vega@{vega}"></script>
  <script src="{cdn}/vega-lite@{vega_lite}"></script>
  <script src="{cdn}/vega-embed@{vega_embed}"></script>
</head>
<body>
  <div id="vis"></div>
  <script>
    const spec = {spec};
    vegaEmbed("#vis", spec).catch(console.error);
  </script>
</body>
</html>
"""


def embed_json(tree: Dict[str, Any]) -> str:
    """Spec JSON safe to place inside a <script> element."""
    text = json.dumps(tree, sort_keys=True, ensure_ascii=False, allow_nan=False)
    return text.replace("</", "<\\/")


def to_html(spec: Union[Dict[str, Any], Any], title: str = "") -> str:
    """
    Render a spec as a standalone HTML page.

    The page loads the pinned vega, vega-lite and vega-embed builds from
    jsDelivr and embeds the spec inline, so it needs no other files.
    """
    tree = spec.to_dict() if hasattr(spec, "to_dict") else spec
    return HTML_TEMPLATE.format(
        title=html.escape(title or "grid plot"),
        cdn=CDN,
        vega=VEGA_RUNTIME["vega"],
        vega_lite=VEGA_RUNTIME["vega-lite"],
        vega_embed=VEGA_RUNTIME["vega-embed"],
        spec=embed_json(tree),
    )
