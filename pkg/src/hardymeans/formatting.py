"""Deterministic text output for the CLI and trace serializers.

Reals print with 17 significant digits (enough to round-trip a double
bit for bit) and infinities print as the bare literal ``inf`` / ``-inf``
in both JSON and CSV output; strict JSON parsers need a pre-pass for
those two tokens.
"""

from __future__ import annotations

import json
import math


def fmt_real(v: float) -> str:
    v = float(v)
    if math.isnan(v):
        return "nan"
    if v == math.inf:
        return "inf"
    if v == -math.inf:
        return "-inf"
    return f"{v:.17g}"


def render_json(obj) -> str:
    """Serialize nested dict/list/str/bool/int/float, insertion-ordered.

    Floats use :func:`fmt_real` (unquoted), so output is byte-stable for
    identical inputs.
    """
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_real(obj)
    if isinstance(obj, dict):
        parts = (f"{json.dumps(str(k))}: {render_json(v)}"
                 for k, v in obj.items())
        return "{" + ", ".join(parts) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(render_json(v) for v in obj) + "]"
    raise TypeError(f"cannot render {type(obj).__name__}")
