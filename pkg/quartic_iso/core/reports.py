"""
Reports Module - deterministic json and text rendering of command results
"""

import json
from typing import Any, Literal

ReportFormat = Literal["json", "text"]


def stringify_ints(value: Any) -> Any:
    """Replace every int (but not bool) by its base-10 string, recursively"""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, dict):
        return {str(k): stringify_ints(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [stringify_ints(v) for v in value]
    return value


def _text_lines(value: Any, prefix: str) -> list[str]:
    if isinstance(value, dict):
        if not value:
            return [f"{prefix}: {{}}"]
        lines = []
        for key in sorted(value):
            lines.extend(_text_lines(value[key], f"{prefix}.{key}" if prefix else str(key)))
        return lines
    if isinstance(value, list):
        if not value:
            return [f"{prefix}: []"]
        lines = []
        for index, item in enumerate(value):
            lines.extend(_text_lines(item, f"{prefix}[{index}]"))
        return lines
    if isinstance(value, bool):
        rendered = "true" if value else "false"
    elif value is None:
        rendered = "null"
    else:
        rendered = str(value)
    return [f"{prefix}: {rendered}"]


def render(report: dict[str, Any], fmt: ReportFormat = "json") -> str:
    """Render a report; identical input gives byte-identical output"""
    data = stringify_ints(report)
    if fmt == "json":
        return json.dumps(data, sort_keys=True, indent=2) + "\n"
    return "\n".join(_text_lines(data, "")) + "\n"
