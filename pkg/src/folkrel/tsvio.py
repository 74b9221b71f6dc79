"""Shared formatting and atomic file writing for reports and indices.

Report numbers are rendered with a fixed 6-decimal format so repeated runs
produce byte-identical files; files are written to a temporary sibling and
renamed into place, so readers never observe a partial file.
"""

from __future__ import annotations

import json
import os
from pathlib import Path


def fmt6(value: float | None) -> str:
    """Fixed 6-decimal rendering; None becomes ``undefined``.

    Negative zero is normalized so -1e-9 and 1e-9 render identically.
    """
    if value is None:
        return "undefined"
    text = format(value, ".6f")
    return "0.000000" if text == "-0.000000" else text


def atomic_write_text(path, text: str) -> None:
    """Write UTF-8 text via a temporary file and an atomic rename."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    os.replace(tmp, path)


def atomic_write_json(path, payload) -> None:
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def atomic_write_with(path, writer) -> None:
    """Run ``writer(tmp_path)`` and rename the result into place."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    writer(tmp)
    os.replace(tmp, path)
