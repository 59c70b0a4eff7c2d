"""Access to the JSON Schemas for the documents the command line emits.

The definitions live in one bundled file, ``schemas.json``, keyed by
document name. ``schema_for`` wraps a single definition so it can be
handed straight to any draft 2020-12 validator.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

__all__ = ["DOCUMENT_NAMES", "schema_for"]

DOCUMENT_NAMES = (
    "analyze_report",
    "accuracy_table",
    "comparisons",
    "run_record",
    "cell_analysis",
    "config_echo",
    "report_summary",
    "incomplete_marker",
)


@lru_cache(maxsize=1)
def _bundle():
    text = resources.files("spikescope").joinpath("schemas.json").read_text(
        encoding="utf-8"
    )
    return json.loads(text)


def schema_for(name):
    """Return the schema for one emitted document type."""
    if name not in DOCUMENT_NAMES:
        raise KeyError(
            f"unknown document {name!r}; expected one of {DOCUMENT_NAMES}"
        )
    bundle = _bundle()
    return {
        "$schema": bundle["$schema"],
        "$ref": f"#/$defs/{name}",
        "$defs": bundle["$defs"],
    }
