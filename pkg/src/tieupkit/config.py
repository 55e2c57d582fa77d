"""Plain key-value config files (``key = value``, ``#`` comments)."""

from __future__ import annotations

from .discourse import DiscourseConfig
from .errors import ParseError


def read_kv_config(text: str, path: str | None = None) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, value = stripped.partition("=")
        if not sep:
            raise ParseError(f"expected 'key = value', got {stripped!r}", lineno, path)
        values[key.strip()] = value.strip()
    return values


def discourse_config_from(values: dict[str, str]) -> DiscourseConfig:
    """Build a DiscourseConfig from config keys, defaulting the rest.

    Recognized keys: ``pronoun_both``, ``pronoun_near``, ``pronoun_self``,
    and ``subject_markers`` (whitespace- or comma-separated).
    """
    kwargs = {}
    for key in ("pronoun_both", "pronoun_near", "pronoun_self"):
        if values.get(key):
            kwargs[key] = values[key]
    if values.get("subject_markers"):
        markers = values["subject_markers"].replace(",", " ").split()
        kwargs["subject_markers"] = tuple(markers)
    return DiscourseConfig(**kwargs)
