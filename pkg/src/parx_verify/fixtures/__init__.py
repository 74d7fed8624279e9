"""Bundled demo models for the RTM injection scenario."""

from __future__ import annotations

from pathlib import Path

_HERE = Path(__file__).parent

RTM_FILES = ("unece-units.ttl", "rtm-injection.ttl", "rtm-injection-t.ttl")
CONSISTENT_FILE = "rtm-consistent.ttl"


def fixture_path(name: str) -> Path:
    path = _HERE / name
    if not path.exists():
        raise FileNotFoundError(f"no bundled fixture named {name!r}")
    return path


def rtm_paths() -> list[Path]:
    """The deliberately inconsistent RTM model (vocabulary + instances)."""
    return [fixture_path(name) for name in RTM_FILES]


def consistent_path() -> Path:
    """The corrected-and-valued RTM model."""
    return fixture_path(CONSISTENT_FILE)
