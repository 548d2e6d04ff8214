"""Scenario files shipped inside the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def _root():
    return resources.files("fck") / "data" / "scenarios"


def bundled_names() -> list[str]:
    return sorted(p.name[:-4] for p in _root().iterdir() if p.name.endswith(".xml"))


def bundled_path(name: str) -> Path:
    """Path of a bundled scenario, by stem (``"one_pass"``) or file name."""
    stem = name[:-4] if name.endswith(".xml") else name
    path = Path(str(_root() / f"{stem}.xml"))
    if not path.is_file():
        raise FileNotFoundError(f"no bundled scenario {name!r}; have {', '.join(bundled_names())}")
    return path


def resolve(spec: str) -> Path:
    """A filesystem path if it exists, otherwise a bundled scenario name."""
    path = Path(spec)
    if path.is_file():
        return path
    return bundled_path(spec)
