"""Archetype registry: the same entry point a plug-in would use."""

from __future__ import annotations

from fck.kernel.agents import Agent

ARCHETYPES: dict[str, type[Agent]] = {}


class ArchetypeError(KeyError):
    pass


def archetype(cls: type[Agent]) -> type[Agent]:
    """Class decorator registering ``cls`` under ``cls.archetype`` (or its class name)."""
    name = cls.__dict__.get("archetype") or cls.__name__
    if name in ARCHETYPES and ARCHETYPES[name] is not cls:
        raise ArchetypeError(f"archetype {name!r} already registered")
    cls.archetype = name
    ARCHETYPES[name] = cls
    return cls


def lookup(name: str) -> type[Agent]:
    _load_builtin()
    try:
        return ARCHETYPES[name]
    except KeyError:
        known = ", ".join(sorted(ARCHETYPES))
        raise ArchetypeError(f"unknown archetype {name!r} (known: {known})") from None


def _load_builtin() -> None:
    import fck.archetypes  # noqa: F401  (registers the reference library)
