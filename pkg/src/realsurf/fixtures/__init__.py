"""Bundled surface documents for the worked examples."""

from __future__ import annotations

import json
from importlib import resources

from ..documents import parse


def names() -> list[str]:
    files = resources.files(__name__)
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".json"))


def document(name: str) -> dict:
    return json.loads(resources.files(__name__).joinpath(f"{name}.json").read_text())


def load(name: str):
    """Parsed model object (``SurfacePair`` or ``QuadricPencilSurface``) of a fixture."""
    return parse(document(name))


def path(name: str) -> str:
    return str(resources.files(__name__).joinpath(f"{name}.json"))
