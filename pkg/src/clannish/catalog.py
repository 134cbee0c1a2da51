"""Bundled example presentations."""

from __future__ import annotations

from importlib import resources

from .algebra import AlgebraPresentation

NAMES = ("kronecker", "clannish5", "oneloop")


def load(name: str) -> AlgebraPresentation:
    """Load a bundled presentation by name (see ``NAMES``)."""
    if name not in NAMES:
        raise KeyError(f"no bundled presentation {name!r}")
    text = resources.files("clannish.presentations").joinpath(f"{name}.json").read_text()
    return AlgebraPresentation.from_json(text, name)


def kronecker() -> AlgebraPresentation:
    return load("kronecker")


def clannish5() -> AlgebraPresentation:
    """Five vertices, special loops eps, eta, kappa, relations ca, db, ec."""
    return load("clannish5")


def oneloop() -> AlgebraPresentation:
    """k<a, eps>/(a^2, eps^2 - eps); clannish but infinite dimensional."""
    return load("oneloop")
