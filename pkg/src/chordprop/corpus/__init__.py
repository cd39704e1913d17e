"""Shipped ``.sd`` fixtures: ``graphs``, ``diagrams`` and ``algebras``."""

from __future__ import annotations

from importlib import resources

KINDS = ("graphs", "diagrams", "algebras")


def _dir(kind: str):
    if kind not in KINDS:
        raise KeyError(f"unknown fixture kind {kind!r}; expected one of {KINDS}")
    return resources.files(__name__) / kind


def names(kind: str) -> list[str]:
    return sorted(p.name[:-3] for p in _dir(kind).iterdir() if p.name.endswith(".sd"))


def text(kind: str, name: str) -> str:
    return (_dir(kind) / f"{name}.sd").read_text(encoding="utf-8")


def load(kind: str, name: str):
    from ..dsl import parse

    return parse(text(kind, name))


def load_all(kind: str) -> dict:
    return {n: load(kind, n) for n in names(kind)}
