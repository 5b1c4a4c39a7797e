"""Quasi-mode extras: the interval groupoid, generating maps, and groupoidification."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .algebraic import AlgebraicComplex, AlgMorphism, forget_outer
from .free import StagedComplex, _saturate, free, free_map
from .horns import Mode, is_outer, iter_horns
from .sset import (
    SimplicialMap,
    boundary_complex,
    constant_map,
    horn_complex,
    nerve,
    standard_simplex,
    walking_isomorphism,
)


def interval_nerve(D: int) -> tuple:
    """``(I, (j0, j1))``: nerve of the walking isomorphism and its two object inclusions."""
    I = nerve(walking_isomorphism(), D)
    pt = standard_simplex(0, D)
    objects = I.levels[0]
    return I, tuple(constant_map(pt, I, v) for v in objects)


@dataclass(frozen=True, eq=False)
class Generator:
    kind: str
    inclusion: SimplicialMap
    source: StagedComplex
    target: StagedComplex
    map: AlgMorphism


def generating_maps(
    mode: Mode | str,
    kind: str,
    n: int | None = None,
    k: int | None = None,
    D: int = 1,
    M: int = 1,
) -> Generator:
    """Free image of one generating inclusion: ``"horn"`` (n, k), ``"boundary"`` (n) or ``"interval"``."""
    mode = Mode.parse(mode)
    if kind == "horn":
        if n is None or k is None or not mode.admits(n, k):
            raise ValueError(f"horn ({n},{k}) is not admitted in {mode.value} mode")
        _, inc = horn_complex(n, k, D)
    elif kind == "boundary":
        if n is None or n < 1:
            raise ValueError("boundary generator needs n >= 1")
        _, inc = boundary_complex(n, D)
    elif kind == "interval":
        if mode is Mode.KAN:
            warnings.warn("pt -> I is not a generating map in kan mode; building it anyway", stacklevel=2)
        _, (inc, _) = interval_nerve(D)
    else:
        raise ValueError(f"unknown generator kind {kind!r}")
    FA = free(inc.source, mode, D, M)
    FB = free(inc.target, mode, D, M)
    return Generator(kind, inc, FA, FB, free_map(inc, mode, D, M, FX=FA, FY=FB))


def groupoidify(X: AlgebraicComplex, M: int) -> StagedComplex:
    """Glue fillers freely along outer horns, keeping the inner fillers of ``X``.

    Only outer horns are glued; inner horns created by new cells are not
    filled and are reported in ``uncovered``.
    """
    if X.mode is not Mode.QUASI:
        raise ValueError("groupoidify expects a quasi-mode complex")
    outer = lambda h: is_outer(h.n, h.k)  # noqa: E731
    r = _saturate(X.underlying, Mode.KAN, M, table0=dict(X.table), admissible=outer)
    C = r["complex"]
    A = AlgebraicComplex(C, Mode.KAN, r["table"])
    table = r["table"]

    def uncovered():
        return (h for h in iter_horns(C, Mode.QUASI) if h not in table)

    return StagedComplex(
        result=A,
        base=X.underlying,
        stage_of=r["stage_of"],
        attachments=r["attachments"],
        budget=(X.truncation, M),
        residue_source=r["residue"],
        examined=r["examined"],
        structure_map=SimplicialMap(X.underlying, C, {t: t for t in X.underlying.tokens()}),
        uncovered_source=uncovered,
    )


__all__ = ["Generator", "forget_outer", "generating_maps", "groupoidify", "interval_nerve"]
