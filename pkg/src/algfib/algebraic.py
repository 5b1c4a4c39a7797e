"""Complexes with distinguished fillers and the maps that preserve them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .colimits import coequalizer, product
from .errors import DefectError, SimplicialError
from .horns import Horn, Mode, enumerate_horns
from .sset import SimplicialMap, TruncatedSimplicialSet, compose, identity_map, validate_map


@dataclass(frozen=True)
class Defect:
    kind: str
    horn: Horn | None = None
    detail: str = ""
    expected: str | None = None
    actual: str | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind, "detail": self.detail}
        if self.horn is not None:
            out["horn"] = self.horn.to_json()
        if self.expected is not None:
            out["expected"] = self.expected
        if self.actual is not None:
            out["actual"] = self.actual
        return out


@dataclass(frozen=True, eq=False)
class AlgebraicComplex:
    """A truncated simplicial set with a distinguished filler per admitted horn.

    ``table`` may be partial (e.g. stages of a free construction); use
    :meth:`is_total` or :func:`make_algebraic` to insist on totality.
    """

    underlying: TruncatedSimplicialSet
    mode: Mode
    table: Mapping[Horn, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode.parse(self.mode))

    @property
    def truncation(self) -> int:
        return self.underlying.truncation

    def filler(self, h: Horn) -> str | None:
        return self.table.get(h)

    def missing_horns(self) -> list:
        return [h for h in enumerate_horns(self.underlying, self.mode) if h not in self.table]

    def is_total(self) -> bool:
        return not self.missing_horns()

    def restrict(self, keep) -> "AlgebraicComplex":
        """Same complex, table restricted to horns satisfying ``keep``."""
        return AlgebraicComplex(self.underlying, self.mode, {h: t for h, t in self.table.items() if keep(h)})

    def __repr__(self):
        return f"<AlgebraicComplex {self.mode.value} {self.underlying.nondegenerate_counts()} table={len(self.table)}>"


def algebraic_defects(
    X: TruncatedSimplicialSet,
    mode: Mode | str,
    table: Mapping[Horn, str],
    *,
    require_total: bool = True,
) -> list:
    mode = Mode.parse(mode)
    out = []
    for h, t in table.items():
        if not mode.admits(h.n, h.k):
            out.append(Defect("not-admitted", h, f"mode {mode.value} has no ({h.n},{h.k}) horns"))
            continue
        bad = h.problems(X)
        if bad:
            out.append(Defect("invalid-horn", h, bad[0]))
            continue
        if t not in X or X.dim(t) != h.n:
            out.append(Defect("face-law", h, f"filler {t!r} is not an {h.n}-simplex", actual=t))
            continue
        for i, s in h.indexed_faces():
            if X.face(t, i) != s:
                out.append(Defect("face-law", h, f"d{i} of filler is {X.face(t, i)!r}, not {s!r}", s, t))
                break
    if require_total:
        for h in enumerate_horns(X, mode):
            if h not in table:
                out.append(Defect("missing", h, "no distinguished filler"))
    return out


def make_algebraic(
    X: TruncatedSimplicialSet,
    mode: Mode | str,
    table: Mapping[Horn, str],
    *,
    require_total: bool = True,
) -> AlgebraicComplex:
    """Validate a filler table and package it; raises :class:`DefectError` on any defect."""
    defects = algebraic_defects(X, mode, table, require_total=require_total)
    if defects:
        raise DefectError(f"{len(defects)} filler defects, first: {defects[0].kind} {defects[0].detail}", defects)
    return AlgebraicComplex(X, Mode.parse(mode), dict(table))


def choose_fillers(
    X: TruncatedSimplicialSet,
    mode: Mode | str,
    *,
    strict: bool = True,
    unique: bool = False,
) -> AlgebraicComplex:
    """Pick the first filler in creation order for every admitted horn.

    With ``unique`` set, a horn with several fillers is a defect (useful for
    nerves, where inner fillers are forced).  With ``strict`` set, unfillable
    horns are defects; otherwise they are left out of the table.
    """
    mode = Mode.parse(mode)
    table, defects = {}, []
    for h in enumerate_horns(X, mode):
        fs = X.fillers_index(h.n, h.k).get(h.faces, ())
        if not fs:
            if strict:
                defects.append(Defect("missing", h, "no filler exists"))
            continue
        if unique and len(fs) > 1:
            defects.append(Defect("ambiguous", h, f"{len(fs)} fillers"))
        table[h] = fs[0]
    if defects:
        raise DefectError(f"{len(defects)} horns cannot be filled as requested", defects)
    return AlgebraicComplex(X, mode, table)


@dataclass(frozen=True, eq=False)
class AlgMorphism:
    source: AlgebraicComplex
    target: AlgebraicComplex
    map: SimplicialMap

    def __call__(self, token: str) -> str:
        return self.map.mapping[token]

    def then(self, other: "AlgMorphism") -> "AlgMorphism":
        return AlgMorphism(self.source, other.target, compose(other.map, self.map))

    def __eq__(self, other):
        if not isinstance(other, AlgMorphism):
            return NotImplemented
        return self.map == other.map

    __hash__ = None


def check_alg_morphism(f: SimplicialMap, src: AlgebraicComplex, tgt: AlgebraicComplex) -> list:
    """Empty iff ``f`` sends each distinguished filler of ``src`` to the one of ``tgt``."""
    if src.mode is not tgt.mode:
        raise ValueError(f"mode mismatch: {src.mode.value} vs {tgt.mode.value}")
    out = []
    for h, t in src.table.items():
        fh = h.image(f)
        want = tgt.table.get(fh)
        got = f.mapping[t]
        if want is None:
            out.append(Defect("target-unfilled", h, f"image horn {fh} has no filler in the target", None, got))
        elif want != got:
            out.append(Defect("filler-not-preserved", h, f"image horn {fh}", want, got))
    return out


def alg_identity(A: AlgebraicComplex) -> AlgMorphism:
    return AlgMorphism(A, A, identity_map(A.underlying))


def as_alg_morphism(f: SimplicialMap, src: AlgebraicComplex, tgt: AlgebraicComplex) -> AlgMorphism:
    bad = validate_map(f)
    if bad:
        raise SimplicialError(f"not a simplicial map: {bad[0].detail}", bad)
    defects = check_alg_morphism(f, src, tgt)
    if defects:
        raise DefectError(f"{len(defects)} fillers not preserved", defects)
    return AlgMorphism(src, tgt, f)


def split_coequalizer(
    f: AlgMorphism,
    g: AlgMorphism,
    t: SimplicialMap,
    s: SimplicialMap | None = None,
) -> tuple:
    """Coequalizer of a split pair of algebraic maps ``X => Y``.

    Needs sections ``t`` of ``f`` and ``s`` of the projection ``pi`` with
    ``g t = s pi``.  If ``s`` is omitted it is derived from that equation.
    The filler of a horn ``h`` of the quotient is ``pi`` of the filler of
    ``s h``.  Returns ``(Q, pi)`` as an algebraic complex and morphism.
    """
    Y = f.target
    if g.target is not Y and g.target.underlying != Y.underlying:
        raise SimplicialError("parallel pair must share its target")
    res = coequalizer(f.map, g.map)
    Q = res.apex
    pi = res.legs["Y"]
    gt = compose(g.map, t)
    if s is None:
        smap: dict = {}
        for y, c in pi.mapping.items():
            v = gt.mapping[y]
            if smap.setdefault(c, v) != v:
                raise DefectError("g t is not constant on a coequalizer class; no section s exists")
        s = SimplicialMap(Q, Y.underlying, smap)
    problems = []
    if compose(f.map, t) != identity_map(Y.underlying):
        problems.append(Defect("section", None, "f t != id"))
    if compose(pi, s) != identity_map(Q):
        problems.append(Defect("section", None, "pi s != id"))
    if compose(s, pi) != gt:
        problems.append(Defect("section", None, "g t != s pi"))
    if problems:
        raise DefectError("split-coequalizer equations fail", problems)
    table = {}
    for h in enumerate_horns(Q, Y.mode):
        filler = Y.table.get(h.image(s))
        if filler is not None:
            table[h] = pi.mapping[filler]
    QA = AlgebraicComplex(Q, Y.mode, table)
    defects = check_alg_morphism(pi, Y, QA)
    if defects:
        raise DefectError("projection does not preserve fillers; split data is invalid", defects)
    return QA, AlgMorphism(Y, QA, pi)


def alg_product(A: AlgebraicComplex, B: AlgebraicComplex) -> tuple:
    """Product with componentwise fillers, plus both projections as algebraic maps."""
    if A.mode is not B.mode:
        raise ValueError("mode mismatch")
    P, p, q = product(A.underlying, B.underlying)
    table = {}
    for h in enumerate_horns(P, A.mode):
        a, b = A.table.get(h.image(p)), B.table.get(h.image(q))
        if a is not None and b is not None:
            table[h] = f"({a},{b})"
    PA = AlgebraicComplex(P, A.mode, table)
    return PA, AlgMorphism(PA, A, p), AlgMorphism(PA, B, q)


def forget_outer(X: AlgebraicComplex) -> AlgebraicComplex:
    """Kan structure to quasi structure: keep only the inner-horn fillers."""
    if X.mode is not Mode.KAN:
        raise ValueError("forget_outer expects a Kan-mode complex")
    return AlgebraicComplex(X.underlying, Mode.QUASI, {h: t for h, t in X.table.items() if 0 < h.k < h.n})


def find_alg_isomorphism(A: AlgebraicComplex, B: AlgebraicComplex) -> SimplicialMap | None:
    """An isomorphism of underlying complexes carrying A's table exactly onto B's."""
    from .sset import find_isomorphism

    if A.mode is not B.mode or len(A.table) != len(B.table):
        return None

    def accept(f: SimplicialMap) -> bool:
        return all(B.table.get(h.image(f)) == f.mapping[t] for h, t in A.table.items())

    return find_isomorphism(A.underlying, B.underlying, accept)
