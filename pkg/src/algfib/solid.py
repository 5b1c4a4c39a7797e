"""Lifting a family of algebraic complexes over a map, and algebraic colimits built on it.

Given maps ``f_i : U(Y_i) -> X`` the construction first identifies the
images of distinguished fillers that land on the same horn, then glues
fillers freely for the horns that do not come from any ``Y_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .algebraic import AlgebraicComplex, AlgMorphism, check_alg_morphism
from .colimits import DiagramSpec, Edge, chain_colimit, general_colimit, pushout, quotient
from .errors import DefectError, SimplicialError, TruncationError
from .free import StagedComplex, _saturate, extend_along_fillers
from .horns import Horn, Mode
from .sset import SimplicialMap, TruncatedSimplicialSet, compose, identity_map


@dataclass(frozen=True, eq=False)
class Member:
    algebra: AlgebraicComplex
    map: SimplicialMap
    name: str = ""


@dataclass(frozen=True, eq=False)
class SolidFamily:
    target: TruncatedSimplicialSet
    members: tuple
    mode: Mode

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode.parse(self.mode))
        ms = []
        for j, m in enumerate(self.members):
            if not isinstance(m, Member):
                m = Member(*m)
            if not m.name:
                m = Member(m.algebra, m.map, str(j))
            ms.append(m)
        object.__setattr__(self, "members", tuple(ms))
        D = self.target.truncation
        for m in self.members:
            if m.algebra.truncation != D:
                raise TruncationError(f"member {m.name!r} has truncation {m.algebra.truncation}, expected {D}")
            if m.algebra.mode is not self.mode:
                raise ValueError(f"member {m.name!r} is in {m.algebra.mode.value} mode")
            if m.map.target.levels != self.target.levels:
                raise SimplicialError(f"member {m.name!r} does not map into the target")


@dataclass(frozen=True, eq=False)
class Identification:
    complex: TruncatedSimplicialSet
    projection: SimplicialMap
    table: Mapping[Horn, str]
    rounds: int
    merged: tuple = ()


def _filler_images(fam: SolidFamily, q: SimplicialMap) -> dict:
    images: dict = {}
    for m in fam.members:
        comp = compose(q, m.map)
        for h, t in m.algebra.table.items():
            bucket = images.setdefault(h.image(comp), [])
            v = comp.mapping[t]
            if v not in bucket:
                bucket.append(v)
    return images


def identify_fillers(fam: SolidFamily, max_rounds: int = 10_000) -> Identification:
    """Quotient the target until every horn coming from a member has one filler image.

    Each round coequalizes all multi-element filler sets at once; rounds
    repeat because a quotient can make new horns come from members.
    """
    X = fam.target
    cur = X
    q = identity_map(X)
    rounds = 0
    merged = []
    while True:
        images = _filler_images(fam, q)
        multi = [v for v in images.values() if len(v) > 1]
        if not multi:
            break
        if rounds >= max_rounds:
            raise SimplicialError("filler identification did not reach a fixpoint")
        rounds += 1
        pairs = [(v[0], w) for v in multi for w in v[1:]]
        merged.append(tuple(tuple(v) for v in multi))
        res = quotient(cur, pairs)
        q = compose(res.legs["X"], q)
        cur = res.apex
    table = {h: v[0] for h, v in images.items()}
    return Identification(cur, SimplicialMap(X, cur, q.mapping), table, rounds, tuple(merged))


def solid_lift(fam: SolidFamily, M: int) -> StagedComplex:
    """Identify filler images, then glue fillers freely for the remaining horns."""
    ident = identify_fillers(fam)
    X0 = ident.complex
    r = _saturate(X0, fam.mode, M, table0=ident.table)
    A = AlgebraicComplex(r["complex"], fam.mode, r["table"])
    structure = SimplicialMap(fam.target, A.underlying, dict(ident.projection.mapping))
    legs = {
        m.name: SimplicialMap(m.map.source, A.underlying, {x: structure.mapping[y] for x, y in m.map.mapping.items()})
        for m in fam.members
    }
    return StagedComplex(
        result=A,
        base=X0,
        stage_of=r["stage_of"],
        attachments=r["attachments"],
        budget=(fam.target.truncation, M),
        residue_source=r["residue"],
        examined=r["examined"],
        structure_map=structure,
        legs=legs,
    )


def solid_mediator(
    lift: StagedComplex,
    fam: SolidFamily,
    phi: SimplicialMap,
    Z: AlgebraicComplex,
) -> SimplicialMap:
    """The unique algebraic map ``lift -> Z`` through which ``phi : X -> U(Z)`` factors.

    Requires every ``phi f_i`` to preserve fillers.  Raises
    :class:`BudgetExhausted` if ``Z`` lacks a filler the extension needs.
    """
    for m in fam.members:
        bad = check_alg_morphism(compose(phi, m.map), m.algebra, Z)
        if bad:
            raise DefectError(f"phi does not preserve fillers on member {m.name!r}", bad)
    base: dict = {}
    for x, y in lift.structure_map.mapping.items():
        z = phi.mapping[x]
        if base.setdefault(y, z) != z:
            raise DefectError(f"phi does not factor through the identification at {x!r}")
    return extend_along_fillers(lift, base, Z)


def pushout_along_free(
    i: SimplicialMap,
    a: SimplicialMap,
    Y: AlgebraicComplex,
    M: int,
) -> StagedComplex:
    """Algebraic pushout of ``Y <- F(A) -> F(B)`` for ``i : A -> B`` and ``a : A -> U(Y)``.

    The underlying pushout ``Y u_A B`` is lifted with ``Y`` as the single member.
    Legs ``"Y"`` and ``"B"`` are recorded on the result.
    """
    if a.target.levels != Y.underlying.levels:
        raise SimplicialError("a must land in the underlying complex of Y")
    po = pushout(a, i)
    fam = SolidFamily(po.apex, (Member(Y, po.legs["X"], "Y"),), Y.mode)
    lift = solid_lift(fam, M)
    s = lift.structure_map.mapping
    legs = dict(lift.legs)
    legs["B"] = SimplicialMap(i.target, lift.underlying, {b: s[c] for b, c in po.legs["B"].mapping.items()})
    return StagedComplex(
        result=lift.result,
        base=lift.base,
        stage_of=lift.stage_of,
        attachments=lift.attachments,
        budget=lift.budget,
        residue_source=lift.residue_source,
        examined=lift.examined,
        structure_map=lift.structure_map,
        legs=legs,
    )


def alg_colimit(
    nodes: Mapping[str, AlgebraicComplex],
    edges: Sequence,
    M: int,
) -> StagedComplex:
    """Colimit of a finite diagram of algebraic complexes.

    ``edges`` holds :class:`Edge` values or ``(name, source, target, map)``
    tuples; maps may be simplicial or algebraic.
    """
    modes = {A.mode for A in nodes.values()}
    if len(modes) != 1:
        raise ValueError("all nodes must share one mode")
    (mode,) = modes
    es = []
    for e in edges:
        if not isinstance(e, Edge):
            e = Edge(*e)
        m = e.map.map if isinstance(e.map, AlgMorphism) else e.map
        es.append(Edge(e.name, e.source, e.target, m))
    d = DiagramSpec({n: A.underlying for n, A in nodes.items()}, tuple(es))
    col = general_colimit(d)
    fam = SolidFamily(col.apex, tuple(Member(nodes[n], col.legs[n], n) for n in nodes), mode)
    return solid_lift(fam, M)


def alg_filtered_colimit(chain: Sequence[AlgMorphism]) -> AlgebraicComplex:
    """Union of a chain of algebraic maps with levelwise-injective underlying maps."""
    if not chain:
        raise SimplicialError("empty chain")
    res = chain_colimit([f.map for f in chain])
    algebras = [chain[0].source] + [f.target for f in chain]
    table: dict = {}
    for j, A in enumerate(algebras):
        leg = res.legs[f"X{j}"]
        for h, t in A.table.items():
            H, T = h.image(leg), leg.mapping[t]
            if table.setdefault(H, T) != T:
                raise DefectError(f"conflicting fillers for {H} in the chain; maps do not preserve fillers")
    return AlgebraicComplex(res.apex, algebras[0].mode, table)
