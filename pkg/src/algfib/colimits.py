"""Levelwise finite colimits (and the few limits tests need) of truncated simplicial sets.

Colimits of presheaves are computed pointwise: the apex is the disjoint
union of the node levels modulo the equivalence generated by the diagram
edges.  Each class is named after its least member, ordering members by
node order and then creation order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import SimplicialError, TruncationError
from .sset import (
    Provenance,
    SimplicialMap,
    TruncatedSimplicialSet,
    identity_map,
    subcomplex,
)


@dataclass(frozen=True)
class Edge:
    name: str
    source: str
    target: str
    map: SimplicialMap


@dataclass(frozen=True)
class DiagramSpec:
    """Named nodes and the maps between them."""

    nodes: Mapping[str, TruncatedSimplicialSet]
    edges: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        Ds = {X.truncation for X in self.nodes.values()}
        if len(Ds) > 1:
            raise TruncationError(f"nodes have different truncations {sorted(Ds)}")
        for e in self.edges:
            for end in (e.source, e.target):
                if end not in self.nodes:
                    raise SimplicialError(f"edge {e.name!r} refers to unknown node {end!r}")
            src, tgt = self.nodes[e.source], self.nodes[e.target]
            if set(e.map.mapping) != set(src.tokens()):
                raise SimplicialError(f"edge {e.name!r} is not defined on all of {e.source!r}")
            if any(v not in tgt for v in e.map.mapping.values()):
                raise SimplicialError(f"edge {e.name!r} lands outside {e.target!r}")


@dataclass(frozen=True, eq=False)
class ColimitResult:
    apex: TruncatedSimplicialSet
    legs: Mapping[str, SimplicialMap] = field(default_factory=dict)

    def mediate(self, cocone: Mapping[str, SimplicialMap]) -> SimplicialMap:
        """The unique map out of the apex through which ``cocone`` factors.

        Found by forced assignment on classes; raises if the cocone is not
        compatible (two members of a class with different images).
        """
        targets = {id(f.target) for f in cocone.values()}
        if len(targets) != 1:
            raise SimplicialError("cocone legs must share one target")
        Z = next(iter(cocone.values())).target
        out: dict = {}
        for name, leg in self.legs.items():
            phi = cocone.get(name)
            if phi is None:
                raise SimplicialError(f"cocone has no leg for node {name!r}")
            for x, c in leg.mapping.items():
                z = phi.mapping[x]
                if out.setdefault(c, z) != z:
                    raise SimplicialError(f"cocone is not constant on the class of {c!r}")
        return SimplicialMap(self.apex, Z, out)


class _UnionFind:
    def __init__(self, key):
        self.parent: dict = {}
        self.key = key

    def find(self, a):
        p = self.parent
        root = a
        while p.get(root, root) != root:
            root = p[root]
        while p.get(a, a) != root:
            p[a], a = root, p[a]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        # the smaller key stays representative
        if self.key(rb) < self.key(ra):
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def _quotient(
    nodes: Sequence[tuple],
    pairs: Iterable[tuple],
    *,
    close: bool,
) -> ColimitResult:
    """Quotient of ``⊔ nodes`` by the equivalence generated by ``pairs``.

    Elements are ``(node_index, token)``.  With ``close`` set the relation is
    also closed under faces and degeneracies (needed when ``pairs`` is not
    already the image of a simplicial map).
    """
    Xs = [X for _, X in nodes]
    Ds = {X.truncation for X in Xs}
    if len(Ds) != 1:
        raise TruncationError("mismatched truncation")
    (D,) = Ds

    def key(e):
        return (e[0], Xs[e[0]].position(e[1]))

    uf = _UnionFind(key)
    for a, b in pairs:
        if Xs[a[0]].dim(a[1]) != Xs[b[0]].dim(b[1]):
            raise SimplicialError(f"cannot identify simplices of different dimension {a} ~ {b}")
        if not close:
            uf.union(a, b)
            continue
        work = [(a, b)]
        while work:
            p, q = work.pop()
            if uf.union(p, q):
                Xp, Xq = Xs[p[0]], Xs[q[0]]
                work.extend(((p[0], u), (q[0], v)) for u, v in zip(Xp.faces[p[1]], Xq.faces[q[1]]))
                work.extend(
                    ((p[0], u), (q[0], v)) for u, v in zip(Xp.degeneracies[p[1]], Xq.degeneracies[q[1]])
                )

    members: dict = {}
    for n in range(D + 1):
        for idx, X in enumerate(Xs):
            for t in X.levels[n]:
                members.setdefault(uf.find((idx, t)), []).append((idx, t))

    raw_count: dict = {}
    for rep in members:
        raw_count[rep[1]] = raw_count.get(rep[1], 0) + 1
    name_of: dict = {}
    for rep in members:
        tok = rep[1]
        if raw_count[tok] > 1:
            tok = f"{nodes[rep[0]][0]}:{tok}"
        name_of[rep] = tok
    if len(set(name_of.values())) != len(name_of):
        raise SimplicialError("colimit class names collide; rename node tokens")

    levels = []
    for n in range(D + 1):
        reps = [r for r in members if Xs[r[0]].dim(r[1]) == n]
        reps.sort(key=key)
        levels.append(tuple(name_of[r] for r in reps))
    faces, degens, prov = {}, {}, {}
    for rep, ms in members.items():
        X = Xs[rep[0]]
        c = name_of[rep]
        faces[c] = tuple(name_of[uf.find((rep[0], f))] for f in X.faces[rep[1]])
        degens[c] = tuple(name_of[uf.find((rep[0], s))] for s in X.degeneracies[rep[1]])
        prov[c] = Provenance("colimit-class", tuple(f"{nodes[i][0]}:{t}" for i, t in ms))
    apex = TruncatedSimplicialSet(D, tuple(levels), faces, degens, prov)
    legs = {
        name: SimplicialMap(X, apex, {t: name_of[uf.find((idx, t))] for t in X.tokens()})
        for idx, (name, X) in enumerate(nodes)
    }
    return ColimitResult(apex, legs)


def _check_truncation(*maps: SimplicialMap) -> None:
    Ds = {m.source.truncation for m in maps} | {m.target.truncation for m in maps}
    if len(Ds) != 1:
        raise TruncationError(f"mismatched truncations {sorted(Ds)}")


def _same_tokens(X: TruncatedSimplicialSet, Y: TruncatedSimplicialSet) -> bool:
    return X is Y or X.levels == Y.levels


def pushout(f: SimplicialMap, g: SimplicialMap) -> ColimitResult:
    """Pushout of ``X <-f- A -g-> B``; legs are named ``"X"``, ``"B"`` and ``"A"``."""
    _check_truncation(f, g)
    if not _same_tokens(f.source, g.source):
        raise SimplicialError("pushout legs must share their source")
    A, X, B = f.source, f.target, g.target
    pairs = []
    for a in A.tokens():
        pairs.append(((2, a), (0, f.mapping[a])))
        pairs.append(((2, a), (1, g.mapping[a])))
    return _quotient([("X", X), ("B", B), ("A", A)], pairs, close=False)


def coequalizer(f: SimplicialMap, g: SimplicialMap) -> ColimitResult:
    """Coequalizer of a parallel pair ``X => Y``; the projection is ``legs["Y"]``."""
    _check_truncation(f, g)
    if not (_same_tokens(f.source, g.source) and _same_tokens(f.target, g.target)):
        raise SimplicialError("coequalizer needs a parallel pair")
    X, Y = f.source, f.target
    pairs = [((0, f.mapping[x]), (0, g.mapping[x])) for x in X.tokens()]
    return _quotient([("Y", Y), ("X", X)], pairs + [((1, x), (0, f.mapping[x])) for x in X.tokens()], close=False)


def quotient(X: TruncatedSimplicialSet, pairs: Iterable[tuple]) -> ColimitResult:
    """Smallest simplicial quotient of ``X`` identifying each given pair of simplices.

    This is the coequalizer of the two maps out of a coproduct of
    representables classifying the pairs.  The projection is ``legs["X"]``.
    """
    return _quotient([("X", X)], (((0, a), (0, b)) for a, b in pairs), close=True)


def chain_colimit(chain: Sequence[SimplicialMap]) -> ColimitResult:
    """Union of a finite chain of levelwise-injective maps ``X0 -> X1 -> ...``.

    Legs are named ``"X0"``, ``"X1"``, ...; tokens of the last term are kept.
    """
    if not chain:
        raise SimplicialError("empty chain")
    _check_truncation(*chain)
    for i, f in enumerate(chain):
        if not f.is_injective():
            raise SimplicialError(f"link {i} of the chain is not levelwise injective")
        if i and not _same_tokens(chain[i - 1].target, f.source):
            raise SimplicialError(f"links {i - 1} and {i} are not composable")
    terms = [chain[0].source] + [f.target for f in chain]
    last = len(terms) - 1
    nodes = [(f"X{last - j}", terms[last - j]) for j in range(len(terms))]
    pairs = []
    for i, f in enumerate(chain):
        # node index of term i is last - i
        pairs.extend(((last - i, x), (last - i - 1, y)) for x, y in f.mapping.items())
    return _quotient(nodes, pairs, close=False)


def general_colimit(d: DiagramSpec) -> ColimitResult:
    """Colimit of an arbitrary finite diagram, legs named after the nodes."""
    names = list(d.nodes)
    if not names:
        raise SimplicialError("diagram has no nodes")
    index = {n: i for i, n in enumerate(names)}
    pairs = []
    for e in d.edges:
        s, t = index[e.source], index[e.target]
        pairs.extend(((s, x), (t, y)) for x, y in e.map.mapping.items())
    return _quotient([(n, d.nodes[n]) for n in names], pairs, close=False)


def coproduct(*Xs: TruncatedSimplicialSet, names: Sequence[str] | None = None) -> ColimitResult:
    names = list(names) if names is not None else [f"X{i}" for i in range(len(Xs))]
    return general_colimit(DiagramSpec(dict(zip(names, Xs))))


# ---------------------------------------------------------------------------
# limits


def product(X: TruncatedSimplicialSet, Y: TruncatedSimplicialSet) -> tuple:
    """``(X x Y, projection to X, projection to Y)``, computed levelwise."""
    if X.truncation != Y.truncation:
        raise TruncationError("mismatched truncation")
    D = X.truncation

    def tok(a, b):
        return f"({a},{b})"

    levels, faces, degens, p, q = [], {}, {}, {}, {}
    for n in range(D + 1):
        level = []
        for a in X.levels[n]:
            for b in Y.levels[n]:
                t = tok(a, b)
                level.append(t)
                faces[t] = tuple(tok(u, v) for u, v in zip(X.faces[a], Y.faces[b]))
                degens[t] = tuple(tok(u, v) for u, v in zip(X.degeneracies[a], Y.degeneracies[b]))
                p[t], q[t] = a, b
        levels.append(tuple(level))
    P = TruncatedSimplicialSet(D, tuple(levels), faces, degens, {})
    return P, SimplicialMap(P, X, p), SimplicialMap(P, Y, q)


def equalizer(f: SimplicialMap, g: SimplicialMap) -> tuple:
    """``(E, inclusion)`` where ``E`` is the subcomplex on which ``f`` and ``g`` agree."""
    _check_truncation(f, g)
    keep = [x for x in f.source.tokens() if f.mapping[x] == g.mapping[x]]
    return subcomplex(f.source, keep)


def is_levelwise_injective(f: SimplicialMap) -> bool:
    return f.is_injective()


__all__ = [
    "ColimitResult",
    "DiagramSpec",
    "Edge",
    "chain_colimit",
    "coequalizer",
    "coproduct",
    "equalizer",
    "general_colimit",
    "identity_map",
    "is_levelwise_injective",
    "product",
    "pushout",
    "quotient",
]
