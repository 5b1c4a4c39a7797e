"""Finite truncated simplicial sets and simplicial maps.

A :class:`TruncatedSimplicialSet` stores *every* simplex of dimension
``0..truncation`` explicitly, degenerate ones included, together with total
face and degeneracy tables.  Simplicial operators are written as value
sequences: an order-preserving map ``[m] -> [n]`` is the tuple
``(a(0), ..., a(m))``, and ``x . a`` is the action of ``a`` on an
``n``-simplex ``x``.  Every simplex has an Eilenberg-Zilber normal form
``base . eta`` with ``base`` nondegenerate and ``eta`` a surjection.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import CellLimitExceeded, SimplicialError, TruncationError

Op = tuple  # order-preserving map [m] -> [n] as its tuple of values

DEFAULT_MAX_CELLS = 1_000_000


def max_cells() -> int:
    raw = os.environ.get("ALGFIB_MAX_CELLS")
    if not raw:
        return DEFAULT_MAX_CELLS
    return int(float(raw))


# ---------------------------------------------------------------------------
# simplicial operators


def identity_op(n: int) -> Op:
    return tuple(range(n + 1))


def coface(n: int, i: int) -> Op:
    """delta_i : [n-1] -> [n], skipping ``i``."""
    return tuple(j if j < i else j + 1 for j in range(n))


def codegeneracy(n: int, i: int) -> Op:
    """sigma_i : [n+1] -> [n], hitting ``i`` twice."""
    return tuple(j if j <= i else j - 1 for j in range(n + 2))


def compose_ops(outer: Op, inner: Op) -> Op:
    """``outer o inner`` as maps of ordinals."""
    return tuple(outer[j] for j in inner)


def surjections(m: int, n: int) -> Iterator[Op]:
    """All order-preserving surjections ``[m] -> [n]``, lexicographically."""
    if m < n:
        return
    for repeats in itertools.combinations(range(m), m - n):
        rep = set(repeats)
        seq = [0]
        for i in range(m):
            seq.append(seq[-1] + (0 if i in rep else 1))
        yield tuple(seq)
    return


def epi_mono(op: Op) -> tuple[Op, Op]:
    """Factor ``op`` as ``mono o epi``; returns ``(epi, image)``.

    ``image`` is the sorted tuple of values hit, i.e. the injective part.
    """
    image = tuple(sorted(set(op)))
    where = {v: t for t, v in enumerate(image)}
    return tuple(where[v] for v in op), image


def degeneracy_word(eta: Op) -> str:
    """Normal-form word ``s_{i1}...s_{ir}`` (i1 > ... > ir) of a surjection."""
    idx = [i for i in range(len(eta) - 1) if eta[i] == eta[i + 1]]
    return "".join(f"s{i}" for i in reversed(idx))


# ---------------------------------------------------------------------------
# provenance


@dataclass(frozen=True)
class Provenance:
    """Where a simplex came from.

    ``kind`` is one of ``input``, ``filler-of``, ``missing-face-of``,
    ``colimit-class`` or ``degeneracy-of``; ``detail`` is a nested tuple of
    JSON-friendly atoms.
    """

    kind: str = "input"
    detail: tuple = ()

    def to_json(self):
        return {"kind": self.kind, "detail": _listify(self.detail)}

    @classmethod
    def from_json(cls, data) -> "Provenance":
        return cls(str(data.get("kind", "input")), _tuplify(data.get("detail", [])))


def _listify(x):
    if isinstance(x, tuple):
        return [_listify(v) for v in x]
    return x


def _tuplify(x):
    if isinstance(x, list):
        return tuple(_tuplify(v) for v in x)
    return x


INPUT = Provenance()


# ---------------------------------------------------------------------------
# the complex


@dataclass(frozen=True, eq=False)
class TruncatedSimplicialSet:
    """Levelwise-explicit simplicial set truncated at ``truncation``.

    ``levels[n]`` lists the ``n``-simplices in creation order.  ``faces[x]``
    is the tuple ``(d_0 x, ..., d_n x)`` (empty for vertices) and
    ``degeneracies[x]`` is ``(s_0 x, ..., s_n x)`` (empty at the top level).
    Instances are treated as immutable.
    """

    truncation: int
    levels: tuple
    faces: Mapping[str, tuple]
    degeneracies: Mapping[str, tuple]
    provenance: Mapping[str, Provenance] = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSimplicialSet):
            return NotImplemented
        return (
            self.truncation == other.truncation
            and self.levels == other.levels
            and dict(self.faces) == dict(other.faces)
            and dict(self.degeneracies) == dict(other.degeneracies)
        )

    __hash__ = None

    def __repr__(self):
        counts = ",".join(str(c) for c in self.nondegenerate_counts())
        return f"<TruncatedSimplicialSet D={self.truncation} nondeg=({counts})>"

    # -- lookups ----------------------------------------------------------

    @cached_property
    def _dim(self) -> dict:
        return {t: n for n, level in enumerate(self.levels) for t in level}

    @cached_property
    def _pos(self) -> dict:
        return {t: i for level in self.levels for i, t in enumerate(level)}

    def __contains__(self, token) -> bool:
        return token in self._dim

    def __len__(self) -> int:
        return len(self._dim)

    def tokens(self) -> Iterator[str]:
        for level in self.levels:
            yield from level

    def dim(self, token: str) -> int:
        return self._dim[token]

    def position(self, token: str) -> int:
        """Index of ``token`` within its level (creation order)."""
        return self._pos[token]

    def simplices(self, n: int) -> tuple:
        if n < 0 or n > self.truncation:
            raise TruncationError(f"dimension {n} outside 0..{self.truncation}")
        return self.levels[n]

    def face(self, token: str, i: int) -> str:
        return self.faces[token][i]

    def degen(self, token: str, i: int) -> str:
        return self.degeneracies[token][i]

    def prov(self, token: str) -> Provenance:
        return self.provenance.get(token, INPUT)

    def counts(self) -> tuple:
        return tuple(len(level) for level in self.levels)

    # -- degeneracy structure --------------------------------------------

    @cached_property
    def _degenerate(self) -> frozenset:
        return frozenset(y for t in self.tokens() for y in self.degeneracies.get(t, ()))

    def is_nondegenerate(self, token: str) -> bool:
        return token not in self._degenerate

    def nondegenerate(self, n: int) -> tuple:
        return tuple(t for t in self.simplices(n) if t not in self._degenerate)

    def nondegenerate_counts(self) -> tuple:
        return tuple(len(self.nondegenerate(n)) for n in range(self.truncation + 1))

    @cached_property
    def _normal_forms(self) -> dict:
        nf = {}
        for n, level in enumerate(self.levels):
            for t in level:
                if t not in self._degenerate:
                    nf[t] = (t, identity_op(n))
            if n == self.truncation:
                break
            for t in level:
                if t not in nf:
                    continue
                base, eta = nf[t]
                for i, y in enumerate(self.degeneracies[t]):
                    nf.setdefault(y, (base, compose_ops(eta, codegeneracy(n, i))))
        return nf

    def normal_form(self, token: str) -> tuple:
        """``(base, eta)`` with ``token == base . eta`` and ``base`` nondegenerate."""
        return self._normal_forms[token]

    @cached_property
    def _by_base(self) -> dict:
        out: dict = {}
        for t in self.tokens():
            nf = self._normal_forms.get(t)
            if nf is not None:
                out.setdefault(nf[0], []).append(t)
        return out

    def degeneracies_of(self, base: str) -> list:
        """``base`` followed by all of its degeneracies, in creation order."""
        return self._by_base.get(base, [])

    def act(self, token: str, op: Op) -> str:
        """``token . op`` for an order-preserving ``op : [m] -> [dim token]``."""
        epi, image = epi_mono(op)
        x = token
        n = self._dim[token]
        for j in reversed(range(n + 1)):
            if j not in image:
                x = self.faces[x][j]
        for i in range(len(epi) - 1):
            if epi[i] == epi[i + 1]:
                x = self.degeneracies[x][i]
        return x

    @cached_property
    def _face_index(self) -> dict:
        return {}

    def fillers_index(self, n: int, k: int) -> dict:
        """Map from the faces-other-than-``k`` tuple to the ``n``-simplices having them."""
        key = (n, k)
        idx = self._face_index.get(key)
        if idx is None:
            idx = {}
            for t in self.levels[n]:
                fs = self.faces[t]
                idx.setdefault(fs[:k] + fs[k + 1:], []).append(t)
            self._face_index[key] = idx
        return idx

    def faces_index(self, n: int) -> dict:
        """``(i, face) -> [n-simplices x with d_i x == face]`` in creation order."""
        key = ("by-face", n)
        idx = self._face_index.get(key)
        if idx is None:
            idx = {}
            for t in self.levels[n]:
                for i, f in enumerate(self.faces[t]):
                    idx.setdefault((i, f), []).append(t)
            self._face_index[key] = idx
        return idx


def empty_complex(D: int) -> TruncatedSimplicialSet:
    """The empty simplicial set (initial object) truncated at ``D``."""
    if D < 0:
        raise TruncationError("truncation must be >= 0")
    return TruncatedSimplicialSet(D, tuple(() for _ in range(D + 1)), {}, {}, {})


# ---------------------------------------------------------------------------
# maps


@dataclass(frozen=True, eq=False)
class SimplicialMap:
    """A levelwise function ``source -> target`` given as a token mapping."""

    source: TruncatedSimplicialSet
    target: TruncatedSimplicialSet
    mapping: Mapping[str, str]

    def __call__(self, token: str) -> str:
        return self.mapping[token]

    def __eq__(self, other):
        if not isinstance(other, SimplicialMap):
            return NotImplemented
        return dict(self.mapping) == dict(other.mapping)

    __hash__ = None

    def __repr__(self):
        return f"<SimplicialMap {len(self.mapping)} simplices>"

    def then(self, other: "SimplicialMap") -> "SimplicialMap":
        """Diagrammatic composite: first ``self``, then ``other``."""
        return compose(other, self)

    def is_injective(self) -> bool:
        return len(set(self.mapping.values())) == len(self.mapping)

    def is_surjective(self) -> bool:
        return set(self.mapping.values()) == set(self.target.tokens())

    def image(self) -> frozenset:
        return frozenset(self.mapping.values())


def compose(g: SimplicialMap, f: SimplicialMap) -> SimplicialMap:
    """``g o f``."""
    return SimplicialMap(f.source, g.target, {x: g.mapping[y] for x, y in f.mapping.items()})


def identity_map(X: TruncatedSimplicialSet) -> SimplicialMap:
    return SimplicialMap(X, X, {t: t for t in X.tokens()})


def inclusion_map(S: TruncatedSimplicialSet, X: TruncatedSimplicialSet) -> SimplicialMap:
    """The token-preserving map of a subcomplex ``S`` into ``X``."""
    missing = [t for t in S.tokens() if t not in X]
    if missing:
        raise SimplicialError(f"{len(missing)} simplices of the subcomplex are not in the target")
    return SimplicialMap(S, X, {t: t for t in S.tokens()})


def constant_map(X: TruncatedSimplicialSet, Y: TruncatedSimplicialSet, vertex: str) -> SimplicialMap:
    """Send everything to the degeneracy tower of ``vertex``."""
    tower = [vertex]
    for n in range(Y.truncation):
        tower.append(Y.degen(tower[-1], 0))
    return SimplicialMap(X, Y, {t: tower[X.dim(t)] for t in X.tokens()})


def extend_from_nondegenerate(
    source: TruncatedSimplicialSet,
    target: TruncatedSimplicialSet,
    assignment: Mapping[str, str],
) -> SimplicialMap:
    """Extend values on nondegenerate simplices to the whole source."""
    mapping = {}
    for t in source.tokens():
        base, eta = source.normal_form(t)
        mapping[t] = target.act(assignment[base], eta)
    return SimplicialMap(source, target, mapping)


def yoneda_map(n: int, X: TruncatedSimplicialSet, x: str, D: int | None = None) -> SimplicialMap:
    """The map ``Delta(n) -> X`` classifying the ``n``-simplex ``x``."""
    simplex = standard_simplex(n, X.truncation if D is None else D)
    ops = simplex_operators(n, simplex.truncation)
    return SimplicialMap(simplex, X, {t: X.act(x, op) for t, op in ops.items()})


# ---------------------------------------------------------------------------
# building complexes incrementally


class ComplexBuilder:
    """Mutable staging area that keeps a complex operator-total while cells are added.

    Adding a nondegenerate simplex eagerly creates all of its degeneracies
    up to the truncation, with faces computed from normal forms.
    """

    def __init__(self, truncation: int):
        if truncation < 0:
            raise TruncationError("truncation must be >= 0")
        self.truncation = truncation
        self.levels: list = [[] for _ in range(truncation + 1)]
        self.faces: dict = {}
        self.degens: dict = {}
        self.prov: dict = {}
        self.dim: dict = {}
        self.nf: dict = {}
        self.token_of: dict = {}
        self.cap = max_cells()

    @classmethod
    def from_complex(cls, X: TruncatedSimplicialSet) -> "ComplexBuilder":
        b = cls(X.truncation)
        for n, level in enumerate(X.levels):
            b.levels[n] = list(level)
            for t in level:
                b.faces[t] = tuple(X.faces.get(t, ()))
                b.degens[t] = tuple(X.degeneracies.get(t, ()))
                b.dim[t] = n
                if t in X.provenance:
                    b.prov[t] = X.provenance[t]
                nf = X.normal_form(t)
                b.nf[t] = nf
                b.token_of[nf] = t
        return b

    def __contains__(self, token) -> bool:
        return token in self.dim

    def _register(self, token: str, n: int, prov: Provenance, nf: tuple) -> None:
        if token in self.dim:
            raise SimplicialError(f"token {token!r} already present")
        if len(self.dim) >= self.cap:
            raise CellLimitExceeded(f"simplex count would exceed {self.cap} (ALGFIB_MAX_CELLS)")
        self.levels[n].append(token)
        self.dim[token] = n
        if prov != INPUT:
            self.prov[token] = prov
        self.nf[token] = nf
        self.token_of[nf] = token

    def _lookup(self, base: str, eta: Op) -> str:
        return self.token_of[(base, eta)]

    def act(self, token: str, op: Op) -> str:
        base, eta = self.nf[token]
        return self._normal_to_token(base, compose_ops(eta, op))

    def _normal_to_token(self, base: str, full: Op) -> str:
        """Token of ``base . full`` for any order-preserving ``full``."""
        epi, image = epi_mono(full)
        x = base
        for j in reversed(range(self.dim[base] + 1)):
            if j not in image:
                x = self.faces[x][j]
        b, eta = self.nf[x]
        return self._lookup(b, compose_ops(eta, epi))

    def add_simplex(
        self,
        token: str,
        faces: Sequence[str] = (),
        provenance: Provenance = INPUT,
    ) -> str:
        """Add a nondegenerate simplex with the given faces (empty for a vertex)."""
        n = len(faces) - 1 if faces else 0
        if n > self.truncation:
            raise TruncationError(f"cannot add a {n}-simplex at truncation {self.truncation}")
        for i, f in enumerate(faces):
            if self.dim.get(f) != n - 1:
                raise SimplicialError(f"face {i} of {token!r} is not an existing {n - 1}-simplex")
        self._register(token, n, provenance, (token, identity_op(n)))
        self.faces[token] = tuple(faces)
        self._degenerate(token, n)
        return token

    def _degenerate(self, x: str, n: int) -> None:
        D = self.truncation
        created = []
        for m in range(n + 1, D + 1):
            for eta in surjections(m, n):
                tok = f"{degeneracy_word(eta)}({x})"
                self._register(tok, m, Provenance("degeneracy-of", (x, degeneracy_word(eta))), (x, eta))
                created.append((tok, m, eta))
        for tok, m, eta in [(x, n, identity_op(n))] + created:
            if tok != x:
                self.faces[tok] = tuple(self._face_of_normal(x, eta, i) for i in range(m + 1))
            self.degens[tok] = (
                tuple(self._lookup(x, compose_ops(eta, codegeneracy(m, i))) for i in range(m + 1))
                if m < D
                else ()
            )

    def _face_of_normal(self, x: str, eta: Op, i: int) -> str:
        return self._normal_to_token(x, compose_ops(eta, coface(len(eta) - 1, i)))

    def raise_truncation(self, D: int) -> None:
        """Extend to a larger truncation by adding degenerate simplices only."""
        old = self.truncation
        if D <= old:
            return
        bases = [t for n in range(old + 1) for t in self.levels[n] if self.nf[t][1] == identity_op(n)]
        self.truncation = D
        self.levels.extend([] for _ in range(D - old))
        for m in range(old + 1, D + 1):
            created = []
            for x in bases:
                n = self.dim[x]
                for eta in surjections(m, n):
                    tok = f"{degeneracy_word(eta)}({x})"
                    if tok in self.dim:
                        tok = f"{tok}@{m}"
                    self._register(tok, m, Provenance("degeneracy-of", (x, degeneracy_word(eta))), (x, eta))
                    created.append((tok, x, eta))
            for tok, x, eta in created:
                self.faces[tok] = tuple(self._face_of_normal(x, eta, i) for i in range(m + 1))
                self.degens[tok] = ()
            for y in self.levels[m - 1]:
                b, eta_y = self.nf[y]
                self.degens[y] = tuple(
                    self._lookup(b, compose_ops(eta_y, codegeneracy(m - 1, i))) for i in range(m)
                )

    def total(self) -> int:
        return len(self.dim)

    def freeze(self) -> TruncatedSimplicialSet:
        return TruncatedSimplicialSet(
            self.truncation,
            tuple(tuple(level) for level in self.levels),
            dict(self.faces),
            dict(self.degens),
            dict(self.prov),
        )


def retruncate(X: TruncatedSimplicialSet, D: int) -> TruncatedSimplicialSet:
    """Restrict to dimensions ``<= D`` or extend by degeneracies up to ``D``."""
    if D < 0:
        raise TruncationError("truncation must be >= 0")
    if D == X.truncation:
        return X
    if D < X.truncation:
        keep = set(t for n in range(D + 1) for t in X.levels[n])
        return TruncatedSimplicialSet(
            D,
            tuple(X.levels[: D + 1]),
            {t: X.faces[t] for t in keep},
            {t: (X.degeneracies[t] if X.dim(t) < D else ()) for t in keep},
            {t: p for t, p in X.provenance.items() if t in keep},
        )
    b = ComplexBuilder.from_complex(X)
    b.raise_truncation(D)
    return b.freeze()


# ---------------------------------------------------------------------------
# standard constructions


def _seq_token(seq: Sequence[int], n: int) -> str:
    return "".join(map(str, seq)) if n < 10 else ",".join(map(str, seq))


def simplex_operators(n: int, D: int) -> dict:
    """Token -> operator ``[m] -> [n]`` for the simplices of ``Delta(n)``."""
    return {
        _seq_token(seq, n): tuple(seq)
        for m in range(D + 1)
        for seq in itertools.combinations_with_replacement(range(n + 1), m + 1)
    }


def _from_sequences(n: int, D: int, keep: Callable[[tuple], bool]) -> TruncatedSimplicialSet:
    levels, faces, degens = [], {}, {}
    for m in range(D + 1):
        level = []
        for seq in itertools.combinations_with_replacement(range(n + 1), m + 1):
            if not keep(seq):
                continue
            tok = _seq_token(seq, n)
            level.append(tok)
            faces[tok] = tuple(_seq_token(seq[:i] + seq[i + 1:], n) for i in range(m + 1)) if m else ()
            degens[tok] = (
                tuple(_seq_token(seq[: i + 1] + seq[i:], n) for i in range(m + 1)) if m < D else ()
            )
        levels.append(tuple(level))
    return TruncatedSimplicialSet(D, tuple(levels), faces, degens, {})


def standard_simplex(n: int, D: int) -> TruncatedSimplicialSet:
    """``Delta(n)`` truncated at ``D``; simplices are value strings like ``'012'``."""
    if D < 0 or n < 0:
        raise TruncationError("n and D must be >= 0")
    return _from_sequences(n, D, lambda seq: True)


def boundary_complex(n: int, D: int) -> tuple:
    """``(dDelta(n), inclusion into Delta(n))``."""
    if n < 1:
        raise SimplicialError("the boundary of Delta(0) is empty; use empty_complex")
    full = set(range(n + 1))
    S = _from_sequences(n, D, lambda seq: set(seq) != full)
    return S, inclusion_map(S, standard_simplex(n, D))


def horn_complex(n: int, k: int, D: int) -> tuple:
    """``(Lambda^k(n), inclusion into Delta(n))``: generated by the faces other than ``k``."""
    if n < 1:
        raise SimplicialError("horns need n >= 1")
    if not 0 <= k <= n:
        raise SimplicialError(f"horn index k={k} outside 0..{n}")
    full = set(range(n + 1))
    S = _from_sequences(n, D, lambda seq: (set(seq) | {k}) != full)
    return S, inclusion_map(S, standard_simplex(n, D))


def subcomplex(X: TruncatedSimplicialSet, tokens: Iterable[str]) -> tuple:
    """``(S, inclusion)`` for an operator-closed set of simplices."""
    keep = set(tokens)
    bad = [
        t
        for t in keep
        if any(f not in keep for f in X.faces[t]) or any(s not in keep for s in X.degeneracies[t])
    ]
    if bad:
        raise SimplicialError(f"{len(bad)} simplices have faces or degeneracies outside the set")
    S = TruncatedSimplicialSet(
        X.truncation,
        tuple(tuple(t for t in level if t in keep) for level in X.levels),
        {t: X.faces[t] for t in keep},
        {t: X.degeneracies[t] for t in keep},
        {t: p for t, p in X.provenance.items() if t in keep},
    )
    return S, inclusion_map(S, X)


def is_operator_closed(X: TruncatedSimplicialSet, tokens: Iterable[str]) -> bool:
    keep = set(tokens)
    return all(
        all(f in keep for f in X.faces[t]) and all(s in keep for s in X.degeneracies[t])
        for t in keep
    )


def generated_subcomplex(X: TruncatedSimplicialSet, tokens: Iterable[str]) -> frozenset:
    """Smallest operator-closed set containing ``tokens``."""
    seen: set = set()
    stack = list(tokens)
    while stack:
        t = stack.pop()
        if t in seen:
            continue
        seen.add(t)
        stack.extend(X.faces[t])
        stack.extend(X.degeneracies[t])
    return frozenset(seen)


# ---------------------------------------------------------------------------
# categories and nerves


@dataclass(frozen=True)
class FiniteCategory:
    """A finite category presented by a full composition table.

    ``compose[(f, g)]`` is ``g o f`` (``f`` first) for every composable pair.
    """

    objects: tuple
    morphisms: Mapping[str, tuple]  # name -> (source, target), ordered
    identities: Mapping[str, str]
    compose: Mapping[tuple, str]

    def __post_init__(self):
        problems = self.problems()
        if problems:
            raise SimplicialError("invalid category: " + "; ".join(problems[:5]), problems)

    def source(self, f: str) -> str:
        return self.morphisms[f][0]

    def target(self, f: str) -> str:
        return self.morphisms[f][1]

    def problems(self) -> list:
        out = []
        for x in self.objects:
            i = self.identities.get(x)
            if i is None or self.morphisms.get(i) != (x, x):
                out.append(f"identity of {x!r} missing or not an endomorphism")
        for f, (a, b) in self.morphisms.items():
            if a not in self.objects or b not in self.objects:
                out.append(f"morphism {f!r} has unknown endpoints")
        if out:
            return out
        for f, (a, b) in self.morphisms.items():
            for g, (c, d) in self.morphisms.items():
                if b != c:
                    continue
                h = self.compose.get((f, g))
                if h is None:
                    out.append(f"composite of {f!r} then {g!r} missing")
                elif self.morphisms.get(h) != (a, d):
                    out.append(f"composite of {f!r} then {g!r} has wrong endpoints")
        if out:
            return out
        for f, (a, b) in self.morphisms.items():
            if self.compose[(self.identities[a], f)] != f or self.compose[(f, self.identities[b])] != f:
                out.append(f"unit law fails at {f!r}")
        for f, (a, b) in self.morphisms.items():
            for g in self.morphisms:
                if self.source(g) != b:
                    continue
                for h in self.morphisms:
                    if self.source(h) != self.target(g):
                        continue
                    lhs = self.compose[(self.compose[(f, g)], h)]
                    rhs = self.compose[(f, self.compose[(g, h)])]
                    if lhs != rhs:
                        out.append(f"associativity fails at ({f}, {g}, {h})")
        return out

    def is_groupoid(self) -> bool:
        for f, (a, b) in self.morphisms.items():
            if not any(
                self.morphisms[g] == (b, a)
                and self.compose[(f, g)] == self.identities[a]
                and self.compose[(g, f)] == self.identities[b]
                for g in self.morphisms
            ):
                return False
        return True


@dataclass(frozen=True)
class Functor:
    source: FiniteCategory
    target: FiniteCategory
    on_objects: Mapping[str, str]
    on_morphisms: Mapping[str, str]

    def then(self, other: "Functor") -> "Functor":
        return Functor(
            self.source,
            other.target,
            {x: other.on_objects[y] for x, y in self.on_objects.items()},
            {f: other.on_morphisms[g] for f, g in self.on_morphisms.items()},
        )


def _string_token(string: tuple) -> str:
    return "<" + ",".join(string) + ">"


def _nerve_strings(C: FiniteCategory, D: int) -> list:
    levels = [[(x,) for x in C.objects]]
    if D >= 1:
        levels.append([(f,) for f in C.morphisms])
    for n in range(2, D + 1):
        nxt = []
        for s in levels[-1]:
            for g in C.morphisms:
                if C.source(g) == C.target(s[-1]):
                    nxt.append(s + (g,))
        levels.append(nxt)
    return levels


def nerve(C: FiniteCategory, D: int) -> TruncatedSimplicialSet:
    """Nerve of ``C``: level ``n`` holds the composable strings of ``n`` morphisms."""
    strings = _nerve_strings(C, D)

    def tok(n, s):
        return s[0] if n == 0 else _string_token(s)

    levels, faces, degens = [], {}, {}
    for n, level in enumerate(strings):
        toks = []
        for s in level:
            t = tok(n, s)
            toks.append(t)
            if n == 0:
                faces[t] = ()
            elif n == 1:
                faces[t] = (C.target(s[0]), C.source(s[0]))
            else:
                fs = [tok(n - 1, s[1:])]
                for i in range(1, n):
                    fs.append(tok(n - 1, s[: i - 1] + (C.compose[(s[i - 1], s[i])],) + s[i + 1:]))
                fs.append(tok(n - 1, s[:-1]))
                faces[t] = tuple(fs)
            if n < D:
                if n == 0:
                    degens[t] = (tok(1, (C.identities[s[0]],)),)
                else:
                    ds = []
                    for i in range(n + 1):
                        v = C.source(s[i]) if i < n else C.target(s[-1])
                        ds.append(tok(n + 1, s[:i] + (C.identities[v],) + s[i:]))
                    degens[t] = tuple(ds)
            else:
                degens[t] = ()
        levels.append(tuple(toks))
    return TruncatedSimplicialSet(D, tuple(levels), faces, degens, {})


def nerve_map(F: Functor, D: int) -> SimplicialMap:
    """The simplicial map induced by a functor."""
    X, Y = nerve(F.source, D), nerve(F.target, D)
    mapping = {}
    for n, level in enumerate(_nerve_strings(F.source, D)):
        for s in level:
            if n == 0:
                mapping[s[0]] = F.on_objects[s[0]]
            else:
                mapping[_string_token(s)] = _string_token(tuple(F.on_morphisms[f] for f in s))
    return SimplicialMap(X, Y, mapping)


def ordinal_category(n: int) -> FiniteCategory:
    """The poset ``[n] = {0 < 1 < ... < n}`` as a category."""
    objs = tuple(str(i) for i in range(n + 1))
    mors = {f"{i}{j}" if n < 10 else f"{i}-{j}": (str(i), str(j)) for i in range(n + 1) for j in range(i, n + 1)}
    name = {v: k for k, v in mors.items()}
    ids = {x: name[(x, x)] for x in objs}
    comp = {}
    for f, (a, b) in mors.items():
        for g, (c, d) in mors.items():
            if b == c:
                comp[(f, g)] = name[(a, d)]
    return FiniteCategory(objs, mors, ids, comp)


def walking_isomorphism() -> FiniteCategory:
    """Two objects and an isomorphism ``f : 0 -> 1`` with inverse ``g``."""
    mors = {"id0": ("0", "0"), "id1": ("1", "1"), "f": ("0", "1"), "g": ("1", "0")}
    comp = {
        ("id0", "id0"): "id0", ("id0", "f"): "f", ("f", "id1"): "f", ("f", "g"): "id0",
        ("id1", "id1"): "id1", ("id1", "g"): "g", ("g", "id0"): "g", ("g", "f"): "id1",
    }
    return FiniteCategory(("0", "1"), mors, {"0": "id0", "1": "id1"}, comp)


def cyclic_monoid(order: int, name: str = "a") -> FiniteCategory:
    """One object, morphisms ``e, a, a^2, ..., a^(order-1)`` with ``a^order = e``."""
    elems = ["e"] + [name if p == 1 else f"{name}{p}" for p in range(1, order)]
    mors = {m: ("*", "*") for m in elems}
    comp = {(elems[p], elems[q]): elems[(p + q) % order] for p in range(order) for q in range(order)}
    return FiniteCategory(("*",), mors, {"*": "e"}, comp)


def product_category(C: FiniteCategory, E: FiniteCategory) -> FiniteCategory:
    objs = tuple(f"{x}.{y}" for x in C.objects for y in E.objects)
    mors = {
        f"{f}.{g}": (f"{C.source(f)}.{E.source(g)}", f"{C.target(f)}.{E.target(g)}")
        for f in C.morphisms
        for g in E.morphisms
    }
    ids = {f"{x}.{y}": f"{C.identities[x]}.{E.identities[y]}" for x in C.objects for y in E.objects}
    comp = {}
    for (f1, f2), h in C.compose.items():
        for (g1, g2), k in E.compose.items():
            comp[(f"{f1}.{g1}", f"{f2}.{g2}")] = f"{h}.{k}"
    return FiniteCategory(objs, mors, ids, comp)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    """One failed identity instance: ``simplex``, identity name, operator indices."""

    simplex: str
    identity: str
    indices: tuple = ()
    detail: str = ""

    def to_json(self):
        return {"simplex": self.simplex, "identity": self.identity, "indices": list(self.indices), "detail": self.detail}


def validate_sset(X: TruncatedSimplicialSet) -> list:
    """All violated simplicial identities and totality conditions (empty if valid)."""
    out: list = []
    D = X.truncation
    if len(X.levels) != D + 1:
        return [Violation("", "levels", (), f"expected {D + 1} levels, got {len(X.levels)}")]
    seen: dict = {}
    for n, level in enumerate(X.levels):
        for t in level:
            if t in seen:
                out.append(Violation(t, "unique-token", (n, seen[t])))
            seen[t] = n
    if out:
        return out

    def dim(t):
        return seen.get(t)

    for n, level in enumerate(X.levels):
        for t in level:
            fs = X.faces.get(t)
            ds = X.degeneracies.get(t)
            if fs is None or len(fs) != (n + 1 if n else 0):
                out.append(Violation(t, "missing-face", (), f"expected {n + 1 if n else 0} faces"))
                continue
            if ds is None or len(ds) != (n + 1 if n < D else 0):
                out.append(Violation(t, "missing-degeneracy", (), f"expected {n + 1 if n < D else 0}"))
                continue
            for i, f in enumerate(fs):
                if dim(f) != n - 1:
                    out.append(Violation(t, "face-dimension", (i,)))
            for i, s in enumerate(ds):
                if dim(s) != n + 1:
                    out.append(Violation(t, "degeneracy-dimension", (i,)))
    if out:
        return out

    F, S = X.faces, X.degeneracies
    for n, level in enumerate(X.levels):
        for t in level:
            if n >= 2:
                for j in range(n + 1):
                    for i in range(j):
                        if F[F[t][j]][i] != F[F[t][i]][j - 1]:
                            out.append(Violation(t, "d_i d_j = d_{j-1} d_i", (i, j)))
            if n + 2 <= D:
                for j in range(n + 1):
                    for i in range(j + 1):
                        if S[S[t][j]][i] != S[S[t][i]][j + 1]:
                            out.append(Violation(t, "s_i s_j = s_{j+1} s_i", (i, j)))
            if n + 1 <= D:
                for j in range(n + 1):
                    sj = S[t][j]
                    for i in range(n + 2):
                        got = F[sj][i]
                        if i < j:
                            want = S[F[t][i]][j - 1] if n >= 1 else None
                        elif i in (j, j + 1):
                            want = t
                        else:
                            want = S[F[t][i - 1]][j] if n >= 1 else None
                        if want is not None and got != want:
                            out.append(Violation(t, "d_i s_j", (i, j)))
    return out


def validate_map(f: SimplicialMap) -> list:
    """All (simplex, operator) pairs where ``f`` fails to commute (empty if simplicial)."""
    X, Y = f.source, f.target
    if X.truncation != Y.truncation:
        raise TruncationError("source and target truncations differ")
    out: list = []
    for t in X.tokens():
        if t not in f.mapping:
            out.append(Violation(t, "total", (), "no image"))
            continue
        y = f.mapping[t]
        if y not in Y or Y.dim(y) != X.dim(t):
            out.append(Violation(t, "dimension", (), f"image {y!r}"))
    if out:
        return out
    for t in X.tokens():
        y = f.mapping[t]
        for i, ft in enumerate(X.faces[t]):
            if f.mapping[ft] != Y.faces[y][i]:
                out.append(Violation(t, "face", (i,), f"f(d_{i} x)={f.mapping[ft]!r} d_{i} f(x)={Y.faces[y][i]!r}"))
        for i, st in enumerate(X.degeneracies[t]):
            if f.mapping[st] != Y.degeneracies[y][i]:
                out.append(Violation(t, "degeneracy", (i,)))
    return out


def nondegenerate_simplices(X: TruncatedSimplicialSet, n: int) -> tuple:
    if n > X.truncation or n < 0:
        raise TruncationError(f"dimension {n} outside 0..{X.truncation}")
    return X.nondegenerate(n)


# ---------------------------------------------------------------------------
# isomorphism search


def _refine_colours(X: TruncatedSimplicialSet, Y: TruncatedSimplicialSet) -> tuple:
    """Joint colour refinement of both complexes; equal colours are necessary for matching."""
    palette: dict = {}

    def initial(Z):
        return {t: (Z.dim(t), Z.is_nondegenerate(t)) for t in Z.tokens()}

    def cofaces(Z):
        co: dict = {t: [] for t in Z.tokens()}
        for t in Z.tokens():
            for i, f in enumerate(Z.faces[t]):
                co[f].append((i, t))
        return co

    cx, cy = initial(X), initial(Y)
    cox, coy = cofaces(X), cofaces(Y)
    n_colours = -1
    while True:
        def step(Z, c, co):
            out = {}
            for t in Z.tokens():
                sig = (
                    c[t],
                    tuple(c[f] for f in Z.faces[t]),
                    tuple(c[s] for s in Z.degeneracies[t]),
                    tuple(sorted((i, c[u]) for i, u in co[t])),
                )
                out[t] = palette.setdefault(sig, len(palette))
            return out

        palette.clear()
        cx, cy = step(X, cx, cox), step(Y, cy, coy)
        count = len(set(cx.values()) | set(cy.values()))
        if count == n_colours:
            return cx, cy
        n_colours = count


def find_isomorphism(
    X: TruncatedSimplicialSet,
    Y: TruncatedSimplicialSet,
    accept: Callable[[SimplicialMap], bool] | None = None,
) -> SimplicialMap | None:
    """An invertible simplicial map ``X -> Y`` (satisfying ``accept``), or ``None``."""
    if X.truncation != Y.truncation or X.counts() != Y.counts():
        return None
    if X.nondegenerate_counts() != Y.nondegenerate_counts():
        return None
    cx, cy = _refine_colours(X, Y)
    from collections import Counter

    if Counter(cx.values()) != Counter(cy.values()):
        return None
    by_colour: dict = {}
    for t in Y.tokens():
        if Y.is_nondegenerate(t):
            by_colour.setdefault(cy[t], []).append(t)
    class_size = Counter(cx.values())
    order = sorted(
        (t for t in X.tokens() if X.is_nondegenerate(t)),
        key=lambda t: (-X.dim(t), class_size[cx[t]], X.dim(t), X.position(t)),
    )

    def propagate(fwd, bwd, a, b):
        stack = [(a, b)]
        while stack:
            a, b = stack.pop()
            if a in fwd:
                if fwd[a] != b:
                    return False
                continue
            if b in bwd or cx[a] != cy[b]:
                return False
            fwd[a] = b
            bwd[b] = a
            stack.extend(zip(X.faces[a], Y.faces[b]))
            stack.extend(zip(X.degeneracies[a], Y.degeneracies[b]))
        return True

    def candidates(fwd, bwd, idx):
        while idx < len(order) and order[idx] in fwd:
            idx += 1
        if idx == len(order):
            return idx, None
        x = order[idx]
        return idx, iter([(x, y) for y in by_colour.get(cx[x], ()) if y not in bwd])

    # depth-first search; each frame holds a partial bijection and its untried branches
    idx, it = candidates({}, {}, 0)
    frames = [({}, {}, idx, it)]
    while frames:
        fwd, bwd, idx, it = frames[-1]
        if it is None:
            frames.pop()
            if len(fwd) == len(X):
                candidate = SimplicialMap(X, Y, fwd)
                if accept is None or accept(candidate):
                    return candidate
            continue
        for x, y in it:
            f2, b2 = dict(fwd), dict(bwd)
            if propagate(f2, b2, x, y):
                nidx, nit = candidates(f2, b2, idx + 1)
                frames.append((f2, b2, nidx, nit))
                break
        else:
            frames.pop()
    return None


def inverse_map(f: SimplicialMap) -> SimplicialMap:
    if not f.is_injective() or not f.is_surjective():
        raise SimplicialError("map is not bijective")
    return SimplicialMap(f.target, f.source, {y: x for x, y in f.mapping.items()})
