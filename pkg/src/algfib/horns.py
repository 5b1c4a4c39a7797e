"""Horns in a truncated simplicial set: enumeration, fillers, fibrancy, factoring."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .errors import SimplicialError, TruncationError
from .sset import SimplicialMap, TruncatedSimplicialSet, is_operator_closed


class Mode(str, enum.Enum):
    KAN = "kan"
    QUASI = "quasi"

    def admits(self, n: int, k: int) -> bool:
        if self is Mode.KAN:
            return n >= 1 and 0 <= k <= n
        return n >= 2 and 0 < k < n

    def horn_indices(self, n: int) -> range:
        if self is Mode.KAN:
            return range(n + 1) if n >= 1 else range(0)
        return range(1, n) if n >= 2 else range(0)

    @property
    def min_dim(self) -> int:
        return 1 if self is Mode.KAN else 2

    @classmethod
    def parse(cls, value) -> "Mode":
        if isinstance(value, Mode):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown mode {value!r}; expected 'kan' or 'quasi'") from None


def is_outer(n: int, k: int) -> bool:
    return k == 0 or k == n


@dataclass(frozen=True, order=False)
class Horn:
    """A map ``Lambda^k(n) -> X`` given by its faces ``sigma_i`` for ``i != k`` (in order of ``i``)."""

    n: int
    k: int
    faces: tuple

    def face(self, i: int) -> str:
        if i == self.k:
            raise SimplicialError(f"horn has no face {i}")
        return self.faces[i if i < self.k else i - 1]

    def indexed_faces(self) -> Iterator[tuple]:
        others = [i for i in range(self.n + 1) if i != self.k]
        return zip(others, self.faces)

    def image(self, f: SimplicialMap) -> "Horn":
        return Horn(self.n, self.k, tuple(f.mapping[s] for s in self.faces))

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "faces": list(self.faces)}

    @classmethod
    def from_json(cls, data) -> "Horn":
        return cls(int(data["n"]), int(data["k"]), tuple(data["faces"]))

    def problems(self, X: TruncatedSimplicialSet) -> list:
        """Reasons this tuple is not a horn of ``X`` (empty if it is)."""
        n, k = self.n, self.k
        if n < 1 or not 0 <= k <= n:
            return [f"bad horn shape n={n}, k={k}"]
        if n > X.truncation:
            return [f"horn dimension {n} exceeds truncation {X.truncation}"]
        if len(self.faces) != n:
            return [f"expected {n} faces, got {len(self.faces)}"]
        out = []
        for i, s in self.indexed_faces():
            if s not in X or X.dim(s) != n - 1:
                out.append(f"face {i} ({s!r}) is not an {n - 1}-simplex")
        if out:
            return out
        for (i, si), (j, sj) in itertools.combinations(self.indexed_faces(), 2):
            if X.face(sj, i) != X.face(si, j - 1):
                out.append(f"d{i}(face {j}) != d{j - 1}(face {i})")
        return out

    def validate(self, X: TruncatedSimplicialSet) -> None:
        bad = self.problems(X)
        if bad:
            raise SimplicialError(f"invalid horn {self.to_json()}: {bad[0]}", bad)

    def sort_key(self, X: TruncatedSimplicialSet) -> tuple:
        return (self.n, self.k, tuple(X.position(s) for s in self.faces))

    def __str__(self):
        return f"L{self.k}[{self.n}]({', '.join(self.faces)})"


def _check_dims(X: TruncatedSimplicialSet, mode: Mode, dims) -> list:
    if dims is None:
        return list(range(mode.min_dim, X.truncation + 1))
    dims = sorted(set(dims))
    for n in dims:
        if n < 1 or n > X.truncation:
            raise TruncationError(f"horn dimension {n} outside 1..{X.truncation}")
    return [n for n in dims if n >= mode.min_dim]


def _horns_nk(
    X: TruncatedSimplicialSet,
    n: int,
    k: int,
    allowed: Callable[[int, str], bool] | None = None,
) -> Iterator[tuple]:
    """Compatible face tuples for ``(n, k)`` by backtracking over slots.

    ``allowed(slot, token)`` optionally filters candidates per slot.
    """
    slots = [i for i in range(n + 1) if i != k]
    level = X.levels[n - 1]
    if n == 1:
        for t in level:
            if allowed is None or allowed(0, t):
                yield (t,)
        return
    index = X.faces_index(n - 1)
    chosen: list = []

    def candidates(p: int):
        j = slots[p]
        if p == 0:
            return level
        # d_i sigma_j must equal d_{j-1} sigma_i for every earlier slot i
        i0 = slots[0]
        return index.get((i0, X.face(chosen[0], j - 1)), ())

    def extend(p: int):
        if p == len(slots):
            yield tuple(chosen)
            return
        j = slots[p]
        for t in candidates(p):
            if allowed is not None and not allowed(p, t):
                continue
            if any(X.face(t, slots[q]) != X.face(chosen[q], j - 1) for q in range(1, p)):
                continue
            chosen.append(t)
            yield from extend(p + 1)
            chosen.pop()

    yield from extend(0)


def iter_horns(
    X: TruncatedSimplicialSet,
    mode: Mode | str,
    dims: Iterable[int] | None = None,
    *,
    fresh: Callable[[str], bool] | None = None,
) -> Iterator[Horn]:
    """Lazy form of :func:`enumerate_horns`.

    With ``fresh`` set, the order within each ``(n, k)`` block is by the
    first fresh slot rather than canonical.
    """
    mode = Mode.parse(mode)
    for n in _check_dims(X, mode, dims):
        for k in mode.horn_indices(n):
            if fresh is None:
                for fs in _horns_nk(X, n, k):
                    yield Horn(n, k, fs)
                continue
            # split by the first slot holding a fresh face
            for pivot in range(n):
                def allowed(p, t, pivot=pivot):
                    if p < pivot:
                        return not fresh(t)
                    if p == pivot:
                        return fresh(t)
                    return True

                for fs in _horns_nk(X, n, k, allowed):
                    yield Horn(n, k, fs)


def enumerate_horns(
    X: TruncatedSimplicialSet,
    mode: Mode | str,
    dims: Iterable[int] | None = None,
    *,
    fresh: Callable[[str], bool] | None = None,
) -> list:
    """All horns of ``X`` admitted by ``mode`` in ``dims``, ordered by ``(n, k, face positions)``.

    With ``fresh`` given, only horns having at least one face satisfying it
    are returned.
    """
    out = list(iter_horns(X, mode, dims, fresh=fresh))
    if fresh is not None:
        out.sort(key=lambda h: h.sort_key(X))
    return out


def horns_brute_force(X: TruncatedSimplicialSet, mode: Mode | str, dims: Iterable[int] | None = None) -> list:
    """Oracle: every tuple of ``(n-1)``-simplices filtered by the compatibility equations."""
    mode = Mode.parse(mode)
    out = []
    for n in _check_dims(X, mode, dims):
        for k in mode.horn_indices(n):
            for fs in itertools.product(X.levels[n - 1], repeat=n):
                h = Horn(n, k, fs)
                if not h.problems(X):
                    out.append(h)
    return out


def count_horns(X: TruncatedSimplicialSet, mode: Mode | str, dims: Iterable[int] | None = None) -> dict:
    """``{(n, k): count}`` over the admitted shapes."""
    mode = Mode.parse(mode)
    counts = {}
    for n in _check_dims(X, mode, dims):
        for k in mode.horn_indices(n):
            counts[(n, k)] = sum(1 for _ in _horns_nk(X, n, k))
    return counts


def find_fillers(X: TruncatedSimplicialSet, h: Horn) -> list:
    """All ``n``-simplices whose faces other than ``k`` are the horn's faces."""
    h.validate(X)
    return list(X.fillers_index(h.n, h.k).get(h.faces, ()))


def check_fibrancy(X: TruncatedSimplicialSet, mode: Mode | str, dims: Iterable[int] | None = None) -> list:
    """Horns within the truncation that have no filler; empty means fibrant at truncation."""
    mode = Mode.parse(mode)
    out = []
    for h in enumerate_horns(X, mode, dims):
        if not X.fillers_index(h.n, h.k).get(h.faces):
            out.append(h)
    return out


def factors_through(h: Horn, S, X: TruncatedSimplicialSet | None = None) -> bool:
    """Whether the horn lands in the subcomplex ``S`` (a complex or a set of tokens).

    Since inclusions are levelwise injective the factorization is unique when it exists.
    """
    tokens = set(S.tokens()) if isinstance(S, TruncatedSimplicialSet) else set(S)
    if X is not None and not is_operator_closed(X, tokens):
        raise SimplicialError("subcomplex is not closed under faces and degeneracies")
    return all(s in tokens for s in h.faces)


def horn_map(h: Horn, X: TruncatedSimplicialSet) -> SimplicialMap:
    """The map ``Lambda^k(n) -> X`` encoded by ``h``."""
    from .sset import horn_complex, simplex_operators

    h.validate(X)
    L, _ = horn_complex(h.n, h.k, X.truncation)
    ops = simplex_operators(h.n, X.truncation)
    mapping = {}
    for t in L.tokens():
        op = ops[t]
        # the simplex misses some vertex i != k; read it off face i
        i = next(i for i in range(h.n + 1) if i != h.k and i not in op)
        inner = tuple(v if v < i else v - 1 for v in op)
        mapping[t] = X.act(h.face(i), inner)
    return SimplicialMap(L, X, mapping)


def horn_from_map(phi: SimplicialMap, n: int, k: int) -> Horn:
    """Inverse of :func:`horn_map`: read the faces off a map out of ``Lambda^k(n)``."""
    from .sset import _seq_token

    faces = []
    for i in range(n + 1):
        if i == k:
            continue
        seq = tuple(v for v in range(n + 1) if v != i)
        faces.append(phi.mapping[_seq_token(seq, n)])
    return Horn(n, k, tuple(faces))


def sort_horns(X: TruncatedSimplicialSet, horns: Sequence[Horn]) -> list:
    return sorted(horns, key=lambda h: h.sort_key(X))
