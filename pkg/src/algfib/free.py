"""Staged free construction of algebraic fibrant complexes.

Stage ``m+1`` glues one filler cell along every admitted horn of the
stage-``m`` complex that does not factor through stage ``m-1`` (at the
first stage: every horn).  Each glued cell contributes a new ``n``-simplex
and its missing ``(n-1)``-face, together with their degeneracies.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .algebraic import AlgebraicComplex, AlgMorphism
from .errors import BudgetExhausted, SimplicialError
from .horns import Horn, Mode, enumerate_horns, iter_horns
from .sset import (
    ComplexBuilder,
    Provenance,
    SimplicialMap,
    TruncatedSimplicialSet,
    horn_complex,
    retruncate,
    simplex_operators,
    standard_simplex,
    subcomplex,
)


@dataclass(frozen=True)
class Attachment:
    stage: int
    horn: Horn
    filler: str
    missing_face: str


@dataclass(frozen=True, eq=False)
class StagedComplex:
    """Result of a staged construction with its bookkeeping.

    ``base`` is the stage-0 complex.  ``examined[m][n]`` counts the ``n``-horns
    looked at when building stage ``m``; ``residue`` lists admitted horns still
    unfilled after the last stage.
    """

    result: AlgebraicComplex
    base: TruncatedSimplicialSet
    stage_of: Mapping[str, int]
    attachments: tuple
    budget: tuple
    residue_source: object = ()
    examined: Mapping[int, Mapping[int, int]] = field(default_factory=dict)
    structure_map: SimplicialMap | None = None
    legs: Mapping[str, SimplicialMap] = field(default_factory=dict)
    uncovered_source: object = ()

    @staticmethod
    def _materialize(source, X) -> tuple:
        items = source() if callable(source) else source
        return tuple(sorted(items, key=lambda h: h.sort_key(X)))

    @cached_property
    def residue(self) -> tuple:
        """Admitted horns left without a filler, in canonical order."""
        return self._materialize(self.residue_source, self.underlying)

    @cached_property
    def uncovered(self) -> tuple:
        return self._materialize(self.uncovered_source, self.underlying)

    def has_residue(self) -> bool:
        if "residue" in self.__dict__:
            return bool(self.residue)
        src = self.residue_source
        return any(True for _ in (src() if callable(src) else src))

    @property
    def underlying(self) -> TruncatedSimplicialSet:
        return self.result.underlying

    @property
    def mode(self) -> Mode:
        return self.result.mode

    @property
    def stages(self) -> int:
        return self.budget[1]

    def stage_tokens(self, m: int) -> list:
        return [t for t in self.underlying.tokens() if self.stage_of[t] <= m]

    def stage_subcomplex(self, m: int) -> tuple:
        """``(X_m, inclusion into the result)``."""
        return subcomplex(self.underlying, self.stage_tokens(m))

    def stage_inclusion(self, m: int) -> SimplicialMap:
        """``X_m -> X_{m+1}``."""
        lo, _ = self.stage_subcomplex(m)
        hi, _ = self.stage_subcomplex(m + 1)
        return SimplicialMap(lo, hi, {t: t for t in lo.tokens()})

    def stage_algebraic(self, m: int) -> AlgebraicComplex:
        """Stage ``m`` with the fillers it already contains."""
        S, _ = self.stage_subcomplex(m)
        keep = {t for t in S.tokens()}
        table = {
            h: t for h, t in self.result.table.items() if t in keep and all(s in keep for s in h.faces)
        }
        return AlgebraicComplex(S, self.mode, table)

    def new_nondegenerate(self, m: int) -> tuple:
        X = self.underlying
        return tuple(
            sum(1 for t in X.nondegenerate(n) if self.stage_of[t] == m) for n in range(X.truncation + 1)
        )


_TAG = re.compile(r"[te]\d+\.\d+")


def _fresh_prefix(tokens: Iterable[str]) -> str:
    tokens = list(tokens)
    for i in range(1, 10_000):
        prefix = "" if i == 1 else f"{i}:"
        pat = re.compile(re.escape(prefix) + _TAG.pattern) if prefix else _TAG
        if not any(pat.search(t) for t in tokens):
            return prefix
    raise SimplicialError("could not find fresh token names")


def missing_face_faces(X: TruncatedSimplicialSet, h: Horn) -> tuple:
    """Faces of the new ``(n-1)``-simplex ``d_k tau`` forced by the horn."""
    n, k = h.n, h.k
    if n == 1:
        return ()
    out = []
    for j in range(n):
        if j < k:
            out.append(X.face(h.face(j), k - 1))
        else:
            out.append(X.face(h.face(j + 1), k))
    return tuple(out)


def _saturate(
    X0: TruncatedSimplicialSet,
    mode: Mode,
    M: int,
    *,
    table0: Mapping[Horn, str] | None = None,
    admissible: Callable[[Horn], bool] | None = None,
    quillen: bool = False,
    stage_hook: Callable[[int, TruncatedSimplicialSet], None] | None = None,
) -> dict:
    D = X0.truncation
    builder = ComplexBuilder.from_complex(X0)
    stage_of = {t: 0 for t in X0.tokens()}
    table = dict(table0 or {})
    attachments: list = []
    examined: dict = {}
    prefix = _fresh_prefix(X0.tokens())
    current = X0
    for m in range(M):
        stage = m + 1
        if m == 0 or quillen:
            horns = enumerate_horns(current, mode)
        else:
            horns = enumerate_horns(current, mode, fresh=lambda t: stage_of[t] == m)
        if admissible is not None:
            horns = [h for h in horns if admissible(h)]
        examined[stage] = {n: sum(1 for h in horns if h.n == n) for n in range(D + 1)}
        j = 0
        for h in horns:
            if not quillen and h in table:
                continue
            e_tok = f"{prefix}e{stage}.{j}"
            t_tok = f"{prefix}t{stage}.{j}"
            j += 1
            label = str(h)
            builder.add_simplex(e_tok, missing_face_faces(current, h), Provenance("missing-face-of", label))
            faces = list(h.faces)
            faces.insert(h.k, e_tok)
            builder.add_simplex(t_tok, tuple(faces), Provenance("filler-of", label))
            if not quillen:
                table[h] = t_tok
            attachments.append(Attachment(stage, h, t_tok, e_tok))
        current = builder.freeze()
        for t in current.tokens():
            stage_of.setdefault(t, stage)
        if stage_hook is not None:
            stage_hook(stage, current)
    final = current

    def residue():
        if quillen:
            return
        # every horn without a face of the last stage was examined already
        fresh = None if M == 0 else (lambda t: stage_of[t] == M)
        for h in iter_horns(final, mode, fresh=fresh):
            if h not in table and (admissible is None or admissible(h)):
                yield h

    return {
        "complex": current,
        "table": table,
        "stage_of": stage_of,
        "attachments": tuple(attachments),
        "examined": examined,
        "residue": residue,
    }


def free(
    X: TruncatedSimplicialSet,
    mode: Mode | str,
    D: int | None = None,
    M: int = 1,
    *,
    quillen: bool = False,
) -> StagedComplex:
    """Staged free algebraic complex on ``X`` with stage budget ``M``.

    ``quillen`` switches to the unoptimised chain that glues along every horn
    at every stage (duplicates included); it is kept only for comparison and
    its table is empty.
    """
    mode = Mode.parse(mode)
    if M < 0:
        raise ValueError("stage budget must be >= 0")
    D = X.truncation if D is None else D
    X0 = retruncate(X, D)
    r = _saturate(X0, mode, M, quillen=quillen)
    A = AlgebraicComplex(r["complex"], mode, r["table"])
    return StagedComplex(
        result=A,
        base=X0,
        stage_of=r["stage_of"],
        attachments=r["attachments"],
        budget=(D, M),
        residue_source=r["residue"],
        examined=r["examined"],
        structure_map=SimplicialMap(X0, A.underlying, {t: t for t in X0.tokens()}),
    )


def unit(X: TruncatedSimplicialSet, staged: StagedComplex) -> SimplicialMap:
    """The stage-0 inclusion ``X -> free(X)``."""
    if X.levels != staged.base.levels:
        raise SimplicialError("staged complex was not built from this input")
    return SimplicialMap(X, staged.underlying, {t: t for t in X.tokens()})


def extend_along_fillers(
    staged: StagedComplex,
    base: Mapping[str, str],
    target: AlgebraicComplex,
) -> SimplicialMap:
    """The unique filler-preserving extension of ``base`` (a map on stage 0).

    Each attached filler goes to the target's distinguished filler of the
    image horn and its missing face to the ``k``-th face of that filler.
    Raises :class:`BudgetExhausted` when the target has no such filler.
    """
    src = staged.underlying
    Y = target.underlying
    mapping = {t: base[t] for t in staged.base.tokens()}

    def extend_degeneracies(x: str) -> None:
        for d in src.degeneracies_of(x):
            if d != x:
                mapping[d] = Y.act(mapping[x], src.normal_form(d)[1])

    for a in staged.attachments:
        h = Horn(a.horn.n, a.horn.k, tuple(mapping[s] for s in a.horn.faces))
        filler = target.table.get(h)
        if filler is None:
            raise BudgetExhausted(h, f"image horn {h} has no distinguished filler in the target")
        mapping[a.filler] = filler
        mapping[a.missing_face] = Y.face(filler, h.k)
        extend_degeneracies(a.missing_face)
        extend_degeneracies(a.filler)
    return SimplicialMap(src, Y, mapping)


def counit_eval(Z: AlgebraicComplex, FUZ: StagedComplex) -> AlgMorphism:
    """Fold ``free(U Z)`` onto ``Z``: identity on stage 0, fillers to distinguished fillers."""
    if FUZ.base.levels != Z.underlying.levels:
        raise SimplicialError("free complex was not built from the underlying complex of Z")
    if FUZ.mode is not Z.mode:
        raise ValueError("mode mismatch")
    eps = extend_along_fillers(FUZ, {t: t for t in Z.underlying.tokens()}, Z)
    return AlgMorphism(FUZ.result, Z, eps)


def free_map(
    phi: SimplicialMap,
    mode: Mode | str,
    D: int | None = None,
    M: int = 1,
    *,
    FX: StagedComplex | None = None,
    FY: StagedComplex | None = None,
) -> AlgMorphism:
    """``F(phi) : free(X) -> free(Y)`` at equal stage budgets."""
    mode = Mode.parse(mode)
    FX = FX or free(phi.source, mode, D, M)
    FY = FY or free(phi.target, mode, D, M)
    f = extend_along_fillers(FX, phi.mapping, FY.result)
    return AlgMorphism(FX.result, FY.result, f)


@dataclass(frozen=True, eq=False)
class Retract:
    r: AlgMorphism
    i: AlgMorphism
    free_simplex: StagedComplex
    free_horn: StagedComplex
    free_horn_big: StagedComplex
    holds: bool


def canonical_retract(n: int, k: int, mode: Mode | str, D: int | None = None, M: int = 1) -> Retract:
    """Left inverse ``r`` of ``F(Lambda^k(n)) -> F(Delta(n))``.

    ``r`` sends the top cell to the filler of the tautological horn in
    ``F(Lambda^k(n))`` and extends along fillers.  The target is built with
    one extra stage so that ``r`` is defined on all of ``F(Delta(n))`` at
    budget ``M``; ``holds`` records whether ``r i`` is the stage inclusion.
    """
    mode = Mode.parse(mode)
    if not mode.admits(n, k):
        raise SimplicialError(f"({n},{k}) is not an admitted horn in {mode.value} mode")
    D = n if D is None else D
    if n > D:
        raise SimplicialError("horn dimension exceeds truncation")
    L, incl = horn_complex(n, k, D)
    Delta = standard_simplex(n, D)
    F_delta = free(Delta, mode, D, M)
    F_horn = free(L, mode, D, M)
    F_big = free(L, mode, D, M + 1)
    ops = simplex_operators(n, D)
    iota = next(t for t, op in ops.items() if op == tuple(range(n + 1)))
    faces = tuple(Delta.face(iota, i) for i in range(n + 1) if i != k)
    top = F_big.result.table.get(Horn(n, k, faces))
    if top is None:
        raise BudgetExhausted(Horn(n, k, faces))
    base = {t: F_big.underlying.act(top, op) for t, op in ops.items()}
    r = AlgMorphism(F_delta.result, F_big.result, extend_along_fillers(F_delta, base, F_big.result))
    i = free_map(incl, mode, D, M, FX=F_horn, FY=F_delta)
    ri = {t: r.map.mapping[i.map.mapping[t]] for t in F_horn.underlying.tokens()}
    holds = all(ri[t] == t for t in ri)
    return Retract(r, i, F_delta, F_horn, F_big, holds)


GROWTH_COLUMNS = ("stage", "dim", "examined", "attached", "cumulative", "quillen_counterfactual")


def growth_stats(staged: StagedComplex, quillen: StagedComplex | None = None, *, compare: bool = True) -> list:
    """Per-stage, per-dimension growth of a staged complex.

    ``cumulative`` is the nondegenerate count through that stage and
    ``quillen_counterfactual`` the same count for the chain that glues along
    every horn at every stage.
    """
    D, M = staged.budget
    X = staged.underlying
    if compare and quillen is None:
        quillen = free(staged.base, staged.mode, D, M, quillen=True)
    attached: dict = {}
    for a in staged.attachments:
        attached[(a.stage, a.horn.n)] = attached.get((a.stage, a.horn.n), 0) + 1
    rows = []
    for m in range(1, M + 1):
        for n in range(D + 1):
            nd = X.nondegenerate(n)
            row = {
                "stage": m,
                "dim": n,
                "examined": staged.examined.get(m, {}).get(n, 0),
                "attached": attached.get((m, n), 0),
                "new": sum(1 for t in nd if staged.stage_of[t] == m),
                "cumulative": sum(1 for t in nd if staged.stage_of[t] <= m),
                "quillen_counterfactual": None,
            }
            if quillen is not None:
                Q = quillen.underlying
                row["quillen_counterfactual"] = sum(1 for t in Q.nondegenerate(n) if quillen.stage_of[t] <= m)
            rows.append(row)
    return rows


def growth_csv(rows: Sequence[Mapping]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=GROWTH_COLUMNS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: ("" if row.get(k) is None else row[k]) for k in GROWTH_COLUMNS})
    return buf.getvalue()
