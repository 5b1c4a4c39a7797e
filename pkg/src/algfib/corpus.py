"""Named small complexes used by tests, the CLI (``builtin:NAME``) and the benchmarks."""

from __future__ import annotations

from typing import Callable

from .algebraic import AlgebraicComplex, choose_fillers
from .colimits import coequalizer, coproduct
from .horns import Mode
from .sset import (
    ComplexBuilder,
    Functor,
    SimplicialMap,
    TruncatedSimplicialSet,
    boundary_complex,
    cyclic_monoid,
    empty_complex,
    horn_complex,
    nerve,
    ordinal_category,
    product_category,
    standard_simplex,
    walking_isomorphism,
)


def circle(D: int) -> TruncatedSimplicialSet:
    """``Delta(1)`` with its endpoints identified: one vertex, one loop."""
    pt = standard_simplex(0, D)
    I = standard_simplex(1, D)
    ends = []
    for v in "01":
        ends.append(SimplicialMap(pt, I, {t: v * len(t) for t in pt.tokens()}))
    return coequalizer(*ends).apex


def two_triangles(D: int = 2) -> TruncatedSimplicialSet:
    """Two 2-simplices on the spine ``0 -> 1 -> 2`` with different long edges ``a`` and ``b``."""
    b = ComplexBuilder(D)
    for v in "012":
        b.add_simplex(v)
    b.add_simplex("01", ("1", "0"))
    b.add_simplex("12", ("2", "1"))
    b.add_simplex("a", ("2", "0"))
    b.add_simplex("b", ("2", "0"))
    b.add_simplex("T1", ("12", "a", "01"))
    b.add_simplex("T2", ("12", "b", "01"))
    return b.freeze()


def two_points(D: int) -> TruncatedSimplicialSet:
    pt = standard_simplex(0, D)
    return coproduct(pt, pt, names=("L", "R")).apex


def square_category():
    return product_category(ordinal_category(1), ordinal_category(1))


def _entries() -> dict:
    d: dict = {
        "empty": lambda: empty_complex(3),
        "point1": lambda: standard_simplex(0, 1),
        "point2": lambda: standard_simplex(0, 2),
        "point3": lambda: standard_simplex(0, 3),
        "delta1": lambda: standard_simplex(1, 2),
        "delta2": lambda: standard_simplex(2, 2),
        "delta2_d3": lambda: standard_simplex(2, 3),
        "delta3": lambda: standard_simplex(3, 3),
        "boundary1": lambda: boundary_complex(1, 1)[0],
        "boundary2": lambda: boundary_complex(2, 2)[0],
        "boundary3": lambda: boundary_complex(3, 3)[0],
        "horn1_0": lambda: horn_complex(1, 0, 1)[0],
        "horn2_0": lambda: horn_complex(2, 0, 2)[0],
        "horn2_1": lambda: horn_complex(2, 1, 2)[0],
        "horn3_1": lambda: horn_complex(3, 1, 3)[0],
        "nerve_iso2": lambda: nerve(walking_isomorphism(), 2),
        "nerve_iso3": lambda: nerve(walking_isomorphism(), 3),
        "nerve_ord1": lambda: nerve(ordinal_category(1), 2),
        "nerve_ord2": lambda: nerve(ordinal_category(2), 2),
        "nerve_z2": lambda: nerve(cyclic_monoid(2), 2),
        "nerve_z3": lambda: nerve(cyclic_monoid(3), 2),
        "nerve_square": lambda: nerve(square_category(), 2),
        "circle1": lambda: circle(1),
        "circle2": lambda: circle(2),
        "two_triangles": lambda: two_triangles(2),
        "two_points": lambda: two_points(2),
    }
    return d


COMPLEXES: dict = _entries()


def complex_named(name: str) -> TruncatedSimplicialSet:
    try:
        return COMPLEXES[name]()
    except KeyError:
        raise KeyError(f"unknown builtin complex {name!r}; known: {', '.join(sorted(COMPLEXES))}") from None


def corpus() -> dict:
    """Fresh copies of every named complex."""
    return {name: make() for name, make in COMPLEXES.items()}


def _alg(name: str, mode: Mode) -> Callable[[], AlgebraicComplex]:
    return lambda: choose_fillers(complex_named(name), mode)


ALGEBRAIC: dict = {
    "point1_kan": _alg("point1", Mode.KAN),
    "point2_kan": _alg("point2", Mode.KAN),
    "point2_quasi": _alg("point2", Mode.QUASI),
    "delta1_quasi": _alg("delta1", Mode.QUASI),
    "delta2_quasi": _alg("delta2", Mode.QUASI),
    "nerve_iso2_kan": _alg("nerve_iso2", Mode.KAN),
    "nerve_iso2_quasi": _alg("nerve_iso2", Mode.QUASI),
    "nerve_z2_kan": _alg("nerve_z2", Mode.KAN),
    "nerve_ord2_quasi": _alg("nerve_ord2", Mode.QUASI),
    "nerve_square_quasi": _alg("nerve_square", Mode.QUASI),
    "two_triangles_quasi": _alg("two_triangles", Mode.QUASI),
}


def algebraic_named(name: str) -> AlgebraicComplex:
    try:
        return ALGEBRAIC[name]()
    except KeyError:
        raise KeyError(f"unknown builtin algebraic complex {name!r}") from None


def algebraic_corpus() -> dict:
    return {name: make() for name, make in ALGEBRAIC.items()}


def idempotent_functors() -> list:
    """``(name, category, idempotent endofunctor)`` triples for split coequalizer tests."""
    out = []
    o1 = ordinal_category(1)
    out.append(("ord1_const0", o1, Functor(o1, o1, {"0": "0", "1": "0"}, {"00": "00", "01": "00", "11": "00"})))
    o2 = ordinal_category(2)
    out.append((
        "ord2_collapse12",
        o2,
        Functor(
            o2, o2, {"0": "0", "1": "1", "2": "1"},
            {"00": "00", "01": "01", "02": "01", "11": "11", "12": "11", "22": "11"},
        ),
    ))
    iso = walking_isomorphism()
    out.append(("iso_const0", iso, Functor(iso, iso, {"0": "0", "1": "0"}, {m: "id0" for m in iso.morphisms})))
    z2 = cyclic_monoid(2)
    out.append(("z2_trivial", z2, Functor(z2, z2, {"*": "*"}, {"e": "e", "a": "e"})))
    sq = square_category()
    proj = {}
    for f in sq.morphisms:
        first = f.split(".")[0]
        proj[f] = f"{first}.00"
    out.append((
        "square_project",
        sq,
        Functor(sq, sq, {x: f"{x.split('.')[0]}.0" for x in sq.objects}, proj),
    ))
    out.append(("ord2_identity", o2, Functor(o2, o2, {x: x for x in o2.objects}, {m: m for m in o2.morphisms})))
    return out
