import dataclasses
import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algfib.errors import SimplicialError, TruncationError
from algfib.sset import (
    ComplexBuilder,
    SimplicialMap,
    boundary_complex,
    compose,
    constant_map,
    find_isomorphism,
    horn_complex,
    identity_map,
    inverse_map,
    nerve,
    nerve_map,
    nondegenerate_simplices,
    ordinal_category,
    retruncate,
    standard_simplex,
    validate_map,
    validate_sset,
    walking_isomorphism,
)

from conftest import monotone_maps


@pytest.mark.parametrize("n,D", [(0, 0), (0, 2), (1, 1), (1, 3), (2, 2), (2, 3), (3, 3)])
def test_standard_simplex_level_sizes_match_monotone_maps(n, D):
    X = standard_simplex(n, D)
    assert [len(level) for level in X.levels] == [len(monotone_maps(m, n)) for m in range(D + 1)]
    assert validate_sset(X) == []


def test_standard_simplex_examples():
    assert [len(lv) for lv in standard_simplex(0, 2).levels] == [1, 1, 1]
    X = standard_simplex(1, 1)
    assert sorted(X.levels[1]) == ["00", "01", "11"]
    assert standard_simplex(2, 2).nondegenerate_counts() == (3, 3, 1)


def test_nondegenerate_are_injective_maps():
    for n, D in [(2, 3), (3, 3)]:
        X = standard_simplex(n, D)
        for m in range(D + 1):
            inj = [f for f in monotone_maps(m, n) if len(set(f)) == m + 1]
            assert len(nondegenerate_simplices(X, m)) == len(inj)


def test_boundary_examples():
    B, inc = boundary_complex(1, 1)
    assert sorted(B.levels[1]) == ["00", "11"]
    assert B.nondegenerate_counts() == (2, 0)
    B2, inc2 = boundary_complex(2, 2)
    assert B2.nondegenerate_counts() == (3, 3, 0)
    assert inc2.is_injective() and validate_map(inc2) == []
    with pytest.raises(ValueError):
        boundary_complex(0, 1)


def test_horn_examples():
    L, inc = horn_complex(1, 0, 1)
    assert L.levels[0] == ("0",) and L.levels[1] == ("00",)
    L21, _ = horn_complex(2, 1, 2)
    assert L21.nondegenerate_counts() == (3, 2, 0)
    L20, _ = horn_complex(2, 0, 2)
    assert set(L21.nondegenerate(1)) == {"01", "12"}
    assert set(L20.nondegenerate(1)) == {"01", "02"}
    with pytest.raises(ValueError):
        horn_complex(2, 3, 2)


def test_nerve_examples():
    pt = nerve(ordinal_category(0), 2)
    assert pt.nondegenerate_counts() == (1, 0, 0)
    I = nerve(walking_isomorphism(), 3)
    assert I.nondegenerate_counts() == (2, 2, 2, 2)
    assert len(nondegenerate_simplices(I, 2)) == 2
    for D in (1, 2, 3):
        assert find_isomorphism(nerve(ordinal_category(1), D), standard_simplex(1, D)) is not None


def test_find_isomorphism_examples(complexes):
    for name in ("delta2", "nerve_iso2", "circle2", "two_triangles"):
        X = complexes[name]
        f = find_isomorphism(X, X)
        assert f is not None and validate_map(f) == []
        assert validate_map(inverse_map(f)) == []
    B, _ = boundary_complex(1, 1)
    assert find_isomorphism(standard_simplex(1, 1), B) is None


def test_find_isomorphism_respects_renaming(complexes):
    X = complexes["two_triangles"]
    rename = {t: f"r.{t}" for t in X.tokens()}
    Y = dataclasses.replace(
        X,
        levels=tuple(tuple(rename[t] for t in reversed(lv)) for lv in X.levels),
        faces={rename[t]: tuple(rename[f] for f in fs) for t, fs in X.faces.items()},
        degeneracies={rename[t]: tuple(rename[s] for s in ss) for t, ss in X.degeneracies.items()},
        provenance={},
    )
    assert validate_sset(Y) == []
    f = find_isomorphism(X, Y)
    assert f is not None and f.is_injective() and f.is_surjective()


def test_validate_sset_counterexample():
    X = standard_simplex(2, 2)
    faces = dict(X.faces)
    d = list(faces["012"])
    d[1] = "00"
    faces["012"] = tuple(d)
    bad = validate_sset(dataclasses.replace(X, faces=faces))
    assert len(bad) == 1
    v = bad[0]
    assert v.simplex == "012" and v.indices == (0, 1)
    assert "d_i d_j" in v.identity


def test_validate_map_examples(complexes):
    X = complexes["delta2"]
    assert validate_map(identity_map(X)) == []
    assert validate_map(constant_map(X, complexes["point2"], complexes["point2"].levels[0][0])) == []
    D1 = standard_simplex(1, 1)
    m = {t: t for t in D1.tokens()}
    m["01"] = "00"
    bad = validate_map(SimplicialMap(D1, D1, m))
    assert len(bad) == 1 and bad[0].simplex == "01"
    with pytest.raises(TruncationError):
        validate_map(SimplicialMap(standard_simplex(0, 1), standard_simplex(0, 2), {}))


def test_nondegenerate_rejects_dimension_above_truncation():
    with pytest.raises(TruncationError):
        nondegenerate_simplices(standard_simplex(1, 1), 2)


def test_corpus_valid(complexes):
    assert len(complexes) >= 20
    for name, X in complexes.items():
        assert validate_sset(X) == [], name
        assert nondegenerate_simplices(X, 0) == tuple(X.levels[0])


def test_builder_rejects_bad_faces():
    b = ComplexBuilder(2)
    b.add_simplex("a")
    b.add_simplex("b")
    with pytest.raises(SimplicialError):
        b.add_simplex("e", ("a", "zz"))
    with pytest.raises(SimplicialError):
        b.add_simplex("a")


def test_builder_eager_degeneracies():
    b = ComplexBuilder(3)
    b.add_simplex("x")
    X = b.freeze()
    assert [len(lv) for lv in X.levels] == [1, 1, 1, 1]
    assert validate_sset(X) == []


def test_retruncate_roundtrip():
    X = standard_simplex(2, 2)
    Y = retruncate(retruncate(X, 3), 2)
    assert Y == X
    assert retruncate(X, 3).counts() == standard_simplex(2, 3).counts()


def test_nerve_functor_maps_are_simplicial():
    from algfib.corpus import idempotent_functors

    for name, C, F in idempotent_functors():
        f = nerve_map(F, 2)
        assert validate_map(f) == [], name
        assert compose(f, f) == f, name


@settings(max_examples=40, deadline=None)
@given(n=st.integers(0, 3), D=st.integers(0, 3), data=st.data())
def test_act_matches_composition(n, D, data):
    X = standard_simplex(n, D)
    m = data.draw(st.integers(0, D))
    x = data.draw(st.sampled_from(X.levels[m]))
    k = data.draw(st.integers(0, D))
    op = data.draw(st.sampled_from(monotone_maps(k, m)))
    # tokens of a standard simplex are the vertex sequences themselves
    seq = [int(c) for c in x]
    assert X.act(x, op) == "".join(str(seq[i]) for i in op)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3))
def test_boundary_plus_top_is_simplex(n, D):
    B, inc = boundary_complex(n, D)
    X = inc.target
    missing = set(X.tokens()) - set(inc.image())
    surj = {"".join(map(str, f)) for m in range(D + 1) for f in monotone_maps(m, n) if set(f) == set(range(n + 1))}
    assert missing == surj


def test_monotone_oracle_sanity():
    assert len(monotone_maps(1, 1)) == 3
    assert all(len(f) == 3 for f in monotone_maps(2, 4))
    assert len(list(itertools.combinations_with_replacement(range(3), 3))) == len(monotone_maps(2, 2))
