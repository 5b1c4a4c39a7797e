import pytest

from algfib.colimits import (
    DiagramSpec,
    Edge,
    chain_colimit,
    coequalizer,
    coproduct,
    equalizer,
    general_colimit,
    product,
    pushout,
    quotient,
)
from algfib.corpus import circle, complex_named
from algfib.errors import SimplicialError, TruncationError
from algfib.sset import (
    SimplicialMap,
    boundary_complex,
    compose,
    constant_map,
    find_isomorphism,
    horn_complex,
    identity_map,
    inclusion_map,
    simplex_operators,
    standard_simplex,
    validate_map,
    validate_sset,
)

from conftest import all_maps, monotone_maps, naive_classes


def vertex_map(D, X, v):
    return constant_map(standard_simplex(0, D), X, v)


def naive_level_sizes(nodes, edges, D):
    """Class counts per level of the disjoint union modulo the edge relation."""
    sizes = []
    for n in range(D + 1):
        elems = [(name, t) for name, X in nodes for t in X.levels[n]]
        pairs = [((s, x), (t, e.mapping[x])) for s, t, e in edges for x in e.source.levels[n]]
        sizes.append(len(naive_classes(elems, pairs)))
    return sizes


def check_result(res):
    assert validate_sset(res.apex) == []
    for leg in res.legs.values():
        assert validate_map(leg) == []


def test_pushout_point_edge():
    D = 1
    pt = standard_simplex(0, D)
    L, inc = horn_complex(1, 0, D)
    res = pushout(constant_map(L, pt, "0"), inc)
    check_result(res)
    assert len(res.apex.levels[0]) == 2
    assert res.apex.nondegenerate_counts() == (2, 1)
    assert res.legs["B"].is_injective()


def test_pushout_along_identity_is_target(complexes):
    X = complexes["two_triangles"]
    res = pushout(identity_map(X), identity_map(X))
    assert find_isomorphism(res.apex, X) is not None


def test_pushout_attaches_one_cell():
    B, inc = boundary_complex(2, 2)
    X = complex_named("two_triangles")
    before = X.nondegenerate_counts()
    # boundary of a triangle mapped onto the boundary of T1
    f = SimplicialMap(B, X, {t: X.act("T1", op) for t, op in simplex_operators(2, 2).items() if t in B})
    assert validate_map(f) == []
    res = pushout(f, inc)
    check_result(res)
    after = res.apex.nondegenerate_counts()
    assert sum(after) - sum(before) == 1
    assert after[2] == before[2] + 1


def test_circle_coequalizer():
    D = 1
    I = standard_simplex(1, D)
    res = coequalizer(vertex_map(D, I, "0"), vertex_map(D, I, "1"))
    check_result(res)
    assert res.apex.nondegenerate_counts() == (1, 1)
    assert res.legs["Y"].is_surjective()


def test_coequalizer_of_equal_maps():
    X = complex_named("delta2")
    f = vertex_map(2, X, "1")
    res = coequalizer(f, f)
    assert find_isomorphism(res.apex, X) is not None


def test_quotient_creates_loop():
    res = quotient(standard_simplex(2, 2), [("02", "01")])
    check_result(res)
    assert res.apex.nondegenerate_counts() == (2, 2, 1)


def naive_congruence_sizes(X, pairs):
    """Oracle for quotients: close the pairs under every operator, then count classes."""
    D = X.truncation
    rel = set(pairs)
    while True:
        extra = set()
        for a, b in rel:
            n = X.dim(a)
            for m in range(D + 1):
                for op in monotone_maps(m, n):
                    p = (X.act(a, op), X.act(b, op))
                    if p not in rel:
                        extra.add(p)
        if not extra:
            break
        rel |= extra
    return [len(naive_classes(list(X.levels[n]), [p for p in rel if X.dim(p[0]) == n])) for n in range(D + 1)]


@pytest.mark.parametrize(
    "name,pairs",
    [
        ("delta2", [("02", "01")]),
        ("delta2", [("0", "2")]),
        ("two_triangles", [("T1", "T2")]),
        ("two_triangles", [("a", "b")]),
        ("delta3", [("012", "123")]),
        ("nerve_iso2", [("0", "1")]),
    ],
)
def test_quotient_matches_naive_congruence(name, pairs):
    X = complex_named(name)
    res = quotient(X, pairs)
    check_result(res)
    assert [len(lv) for lv in res.apex.levels] == naive_congruence_sizes(X, pairs)


def _span(D):
    pt = standard_simplex(0, D)
    L, inc = horn_complex(1, 0, D)
    return constant_map(L, pt, "0"), inc


@pytest.mark.parametrize("D", [1, 2, 3])
def test_pushout_sizes_match_naive(D):
    f, g = _span(D)
    res = pushout(f, g)
    A, X, B = f.source, f.target, g.target
    assert [len(lv) for lv in res.apex.levels] == naive_level_sizes(
        [("X", X), ("B", B), ("A", A)], [("A", "X", f), ("A", "B", g)], D
    )


def test_general_colimit_reproduces_pushout_and_coequalizer():
    f, g = _span(2)
    spec = DiagramSpec(
        {"X": f.target, "B": g.target, "A": f.source},
        [Edge("f", "A", "X", f), Edge("g", "A", "B", g)],
    )
    assert find_isomorphism(general_colimit(spec).apex, pushout(f, g).apex) is not None
    I = standard_simplex(1, 2)
    u, v = vertex_map(2, I, "0"), vertex_map(2, I, "1")
    spec2 = DiagramSpec({"Y": I, "P": u.source}, [Edge("u", "P", "Y", u), Edge("v", "P", "Y", v)])
    assert find_isomorphism(general_colimit(spec2).apex, coequalizer(u, v).apex) is not None
    one = general_colimit(DiagramSpec({"only": I}))
    assert find_isomorphism(one.apex, I) is not None


def test_pushout_universal_property_against_all_cocones():
    D = 1
    f, g = _span(D)
    res = pushout(f, g)
    Z = circle(D)
    for a in all_maps(f.target, Z):
        for b in all_maps(g.target, Z):
            if compose(a, f) != compose(b, g):
                continue
            cocone = {"X": a, "B": b, "A": compose(a, f)}
            m = res.mediate(cocone)
            assert validate_map(m) == []
            factoring = [h for h in all_maps(res.apex, Z) if compose(h, res.legs["X"]) == a and compose(h, res.legs["B"]) == b]
            assert factoring == [m]


def test_coequalizer_universal_property_against_all_cocones():
    D = 1
    I = standard_simplex(1, D)
    u, v = vertex_map(D, I, "0"), vertex_map(D, I, "1")
    res = coequalizer(u, v)
    Z = complex_named("circle1")
    for phi in all_maps(I, Z):
        if compose(phi, u) != compose(phi, v):
            with pytest.raises(SimplicialError):
                res.mediate({"Y": phi, "X": compose(phi, u)})
            continue
        m = res.mediate({"Y": phi, "X": compose(phi, u)})
        assert [h for h in all_maps(res.apex, Z) if compose(h, res.legs["Y"]) == phi] == [m]


def test_chain_colimit_is_last_term():
    D = 2
    L, a = horn_complex(2, 1, D)
    Delta = a.target
    B, j = boundary_complex(2, D)
    ident = identity_map(Delta)
    res = chain_colimit([a, ident])
    check_result(res)
    assert res.apex == Delta
    assert all(leg.is_injective() for leg in res.legs.values())
    res2 = chain_colimit([identity_map(L), identity_map(L)])
    assert res2.apex == L
    with pytest.raises(SimplicialError):
        chain_colimit([constant_map(Delta, standard_simplex(0, D), "0")])
    with pytest.raises(SimplicialError):
        chain_colimit([a, j])


def test_pushout_of_injective_has_injective_leg(complexes):
    D = 2
    B, inc = boundary_complex(2, D)
    for name in ("point2", "delta2", "nerve_iso2", "circle2"):
        X = complexes[name]
        f = constant_map(B, X, X.levels[0][0])
        res = pushout(f, inc)
        check_result(res)
        assert res.legs["X"].is_injective(), name


def test_truncation_and_shape_errors():
    a = identity_map(standard_simplex(0, 1))
    b = identity_map(standard_simplex(0, 2))
    with pytest.raises(TruncationError):
        pushout(a, b)
    I = standard_simplex(1, 1)
    with pytest.raises(SimplicialError):
        coequalizer(vertex_map(1, I, "0"), identity_map(I))
    with pytest.raises(SimplicialError):
        DiagramSpec({"A": I}, [Edge("e", "A", "nowhere", identity_map(I))])
    with pytest.raises(TruncationError):
        DiagramSpec({"A": I, "B": standard_simplex(0, 2)})


def test_coproduct_and_product_sizes():
    X, Y = complex_named("delta1"), complex_named("nerve_iso2")
    res = coproduct(X, Y)
    check_result(res)
    assert [len(lv) for lv in res.apex.levels] == [len(a) + len(b) for a, b in zip(X.levels, Y.levels)]
    P, p, q = product(X, Y)
    assert validate_sset(P) == [] and validate_map(p) == [] and validate_map(q) == []
    assert [len(lv) for lv in P.levels] == [len(a) * len(b) for a, b in zip(X.levels, Y.levels)]


def test_equalizer_is_agreement_subcomplex():
    I = standard_simplex(1, 2)
    swap_free = identity_map(I)
    collapse = constant_map(I, I, "0")
    E, inc = equalizer(swap_free, collapse)
    assert validate_sset(E) == []
    assert set(inc.image()) == {"0", "00", "000"}
    assert inclusion_map(E, I) == inc
