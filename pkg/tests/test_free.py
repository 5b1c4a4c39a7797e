import pytest

from algfib.algebraic import check_alg_morphism, forget_outer
from algfib.cli import main
from algfib.colimits import coproduct, pushout
from algfib.corpus import algebraic_named, complex_named, two_points
from algfib.errors import BudgetExhausted
from algfib.free import (
    canonical_retract,
    counit_eval,
    free,
    free_map,
    growth_csv,
    growth_stats,
    unit,
)
from algfib.horns import Horn, enumerate_horns, factors_through, horn_map
from algfib.sset import (
    SimplicialMap,
    compose,
    constant_map,
    find_isomorphism,
    horn_complex,
    identity_map,
    standard_simplex,
    validate_map,
    validate_sset,
)

from conftest import GOLDEN


def hand_pushout(X, mode):
    """Stage 1 built directly as one pushout of horn inclusions in the colimit engine."""
    D = X.truncation
    horns = enumerate_horns(X, mode)
    incs = [horn_complex(h.n, h.k, D)[1] for h in horns]
    A = coproduct(*[i.source for i in incs])
    B = coproduct(*[i.target for i in incs])
    g, f = {}, {}
    for j, (h, i) in enumerate(zip(horns, incs)):
        hm = horn_map(h, X)
        for t in i.source.tokens():
            a = A.legs[f"X{j}"].mapping[t]
            g[a] = B.legs[f"X{j}"].mapping[i.mapping[t]]
            f[a] = hm.mapping[t]
    return pushout(SimplicialMap(A.apex, X, f), SimplicialMap(A.apex, B.apex, g)).apex


@pytest.mark.parametrize("D,counts", [(1, (3, 2)), (2, (3, 5, 3))])
def test_free_point_census(D, counts):
    F = free(standard_simplex(0, D), "kan", D, 1)
    assert F.underlying.nondegenerate_counts() == counts
    assert len(F.result.table) == (2 if D == 1 else 5)
    assert find_isomorphism(hand_pushout(standard_simplex(0, D), "kan"), F.underlying) is not None


@pytest.mark.parametrize("D", [1, 2])
def test_free_point_golden(D, tmp_path):
    out = tmp_path / "out.json"
    code = main(["free", "--in", f"builtin:point{D}", "--mode", "kan", "--dim", str(D), "--stages", "1", "--out", str(out)])
    assert code == 2
    assert out.read_text() == (GOLDEN / f"free_point_kan_D{D}_M1.json").read_text()


@pytest.mark.parametrize("name", ["delta1", "nerve_iso2", "two_points", "circle2"])
def test_stage_one_matches_hand_pushout(name):
    X = complex_named(name)
    F = free(X, "kan", X.truncation, 1)
    assert find_isomorphism(hand_pushout(X, "kan"), F.underlying) is not None


def test_quasi_below_dimension_two_is_inert():
    for M in (0, 1, 3):
        X = standard_simplex(1, 1)
        F = free(X, "quasi", 1, M)
        assert F.underlying == X and F.result.table == {}
        assert not F.has_residue()


@pytest.mark.parametrize("name,mode", [("point2", "kan"), ("delta1", "quasi"), ("circle2", "quasi"), ("nerve_iso2", "quasi")])
def test_stage_monotonicity(name, mode):
    X = complex_named(name)
    F = free(X, mode, 2, 2)
    assert validate_sset(F.underlying) == []
    for m in range(3):
        S, inc = F.stage_subcomplex(m)
        Fm = free(X, mode, 2, m)
        assert S == Fm.underlying
        assert inc.is_injective()
    for m in range(2):
        assert F.stage_inclusion(m).is_injective()


@pytest.mark.parametrize("name,mode", [("point2", "kan"), ("circle2", "quasi"), ("two_triangles", "quasi")])
def test_attached_horns_do_not_factor_through_earlier_stage(name, mode):
    X = complex_named(name)
    F = free(X, mode, 2, 2)
    for a in F.attachments:
        if a.stage >= 2:
            assert not factors_through(a.horn, F.stage_tokens(a.stage - 2))
            assert factors_through(a.horn, F.stage_tokens(a.stage - 1))
        # each attachment contributes one filler and one missing face
        assert F.stage_of[a.filler] == a.stage == F.stage_of[a.missing_face]
        assert F.underlying.face(a.filler, a.horn.k) == a.missing_face


def test_residue_is_exactly_unfilled_admitted_horns():
    F = free(standard_simplex(0, 2), "kan", 2, 1)
    want = [h for h in enumerate_horns(F.underlying, "kan") if h not in F.result.table]
    assert list(F.residue) == want
    assert F.has_residue()


def test_unit(complexes):
    for name in ("point1", "delta2", "nerve_iso2", "two_triangles"):
        X = complexes[name]
        F = free(X, "kan" if X.truncation < 2 else "quasi", X.truncation, 1)
        u = unit(X, F)
        assert validate_map(u) == [] and u.is_injective()
        assert set(u.image()) == set(F.stage_tokens(0))


def test_counit_on_point():
    Z = algebraic_named("point1_kan")
    F = free(Z.underlying, "kan", 1, 1)
    eps = counit_eval(Z, F)
    assert check_alg_morphism(eps.map, F.result, Z) == []
    for a in F.attachments:
        assert eps(a.filler) == "00"


def test_counit_on_monoid_nerve():
    Z = algebraic_named("nerve_z2_kan")
    Zq = forget_outer(Z)
    F = free(Zq.underlying, "quasi", 2, 1)
    eps = counit_eval(Zq, F)
    for a in F.attachments:
        assert eps(a.filler) == Zq.table[a.horn]


@pytest.mark.parametrize("M", [0, 1, 2])
def test_triangle_identity(algebras, M):
    for name, Z in algebras.items():
        F = free(Z.underlying, Z.mode, Z.truncation, M)
        eps = counit_eval(Z, F)
        assert check_alg_morphism(eps.map, F.result, Z) == [], name
        assert compose(eps.map, unit(Z.underlying, F)) == identity_map(Z.underlying), name


def test_free_map_identity_and_injection():
    pt = standard_simplex(0, 1)
    F = free(pt, "kan", 1, 1)
    assert free_map(identity_map(pt), "kan", 1, 1, FX=F, FY=F).map == identity_map(F.underlying)
    two = two_points(1)
    left = constant_map(pt, two, two.levels[0][0])
    phi = free_map(left, "kan", 1, 1)
    FY = phi.target
    assert validate_map(phi.map) == []
    images = {phi(a.filler) for a in F.attachments}
    assert len(images) == 2
    at_left = [h for h, t in FY.table.items() if h.faces == (two.levels[0][0],)]
    assert {FY.table[h] for h in at_left} == images
    assert len(FY.table) == 4


def test_free_map_functoriality_and_naturality():
    D, M = 2, 1
    pt = standard_simplex(0, D)
    two = two_points(D)
    I = standard_simplex(1, D)
    a = constant_map(pt, two, two.levels[0][1])
    # L goes to vertex 0 and R to vertex 1, degeneracies alongside
    b = SimplicialMap(two, I, {t: ("0" if t[0] == "L" else "1") * len(t[2:]) for t in two.tokens()})
    assert validate_map(b) == []
    Fpt, Ftwo, FI = (free(X, "kan", D, M) for X in (pt, two, I))
    fa = free_map(a, "kan", D, M, FX=Fpt, FY=Ftwo)
    fb = free_map(b, "kan", D, M, FX=Ftwo, FY=FI)
    fab = free_map(compose(b, a), "kan", D, M, FX=Fpt, FY=FI)
    assert fab == fa.then(fb)
    for phi, Fs, Ft, fphi in ((a, Fpt, Ftwo, fa), (b, Ftwo, FI, fb)):
        assert compose(fphi.map, unit(phi.source, Fs)) == compose(unit(phi.target, Ft), phi)
        assert check_alg_morphism(fphi.map, Fs.result, Ft.result) == []


def test_free_map_budget_exhaustion():
    pt = standard_simplex(0, 2)
    with pytest.raises(BudgetExhausted):
        free_map(identity_map(pt), "kan", 2, 2, FX=free(pt, "kan", 2, 2), FY=free(pt, "kan", 2, 1))


@pytest.mark.parametrize("n,k,mode", [(1, 0, "kan"), (1, 1, "kan"), (2, 1, "quasi")])
def test_canonical_retract(n, k, mode):
    R = canonical_retract(n, k, mode, n, 2)
    assert R.holds
    assert check_alg_morphism(R.r.map, R.free_simplex.result, R.free_horn_big.result) == []
    for t in R.free_horn.stage_tokens(0):
        assert R.r(R.i(t)) == t


def test_canonical_retract_edge_goes_to_stage_one_filler():
    R = canonical_retract(1, 0, "kan", 1, 2)
    top = R.r("01")
    assert R.free_horn_big.stage_of[top] == 1
    assert R.free_horn_big.result.table[Horn(1, 0, ("0",))] == top


def test_growth_stats_point():
    F = free(standard_simplex(0, 1), "kan", 1, 1)
    rows = growth_stats(F)
    row = next(r for r in rows if r["stage"] == 1 and r["dim"] == 1)
    assert row["examined"] == 2 and row["attached"] == 2
    assert all(r["quillen_counterfactual"] >= r["cumulative"] for r in rows)
    text = growth_csv(rows)
    assert text.splitlines()[0] == "stage,dim,examined,attached,cumulative,quillen_counterfactual"


def test_quasi_nerve_attaches_every_stage():
    X = complex_named("nerve_ord2")
    F = free(X, "quasi", 2, 2)
    for m in (1, 2):
        assert sum(r["attached"] for r in growth_stats(F, compare=False) if r["stage"] == m) > 0


def test_garner_strictly_below_quillen():
    F = free(standard_simplex(0, 1), "kan", 1, 2)
    rows = growth_stats(F)
    assert any(r["stage"] >= 2 and r["quillen_counterfactual"] > r["cumulative"] for r in rows)
