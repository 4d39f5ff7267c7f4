import itertools
from fractions import Fraction as F
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from g2mirror import joycebv as jb
from g2mirror.torusact import AffineTorusMap, FiniteActionGroup, generate_group, restrict_map

G = jb.joyce_gamma()
H = F(1, 2)


def test_generators_from_table():
    x = [F(k, 10) for k in range(1, 8)]
    assert G.element("gamma")(x)[4] == (-x[4] + H) % 1
    assert G.element("beta")(x)[5] == (-x[5] + H) % 1
    assert G.order == 8 and G.exponent() == 2


def test_phi_invariance():
    assert all(c.passed for c in jb.verify_phi_invariance(G))


def test_phi_invariance_counterexample():
    bad = generate_group([AffineTorusMap.diagonal((-1, 1, 1, 1, 1, 1, 1), None, "flip")])
    checks = jb.verify_phi_invariance(bad)
    failed = [c for c in checks if not c.passed]
    assert len(failed) == 1
    assert failed[0].witness["element"] == "flip"
    assert failed[0].witness["blade"] == "e123"


def test_singular_census():
    rep = jb.singular_census_T7(G)
    assert rep.ok, [c.name for c in rep.checks if not c.passed]
    assert sum(len(v) for v in rep.fixed.values()) == 48
    assert len(rep.orbits) == 12
    assert rep.data["free_elements"] == ["alpha*beta", "alpha*gamma", "beta*gamma", "alpha*beta*gamma"]


def test_census_detects_wrong_display():
    # move beta's shift off x6: the fixed tori no longer sit at x6 in {1/4, 3/4}
    gens = [AffineTorusMap.diagonal(s, t, n) for n, (s, t) in jb.JOYCE_TABLE.items() if n != "beta"]
    gens.append(AffineTorusMap.diagonal((1, -1, -1, 1, 1, -1, -1), (0,) * 7, "beta"))
    rep = jb.singular_census_T7(generate_group(gens))
    assert not rep.ok


@pytest.mark.parametrize("coord,gens", [(1, {"alpha", "beta"}), (4, {"beta", "gamma"})])
def test_slice_census(coord, gens):
    fc = jb.slice_census_T6(coord, G)
    assert fc.ok, [c.name for c in fc.checks if not c.passed]
    assert set(fc.singular["fixed_2_tori"]) == gens
    assert sum(len(v) for v in fc.singular["fixed_2_tori"].values()) == 32
    assert fc.singular["singular_2_tori"] == 16


def test_slice_census_bad_coordinate():
    with pytest.raises(ValueError):
        jb.slice_census_T6(2, G)


def test_t3_567_census():
    fc = jb.slice_census_T3_567(G)
    assert fc.ok
    assert fc.singular["singular_circles"] == 4
    assert fc.singular["fixed_circles"]["gamma"] == [
        "T1_6 at (x5=1/4, x7=1/4)", "T1_6 at (x5=1/4, x7=3/4)",
        "T1_6 at (x5=3/4, x7=1/4)", "T1_6 at (x5=3/4, x7=3/4)",
    ]
    assert fc.singular["fixed_circles"]["beta"] == [
        "T1_5 at (x6=1/4, x7=0)", "T1_5 at (x6=1/4, x7=1/2)",
        "T1_5 at (x6=3/4, x7=0)", "T1_5 at (x6=3/4, x7=1/2)",
    ]


def test_pillowcase():
    p = jb.pillowcase_census(restrict_map(G.element("beta"), (2, 3)), (2, 3))
    assert p.corners == 4
    assert {pt.basepoint for pt in p.points} == set(itertools.product((0, H), repeat=2))
    g13 = jb.pillowcase_census(restrict_map(G.element("gamma"), (1, 3)), (1, 3))
    assert g13.corners == 4
    with pytest.raises(jb.NotPillowcase):
        jb.pillowcase_census(AffineTorusMap.diagonal((1, 1), (H, 0), "shift"))
    with pytest.raises(jb.NotPillowcase):
        jb.pillowcase_census(AffineTorusMap.diagonal((1, 1, 1), None, "id3"))


@pytest.mark.parametrize("model", [jb.q_prime_model(G), jb.q_model(G)], ids=["Qprime", "Q"])
def test_bv_fixed_data(model):
    bv = jb.bv_fixed_data(model)
    assert (bv.a, bv.b) == (2, 2)
    assert len(bv.upstairs) == 4 and len(bv.kummer_points) == 16
    assert all(len(o) == 2 for o in bv.orbits)


def test_bv_q_prime_upstairs_tori():
    bv = jb.bv_fixed_data(jb.q_prime_model(G))
    assert {c.axes((4, 5, 6, 7)) for c in bv.upstairs} == {(4, 5)}


def test_bv_rejects_fixed_locus_through_kummer_points():
    k = AffineTorusMap.diagonal((-1, -1, -1, -1), None, "k")
    j = AffineTorusMap.diagonal((1, 1, -1, -1), None, "j")
    with pytest.raises(jb.BVError):
        jb.bv_fixed_data(jb.K3Model("bad", (1, 2, 3, 4), k, j))


def test_bv_rejects_non_commuting():
    k = AffineTorusMap.diagonal((-1, -1, -1, -1), None, "k")
    j = AffineTorusMap(((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)), (0, 0, F(1, 3), 0), "j")
    with pytest.raises(jb.BVError):
        jb.bv_fixed_data(jb.K3Model("bad", (1, 2, 3, 4), k, j))


def test_hodge_numbers():
    h = jb.hodge_numbers(2, 2)
    assert (h.h11, h.h21, h.self_mirror) == (19, 19, True)
    assert (jb.hodge_numbers(1, 0).h11, jb.hodge_numbers(1, 0).h21) == (16, 10)
    assert (jb.hodge_numbers(0, 0).h11, jb.hodge_numbers(0, 0).h21) == (11, 11)
    with pytest.raises(ValueError):
        jb.hodge_numbers(-1, 0)
    with pytest.raises(ValueError):
        jb.hodge_numbers(0, 12)  # h11 = -1


@given(st.integers(0, 10), st.integers(0, 10))
def test_hodge_swap_and_euler(a, b):
    try:
        h = jb.hodge_numbers(a, b)
    except ValueError:
        return
    s = jb.hodge_numbers(b, a)
    assert (s.h11, s.h21) == (h.h21, h.h11)
    d = jb.hodge_diamond(h)
    assert d.euler() == 2 * (h.h11 - h.h21)
    assert d.betti()[3] == 2 + 2 * h.h21


def test_diamond_19():
    d = jb.hodge_diamond(jb.hodge_numbers(2, 2))
    assert d.rows() == ((1,), (0, 0), (0, 19, 0), (1, 19, 19, 1), (0, 19, 0), (0, 0), (1,))
    assert d.euler() == 0
    assert jb.hodge_diamond(jb.hodge_numbers(1, 0)).euler() == 12


def test_euler_bookkeeping():
    alpha4 = restrict_map(G.element("alpha"), (4, 5, 6, 7))
    spec = jb.kummer_spec(alpha4)
    assert (spec.total_euler, spec.fixed_euler, spec.group_order, len(spec.replacement_eulers)) == (0, 16, 2, 16)
    assert jb.euler_bookkeeping(spec) == 24
    with pytest.raises(ArithmeticError):
        jb.euler_bookkeeping(jb.ResolutionSpec("odd", 0, 3, 2, ()))


def test_bv_euler():
    model = jb.q_prime_model(G)
    bv = jb.bv_fixed_data(model)
    spec = jb.bv_spec("Q'", restrict_map(G.element("beta"), (2, 3)), bv, 24)
    assert jb.euler_bookkeeping(spec) == 0


def test_betti_invariant_forms():
    assert jb.betti_via_invariant_forms(G) == (1, 0, 0, 7, 7, 0, 0, 1)
    trivial = FiniteActionGroup((AffineTorusMap.identity(7),), ())
    assert jb.betti_via_invariant_forms(trivial) == tuple(comb(7, k) for k in range(8))
    assert set(jb.invariant_blades(G, 3)) == {(1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7),
                                               (3, 5, 6)}


def test_betti_rejects_non_diagonal():
    g = AffineTorusMap(((0, 1), (1, 0)), (0, 0), "swap")
    with pytest.raises(ValueError):
        jb.betti_via_invariant_forms(generate_group([g]))


def test_resolution_correction():
    base = jb.betti_via_invariant_forms(G)
    t3 = jb.torus_betti(3)
    assert jb.resolution_betti_correction(base, 0, t3) == base
    one = jb.resolution_betti_correction(base, 1, t3)
    assert (one[2] - base[2], one[3] - base[3]) == (1, 3)
    m = jb.resolution_betti_correction(base, 12, t3, expected_euler=0)
    assert m[:4] == (1, 0, 12, 43)
    with pytest.raises(ArithmeticError):
        jb.resolution_betti_correction((1, 0, 1), 1, (1,))


def test_bookkeeping_report():
    rep = jb.bookkeeping_report(G)
    assert rep.ok
    assert rep.data["chi_K3"] == 24 and rep.data["chi_M"] == 0


def test_mirror_report():
    rep = jb.mirror_report(G)
    assert rep.ok, [c.name for c in rep.checks if not c.passed]
    bv = rep.data["borcea_voisin"]
    assert bv["X_xi"]["hodge"]["h11"] == bv["X_xi_prime"]["hodge"]["h21"] == 19
    assert bv["X_xi"]["submanifold"] == "T6_123567"
    assert bv["X_xi_prime"]["submanifold"] == "T6_234567"
    fib = rep.data["fibrations"]
    assert fib["T2_23->Q'->K3/j"]["singular"]["singular_fiber_spheres"] == 5
    assert fib["T6_123567/<beta,gamma>->S3_567"]["singular"]["singular_2_tori"] == 16
    recorded = [c for c in rep.checks if c.status == "recorded-assertion"]
    assert recorded and all(c.anchor for c in rep.checks)


def test_mirror_report_deterministic():
    assert jb.mirror_report(G).to_json() == jb.mirror_report(jb.joyce_gamma()).to_json()
