"""The ten acceptance criteria, each checked exactly and reported on one line."""

import itertools
import json
from fractions import Fraction as F

import pytest

from g2mirror import joycebv as jb
from g2mirror.cli import main
from g2mirror.cyextract import (
    NonUnitVector,
    complex_coordinates,
    extract,
    format_j_table,
    verify,
)
from g2mirror.exterior import KForm, Vector, format_form, hodge_star, parse_form, wedge
from g2mirror.g2core import PHI0, STAR_PHI0, enumerate_calibrated_coordinate_planes, identity_suite
from g2mirror.torusact import compose, fixed_set, oracle_compare, restrict_map

G = jb.joyce_gamma()


@pytest.fixture
def report(capsys):
    def emit(number: int, title: str, results: dict):
        failed = [k for k, ok in results.items() if not ok]
        line = f"criterion {number:2d} {'PASS' if not failed else 'FAIL'}: {title}"
        if failed:
            line += f"  [failed: {', '.join(failed)}]"
        with capsys.disabled():
            print("\n" + line)
        assert not failed, line
    return emit


def test_criterion_01_identity_suite(report):
    checks = identity_suite(1000, seed=0)
    want = ["** = id on all degrees", "wedge anticommutativity", "contraction Leibniz rule",
            "|u × v|^2 = |u|^2 |v|^2 - <u,v>^2"]
    by_name = {c.name: c for c in checks}
    results = {name: by_name[name].passed for name in want}
    results["1000 samples"] = all(by_name[n].witness.get("samples", 1000) == 1000 for n in want[1:])
    report(1, "G2 identity suite (** = id, Leibniz, anticommutativity, Lagrange) on 1000 samples", results)


def test_criterion_02_star_phi0(report):
    listed = parse_form("+1*e4567 +1*e2367 +1*e2345 +1*e1357 -1*e1346 -1*e1256 -1*e1247", 7, 4)
    results = {
        "*phi0 equals listed form": hodge_star(PHI0) == listed == STAR_PHI0,
        "phi0 ∧ *phi0 = 7 vol": wedge(PHI0, STAR_PHI0) == KForm.volume(7) * 7,
    }
    report(2, "*phi0 by complement signs, phi0 ∧ *phi0 = 7 vol", results)


def test_criterion_03_plane_census(report):
    c = enumerate_calibrated_coordinate_planes()
    triples = {(1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6)}
    phi_triples = {blade for blade, _ in PHI0.items()}
    results = {
        "7 associative": len(c.associative) == 7,
        "7 coassociative": len(c.coassociative) == 7,
        "complementary": c.complementary(),
        "triples match phi0 terms": set(c.associative) == triples == phi_triples,
    }
    report(3, "7 associative + 7 coassociative coordinate planes, complementary", results)


def test_criterion_04_calabi_yau_extraction(report):
    xis = {"e1": Vector.basis(1), "e4": Vector.basis(4), "(3/5,4/5,0..)": Vector([F(3, 5), F(4, 5), 0, 0, 0, 0, 0])}
    needed = ["J^2 = -id", "<Ju, Jv> = <u, v>", "omega^3 != 0", "Re Omega = phi|", "*phi| = star_6 omega",
              "Omega(Ju, v, w) = sigma i Omega(u, v, w)"]
    results, signs = {}, set()
    for label, xi in xis.items():
        ver = verify(extract(xi))
        by_name = {c.name: c for c in ver.checks}
        for n in needed:
            results[f"{label}: {n}"] = by_name[n].passed
        signs.add((ver.compat_sign, ver.type_sign))
    results["signs (s, sigma) constant"] = len(signs) == 1 and None not in next(iter(signs))
    d4, d1 = extract(Vector.basis(4)), extract(Vector.basis(1))
    results["J table e4"] = format_j_table(d4)[:3] == ("e1 -> e5", "e2 -> e6", "e3 -> -e7")
    results["J table e1"] = format_j_table(d1)[::2] == ("e2 -> -e3", "e4 -> -e5", "e6 -> -e7")
    results["chart e4"] = complex_coordinates(d4).formulas("z") == (
        "z1 = x1 - i x5", "z2 = x2 - i x6", "z3 = x3 + i x7")
    results["chart e1"] = complex_coordinates(d1).formulas("w") == (
        "w1 = x2 + i x3", "w2 = x4 + i x5", "w3 = x6 + i x7")
    report(4, "almost Calabi-Yau data on xi-perp with constant signs; J tables and charts verbatim", results)


def test_criterion_05_gamma_census(report):
    rep = jb.singular_census_T7(G, q=4)
    results = {c.name: c.passed for c in rep.checks}
    results["all 8 elements oracle-checked on 4^7 points"] = all(
        oracle_compare(g, 4).grid_points == 4 ** 7 for g in G) and sum(
        1 for c in rep.checks if c.name.startswith("grid-oracle")) == 8
    results["48 components, 12 orbits"] = sum(len(v) for v in rep.fixed.values()) == 48 and len(rep.orbits) == 12
    report(5, "Gamma census: order 8, invariance, 16+16+16 tori, disjoint, free elements, 12 orbits, oracle", results)


def test_criterion_06_slice_censuses(report):
    s1 = jb.slice_census_T6(1, G)
    t3 = jb.slice_census_T3_567(G)
    pillow = jb.pillowcase_census(restrict_map(G.element("beta"), (2, 3)), (2, 3))
    results = {
        "x1 slice checks": s1.ok,
        "x1 slice: 32 fixed T2": sum(len(v) for v in s1.singular["fixed_2_tori"].values()) == 32,
        "x1 slice: 16 singular T2": s1.singular["singular_2_tori"] == 16,
        "T3_567 checks": t3.ok,
        "T3_567: 4+4 circles": [len(v) for v in t3.singular["fixed_circles"].values()] == [4, 4],
        "T3_567: 4 singular circles": t3.singular["singular_circles"] == 4,
        "T3_567: beta*gamma free": not fixed_set(jb.t3_567_group(G).element("beta*gamma")),
        "pillowcase T2_23: 4 points": pillow.corners == 4
        and {p.basepoint for p in pillow.points} == set(itertools.product((0, F(1, 2)), repeat=2)),
    }
    report(6, "slice censuses: x1 (32 / 16 T2), T3_567 (4+4 / 4 circles), pillowcase 4 points", results)


def test_criterion_07_borcea_voisin(report):
    results = {}
    diamond19 = ((1,), (0, 0), (0, 19, 0), (1, 19, 19, 1), (0, 19, 0), (0, 0), (1,))
    for label, model, t2 in (("Q'", jb.q_prime_model(G), (2, 3)), ("Q", jb.q_model(G), (2, 6))):
        bv = jb.bv_fixed_data(model)
        hd = jb.hodge_numbers(bv.a, bv.b)
        d = jb.hodge_diamond(hd)
        chi_k3 = jb.euler_bookkeeping(jb.kummer_spec(model.kummer))
        chi = jb.euler_bookkeeping(jb.bv_spec(label, restrict_map(G.element("beta"), t2), bv, chi_k3))
        results[f"{label}: (a,b) = (2,2)"] = (bv.a, bv.b) == (2, 2)
        results[f"{label}: (19,19)"] = (hd.h11, hd.h21) == (19, 19)
        results[f"{label}: diamond rows"] = d.rows() == diamond19
        results[f"{label}: chi = 0"] = chi == 0 == d.euler()
    report(7, "Borcea-Voisin: (a,b) = (2,2) for Q' and Q, Hodge (19,19), diamond, chi = 0", results)


def test_criterion_08_bookkeeping(report):
    rep = jb.bookkeeping_report(G)
    results = {c.name: c.passed for c in rep.checks}
    results["values"] = (rep.data["chi_K3"], rep.data["chi_M"], rep.data["betti_quotient"][:4],
                         rep.data["betti_M"][:4]) == (24, 0, (1, 0, 0, 7), (1, 0, 12, 43))
    b = rep.data["betti_M"]
    results["Poincaré duality"] = all(b[k] == b[7 - k] for k in range(8))
    report(8, "Euler/Betti: chi(K3) = 24, chi(M) = 0, (1,0,0,7) -> (1,0,12,43)", results)


def test_criterion_09_mirror_report(report, tmp_path):
    out = tmp_path / "mirror.json"
    code = main(["mirror-report", "--format", "structured", "--output", str(out)])
    doc = json.loads(out.read_text())
    bv = doc["data"]["borcea_voisin"]
    fib = doc["data"]["fibrations"]
    results = {
        "exit code 0": code == 0,
        "no failed checks": doc["summary"]["fail"] == 0,
        "b11(X_xi) = b21(X_xi') = 19": bv["X_xi"]["hodge"]["h11"] == bv["X_xi_prime"]["hodge"]["h21"] == 19,
        "xi = e4 in V, xi' = e1 in E": doc["data"]["dual_pair"]["xi_in_V"] and doc["data"]["dual_pair"]["xi_prime_in_E"]
        and doc["data"]["dual_pair"]["V"] == "span(e4,e5,e6,e7)" and doc["data"]["dual_pair"]["E"] == "span(e1,e2,e3)",
        "fibration censuses attached": len(fib) == 4,
        "phi0 serialized": doc["data"]["phi0"] == format_form(PHI0),
    }
    report(9, "mirror report: b11(X_xi) = b21(X_xi') = 19, fibrations attached, exit 0", results)


def test_criterion_10_negative_controls(report, tmp_path, capsys):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("dimension: 7\ngenerators:\n  - name: flip\n    signs: [-1, 1, 1, 1, 1, 1, 1]\n"
                   "    shift: ['0', '0', '0', '0', '0', '0', '0']\n")
    code = main(["verify-all", "--group", str(cfg)])
    capsys.readouterr()
    try:
        extract(Vector([1, 1, 0, 0, 0, 0, 0]))
        non_unit = False
    except NonUnitVector:
        non_unit = True
    results = {
        "non-phi-preserving generator exits 1": code == 1,
        "free element has empty fixed set": fixed_set(compose(G.element("alpha"), G.element("beta"))) == (),
        "non-unit xi rejected": non_unit,
    }
    report(10, "negative controls: invariance failure exits 1, free element empty, non-unit xi rejected", results)
