"""Command-line front end.

Exit codes:
  0 = every check passed
  1 = at least one check failed
  2 = usage or configuration error
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import yaml

from . import joycebv
from .cyextract import MembershipError, NonUnitVector, dual_pair
from .exactalg import as_fraction
from .exterior import format_form
from .g2core import PHI0, STAR_PHI0, CoordinatePlane, enumerate_calibrated_coordinate_planes, identity_suite
from .report import RECORDED, Check, Report
from .torusact import (
    AffineTorusMap,
    FiniteActionGroup,
    GroupTooLarge,
    fixed_set,
    generate_group,
    oracle_compare,
    restrict_map,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
PRESET = "joyce"
IDENTITY_SAMPLES = 1000


class ConfigError(Exception):
    """Bad input: reported on stderr with exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    group: str = PRESET
    grid_denominator: int = 4
    output: str | None = None
    format: str = "text"

    def __post_init__(self):
        if self.grid_denominator < 2:
            raise ConfigError("--grid-denominator must be at least 2")
        if self.format not in ("text", "structured"):
            raise ConfigError(f"unknown format {self.format!r}")

    @property
    def is_preset(self) -> bool:
        return self.group == PRESET


# group loading ----------------------------------------------------------------------


def _rational(x, where: str) -> Fraction:
    try:
        return as_fraction(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{where}: {exc}") from None


def group_from_document(doc) -> FiniteActionGroup:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a mapping with 'dimension' and 'generators'")
    n = doc.get("dimension")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ConfigError("'dimension' must be a positive integer")
    gens_doc = doc.get("generators")
    if not isinstance(gens_doc, list) or not gens_doc:
        raise ConfigError("'generators' must be a non-empty list")
    gens = []
    for i, g in enumerate(gens_doc):
        where = f"generator {i + 1}"
        if not isinstance(g, dict):
            raise ConfigError(f"{where}: expected a mapping")
        name = str(g.get("name") or f"g{i + 1}")
        signs = g.get("signs")
        if not isinstance(signs, list) or len(signs) != n or any(s not in (1, -1) or isinstance(s, bool) for s in signs):
            raise ConfigError(f"{where} ({name}): 'signs' must list {n} entries of +1/-1")
        shift = g.get("shift", [0] * n)
        if not isinstance(shift, list) or len(shift) != n:
            raise ConfigError(f"{where} ({name}): 'shift' must list {n} rationals")
        shift = [_rational(s, f"{where} ({name}) shift") for s in shift]
        gens.append(AffineTorusMap.diagonal(signs, shift, name))
    if len({g.name for g in gens}) != len(gens):
        raise ConfigError("generator names must be distinct")
    try:
        return generate_group(gens)
    except GroupTooLarge as exc:
        raise ConfigError(str(exc)) from None


def load_group(source: str) -> FiniteActionGroup:
    if source == PRESET:
        return joycebv.joyce_gamma()
    path = Path(source)
    if not path.is_file():
        raise ConfigError(f"config file not found: {source}")
    try:
        doc = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {source}: {exc}") from None
    return group_from_document(doc)


def parse_vector(text: str) -> tuple[Fraction, ...]:
    """``e4`` or a comma-separated list of 7 rationals such as ``3/5,4/5,0,0,0,0,0``."""
    text = text.strip()
    if text.startswith("e") and text[1:].isdigit():
        i = int(text[1:])
        if not 1 <= i <= 7:
            raise ConfigError(f"basis vector {text} out of range")
        return tuple(Fraction(int(k == i)) for k in range(1, 8))
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 7:
        raise ConfigError(f"expected 7 components, got {len(parts)} in {text!r}")
    return tuple(_rational(p, "vector") for p in parts)


def _structure_data() -> dict:
    return {"phi0": format_form(PHI0), "star_phi0": format_form(STAR_PHI0)}


def _require_preset(cfg: RunConfig, what: str):
    if not cfg.is_preset:
        raise ConfigError(f"{what} is specific to the '{PRESET}' preset")


# commands --------------------------------------------------------------------------


def _general_group_checks(G: FiniteActionGroup, q: int) -> list[Check]:
    checks = [Check.test("group closed under composition", G.is_closed(), "finite group acting on the torus",
                         witness={"order": G.order, "elements": list(G.names())})]
    if G.n == 7:
        checks.extend(joycebv.verify_phi_invariance(G))
    for g in G:
        cmp = oracle_compare(g, q)
        checks.append(Check.test(f"grid-oracle[{g.name}]", cmp.agree,
                                 "fixed sets agree with brute force on the 1/q grid", cmp.to_dict()))
    return checks


def cmd_verify_all(cfg: RunConfig) -> Report:
    G = load_group(cfg.group)
    rep = Report("verify-all")
    rep.extend(identity_suite(IDENTITY_SAMPLES))
    data = {"structure": _structure_data(), "group": {g.name: list(g.describe()) for g in G}}
    if cfg.is_preset:
        census = joycebv.singular_census_T7(G, q=cfg.grid_denominator)
        book = joycebv.bookkeeping_report(G, census)
        mirror = joycebv.mirror_report(G, q=cfg.grid_denominator)
        for part in (census, book, mirror):
            rep.extend(part.checks)
        data.update(census=census.data, bookkeeping=book.data, mirror=mirror.data)
    else:
        rep.extend(_general_group_checks(G, cfg.grid_denominator))
        pair = dual_pair(CoordinatePlane.coordinate((1, 2, 3)), parse_vector("e4"), parse_vector("e1"))
        rep.extend(pair.verification.checks)
        rep.extend(Check(c.name + " [xi']", c.status, c.anchor, c.witness, c.detail)
                   for c in pair.verification_prime.checks)
        rep.add(Check(f"{PRESET}-specific censuses", RECORDED, "censuses of the Joyce orbifold",
                      detail="skipped for a custom group"))
        data["dual_pair"] = pair.to_dict()
        data["fixed_sets"] = {g.name: [c.label() for c in fixed_set(g)] for g in G}
    rep.data = data
    return rep


def cmd_fixed_sets(cfg: RunConfig, element: str) -> Report:
    G = load_group(cfg.group)
    try:
        g = G.element(element)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"unknown element {element!r}; known: {', '.join(G.names())}") from exc
    comps = fixed_set(g)
    rep = Report("fixed-sets")
    cmp = oracle_compare(g, cfg.grid_denominator, comps)
    rep.add(Check.test(f"grid-oracle[{g.name}]", cmp.agree, "fixed sets agree with brute force on the 1/q grid",
                       cmp.to_dict()))
    if not comps:
        rep.add(Check.test(f"{g.name} acts freely", True, "element without fixed points"))
    rep.data = {
        "structure": _structure_data(),
        "element": g.name,
        "map": list(g.describe(G.axes)),
        "acts_freely": not comps,
        "count": len(comps),
        "components": [c.to_dict() for c in comps],
    }
    return rep


def cmd_slice_census(cfg: RunConfig, which: str) -> Report:
    _require_preset(cfg, "slice-census")
    G = load_group(cfg.group)
    if which in ("1", "4"):
        fc = joycebv.slice_census_T6(int(which), G, q=cfg.grid_denominator)
    elif which == "567":
        fc = joycebv.slice_census_T3_567(G, q=cfg.grid_denominator)
    else:
        raise ConfigError("slice must be 1, 4 or 567")
    rep = Report("slice-census", list(fc.checks))
    if which == "1":
        pillow = joycebv.pillowcase_census(restrict_map(G.element("beta"), (2, 3)), (2, 3))
        rep.add(Check.test("pillowcase T2_23 corners", pillow.corners == 4,
                           "T2 / (x -> -x) has 4 orbifold points", witness=pillow.to_dict()))
    rep.data = {"structure": _structure_data(), "census": fc.to_dict() | {"singular": fc.singular}}
    return rep


def cmd_dual_pair(cfg: RunConfig, xi: str, xi_prime: str, plane: str) -> Report:
    try:
        axes = tuple(int(c) for c in plane)
        E = CoordinatePlane.coordinate(axes)
    except ValueError as exc:
        raise ConfigError(f"bad associative plane {plane!r}: {exc}") from None
    try:
        pair = dual_pair(E, parse_vector(xi), parse_vector(xi_prime))
    except (NonUnitVector, MembershipError) as exc:
        raise ConfigError(str(exc)) from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    rep = Report("dual-pair")
    rep.extend(pair.verification.checks)
    rep.extend(Check(c.name + " [xi']", c.status, c.anchor, c.witness, c.detail) for c in pair.verification_prime.checks)
    rep.add(Check.test("xi in V, xi' in E", True, "dual submanifolds adapted to the associative plane E",
                       witness={"E": pair.E.label(), "V": pair.V.label()}))
    rep.add(Check.test("detected signs agree", pair.signs_agree, "one sign convention for every adapted hyperplane"))
    rep.data = {"structure": _structure_data(), "dual_pair": pair.to_dict()}
    return rep


def cmd_hodge(cfg: RunConfig, a: int, b: int) -> Report:
    try:
        hd = joycebv.hodge_numbers(a, b)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    diamond = joycebv.hodge_diamond(hd)
    rep = Report("hodge")
    rep.add(Check.test("chi = 2(h11 - h21)", diamond.euler() == 2 * (hd.h11 - hd.h21),
                       "Euler characteristic of a Calabi-Yau threefold", witness={"euler": diamond.euler()}))
    rep.data = {"structure": _structure_data(), "hodge": hd.to_dict(), "diamond": diamond.to_dict(),
                "diamond_text": diamond.format().split("\n")}
    return rep


def cmd_mirror_report(cfg: RunConfig) -> Report:
    _require_preset(cfg, "mirror-report")
    return joycebv.mirror_report(load_group(cfg.group), q=cfg.grid_denominator)


def cmd_planes(cfg: RunConfig) -> Report:
    census = enumerate_calibrated_coordinate_planes()
    rep = Report("planes")
    rep.add(Check.test("7 associative coordinate planes", len(census.associative) == 7,
                       "the seven terms of phi0 are calibrated 3-planes"))
    rep.add(Check.test("7 coassociative coordinate planes", len(census.coassociative) == 7,
                       "complements of associative planes are coassociative"))
    rep.add(Check.test("associative and coassociative planes complementary", census.complementary(),
                       "complements of associative planes are coassociative"))
    rep.data = {
        "structure": _structure_data(),
        "associative": ["e" + "".join(map(str, t)) for t in census.associative],
        "orientation": list(census.associative_signs),
        "coassociative": ["e" + "".join(map(str, t)) for t in census.coassociative],
        "scanned": list(census.scanned),
    }
    return rep


# entry point ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", default=PRESET, help=f"'{PRESET}' or a YAML/JSON config path")
    common.add_argument("--grid-denominator", type=int, default=4, metavar="Q",
                        help="denominator of the brute-force oracle grid (default 4)")
    common.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("text", "structured"), default="text")

    p = argparse.ArgumentParser(prog="g2mirror", description="Exact G2 / Calabi-Yau mirror checks on T^7 / Γ.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("verify-all", parents=[common], help="run every check suite")
    fs = sub.add_parser("fixed-sets", parents=[common], help="fixed components of one group element")
    fs.add_argument("element", help="e.g. alpha, beta*gamma, identity")
    sc = sub.add_parser("slice-census", parents=[common], help="census of a coordinate slice")
    sc.add_argument("slice", choices=("1", "4", "567"))
    dp = sub.add_parser("dual-pair", parents=[common], help="Calabi-Yau data on xi^⊥ and xi'^⊥")
    dp.add_argument("xi")
    dp.add_argument("xi_prime")
    dp.add_argument("--plane", default="123", help="associative coordinate plane E (default 123)")
    hp = sub.add_parser("hodge", parents=[common], help="Borcea-Voisin Hodge numbers from (a, b)")
    hp.add_argument("a", type=int)
    hp.add_argument("b", type=int)
    sub.add_parser("mirror-report", parents=[common], help="full mirror-duality report")
    sub.add_parser("planes", parents=[common], help="calibrated coordinate planes")
    return p


def run(args: argparse.Namespace) -> Report:
    cfg = RunConfig(args.command, args.group, args.grid_denominator, args.output, args.format)
    if args.command == "verify-all":
        return cmd_verify_all(cfg)
    if args.command == "fixed-sets":
        return cmd_fixed_sets(cfg, args.element)
    if args.command == "slice-census":
        return cmd_slice_census(cfg, args.slice)
    if args.command == "dual-pair":
        return cmd_dual_pair(cfg, args.xi, args.xi_prime, args.plane)
    if args.command == "hodge":
        return cmd_hodge(cfg, args.a, args.b)
    if args.command == "mirror-report":
        return cmd_mirror_report(cfg)
    return cmd_planes(cfg)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        report = run(args)
    except ConfigError as exc:
        print(f"g2mirror: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = report.to_json() if args.format == "structured" else report.to_text()
    if args.output:
        try:
            Path(args.output).write_text(text)
        except OSError as exc:
            print(f"g2mirror: error: cannot write {args.output}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.ok else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
