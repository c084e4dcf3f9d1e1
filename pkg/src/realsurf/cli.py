"""Command-line front end.

Each command reads one JSON surface document (a path, or ``-`` for stdin)
and writes one JSON report to stdout.  Exit codes: 0 success, 2 input
error (malformed JSON, schema or precondition violation), 3 mathematical
inconsistency.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from typing import Optional

from . import __version__
from .classify import (
    AmbiguousSet,
    CatalogExtras,
    catalog_classify,
    degree_two_verdict,
    kollar_class,
    quotient_type,
)
from .conicbundle import (
    BaseInvolution,
    FiberInvolution,
    QuadricPencilSurface,
    discriminant,
    fiber_type_taxonomy,
    real_components,
    singular_fibers,
    smoothness_necessary,
)
from .documents import loads, parse, parse_extras
from .eqmmp import (
    SurfacePair,
    classify_minimal_pair,
    is_minimal_pair,
    is_surface_minimal,
    run_eqmmp,
)
from .errors import InconsistentError, InputError
from .involutions import h1_z2, invariant_sublattice
from .picard import Sublattice, r_invariant

# Every warning a report can carry.
WARNINGS = {
    "smoothness": "smoothness check is necessary-only; the total space is not certified smooth",
    "topology_skipped": "real topology skipped: a real singular fiber is not simple of rank 2",
    "kollar_skipped": "Kollar class skipped: the pencil fails the smoothness checks",
    "catalog_pencil": "catalog classification needs a lattice-pair document",
    "catalog_no_holo": "catalog classification needs a holo involution",
    "conic_case": "conic fibration case undetermined at lattice level; attach a pencil to decide it",
}


def _orbit_json(orbit) -> Optional[dict]:
    if orbit is None:
        return None
    return {"kind": orbit.kind.value, "classes": [list(c) for c in orbit.classes]}


def _h1(lattice, inv) -> Optional[list[int]]:
    return None if inv is None else list(h1_z2(lattice, inv).elementary_divisors)


def lattice_report(pair: SurfacePair) -> dict:
    lat = pair.lattice
    warnings = []
    ranks = {}
    for label, invs in (("galois", [pair.galois]), ("holo", [pair.holo]), ("pair", [pair.galois, pair.holo])):
        invs = [m for m in invs if m is not None]
        basis, rho = invariant_sublattice(lat, invs)
        ranks[label] = {"rank": rho, "r": r_invariant(Sublattice(lat, tuple(basis)))}
    pair_min, pair_witness = is_minimal_pair(pair)
    surf_min, surf_witness = is_surface_minimal(pair)
    minimal, log = run_eqmmp(pair)
    mclass = classify_minimal_pair(minimal)
    if mclass.variant == "ConicFibration" and mclass.case is None:
        warnings.append(WARNINGS["conic_case"])
    return {
        "lattice": {"n": lat.n, "rank": lat.rank, "degree": lat.degree()},
        "invariants": ranks,
        "h1": {"galois": _h1(lat, pair.galois), "holo": _h1(lat, pair.holo)},
        "minimality": {
            "pair_minimal": pair_min,
            "pair_witness": _orbit_json(pair_witness),
            "surface_minimal": surf_min,
            "surface_witness": _orbit_json(surf_witness),
        },
        "eqmmp": {
            "steps": log.to_json(),
            "final_n": minimal.lattice.n,
            "final_invariant_rank": invariant_sublattice(
                minimal.lattice, [m for m in (minimal.galois, minimal.holo) if m is not None])[1],
        },
        "minimal_pair_class": mclass.to_json(),
        "warnings": warnings,
    }


def pencil_report(surface: QuadricPencilSurface, has_real_point: Optional[bool] = None) -> dict:
    warnings = [WARNINGS["smoothness"]]
    disc = discriminant(surface)
    fibers = singular_fibers(surface)
    real = [f for f in fibers if f.is_real]
    pairs = [f for f in fibers if not f.is_real]
    smooth = smoothness_necessary(surface)
    out = {
        "discriminant": {"degree": disc.degree, "coeffs": disc.to_json()},
        "singular_fibers": [f.to_json() for f in fibers],
        "counts": {
            "geometric": sum(f.multiplicity for f in real) + 2 * sum(f.multiplicity for f in pairs),
            "real": len(real),
            "conjugate_pairs": len(pairs),
        },
        "smoothness": smooth.to_json(),
    }
    involutions = (surface.base_involution is not BaseInvolution.NONE,
                   surface.fiber_involution is not FiberInvolution.NONE)
    if sum(involutions) == 1:
        out["taxonomy"] = [{"fiber": f.to_json(), "tag": tag} for f, tag in fiber_type_taxonomy(surface)]
    try:
        out["topology"] = real_components(surface).to_json()
    except InputError:
        out["topology"] = None
        warnings.append(WARNINGS["topology_skipped"])
    if smooth.ok:
        k = kollar_class(surface, has_real_point)
        out.update(_verdict(k, has_real_point, out["topology"]))
    else:
        warnings.append(WARNINGS["kollar_skipped"])
    out["warnings"] = warnings
    return out


def _verdict(k, has_real_point: Optional[bool], topology: Optional[dict]) -> dict:
    if has_real_point is None:
        has_real_point = not (topology or {}).get("empty_locus", False)
    v = degree_two_verdict(k, has_real_point)
    return {"kollar": k.to_json(), "verdict": v.to_json()}


def classify_report(obj, extras: CatalogExtras) -> dict:
    warnings = []
    if isinstance(obj, QuadricPencilSurface):
        base = pencil_report(obj)
        warnings = base.pop("warnings") + [WARNINGS["catalog_pencil"]]
        out = {k: base[k] for k in ("kollar", "verdict") if k in base}
        out["topology"] = base["topology"]
        out["warnings"] = warnings
        return out
    k = kollar_class(obj)
    out = {"kollar": k.to_json(), "verdict": degree_two_verdict(k, obj.has_real_point).to_json()}
    if obj.holo is None:
        warnings.append(WARNINGS["catalog_no_holo"])
    else:
        minimal, _ = run_eqmmp(obj)
        mclass = classify_minimal_pair(minimal)
        out["minimal_pair_class"] = mclass.to_json()
        cat = catalog_classify(minimal, extras)
        out["catalog"] = cat.to_json()
        out["quotient"] = None if isinstance(cat, AmbiguousSet) else quotient_type(cat).value
    out["warnings"] = warnings
    return out


def _read(path: str) -> dict:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    return loads(text)


def _header(command: str, doc: dict) -> dict:
    return {"command": command, "input": {"kind": doc.get("kind"), "name": doc.get("name", "")}}


def cmd_lattice_info(doc: dict, args) -> dict:
    obj = parse(doc)
    if not isinstance(obj, SurfacePair):
        raise InputError("lattice-info needs a lattice-pair document")
    return lattice_report(obj)


def cmd_pencil(doc: dict, args) -> dict:
    obj = parse(doc)
    if not isinstance(obj, QuadricPencilSurface):
        raise InputError("pencil needs a quadric-pencil document")
    return pencil_report(obj, doc.get("has_real_point"))


def cmd_classify(doc: dict, args) -> dict:
    obj = parse(doc)
    extras = parse_extras(doc) if doc.get("kind") == "lattice-pair" else CatalogExtras()
    overrides = {}
    if args.genus is not None:
        overrides["fixed_curve_genus"] = args.genus
    if args.twist is not None:
        overrides["twist_index"] = args.twist
    if args.fibers is not None:
        overrides["geometric_singular_fibers"] = args.fibers
    if args.g_exceptional:
        overrides["g_exceptional"] = True
    extras = replace(extras, **overrides)
    if args.field is not None and isinstance(obj, SurfacePair):
        obj = replace(obj, field_mode=args.field)
    return classify_report(obj, extras)


COMMANDS = {"lattice-info": cmd_lattice_info, "pencil": cmd_pencil, "classify": cmd_classify}


def _flatten(prefix: str, value, rows: list) -> None:
    if isinstance(value, dict) and value:
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else k, value[k], rows)
    elif isinstance(value, list) and value and any(isinstance(v, (dict, list)) for v in value):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, json.dumps(value, sort_keys=True)))


def render_pretty(report: dict) -> str:
    rows: list = []
    _flatten("", report, rows)
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="realsurf", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("lattice-info", "ranks, H^1, minimality and the equivariant MMP of a lattice pair"),
        ("pencil", "singular fibers, real topology and verdicts of a conic bundle pencil"),
        ("classify", "Kollar class, degree-two verdict and catalog class"),
    ):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", help="surface document, or - for stdin")
        sp.add_argument("--pretty", action="store_true", help="print a key/value table instead of JSON")
        if name == "classify":
            sp.add_argument("--genus", type=int, help="genus of the fixed curve (0: no fixed curve)")
            sp.add_argument("--twist", type=int, choices=(0, 1, 2), help="twist index of the involution")
            sp.add_argument("--fibers", type=int, help="number of geometric singular fibers")
            sp.add_argument("--field", choices=("real", "general"), help="ground field table for minimal pairs")
            sp.add_argument("--g-exceptional", action="store_true", help="the conic bundle is G-exceptional")
    return p


def run(argv: Optional[list[str]] = None) -> tuple[int, str]:
    """Run the CLI and return ``(exit_code, output)``."""
    args = build_parser().parse_args(argv)
    doc: dict = {}
    try:
        doc = _read(args.file)
        report = _header(args.command, doc if isinstance(doc, dict) else {})
        report.update(COMMANDS[args.command](doc, args))
        code = 0
    except InputError as exc:
        report, code = _error("input", str(exc)), 2
    except InconsistentError as exc:
        report, code = _error("inconsistent", str(exc)), 3
    except (ValueError, TypeError, KeyError, ArithmeticError, RecursionError) as exc:
        # schema-valid but unusable values end up here
        report, code = _error("input", f"{type(exc).__name__}: {exc}"), 2
    if args.pretty:
        return code, render_pretty(report)
    return code, json.dumps(report, sort_keys=True, indent=2)


def _error(kind: str, message: str) -> dict:
    return {"error": {"type": kind, "message": message}}


def main(argv: Optional[list[str]] = None) -> int:
    code, out = run(argv)
    print(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
