"""Command-line front end: ``nilkur analyze|table|cohomology|kuranishi|deform|recognize``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from nilkur.algebra import BUILTINS, TABLE_ROWS, AlgebraSpec, builtin, validate
from nilkur.deform import analyze, deform, recognize_heisenberg
from nilkur.dolbeault import DolbeaultComplex, VectorForm, _basis, cohomology
from nilkur.errors import InputError, InvariantViolation
from nilkur.exact import ONE, ZERO, GaussQ
from nilkur.kuranishi import certificate, obstructions, series

ALIASES = {
    "t6": ("torus", (2, 1)),
    "h5r": ("heisenberg_abelian", (2, 1)),
    "h3r3": ("heisenberg_abelian", (1, 2)),
    "h3h3": ("hxh", (1, 1)),
}

# reference rows: d, h0, h1, dim Kur, dim Abel
REFERENCE = {
    "T^6": (9, 3, 9, 9, 9),
    "(G\\H5)xS^1": (6, 1, 4, 4, 4),
    "(G\\H3)xT^3": (7, 2, 6, 6, 6),
    "(G\\H3)x(G\\H3)": (6, 1, 4, 4, 3),
    "G\\W6": (6, 2, 6, 5, 4),
    "G\\P6": (6, 1, 4, 4, 3),
}


def parse_example(text: str) -> AlgebraSpec:
    """``NAME`` or ``NAME:p1,p2`` for a built-in family."""
    name, _, params = text.partition(":")
    name = name.strip().lower()
    if name in ALIASES and not params:
        real, args = ALIASES[name]
        return builtin(real, *args)
    if name not in BUILTINS:
        known = sorted(BUILTINS) + sorted(ALIASES)
        raise InputError(f"unknown example {name!r}; known examples: {', '.join(known)}")
    args = []
    if params:
        for p in params.split(","):
            try:
                args.append(int(p))
            except ValueError:
                raise InputError(f"example parameter {p!r} is not an integer") from None
    return builtin(name, *args)


def parse_spec(path: str | None = None, example: str | None = None) -> AlgebraSpec:
    if (path is None) == (example is None):
        raise InputError("give exactly one of a spec file or --example NAME")
    if example is not None:
        spec = parse_example(example)
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read spec file {path}: {exc.strerror}") from None
        spec = AlgebraSpec.loads(text)
    validate(spec)
    return spec


def parse_phi(path: str, spec: AlgebraSpec) -> VectorForm:
    """Phi file: ``{"degree": 1, "terms": [{"form": p, "vector": q, "value": "..."}]}``."""
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read Phi file {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"Phi file: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise InputError("Phi file: top-level value must be an object")
    extra = set(obj) - {"degree", "terms"}
    if extra:
        raise InputError(f"Phi file: unknown field(s) {sorted(extra)}")
    if obj.get("degree", 1) != 1:
        raise InputError("Phi file: field 'degree' must be 1")
    terms = obj.get("terms")
    if not isinstance(terms, list):
        raise InputError("Phi file: field 'terms' must be a list")
    N = spec.dim
    out = {}
    for pos, t in enumerate(terms):
        where = f"Phi file: terms[{pos}]"
        if not isinstance(t, dict):
            raise InputError(f"{where} must be an object")
        extra = set(t) - {"form", "vector", "value"}
        if extra:
            raise InputError(f"{where}: unknown field(s) {sorted(extra)}")
        for fld in ("form", "vector"):
            v = t.get(fld)
            if not isinstance(v, int) or isinstance(v, bool) or not 1 <= v <= N:
                raise InputError(f"{where}: field {fld!r} must be an integer in 1..{N}")
        if not isinstance(t.get("value"), str):
            raise InputError(f"{where}: field 'value' must be a Gaussian-rational string")
        key = (t["form"], t["vector"])
        if key in out:
            raise InputError(f"{where}: duplicate term for form {key[0]}, vector {key[1]}")
        out[key] = GaussQ.parse(t["value"])
    return VectorForm.from_terms(N, 1, out)


def phi_to_json(phi: VectorForm) -> dict:
    basis = _basis(phi.dim, 1)
    terms = []
    for ((p,), q), c in zip(basis.elements, phi.coeffs):
        if c:
            terms.append({"form": p, "vector": q, "value": str(c.to_scalar())})
    return {"degree": 1, "terms": terms}


def parse_params(text: str, spec: AlgebraSpec, cx: DolbeaultComplex):
    """``1,3`` selects harmonic basis elements; ``1>1,3>3`` names unit vectors ``mu[p->q]``."""
    harm = cx.harmonic_basis(1)
    basis = _basis(spec.dim, 1)
    vectors = []
    for item in text.split(","):
        item = item.strip()
        if ">" in item:
            p, _, q = item.partition(">")
            try:
                key = ((int(p),), int(q))
                idx = basis.index[key]
            except (ValueError, KeyError):
                raise InputError(f"--params entry {item!r} is not a valid p>q label") from None
            vectors.append([ONE if i == idx else ZERO for i in range(len(basis))])
        else:
            try:
                k = int(item)
            except ValueError:
                raise InputError(f"--params entry {item!r} is neither an index nor a p>q label") from None
            if not 1 <= k <= len(harm):
                raise InputError(f"--params index {k} out of range 1..{len(harm)}")
            vectors.append(list(harm[k - 1]))
    return vectors


# ---------------------------------------------------------------------------
# commands


def _emit(args, data: dict, lines: list):
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        print("\n".join(lines))


def cmd_analyze(args) -> int:
    spec = parse_spec(args.spec, args.example)
    report = analyze(spec, args.order)
    if args.json:
        print(report.dumps())
        return 0
    lines = [f"algebra: {spec.name or args.spec}  (n={spec.n}, m={spec.m})"]
    for key in ("h0", "h1", "h2", "dim_ker_dbar1", "generic_d", "dim_abel"):
        lines.append(f"{key}: {getattr(report, key)}")
    k = report.kur
    lines.append(f"kur: {k['status']}  [{k['lower']}, {k['upper']}]")
    lines.append(f"heisenberg: {report.heisenberg['verdict']}")
    for o in report.obstructions:
        lines.append(f"obstruction: {o}")
    for w in report.warnings:
        lines.append(f"warning: {w}")
    print("\n".join(lines))
    return 0


def render_table(order: int = 4) -> str:
    header = ("example", "d", "h0", "h1", "dim Kur", "dim Abel")
    rows = []
    notes = []
    for label, factory in TABLE_ROWS:
        r = analyze(factory(), order)
        ref = REFERENCE[label]
        d = str(r.dim_ker_dbar1)
        if r.dim_ker_dbar1 != ref[0]:
            d += "*"
            notes.append(f"* {label}: dim ker dbar_1 = {r.dim_ker_dbar1} for this structure, reference value {ref[0]}; "
                         "the reference counts a generic nearby structure")
        lo, hi = r.kur["lower"], r.kur["upper"]
        kur = str(lo) if lo == hi else f"{lo}..{hi}+"
        if lo != hi:
            notes.append(f"+ {label}: {r.kur['status']} gives bounds [{lo}, {hi}], reference value {ref[3]}")
        rows.append((label, d, str(r.h0), str(r.h1), kur, str(r.dim_abel)))
    widths = [max(len(x[i]) for x in [header] + rows) for i in range(len(header))]
    fmt = lambda row: " | ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()
    out = [fmt(header), "-+-".join("-" * w for w in widths)]
    out.extend(fmt(r) for r in rows)
    if notes:
        out.append("")
        out.extend(notes)
    return "\n".join(out) + "\n"


def cmd_table(args) -> int:
    sys.stdout.write(render_table(args.order))
    return 0


def cmd_cohomology(args) -> int:
    spec = parse_spec(args.spec, args.example)
    cx = DolbeaultComplex(spec)
    degrees = [args.degree] if args.degree is not None else list(range(spec.dim + 1))
    data, lines = {}, []
    for k in degrees:
        c = cohomology(spec, k, complex_=cx)
        reps = [f.format(spec.n) for f in c.harmonic_basis]
        data[str(k)] = {"dim": c.dim, "harmonic_basis": reps}
        lines.append(f"H^{k}: dim {c.dim}")
        lines.extend(f"  {r}" for r in reps)
    _emit(args, data, lines)
    return 0


def cmd_kuranishi(args) -> int:
    spec = parse_spec(args.spec, args.example)
    cx = DolbeaultComplex(spec)
    basis = parse_params(args.params, spec, cx) if args.params else None
    ser = series(spec, args.order, basis=basis, complex_=cx)
    obs = obstructions(spec, ser, cx)
    names = list(ser.labels)
    terms = [t.format(spec.n, names) for t in ser.terms]
    polys = [line for line, f in zip(obs.format(), obs.polys) if f]
    data = {"parameters": names, "phi": terms, "obstructions": polys}
    lines = ["parameters: " + ", ".join(names)]
    lines.extend(f"phi_{r + 1} = {t}" for r, t in enumerate(terms))
    if polys:
        lines.extend(f"obstruction: {p}" for p in polys)
    else:
        lines.append(f"obstructions: none through degree {obs.degree}")
    if basis is None and args.order >= 2:
        cert = certificate(spec, args.order, cx)
        data["certificate"] = {"status": cert.status_text, "lower": cert.lower, "upper": cert.upper,
                               "witness": {k: v for k, v in cert.witness.items() if k != "obstructions"}}
        lines.append(f"certificate: {cert.status_text} [{cert.lower}, {cert.upper}]")
        if "vanishing" in cert.witness:
            lines.append("vanishing coordinates: " + ", ".join(cert.witness["vanishing"]))
    _emit(args, data, lines)
    return 0


def cmd_deform(args) -> int:
    spec = parse_spec(args.spec, args.example)
    if not args.phi:
        raise InputError("deform needs --phi FILE")
    phi = parse_phi(args.phi, spec)
    res = deform(spec, phi)
    validate(res.spec)
    data = {"integrable": res.integrable, "abelian": res.abelian, "spec": res.spec.to_json()}
    lines = ["integrable: yes", "abelian: yes", "deformed spec:", res.spec.dumps()]
    _emit(args, data, lines)
    return 0


def cmd_recognize(args) -> int:
    spec = parse_spec(args.spec, args.example)
    cert = recognize_heisenberg(spec)
    data = {"verdict": cert.verdict, "unit": None if cert.unit is None else str(cert.unit),
            "D": None if cert.D is None else [[str(x) for x in row] for row in cert.D],
            "diagnostics": list(cert.diagnostics)}
    lines = [f"verdict: {cert.verdict}"]
    if cert.unit is not None:
        lines.append(f"unit: {cert.unit}")
    if cert.D is not None:
        lines.append("D: " + "; ".join(", ".join(str(x) for x in row) for row in cert.D))
    lines.extend(f"note: {d}" for d in cert.diagnostics)
    _emit(args, data, lines)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nilkur", description="Deformations of abelian complex structures on 2-step nilmanifolds.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, order=True):
        p.add_argument("spec", nargs="?", help="algebra spec JSON file")
        p.add_argument("--example", metavar="NAME[:PARAMS]", help="built-in algebra, e.g. w6 or torus:2,1")
        p.add_argument("--json", action="store_true", help="emit JSON")
        if order:
            p.add_argument("--order", type=int, default=4, help="Kuranishi truncation order (default 4)")

    p = sub.add_parser("analyze", help="full report for one algebra")
    add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("table", help="dimension table of the six 6-dimensional examples")
    p.add_argument("--order", type=int, default=4)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("cohomology", help="cohomology dimensions and harmonic bases")
    add_common(p, order=False)
    p.add_argument("--degree", type=int, help="single degree k (default: all)")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("kuranishi", help="Kuranishi series and obstructions")
    add_common(p)
    p.add_argument("--params", metavar="LIST", help="restrict mu: harmonic indices (1-based) or p>q labels")
    p.set_defaults(func=cmd_kuranishi)

    p = sub.add_parser("deform", help="apply a deformation and print the new spec")
    add_common(p, order=False)
    p.add_argument("--phi", metavar="FILE", help="deformation coefficients")
    p.set_defaults(func=cmd_deform)

    p = sub.add_parser("recognize", help="Heisenberg recognition")
    add_common(p, order=False)
    p.set_defaults(func=cmd_recognize)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "order", 4) < 1:
            raise InputError("--order must be positive")
        if args.command == "cohomology" and args.degree is not None:
            spec_dim = parse_spec(args.spec, args.example).dim
            if not 0 <= args.degree <= spec_dim:
                raise InputError(f"--degree must lie in 0..{spec_dim}")
        return args.func(args)
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
