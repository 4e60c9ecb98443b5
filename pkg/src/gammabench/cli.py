"""Command-line driver: validation, relation sweeps, sectors, spectra,
torus solving, Gauss classification, dual checks, and form invariants,
all emitting deterministic JSON reports.

Exit codes: 0 all checks passed, 1 at least one check failed, 2 input or
parse error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dual import duality_check
from .fermi import FermiAlgebra, random_circuit, verify_even_relations
from .gamma import GammaModel, OrderingChoice
from .gauge import (
    GaugeTheory,
    GaussSpec,
    InvalidGaussSpecError,
    classify,
    equivalent,
)
from .heis import QuadraticFormZ2, arf
from .opalg import SizeLimitError
from .spectra import QuadraticHamiltonian, spectrum_match
from .torus import SigmaFrame, TorusSpec, torus_model
from .z2core import BitVec, Graph, LatticeError

# stable anchor slug per check id, referenced by every report
ANCHORS = {
    "lattice-valid": "lattice-file-wellformed",
    "parity-involutive": "parity-generator-involution",
    "parity-commute": "parity-generators-commute",
    "kinetic-reversal-square": "hop-reversal-and-square",
    "kinetic-braiding": "hop-braiding-signs",
    "parity-kinetic-braiding": "parity-hop-braiding-signs",
    "loop-relation": "circuit-words-trivial",
    "generator-clifford": "vertex-clifford-relations",
    "generator-cross-commute": "cross-vertex-commutation",
    "star-involutive": "vertex-parity-word-involution",
    "hop-reversal-square": "hop-reversal-and-square",
    "hop-braiding": "hop-braiding-signs",
    "star-hop-braiding": "parity-hop-braiding-signs",
    "constraint-central": "constraint-words-central",
    "intertwiner-braiding": "sector-intertwiner-braiding",
    "twist-conjugation": "ordering-twist-conjugation",
    "sector-count": "sector-count-matches-cycle-space",
    "sector-dimension": "sector-dimensions-uniform",
    "flux-parity": "sector-parity-tied-to-flux",
    "spectrum-sector": "per-sector-spectrum-match",
    "torus-counts": "torus-cell-counts",
    "alpha-formula": "torus-parity-sign-formula",
    "admissible-count": "admissible-chain-count",
    "ref-plaquettes": "reference-state-face-constraints",
    "ref-projection-norm": "loop-projection-norm-half",
    "ground-constraints": "ground-state-all-constraints",
    "gauss-class": "gauss-family-invariant",
    "gauss-equivalence": "gauss-families-equivalent",
    "dimension-count": "physical-dimension-match",
    "arf-value": "arf-invariant",
    "arf-zero-count": "arf-zero-counting",
}


def _anchor(check_id: str) -> str:
    base = check_id.split("/")[0]
    return ANCHORS.get(base, base)


def _check(check_id: str, ok: bool, witness=None) -> dict:
    rec = {"id": check_id, "anchor": _anchor(check_id), "status": "pass" if ok else "fail"}
    if witness is not None:
        rec["witness"] = witness
    return rec


def _load_graph(path: str) -> tuple[Graph, str]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise SystemExit(f"cannot read lattice file: {exc}")
    digest = hashlib.sha256(raw).hexdigest()
    try:
        g = Graph.from_json(raw.decode())
    except json.JSONDecodeError as exc:
        print(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}", file=sys.stderr)
        raise SystemExit(2)
    except LatticeError as exc:
        print(f"invalid lattice: {exc}", file=sys.stderr)
        raise SystemExit(2)
    return g, digest


def _emit(report: dict, out: str | None) -> int:
    text = json.dumps(report, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)
    return 0 if report.get("ok", False) else 1


def _base_report(lattice_hash: str | None, manifest: dict | None, checks: list[dict]) -> dict:
    report = {
        "tool": {"name": "gammabench", "version": __version__},
        "checks": checks,
        "ok": all(c["status"] == "pass" for c in checks),
    }
    if lattice_hash is not None:
        report["lattice_hash"] = lattice_hash
    if manifest is not None:
        report["manifest"] = manifest
    return report


def _model(graph: Graph, alpha_flag: int | None) -> GammaModel:
    choice = OrderingChoice.from_graph(graph)
    model = GammaModel(graph, choice)
    if alpha_flag is not None and not graph.odd_vertices():
        if model.alpha() != alpha_flag:
            eta = BitVec.from_indices(graph.nv, [0])
            model = GammaModel(graph, choice.with_eta(eta))
    return model


# -- subcommands


def cmd_lattice_validate(args) -> int:
    g, digest = _load_graph(args.lattice)
    checks = [
        _check(
            "lattice-valid",
            True,
            {
                "vertices": g.nv,
                "edges": g.ne,
                "faces": len(g.faces) if g.faces is not None else 0,
                "odd_vertices": g.odd_vertices(),
            },
        )
    ]
    return _emit(_base_report(digest, None, checks), args.out)


def cmd_relations_verify(args) -> int:
    g, digest = _load_graph(args.lattice)
    rng = random.Random(args.seed)
    model = _model(g, args.alpha)
    alg = FermiAlgebra(g)
    extra = [random_circuit(g, rng) for _ in range(10)]
    fermi_rep = verify_even_relations(g, alg, extra)
    model_rep = model.verify_relations(rng=rng)
    checks = [
        _check("fermi/" + r.check_id, r.ok, r.detail or None) for r in fermi_rep.records
    ] + [
        _check("model/" + r.check_id, r.ok, r.detail or None) for r in model_rep.records
    ]
    return _emit(_base_report(digest, model.manifest(), checks), args.out)


def cmd_sectors(args) -> int:
    g, digest = _load_graph(args.lattice)
    model = _model(g, args.alpha)
    k = len(model.cc.circuits)
    method = "trace" if k <= 6 else "rank"
    dims = model.sector_dimensions(method)
    expected_sectors = 2 ** k
    if g.odd_vertices():
        expected_dim = model.odd_sector_dimension()
    else:
        expected_dim = 2 ** (g.nv - 1)
    checks = [
        _check("sector-count", len(dims) == expected_sectors, {"sectors": len(dims)}),
        _check(
            "sector-dimension",
            set(dims.values()) == {expected_dim},
            {"dimension": sorted(set(dims.values())), "method": method},
        ),
    ]
    if not g.odd_vertices():
        ok = True
        for label in dims:
            model.flux_parity_exponent(label)
        checks.append(_check("flux-parity", ok, {"alpha": model.alpha()}))
    return _emit(_base_report(digest, model.manifest(), checks), args.out)


def cmd_spectrum(args) -> int:
    g, digest = _load_graph(args.lattice)
    if g.odd_vertices():
        print("spectrum matching needs an even-degree lattice", file=sys.stderr)
        return 2
    model = _model(g, args.alpha)
    ham = QuadraticHamiltonian.uniform(g, t=args.t, nu=args.nu)
    try:
        report = spectrum_match(model, ham, tolerance=args.tolerance)
    except SizeLimitError as exc:
        print(f"size bound: {exc}", file=sys.stderr)
        return 2
    checks = [
        _check(
            f"spectrum-sector/{''.join(map(str, s.label))}",
            s.max_dev <= args.tolerance,
            {"max_deviation": s.max_dev, "parity": s.parity},
        )
        for s in report.sectors
    ]
    out_report = _base_report(digest, model.manifest(), checks)
    out_report["spectrum"] = report.to_dict()
    return _emit(out_report, args.out)


def cmd_torus_solve(args) -> int:
    try:
        spec = TorusSpec(tuple(args.L))
    except LatticeError as exc:
        print(f"bad torus sizes: {exc}", file=sys.stderr)
        return 2
    g = spec.build()
    model = torus_model(spec)
    from .torus import alpha_formula

    checks = [
        _check(
            "torus-counts",
            True,
            {"vertices": g.nv, "edges": g.ne, "faces": len(g.faces)},
        ),
        _check("alpha-formula", model.alpha() == alpha_formula(spec), {"alpha": model.alpha()}),
    ]
    state_rows = None
    if spec.d == 2 and all(L % 2 == 0 for L in spec.sizes):
        frame = SigmaFrame(spec)
        ref = frame.ref_state()
        ok_faces = all(
            frame.plaquette(f).apply(ref).add(ref.scale(-1)).norm() < 1e-12
            for f in range(len(g.faces))
        )
        from .opalg import sector_project

        proj = sector_project(ref, [(frame.loop(0, 0), 1), (frame.loop(1, 0), 1)])
        ground = frame.ground_state()
        ok_ground = all(
            frame.plaquette(f).apply(ground).add(ground.scale(-1)).norm() < 1e-12
            for f in range(len(g.faces))
        ) and all(
            frame.loop(d, 0).apply(ground).add(ground.scale(-1)).norm() < 1e-12
            for d in range(2)
        )
        dim = frame.admissible_dimension()
        checks += [
            _check("admissible-count", True, {"dimension": dim, "count": 2 ** dim}),
            _check("ref-plaquettes", ok_faces),
            _check(
                "ref-projection-norm",
                abs(proj.norm() - 0.5) < 1e-12,
                {"norm": proj.norm()},
            ),
            _check("ground-constraints", ok_ground),
        ]
        state_rows = sorted(ground.amp.items())
    report = _base_report(None, model.manifest(), checks)
    code = _emit(report, args.out)
    if state_rows is not None and args.state_out:
        lines = ["basis_index,amplitude_re,amplitude_im"]
        lines += [f"{b},{a.real!r},{a.imag!r}" for b, a in state_rows]
        Path(args.state_out).write_text("\n".join(lines) + "\n")
    return code


def _spec_from_json(g: Graph, path: str) -> GaussSpec:
    try:
        data = json.loads(Path(path).read_text())
        tails = [BitVec(g.ne, 0)] * g.nv
        tails = list(tails)
        for v, edges in data.get("tails", {}).items():
            tails[int(v)] = BitVec.from_indices(g.ne, edges)
        mu = BitVec.from_indices(g.nv, data.get("mu", []))
        return GaussSpec(g, tuple(tails), mu)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"bad Gauss spec: {exc}", file=sys.stderr)
        raise SystemExit(2)


def cmd_gauss_classify(args) -> int:
    g, digest = _load_graph(args.lattice)
    gauge = GaugeTheory(g)
    try:
        if args.spec:
            spec = _spec_from_json(g, args.spec)
        else:
            spec = GaussSpec.deformed(g, 0, args.alpha or 0)
    except InvalidGaussSpecError as exc:
        print(f"invalid Gauss spec: {exc}", file=sys.stderr)
        return 2
    cls = classify(gauge, spec)
    witness_data = {"tau": cls.tau.indices(), "alpha": cls.alpha}
    checks = [_check("gauss-class", True, witness_data)]
    if args.compare:
        other = _spec_from_json(g, args.compare)
        same, wit = equivalent(gauge, spec, other)
        detail = None
        if wit is not None:
            theta, smap = wit
            detail = {
                "theta": theta.indices(),
                "map_rows": [row for row in smap.rows],
            }
        checks.append(_check("gauss-equivalence", same, detail))
    report = _base_report(digest, None, checks)
    report["class"] = witness_data
    return _emit(report, args.out)


def cmd_dual_check(args) -> int:
    g, digest = _load_graph(args.lattice)
    model = _model(g, args.alpha)
    eps = BitVec.from_indices(g.nv, [0] if args.beta else [])
    checks_raw, summary = duality_check(model, eps)
    checks = [_check("dual/" + c.relation_id, c.ok, c.detail or None) for c in checks_raw]
    report = _base_report(digest, model.manifest(), checks)
    report["summary"] = summary
    return _emit(report, args.out)


def cmd_heis_arf(args) -> int:
    try:
        diag = tuple(int(x) for x in args.diag.split(","))
        rows = []
        for row in args.gram.split(";"):
            bits = [int(x) for x in row.split(",")]
            rows.append(sum(b << i for i, b in enumerate(bits)))
        form = QuadraticFormZ2(len(diag), diag, tuple(rows))
    except (ValueError, TypeError) as exc:
        print(f"bad form data: {exc}", file=sys.stderr)
        return 2
    value = arf(form)
    zeros = form.zero_count()
    n = form.dim // 2
    expected = 2 ** (form.dim - 1) + (-1) ** value * 2 ** (n - 1)
    checks = [
        _check("arf-value", True, {"arf": value}),
        _check("arf-zero-count", zeros == expected, {"zero_count": zeros}),
    ]
    report = _base_report(None, None, checks)
    report["arf"] = value
    report["zero_count"] = zeros
    return _emit(report, args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gammabench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, lattice=True):
        if lattice:
            p.add_argument("--lattice", required=True, help="lattice JSON file")
        p.add_argument("--out", help="report path (default: stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--alpha", type=int, choices=(0, 1), default=None)
        p.add_argument("--tolerance", type=float, default=1e-9)

    lattice = sub.add_parser("lattice").add_subparsers(dest="sub", required=True)
    p = lattice.add_parser("validate")
    common(p)
    p.set_defaults(func=cmd_lattice_validate)

    relations = sub.add_parser("relations").add_subparsers(dest="sub", required=True)
    p = relations.add_parser("verify")
    common(p)
    p.set_defaults(func=cmd_relations_verify)

    p = sub.add_parser("sectors")
    common(p)
    p.set_defaults(func=cmd_sectors)

    p = sub.add_parser("spectrum")
    common(p)
    p.add_argument("--t", type=float, default=1.0, help="uniform hopping amplitude")
    p.add_argument("--nu", type=float, default=0.0, help="uniform potential")
    p.set_defaults(func=cmd_spectrum)

    torus = sub.add_parser("torus").add_subparsers(dest="sub", required=True)
    p = torus.add_parser("solve")
    common(p, lattice=False)
    p.add_argument("--L", type=int, nargs="+", required=True)
    p.add_argument("--state-out", help="ground-state CSV path")
    p.set_defaults(func=cmd_torus_solve)

    gauss = sub.add_parser("gauss").add_subparsers(dest="sub", required=True)
    p = gauss.add_parser("classify")
    common(p)
    p.add_argument("--spec", help="Gauss spec JSON ({tails: {v: [edges]}, mu: [vertices]})")
    p.add_argument("--compare", help="second spec for an equivalence test")
    p.set_defaults(func=cmd_gauss_classify)

    dual = sub.add_parser("dual").add_subparsers(dest="sub", required=True)
    p = dual.add_parser("check")
    common(p)
    p.add_argument("--beta", type=int, choices=(0, 1), default=0)
    p.set_defaults(func=cmd_dual_check)

    heis = sub.add_parser("heis").add_subparsers(dest="sub", required=True)
    p = heis.add_parser("arf")
    common(p, lattice=False)
    p.add_argument("--gram", required=True, help="rows 'a,b,...;c,d,...' of the polar form")
    p.add_argument("--diag", required=True, help="comma-separated basis values")
    p.set_defaults(func=cmd_heis_arf)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except LatticeError as exc:
        print(f"lattice error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
