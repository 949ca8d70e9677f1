"""Command-line entry point: ``minscramble <subcommand> ...``.

Exit codes: 0 success, 1 runtime error, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import fileio
from .algebra import AlgebraError, is_collinear, is_factor
from .lattice import LatticeError, read_csv, render_svg, run_sweep, write_csv
from .otoc import (
    OTOCError,
    a_otoc_bipartite,
    a_otoc_entropic,
    a_otoc_exact,
    a_otoc_haar_mc,
    a_otoc_stabilizer,
    cgp,
)
from .partition import GraphError, brute_force_mincut, stoer_wagner
from .pauli import PauliError, build_group
from .rate import (
    TIE_TOL,
    RateError,
    circular_hamiltonian,
    gaussian_rate,
    minimize_rate,
    rate_abelian,
    rate_bipartite,
    rate_stabilizer,
)

RUNTIME_ERRORS = (AlgebraError, OTOCError, RateError, GraphError, PauliError, LatticeError, np.linalg.LinAlgError)


class UsageError(Exception):
    pass


def _emit(obj, out=None) -> None:
    out = out or sys.stdout
    out.write(json.dumps(obj, indent=2) + "\n")


def _algebra_doc(path):
    doc = fileio.load_document(path)
    return doc, fileio.algebra_from_json(doc.data, doc)


# --------------------------------------------------------------------------
# subcommands


def cmd_algebra(args) -> int:
    _, A = _algebra_doc(args.spec)
    C = A.commutant()
    out = {
        "d": A.dim,
        "dimA": len(A),
        "dimAprime": len(C),
        "blocks": [[n, dj] for _, n, dj in A.blocks()],
    }
    if args.report:
        out.update(
            {
                "dimCenter": len(A.center()),
                "is_factor": is_factor(A),
                "is_collinear": is_collinear(A),
                "closure_residual": A.closure_residual(),
            }
        )
    _emit(out)
    return 0


def cmd_otoc(args) -> int:
    doc, A = _algebra_doc(args.algebra)
    U = fileio.load_unitary(args.unitary)
    method = args.method
    out = {"method": method}
    if method == "exact":
        out["value"] = a_otoc_exact(A, U)
    elif method == "entropic":
        terms = a_otoc_entropic(A, U, seed=args.seed)
        out.update(value=terms.value, form=terms.form)
    elif method == "mc":
        mean, se = a_otoc_haar_mc(A, U, args.samples, seed=args.seed)
        out.update(value=mean, stderr=se, samples=args.samples)
    else:
        spec = doc.data
        kind = spec.get("kind")
        if "rotation" in spec:
            raise UsageError(f"--method {method} does not accept rotated algebras; use exact")
        if method == "bipartite":
            if kind != "bipartite" or spec.get("side", "A") != "A":
                raise UsageError("--method bipartite needs an algebra of kind bipartite with side A")
            out["value"] = a_otoc_bipartite(U, (spec["dA"], spec["dB"]))
        elif method == "cgp":
            if kind != "masa":
                raise UsageError("--method cgp needs an algebra of kind masa")
            V = fileio.matrix_from_json(spec["basis"], doc, "basis") if "basis" in spec else None
            out["value"] = cgp(U, V)
        elif method == "stabilizer":
            if kind != "stabilizer":
                raise UsageError("--method stabilizer needs an algebra of kind stabilizer")
            out["value"] = a_otoc_stabilizer(U, build_group(spec["generators"], spec.get("n")))
    _emit(out)
    return 0


def cmd_rate(args) -> int:
    doc, A = _algebra_doc(args.algebra)
    H = fileio.load_hamiltonian(args.hamiltonian)
    form = args.form
    spec = doc.data
    if form in ("auto", "general"):
        _emit(gaussian_rate(H, A).as_dict())
        return 0
    if form == "bipartite":
        if spec.get("kind") != "bipartite" or "rotation" in spec:
            raise UsageError("--form bipartite needs an unrotated algebra of kind bipartite")
        value = rate_bipartite(H, (spec["dA"], spec["dB"]))
    elif form == "abelian":
        value = rate_abelian(H, A)
    else:
        if spec.get("kind") != "stabilizer" or "rotation" in spec:
            raise UsageError("--form stabilizer needs an unrotated algebra of kind stabilizer")
        value = rate_stabilizer(H, build_group(spec["generators"], spec.get("n")))
    _emit({"form": form, "rate": value})
    return 0


def _family_and_hamiltonian(args):
    family = fileio.load_family(args.family)
    if args.hamiltonian:
        H = fileio.load_hamiltonian(args.hamiltonian)
    elif family.kind.startswith("circular_"):
        H = circular_hamiltonian(family.kind)
    else:
        raise UsageError("--hamiltonian is required for this family kind")
    return family, H


def cmd_rate_sweep(args) -> int:
    family, H = _family_and_hamiltonian(args)
    res = minimize_rate(H, family, tol=args.tolerance)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["theta", "rate"])
    for label, r in zip(res.labels, res.rates):
        w.writerow([repr(label) if isinstance(label, float) else label, repr(float(r))])
    return 0


def cmd_minimize(args) -> int:
    family, H = _family_and_hamiltonian(args)
    res = minimize_rate(H, family, tol=args.tolerance)
    _emit(
        {
            "minimum": res.minimum,
            "minimizers": [{"index": i, "label": lab} for i, lab in res.minimizers],
            "maximizers": [{"index": int(i), "label": lab} for i, lab in res.maximizers(args.tolerance)],
            "rates": [float(r) for r in res.rates],
        }
    )
    return 0


def cmd_mincut(args) -> int:
    g = fileio.load_graph(args.graph)
    if args.constrain_size is not None:
        cuts = brute_force_mincut(g, args.constrain_size)
        _emit({"minimizers": [c.as_dict() for c in cuts], **cuts[0].as_dict()})
    elif args.brute_force:
        cuts = brute_force_mincut(g)
        _emit({"minimizers": [c.as_dict() for c in cuts], **cuts[0].as_dict()})
    else:
        _emit(stoer_wagner(g).as_dict())
    return 0


def cmd_experiment(args) -> int:
    cfg = fileio.load_sweep_config(args.config)
    records = run_sweep(cfg, workers=args.threads)
    write_csv(records, args.out)
    if args.svg:
        render_svg(read_csv(args.out), args.svg, args.y_field)
    return 0


# --------------------------------------------------------------------------
# parser


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    g = argparse.ArgumentParser(add_help=False)

    def dflt(v):
        return argparse.SUPPRESS if suppress else v

    g.add_argument("--seed", type=int, default=dflt(0), help="seed for randomized steps (default 0)")
    g.add_argument("--tolerance", type=float, default=dflt(TIE_TOL), help="tie tolerance for minimizers")
    g.add_argument("--threads", type=int, default=dflt(1), help="worker processes for sweeps (0 = all cores)")
    return g


def build_parser() -> argparse.ArgumentParser:
    top = _global_flags(suppress=False)
    common = _global_flags(suppress=True)  # repeated after the subcommand without clobbering
    p = argparse.ArgumentParser(prog="minscramble", description=__doc__.splitlines()[0], parents=[top])
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("algebra", parents=[common], help="structure of an algebra")
    a.add_argument("--spec", required=True, help="algebra spec JSON")
    a.add_argument("--report", action="store_true", help="include center, factor and collinearity data")
    a.set_defaults(func=cmd_algebra)

    o = sub.add_parser("otoc", parents=[common], help="A-OTOC of a unitary")
    o.add_argument("--algebra", required=True)
    o.add_argument("--unitary", required=True, help='matrix JSON or {"hamiltonian": ..., "t": ...}')
    o.add_argument("--method", default="exact", choices=["exact", "bipartite", "cgp", "stabilizer", "entropic", "mc"])
    o.add_argument("--samples", type=int, default=10000, help="Monte Carlo samples for --method mc")
    o.set_defaults(func=cmd_otoc)

    r = sub.add_parser("rate", parents=[common], help="Gaussian scrambling rate")
    r.add_argument("--hamiltonian", required=True, help="matrix JSON or Pauli text file")
    r.add_argument("--algebra", required=True)
    r.add_argument("--form", default="auto", choices=["auto", "general", "bipartite", "abelian", "stabilizer"])
    r.set_defaults(func=cmd_rate)

    rs = sub.add_parser("rate-sweep", parents=[common], help="rates over a family, as CSV theta,rate")
    rs.add_argument("--family", required=True)
    rs.add_argument("--hamiltonian", help="defaults to the paired Hamiltonian of circular families")
    rs.set_defaults(func=cmd_rate_sweep)

    m = sub.add_parser("minimize", parents=[common], help="minimize the rate over a family")
    m.add_argument("--family", required=True)
    m.add_argument("--hamiltonian")
    m.set_defaults(func=cmd_minimize)

    c = sub.add_parser("mincut", parents=[common], help="minimum-scrambling spatial bipartition")
    c.add_argument("--graph", required=True)
    c.add_argument("--constrain-size", type=int, help="require |S| = k (enumeration)")
    c.add_argument("--brute-force", action="store_true", help="enumerate and report every minimizer")
    c.set_defaults(func=cmd_mincut)

    e = sub.add_parser("experiment", parents=[common], help="lattice experiments")
    esub = e.add_subparsers(dest="experiment", required=True)
    s = esub.add_parser("sweep", parents=[common], help="sweep the NNN strength x")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True, help="CSV output path")
    s.add_argument("--svg", help="optional SVG plot path")
    s.add_argument("--y-field", default="mean_S_size", choices=["mean_S_size", "mean_rate"])
    s.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (fileio.ConfigError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except RUNTIME_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
