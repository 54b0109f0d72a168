"""Command-line entry point.

    ptmoments analyze FILE [--witness FILE | --witness-alpha A] [--json | --text]
    ptmoments analyze --batch DIR [--jobs N]
    ptmoments moments FILE --orders 2,3,4
    ptmoments gen FAMILY [params] [--out FILE]
    ptmoments mixture-scan --a 2.5 --x 4 --p-steps 40 [--format text|json|csv|tsv]
    ptmoments keyrate (--example 1|2 | --config FILE)

Exit status: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__, io, keyrate, reports, states
from .bipartite import PSD_TOL, TRACE_TOL, validate
from .errors import NumericalError, PtMomentsError, ValidationError
from .linalg import HERM_TOL
from .witness import make_witness, witness_w

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

GEN_FAMILIES = ("bell", "fixture", "sep-a", "pptes-x", "sep1", "pptes1", "sep2", "pptes2",
                "mixture", "random", "random-separable", "rho-c", "witness")


class UsageError(ValidationError):
    pass


# ---------------------------------------------------------------------------
# Helpers

def _tolerances(args) -> dict:
    return {"herm_tol": args.herm_tol, "psd_tol": args.psd_tol, "trace_tol": args.trace_tol}


def _validate_doc(doc: io.MatrixDocument, args, d1=None, d2=None):
    return validate(doc.matrix, d1 or doc.d1, d2 or doc.d2, label=doc.label,
                    herm_tol=args.herm_tol, trace_tol=args.trace_tol, psd_tol=args.psd_tol)


def _load_input(path: str, args) -> tuple:
    """Read a state document (JSON, or real CSV with --d1/--d2) and validate it."""
    if path.lower().endswith(".csv"):
        if args.d1 is None or args.d2 is None:
            raise UsageError(f"{path}: CSV input needs --d1 and --d2")
        doc = io.load_csv(path, args.d1, args.d2)
        return _validate_doc(doc, args), doc
    doc = io.load_document(path)
    if doc.kind != "state":
        raise UsageError(f"{path}: document kind is '{doc.kind}', expected 'state'")
    d1, d2 = doc.d1, doc.d2
    flags = (args.d1, args.d2)
    if any(f is not None for f in flags):
        want = (args.d1 or d1, args.d2 or d2)
        if want != (d1, d2):
            if not args.force:
                raise UsageError(f"{path}: --d1/--d2 {want} conflict with document dims ({d1}, {d2}); "
                                 "pass --force to override")
            d1, d2 = want
    return _validate_doc(doc, args, d1, d2), doc


def _load_witness(args, dims):
    if getattr(args, "witness", None) and getattr(args, "witness_alpha", None) is not None:
        raise UsageError("--witness and --witness-alpha are mutually exclusive")
    if getattr(args, "witness", None):
        doc = io.load_document(args.witness)
        return make_witness(doc.matrix, doc.d1, doc.d2, doc.label or Path(args.witness).stem,
                            herm_tol=args.herm_tol)
    if getattr(args, "witness_alpha", None) is not None:
        return witness_w(args.witness_alpha)
    return None


def _write(text: str, out) -> None:
    if out:
        p = io.resolve_output(out)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _parse_orders(text: str) -> list[int]:
    try:
        orders = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"--orders must be a comma-separated list of integers, got {text!r}") from None
    if not orders or any(k < 1 for k in orders):
        raise UsageError(f"--orders must list positive integers, got {text!r}")
    return orders


def resolve_state(ref: str, args=None):
    """A named state (``sep1``, ``rho1_2x2``, ``sep-a=2.5``, ``pptes-x=4``,
    ``bell=phi+``) or the path of a state document."""
    simple = {"sep1": states.sep1, "pptes1": states.pptes1, "sep2": states.sep2, "pptes2": states.pptes2}
    if ref in simple:
        return simple[ref]()
    if ref in states.FIXTURE_IDS:
        return states.fixture(ref)
    name, _, value = ref.partition("=")
    if value:
        try:
            if name == "sep-a":
                return states.sep_family(float(value))
            if name == "pptes-x":
                return states.pptes_family(float(value))
        except ValueError as exc:
            raise UsageError(f"bad state reference {ref!r}: {exc}") from None
        if name == "bell":
            return states.bell(value)
    if Path(ref).exists():
        doc = io.load_document(ref)
        if args is None:
            return validate(doc.matrix, doc.d1, doc.d2, label=doc.label)
        return _validate_doc(doc, args)
    raise UsageError(f"unknown state reference {ref!r}")


def _factor_dims(n: int) -> tuple[int, int]:
    r = math.isqrt(n)
    if r * r == n:
        return r, r
    for f in range(2, n):
        if n % f == 0:
            return f, n // f
    return n, 1


# ---------------------------------------------------------------------------
# Commands

def _analyze_one(path: str, args) -> dict:
    state, doc = _load_input(path, args)
    w = _load_witness(args, state.dims)
    return reports.analysis_report(state, path=path, w=w, tolerances=_tolerances(args), seed=doc.seed)


def _analyze_worker(payload):
    path, args = payload
    try:
        return path, EXIT_OK, _analyze_one(path, args)
    except NumericalError as exc:
        return path, EXIT_NUMERICAL, {"path": path, "error": str(exc)}
    except (PtMomentsError, KeyError, ValueError) as exc:
        return path, EXIT_INVALID, {"path": path, "error": str(exc)}


def cmd_analyze(args) -> int:
    if args.batch:
        files = sorted(str(p) for p in Path(args.batch).iterdir()
                       if p.suffix.lower() in (".json", ".csv"))
        payloads = [(f, args) for f in files]
        if args.jobs > 1 and len(files) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(_analyze_worker, payloads))
        else:
            results = [_analyze_worker(p) for p in payloads]
        code = max([c for _, c, _ in results], default=EXIT_OK)
        out = {"schema_version": reports.REPORT_SCHEMA_VERSION, "report": "batch",
               "tool": {"name": "ptmoments", "version": __version__},
               "results": [r for _, _, r in results]}
        _write(reports.to_json(out), args.out)
        return code
    if not args.path:
        raise UsageError("analyze needs a FILE or --batch DIR")
    rep = _analyze_one(args.path, args)
    text = reports.render_analysis_text(rep) if args.text else reports.to_json(rep)
    _write(text, args.out)
    return EXIT_OK


def cmd_moments(args) -> int:
    state, doc = _load_input(args.path, args)
    rep = reports.moments_report(state, _parse_orders(args.orders), path=args.path, seed=doc.seed)
    _write(reports.render_moments_text(rep) if args.text else reports.to_json(rep), args.out)
    return EXIT_OK


def _need(args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise UsageError(f"gen {args.family} requires " + ", ".join(f"--{n}" for n in missing))


def _gen_state(args):
    fam = args.family
    if fam == "bell":
        _need(args, "which")
        return states.bell(args.which), {"which": args.which}
    if fam == "fixture":
        _need(args, "name")
        if args.name not in states.FIXTURE_IDS:
            raise UsageError(f"unknown fixture {args.name!r}; choose from {', '.join(states.FIXTURE_IDS)}")
        return states.fixture(args.name), {"name": args.name}
    if fam == "sep-a":
        _need(args, "a")
        return states.sep_family(args.a), {"a": args.a}
    if fam == "pptes-x":
        _need(args, "x")
        return states.pptes_family(args.x), {"x": args.x}
    if fam in ("sep1", "pptes1", "sep2", "pptes2"):
        return resolve_state(fam), {}
    if fam == "mixture":
        _need(args, "p", "first", "second")
        s1, s2 = resolve_state(args.first, args), resolve_state(args.second, args)
        return states.mixture(args.p, s1, s2), {"p": args.p, "first": args.first, "second": args.second}
    if fam == "random":
        _need(args, "seed", "n")
        d1, d2 = (args.d1, args.d2) if args.d1 and args.d2 else _factor_dims(args.n)
        if d1 * d2 != args.n:
            raise UsageError(f"--d1 * --d2 = {d1 * d2} does not match --n {args.n}")
        m = states.random_density(args.seed, args.n, args.rank)
        st = validate(m, d1, d2, label=f"random_seed{args.seed}")
        return st, {"seed": args.seed, "n": args.n, "rank": args.rank}
    if fam == "random-separable":
        _need(args, "seed", "d1", "d2")
        st = states.random_separable(args.seed, args.d1, args.d2, args.k)
        return st.relabel(f"random_separable_seed{args.seed}"), {
            "seed": args.seed, "d1": args.d1, "d2": args.d2, "k": args.k}
    if fam == "rho-c":
        q, source = _sigmas_from_args(args)
        return keyrate.rho_c(q), source
    raise UsageError(f"unknown family {fam!r}; choose from {', '.join(GEN_FAMILIES)}")


def cmd_gen(args) -> int:
    if args.family == "witness":
        _need(args, "alpha")
        w = witness_w(args.alpha)
        doc = io.MatrixDocument(w.matrix, w.d1, w.d2, w.label, "witness",
                                {"family": "witness", "params": {"alpha": args.alpha}})
    else:
        st, params = _gen_state(args)
        params = {k: v for k, v in params.items() if v is not None}
        doc = io.MatrixDocument(st.matrix, st.d1, st.d2, st.label, "state",
                                {"family": args.family, "params": params})
    text = io.dumps_document(doc)
    _write(text, args.out)
    return EXIT_OK


def cmd_mixture_scan(args) -> int:
    rep = reports.mixture_scan(args.a, args.x, args.alpha, args.p_steps)
    fmt = args.format
    if fmt == "json":
        text = reports.to_json(rep)
    elif fmt == "csv":
        text = reports.render_scan_delimited(rep, ",")
    elif fmt == "tsv":
        text = reports.render_scan_delimited(rep, "\t")
    else:
        text = reports.render_scan_text(rep)
    _write(text, args.out)
    return EXIT_OK


def _sigmas_from_args(args):
    if (args.example is None) == (args.config is None):
        raise UsageError("give exactly one of --example or --config")
    if args.example is not None:
        return keyrate.example_sigmas(args.example), {"example": args.example}
    try:
        cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"{args.config}: cannot read file: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.config}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    if not isinstance(cfg, dict):
        raise UsageError(f"{args.config}: config must be a JSON object")
    for key in ("weights", "sep", "pptes"):
        if key not in cfg:
            raise UsageError(f"{args.config}: missing field '{key}'")
    weights = cfg["weights"]
    if (not isinstance(weights, list) or len(weights) != 4
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in weights)):
        raise UsageError(f"{args.config}: 'weights' must be a list of four numbers")
    if not isinstance(cfg["sep"], str) or not isinstance(cfg["pptes"], str):
        raise UsageError(f"{args.config}: 'sep' and 'pptes' must be state names or file paths")
    base = Path(args.config).parent
    refs = []
    for key in ("sep", "pptes"):
        ref = cfg[key]
        if not Path(ref).is_absolute() and (base / ref).exists():
            ref = str(base / ref)
        refs.append(ref)
    q = keyrate.build_sigmas(weights, resolve_state(refs[0], args), resolve_state(refs[1], args))
    return q, {"config": args.config, "weights": weights, "sep": cfg["sep"], "pptes": cfg["pptes"]}


def cmd_keyrate(args) -> int:
    q, source = _sigmas_from_args(args)
    rep = reports.keyrate_report(keyrate.key_rate(q), source)
    _write(reports.render_keyrate_text(rep) if args.text else reports.to_json(rep), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser

def _add_tolerances(p):
    g = p.add_argument_group("tolerances")
    g.add_argument("--herm-tol", type=float, default=HERM_TOL,
                   help=f"max |A - A^H| entry accepted (default {HERM_TOL:g})")
    g.add_argument("--psd-tol", type=float, default=PSD_TOL,
                   help=f"eigenvalues above -tol count as non-negative (default {PSD_TOL:g})")
    g.add_argument("--trace-tol", type=float, default=TRACE_TOL,
                   help=f"allowed |Tr(rho) - 1| (default {TRACE_TOL:g})")


def _add_format(p, default_json=True):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", dest="text", action="store_false", help="JSON output (default)")
    g.add_argument("--text", dest="text", action="store_true", help="human-readable output")
    p.set_defaults(text=not default_json)


def _add_dims(p):
    p.add_argument("--d1", type=int)
    p.add_argument("--d2", type=int)
    p.add_argument("--force", action="store_true",
                   help="let --d1/--d2 override the dimensions stored in the document")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ptmoments",
                                     description="Partial-transpose moment tests for bipartite states.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run every criterion and classify a state")
    p.add_argument("path", nargs="?")
    p.add_argument("--batch", metavar="DIR", help="analyze every .json/.csv file in DIR")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for --batch")
    p.add_argument("--witness", metavar="FILE", help="witness document")
    p.add_argument("--witness-alpha", type=float, metavar="A", help="use the 3x3 witness W(A)")
    p.add_argument("--out", metavar="FILE")
    _add_dims(p)
    _add_format(p)
    _add_tolerances(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("moments", help="moments of the partial transpose")
    p.add_argument("path")
    p.add_argument("--orders", default="2,3", help="comma-separated orders (default 2,3)")
    p.add_argument("--out", metavar="FILE")
    _add_dims(p)
    _add_format(p)
    _add_tolerances(p)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("gen", help="write a state or witness document")
    p.add_argument("family", choices=GEN_FAMILIES)
    p.add_argument("--which", help="Bell state: phi+, phi-, psi+, psi-")
    p.add_argument("--name", help="fixture id: " + ", ".join(states.FIXTURE_IDS))
    p.add_argument("--a", type=float)
    p.add_argument("--x", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--first", help="state reference for mixture")
    p.add_argument("--second", help="state reference for mixture")
    p.add_argument("--seed", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--rank", type=int)
    p.add_argument("--k", type=int, help="product terms for random-separable")
    p.add_argument("--example", type=int, choices=(1, 2))
    p.add_argument("--config", metavar="FILE")
    p.add_argument("--out", metavar="FILE")
    _add_dims(p)
    _add_tolerances(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("mixture-scan", help="witness and PPT tests along p*sep(a) + (1-p)*pptes(x)")
    p.add_argument("--a", type=float, default=2.5)
    p.add_argument("--x", type=float, default=4.0)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--p-steps", type=int, default=20)
    p.add_argument("--format", choices=("text", "json", "csv", "tsv"), default="text")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_mixture_scan)

    p = sub.add_parser("keyrate", help="x, y, z, w, Q and K_D for a sigma quadruple")
    p.add_argument("--example", type=int, choices=(1, 2))
    p.add_argument("--config", metavar="FILE",
                   help='JSON {"weights": [p0, p1, p2, p3], "sep": REF, "pptes": REF}')
    p.add_argument("--out", metavar="FILE")
    _add_format(p)
    _add_tolerances(p)
    p.set_defaults(func=cmd_keyrate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"ptmoments: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (PtMomentsError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"ptmoments: invalid input: {msg}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
