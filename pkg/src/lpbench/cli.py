"""``lpbench`` command line.

Exit codes: 0 pass, 2 property violation, 64 usage or schema error,
65 numeric precondition, 70 internal error, 74 I/O error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import checks, norms, operators as ops, tracenorm as tn
from ._version import __version__
from .errors import DomainError, FieldError, NotExactError, PreconditionError, ShapeError, UsageError
from .norms import as_exponent
from .serialization import decode_matrix, decode_scalars, decode_space, dumps, to_jsonable
from .space import ScalarFunction, VectorFunction, WeightedSet
from .suite import DEFAULT_POOL, FIELDS, WEIGHT_MODES, SuiteConfig, run_suite

EXIT_OK = 0
EXIT_VIOLATION = 2
EXIT_USAGE = 64
EXIT_PRECONDITION = 65
EXIT_INTERNAL = 70
EXIT_IO = 74

DEFAULT_SEED = 42


class CliUsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def env_seed() -> int:
    raw = os.environ.get("LPBENCH_SEED")
    if raw is None or raw.strip() == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise CliUsageError(f"LPBENCH_SEED must be an integer, got {raw!r}")


# ---------------------------------------------------------------------------
# payload schemas for the compute commands
# ---------------------------------------------------------------------------

def _need(payload, *keys):
    if not isinstance(payload, dict):
        raise checks.PayloadError("<root>: payload must be a JSON object")
    for k in keys:
        if k not in payload:
            raise checks.PayloadError(f"{k}: required field is missing")


def _domain_of(payload, n):
    w = payload.get("weights")
    if w is None:
        w = [1.0] * n
    if len(w) != n:
        raise checks.PayloadError(f"weights: expected {n} entries, got {len(w)}")
    labels = payload.get("labels") or [str(i + 1) for i in range(n)]
    return WeightedSet(labels, w)


def _exponents_of(payload, key="p"):
    raw = payload[key]
    many = isinstance(raw, list)
    ps = [as_exponent(x) for x in (raw if many else [raw])]
    return ps, many


def _norm(payload, opts):
    if "values" in payload and "f" not in payload and "F" not in payload:
        payload = dict(payload, f=payload["values"])
    payload = checks.flatten_functions(payload)
    _need(payload, "p")
    ps, many = _exponents_of(payload)
    if "F" in payload:
        _need(payload, "space")
        F = decode_matrix(payload["F"])
        dom = _domain_of(payload, F.shape[0])
        desc = dict(payload["space"])
        desc.setdefault("dimension", F.shape[1])
        fn = VectorFunction(dom, decode_space(desc), F)
        vals = [norms.vector_norm(fn, p) for p in ps]
    else:
        _need(payload, "f")
        f = decode_scalars(payload["f"])
        fn = ScalarFunction(_domain_of(payload, f.size), f)
        vals = [norms.weighted_norm(fn, p) for p in ps]
    if many:
        return {"values": [{"p": norms.exponent_json(p), "value": v} for p, v in zip(ps, vals)]}
    return {"value": vals[0]}


def _kernel_of(payload):
    if "kernel" in payload:
        K = decode_matrix(payload["kernel"])
        dom = _domain_of(payload, K.shape[0])
        return ops.KernelOperator(dom, K)
    if "matrix" in payload:
        M = decode_matrix(payload["matrix"])
        dom = _domain_of(payload, M.shape[0])
        return ops.KernelOperator.from_matrix(dom, M)
    raise checks.PayloadError("kernel: give either 'kernel' (weighted convention) or 'matrix' (plain)")


def _opnorm(payload, opts):
    payload = checks.flatten_functions(payload)
    _need(payload, "r", "s")
    A = _kernel_of(payload)
    kw = {"seed": opts.seed, "exact_only": opts.exact_only}
    for k in ("restarts", "iters"):
        if k in payload:
            kw[k] = int(payload[k])
    if "method" in payload:
        kw["method"] = payload["method"]
    return ops.operator_norm(A, as_exponent(payload["r"]), as_exponent(payload["s"]), **kw).to_dict()


def _tracenorm(payload, opts):
    _need(payload, "matrix")
    M = decode_matrix(payload["matrix"])
    desc = dict(payload.get("space") or {"kind": "lp", "p": 2})
    desc.setdefault("dimension", M.shape[0])
    A = tn.LinearMap(decode_space(desc), M)
    raw = payload.get("p", payload.get("p_list", 1.0))
    many = isinstance(raw, list)
    ps = [as_exponent(x) for x in (raw if many else [raw])]
    kw = {"seed": opts.seed}
    for k in ("restarts", "iters"):
        if k in payload:
            kw[k] = int(payload[k])
    out = [tn.trace_quasinorm(A, p, **kw).to_dict() for p in ps]
    return {"estimates": out} if many else out[0]


def _kernel(payload, opts):
    """Convention conversion, optional application and sandwich, and the (inf -> 1) condition."""
    payload = checks.flatten_functions(payload)
    A = _kernel_of(payload)
    out = {"kernel": A.kernel, "matrix": A.plain_matrix(), "double_sum": ops.double_sum(A)}
    dom = A.domain
    if "f" in payload:
        out["image"] = ops.apply(A, ScalarFunction(dom, decode_scalars(payload["f"])))
    if "h1" in payload or "h2" in payload:
        _need(payload, "h1", "h2")
        h1, h2 = (ScalarFunction(dom, decode_scalars(payload[k])) for k in ("h1", "h2"))
        out["sandwich"] = ops.sandwich(A, h1, h2).kernel
    trials = opts.trials if opts.trials is not None else 10_000
    out["infone_condition"] = ops.infone_condition_check(A, trials=trials, seed=opts.seed)
    return to_jsonable(out)


COMPUTE = {"norm": _norm, "opnorm": _opnorm, "tracenorm": _tracenorm, "kernel": _kernel}


def compute(command: str, payload, name: str | None = None, seed: int = DEFAULT_SEED, trials=None, exact_only: bool = False):
    """Route one payload to a module operation and return JSON-ready output.

    ``check`` returns a list of certificates (one per instance); the other
    commands return a single document.
    """
    opts = argparse.Namespace(seed=seed, trials=trials, exact_only=exact_only)
    if command == "check":
        instances = payload if isinstance(payload, list) else [payload]
        return [to_jsonable(checks.run(name, inst)) for inst in instances]
    if command not in COMPUTE:
        raise CliUsageError(f"unknown command {command!r}")
    return to_jsonable(COMPUTE[command](payload, opts))


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=None, help="random seed (default: $LPBENCH_SEED or 42)")
    p.add_argument("--trials", type=_positive_int, default=None, help="trials per property or sample count")
    p.add_argument("--json", dest="json_file", default=None, metavar="FILE", help="JSON input file ('-' for stdin)")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lpbench", description="Weighted lp norm workbench.")
    parser.add_argument("--version", action="version", version=f"lpbench {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _common()

    sub.add_parser("norm", parents=[common], help="weighted p-norm of a scalar or vector-valued function")
    c = sub.add_parser("check", parents=[common], help="evaluate named checks on JSON instances (JSONL out)")
    c.add_argument("name", help="check name; 'list' prints the available names")
    o = sub.add_parser("opnorm", parents=[common], help="induced (r -> s) norm of a kernel operator")
    o.add_argument("--exact-only", action="store_true", help="fail instead of returning a lower bound")
    sub.add_parser("tracenorm", parents=[common], help="trace norm / p-quasinorm of a linear map")
    sub.add_parser("kernel", parents=[common], help="kernel conventions, application and the (inf -> 1) condition")
    fz = sub.add_parser("fuzz", parents=[common], help="seeded property suite over the whole corpus")
    fz.add_argument("--field", choices=FIELDS, default="both")
    fz.add_argument("--weights", choices=WEIGHT_MODES, default="mixed")
    fz.add_argument("--n-max", type=_positive_int, default=16)
    fz.add_argument("--property", action="append", dest="properties", default=None, help="restrict to a property (repeatable)")
    fz.add_argument("--paper-literal-interpolation", action="store_true", help="also run the rejected literal interpolation reading as a live property")
    fz.add_argument("--output", default=None, metavar="FILE", help="write the report here instead of stdout")
    return parser


def _read_payload(path):
    if path is None or path == "-":
        text = sys.stdin.read()
        src = "<stdin>"
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        src = path
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise checks.PayloadError(f"{src}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}")


def _suite_config(args, seed) -> SuiteConfig:
    extra = {}
    if args.json_file is not None:
        extra = _read_payload(args.json_file)
        if not isinstance(extra, dict):
            raise checks.PayloadError("<root>: fuzz config must be a JSON object")
    try:
        pool = tuple(as_exponent(p) for p in extra.get("exponent_pool", DEFAULT_POOL))
        return SuiteConfig(
            seed=seed,
            trials=args.trials if args.trials is not None else int(extra.get("trials", 200)),
            n_range=tuple(extra.get("n_range", (1, args.n_max))),
            field=extra.get("field", args.field),
            weight_mode=extra.get("weight_mode", args.weights),
            exponent_pool=pool,
            tolerances=dict(extra.get("tolerances", {})),
            paper_literal_interpolation=args.paper_literal_interpolation,
            properties=tuple(args.properties) if args.properties else (tuple(extra["properties"]) if "properties" in extra else None),
        )
    except (UsageError, DomainError, TypeError, ValueError) as e:
        raise CliUsageError(f"invalid fuzz config: {e}")


def _emit(text, path=None):
    if path is None:
        sys.stdout.write(text + "\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _run(args) -> int:
    seed = args.seed if args.seed is not None else env_seed()
    if args.command == "fuzz":
        cfg = _suite_config(args, seed)
        report = run_suite(cfg)
        _emit(dumps(report.to_dict(), indent=2), args.output)
        for p in report.properties:
            if p.failed:
                print(f"FAIL {p.name}: {p.failed} of {p.passed + p.failed}", file=sys.stderr)
        print(f"lpbench fuzz: {len(report.properties)} properties, {report.failures} failures, {report.elapsed:.1f}s", file=sys.stderr)
        return EXIT_OK if report.ok else EXIT_VIOLATION

    if args.command == "check" and args.name == "list":
        _emit("\n".join(sorted(checks.REGISTRY)))
        return EXIT_OK
    if args.command == "check" and args.name not in checks.REGISTRY:
        raise CliUsageError(f"unknown check {args.name!r}; run 'lpbench check list'")

    payload = _read_payload(args.json_file)
    out = compute(args.command, payload, getattr(args, "name", None), seed, args.trials, getattr(args, "exact_only", False))
    if args.command == "check":
        _emit("\n".join(dumps(c) for c in out))
        return EXIT_VIOLATION if any(c["status"] == "violated" for c in out) else EXIT_OK
    _emit(dumps(out))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return _run(args)
    except (CliUsageError, ShapeError, FieldError) as e:
        print(f"lpbench: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (PreconditionError, UsageError, DomainError, NotExactError) as e:
        print(f"lpbench: precondition failed ({type(e).__name__}): {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as e:
        print(f"lpbench: I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except Exception as e:  # pragma: no cover - reported, not hidden
        print(f"lpbench: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
