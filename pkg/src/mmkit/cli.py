"""Command-line interface.

Spaces are read from --space PATH or stdin as JSON; results are written as
canonical JSON (sorted keys, 17 significant digits) to stdout or --out.
Exit codes: 0 success / suite passed, 1 suite check failed, 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import harness, separation, spectral, transport
from .errors import MMError, SchemaError
from .jsonio import dumps_canonical
from .space import Space, family, loads_space


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v != ""]
    except ValueError:
        raise SchemaError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v != ""]
    except ValueError:
        raise SchemaError(f"expected comma-separated integers, got {text!r}") from None


def _index_groups(text: str) -> list[list[int]]:
    return [_ints(group) for group in text.split(";") if group != ""]


def _load_space(args) -> Space:
    if getattr(args, "space", None):
        with open(args.space, "r", encoding="utf-8") as fh:
            return loads_space(fh.read())
    return loads_space(sys.stdin.read())


def _load_measure(space: Space, path: str | None) -> transport.Measure:
    if path is None:
        return transport.space_measure(space)
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if isinstance(doc, dict) and "weights" in doc:
        doc = doc["weights"]
    if not isinstance(doc, list):
        raise SchemaError("measure file must hold a JSON array or {\"weights\": [...]}")
    return transport.as_measure(space, doc)


def _emit(args, payload) -> None:
    text = dumps_canonical(payload)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args) -> int:
    required = {
        "two_point": ("d",),
        "cycle": ("n",),
        "path": ("n",),
        "torus": ("n1", "n2"),
        "hypercube": ("d",),
        "random": ("n", "seed"),
    }
    params = {}
    for key in required[args.kind]:
        value = getattr(args, key)
        if value is None:
            raise SchemaError(f"gen {args.kind} requires --{key}")
        params[key] = value
    space = family(args.kind, **params)
    _emit(args, space.to_jsonable())
    return 0


def _cmd_sep(args) -> int:
    space = _load_space(args)
    cert = separation.separation_distance(space, _floats(args.kappas), mode=args.mode)
    _emit(args, cert.to_jsonable())
    return 0


def _cmd_conc(args) -> int:
    space = _load_space(args)
    result = separation.concentration_function(space, args.r)
    _emit(args, result.to_jsonable())
    return 0


def _cmd_levy(args) -> int:
    space = _load_space(args)
    _emit(args, separation.levy_radius_bounds(space, args.kappa).to_jsonable())
    return 0


def _cmd_w2(args) -> int:
    space = _load_space(args)
    nu0 = _load_measure(space, args.nu0)
    nu1 = _load_measure(space, args.nu1)
    value, plan = transport.wasserstein2(space, nu0, nu1)
    _emit(args, {"value": value, "plan": plan.to_jsonable()})
    return 0


def _cmd_prohorov(args) -> int:
    space = _load_space(args)
    nu0 = _load_measure(space, args.nu0)
    nu1 = _load_measure(space, args.nu1)
    value = transport.prohorov(space, nu0, nu1, args.lam)
    _emit(args, {"value": value, "lambda": args.lam})
    return 0


def _cmd_transport(args) -> int:
    space = _load_space(args)
    nu0 = _load_measure(space, args.nu0)
    nu1 = _load_measure(space, args.nu1)
    value, plan = transport.transportation_distance(space, nu0, nu1, args.lam)
    _emit(args, {"value": value, "lambda": args.lam, "plan": plan.to_jsonable()})
    return 0


def _cmd_spectrum(args) -> int:
    space = _load_space(args)
    spec = spectral.spectrum(space)
    doc = spec.to_jsonable()
    if args.kmax is not None:
        doc["eigenvalues"] = doc["eigenvalues"][: args.kmax + 1]
    _emit(args, doc)
    return 0


def _cmd_heatkernel(args) -> int:
    space = _load_space(args)
    kernel = spectral.heat_kernel(space, args.t)
    if args.x is not None and args.y is not None:
        _emit(args, {"t": args.t, "x": args.x, "y": args.y,
                     "value": float(kernel.values[args.x, args.y])})
    else:
        _emit(args, kernel.to_jsonable())
    return 0


def _cmd_dg(args) -> int:
    space = _load_space(args)
    report = spectral.davies_gaffney_check(space, _ints(args.A), _ints(args.B), _floats(args.tgrid))
    _emit(args, report.to_jsonable())
    return 0


def _cmd_cgy(args) -> int:
    space = _load_space(args)
    _emit(args, {"c_emp": spectral.cgy_constant(space, _index_groups(args.sets))})
    return 0


def _cmd_thm1(args) -> int:
    space = _load_space(args)
    value = spectral.thm1_constant(space, _index_groups(args.sets), args.k)
    _emit(args, {"c_emp": value, "k": args.k})
    return 0


def _cmd_ratios(args) -> int:
    space = _load_space(args)
    _emit(args, {"ratios": spectral.eigen_ratio_probe(space, args.kmax)})
    return 0


def _cmd_probe32(args) -> int:
    space = _load_space(args)
    result = harness.sep_reduction_probe(space, args.k, _floats(args.grid))
    _emit(args, result.to_jsonable())
    return 0


def _cmd_verify(args) -> int:
    config = harness.VerifyConfig(seeds=args.seeds)
    report = harness.verify_suite(args.suite, config)
    _emit(args, report.to_jsonable())
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mmkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(handler=handler)
        p.add_argument("--out", help="write JSON here instead of stdout")
        return p

    p = add("gen", _cmd_gen, help="emit a named family space as JSON")
    p.add_argument("kind", choices=["two_point", "cycle", "path", "torus", "hypercube", "random"])
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=float)
    p.add_argument("--n1", type=int)
    p.add_argument("--n2", type=int)
    p.add_argument("--seed", type=int)

    def add_space(name, handler, **kwargs):
        p = add(name, handler, **kwargs)
        p.add_argument("--space", help="space JSON path (default: stdin)")
        return p

    p = add_space("sep", _cmd_sep, help="separation distance with certificate")
    p.add_argument("--kappas", required=True)
    p.add_argument("--mode", choices=["exact", "heuristic"], default="exact")

    p = add_space("conc", _cmd_conc, help="concentration function at radius r")
    p.add_argument("--r", type=float, required=True)

    p = add_space("levy", _cmd_levy, help="Lévy radius bracket")
    p.add_argument("--kappa", type=float, required=True)

    p = add_space("w2", _cmd_w2, help="L2-Wasserstein distance")
    p.add_argument("--nu0")
    p.add_argument("--nu1")

    p = add_space("prohorov", _cmd_prohorov, help="Prohorov distance")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--nu0")
    p.add_argument("--nu1")

    p = add_space("transport", _cmd_transport, help="transportation distance")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--nu0")
    p.add_argument("--nu1")

    p = add_space("spectrum", _cmd_spectrum, help="weighted Laplacian eigenvalues")
    p.add_argument("--kmax", type=int)

    p = add_space("heatkernel", _cmd_heatkernel, help="heat kernel values")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--x", type=int)
    p.add_argument("--y", type=int)

    p = add_space("dg", _cmd_dg, help="Davies-Gaffney diagnostic")
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--tgrid", required=True)

    p = add_space("cgy", _cmd_cgy, help="empirical eigenvalue-bound constant")
    p.add_argument("--sets", required=True, help='index groups, e.g. "0;2" or "0,1;4,5"')

    p = add_space("thm1", _cmd_thm1, help="per-iteration empirical constant")
    p.add_argument("--sets", required=True)
    p.add_argument("--k", type=int, required=True)

    p = add_space("ratios", _cmd_ratios, help="consecutive eigenvalue ratios")
    p.add_argument("--kmax", type=int, required=True)

    p = add_space("probe32", _cmd_probe32, help="separation-reduction probe")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--grid", required=True)

    p = add("verify", _cmd_verify, help="run a verification suite")
    p.add_argument("suite", choices=list(harness.SUITE_NAMES) + ["all"])
    p.add_argument("--seeds", type=int, default=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except MMError as exc:
        print(f"mmkit: error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"mmkit: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
