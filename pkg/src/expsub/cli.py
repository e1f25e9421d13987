"""Command-line front end.

Subcommands: check, solve-tau, refine, limit, catalog.  Exit codes follow the
usual verification convention: 0 all requested checks pass, 1 a condition
fails, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .catalog import CATALOG, CatalogParameterError
from .checker import (
    DEFAULT_TOL,
    BranchAmbiguityError,
    CheckError,
    NoAdmissibleTauError,
    check_generation,
    check_reproduction,
    solve_tau,
    stepwise_test,
)
from .engine import (
    EngineError,
    basic_limit_samples,
    grid_from_json_obj,
    grid_to_csv,
    grid_to_json_obj,
    refine,
)
from .files import FileFormatError, load_scheme, load_space
from .lattice import LatticeError
from .symbols import SymbolError

_INPUT_ERRORS = (
    FileFormatError,
    LatticeError,
    SymbolError,
    EngineError,
    CheckError,
    CatalogParameterError,
    OSError,
    json.JSONDecodeError,
    ValueError,
)


def _parse_tau(text: str) -> tuple[float, ...]:
    parts = [p for chunk in text.split(",") for p in chunk.split()]
    if not parts:
        raise FileFormatError("empty tau")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise FileFormatError(f"tau must be a list of reals: {exc}") from exc


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_json(path: str, obj) -> None:
    with open(Path(path), "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def cmd_check(args) -> int:
    scheme = load_scheme(args.scheme)
    space = load_space(args.space)
    if args.kmin < 0 or args.kmax < args.kmin:
        raise CheckError("need 0 <= kmin <= kmax")
    k_range = (args.kmin, args.kmax)
    modes = ["generation", "reproduction", "stepwise"] if args.mode == "all" else [args.mode]

    tau = None
    if "reproduction" in modes or "stepwise" in modes:
        if args.tau is not None:
            tau = _parse_tau(args.tau)
        elif scheme.tau is not None:
            tau = scheme.tau
        else:
            try:
                tau = solve_tau(scheme, space, k_probe=args.kmin, tol=args.tol)
            except CheckError as exc:
                print(f"error: no tau given and solving failed: {exc}", file=sys.stderr)
                return 2

    results = []
    for mode in modes:
        if mode == "generation":
            rep = check_generation(scheme, space, k_range, tol=args.tol)
            print(rep.table())
            results.append(rep.to_json_obj())
        elif mode == "reproduction":
            rep = check_reproduction(scheme, space, tau, k_range, tol=args.tol)
            print(rep.table())
            results.append(rep.to_json_obj())
        else:
            for k in range(args.kmin, args.kmax + 1):
                rep = stepwise_test(scheme, space, tau, k, args.window, tol=args.tol)
                print(rep.table())
                results.append(rep.to_json_obj())
    verdict = all(r["verdict"] == "pass" for r in results)
    if args.report:
        _write_json(
            args.report,
            {
                "scheme": scheme.name,
                "space": space.to_json_obj(),
                "tau": None if tau is None else list(tau),
                "tol": args.tol,
                "kmin": args.kmin,
                "kmax": args.kmax,
                "verdict": "pass" if verdict else "fail",
                "results": results,
            },
        )
    return 0 if verdict else 1


def cmd_solve_tau(args) -> int:
    scheme = load_scheme(args.scheme)
    space = load_space(args.space)
    try:
        tau = solve_tau(scheme, space, k_probe=args.kprobe, tol=args.tol)
    except (NoAdmissibleTauError, BranchAmbiguityError) as exc:
        print(f"no admissible tau: {exc}", file=sys.stderr)
        return 1
    print(" ".join(_fmt(t) for t in tau))
    return 0


def cmd_refine(args) -> int:
    scheme = load_scheme(args.scheme)
    with open(Path(args.input), "r", encoding="utf-8") as fh:
        data = grid_from_json_obj(json.load(fh))
    if data.s != scheme.M.s:
        raise EngineError("data dimension does not match the scheme")
    out = refine(scheme, data, args.levels, start_level=args.start_level)
    fmt = args.format or ("csv" if args.out.endswith(".csv") else "json")
    if fmt == "json":
        _write_json(args.out, grid_to_json_obj(out))
    else:
        with open(Path(args.out), "w", encoding="utf-8", newline="") as fh:
            grid_to_csv(out, fh)
    print(f"wrote {len(out.values)} values at level {out.level} to {args.out}")
    return 0


def cmd_limit(args) -> int:
    scheme = load_scheme(args.scheme)
    samples = basic_limit_samples(scheme, args.rounds, start_level=args.start_level)
    with open(Path(args.out), "w", encoding="utf-8", newline="") as fh:
        s = scheme.M.s
        fh.write(",".join([f"t{i}" for i in range(s)] + ["re", "im"]) + "\n")
        for t, v in samples:
            fh.write(",".join([_fmt(x) for x in t] + [_fmt(v.real), _fmt(v.imag)]) + "\n")
    print(f"wrote {len(samples)} limit samples to {args.out}")
    return 0


def cmd_catalog(args) -> int:
    if args.action == "list":
        if args.json:
            print(json.dumps([CATALOG[k].to_json_obj() for k in sorted(CATALOG)], indent=2))
        else:
            for k in sorted(CATALOG):
                e = CATALOG[k]
                print(f"{e.id}: {e.summary}")
                print(f"    tau: {e.documented_tau}; space: {e.documented_space}")
        return 0
    # emit
    if not args.id:
        raise FileFormatError("emit needs --id")
    params = json.loads(args.params) if args.params else {}
    obj = _emit_scheme_file(args.id, params)
    text = json.dumps(obj, indent=2)
    if args.out:
        with open(Path(args.out), "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"wrote {args.out}")
    else:
        print(text)
    return 0


def _emit_scheme_file(entry_id: str, params: dict) -> dict:
    from .files import _catalog_kwargs, load_scheme_obj  # round-trip guard

    if entry_id not in CATALOG:
        raise FileFormatError(f"unknown catalog id {entry_id!r}")
    kwargs = _catalog_kwargs(entry_id, params)
    spec = CATALOG[entry_id].factory(**kwargs)
    obj = {
        "name": spec.name,
        "dimension": spec.M.s,
        "dilation": [x for row in spec.M.mat for x in row],
        "kind": f"catalog:{entry_id}",
        "parameters": params,
    }
    if spec.tau is not None:
        obj["tau"] = list(spec.tau)
    load_scheme_obj(obj)
    return obj


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="expsub",
        description="Verify generation/reproduction conditions of subdivision schemes, "
        "solve shift parameters, refine data, and emit limit samples.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run generation/reproduction/stepwise checks")
    c.add_argument("--scheme", required=True)
    c.add_argument("--space", required=True)
    c.add_argument("--tau", default=None, help="shift parameter, comma or space separated reals")
    c.add_argument("--kmin", type=int, default=0)
    c.add_argument("--kmax", type=int, default=5)
    c.add_argument("--tol", type=float, default=DEFAULT_TOL)
    c.add_argument("--mode", choices=["generation", "reproduction", "stepwise", "all"], default="all")
    c.add_argument("--window", type=int, default=8, help="box radius for the stepwise test")
    c.add_argument("--report", default=None, help="write a JSON report here")
    c.set_defaults(func=cmd_check)

    st = sub.add_parser("solve-tau", help="solve for the shift parameter")
    st.add_argument("--scheme", required=True)
    st.add_argument("--space", required=True)
    st.add_argument("--kprobe", type=int, default=0)
    st.add_argument("--tol", type=float, default=DEFAULT_TOL)
    st.set_defaults(func=cmd_solve_tau)

    r = sub.add_parser("refine", help="apply subdivision steps to grid data")
    r.add_argument("--scheme", required=True)
    r.add_argument("--input", required=True, help="GridData JSON")
    r.add_argument("--levels", type=int, required=True)
    r.add_argument("--start-level", type=int, default=None)
    r.add_argument("--out", required=True)
    r.add_argument("--format", choices=["json", "csv"], default=None)
    r.set_defaults(func=cmd_refine)

    li = sub.add_parser("limit", help="basic limit function samples from the delta sequence")
    li.add_argument("--scheme", required=True)
    li.add_argument("--rounds", type=int, required=True)
    li.add_argument("--start-level", type=int, default=0)
    li.add_argument("--out", required=True)
    li.set_defaults(func=cmd_limit)

    cat = sub.add_parser("catalog", help="list catalog entries or emit a scheme file")
    cat.add_argument("action", choices=["list", "emit"])
    cat.add_argument("--id", default=None)
    cat.add_argument("--params", default=None, help="JSON object of parameters")
    cat.add_argument("--out", default=None)
    cat.add_argument("--json", action="store_true", help="machine-readable listing")
    cat.set_defaults(func=cmd_catalog)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
