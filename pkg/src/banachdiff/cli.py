"""Command-line front end: one subcommand per library operation.

Every invocation writes a single JSON document (stdout by default, or
``--output PATH``) containing the echoed inputs, the result, the seed
that was used, and the library version — no timestamps or other
nondeterminism, so identical requests produce byte-identical reports.
Exit codes: 0 on success, 2 on validation errors (bad points, bad
flags), 3 on computational errors, and for ``suite`` 1 when a criterion
fails.

A JSON config file (``--config``) may supply defaults for the step
grid, tolerance, truncation dimensions, and seed; explicit flags win.
The ``BS_SEED`` environment variable supplies the seed when neither a
flag nor the config does.  ``--threads`` is accepted for interface
stability and bounds any internal parallelism; results never depend on
it, and it is deliberately left out of the echoed inputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .acceptance import BASE_SEED, run_all
from .diffengine import DEFAULT_GRID, DEFAULT_TOL, TGrid, gateaux_verdict, norm_functional
from .errors import (
    MalformedPointError,
    PreconditionFailedError,
    SpaceMismatchError,
    ToolkitError,
    VALIDATION_ERRORS,
)
from .gaussmeasure import (
    GaussianSpec,
    b2_tie_probability_oracle,
    default_spec,
    estimate_nondiff_measure,
    standard_normal_spec,
    vakhania_check,
)
from .oracles import witness_linf, witness_Linf, witness_nbv
from .projective import (
    CYL_BASES,
    OUTER_MAPS,
    compose_propagate,
    cyl_eval,
    cyl_gateaux,
    make_cylinder,
    make_truncation_system,
)
from .spaces import (
    Space,
    eval_norm,
    point_from_dict,
    point_to_dict,
    seq_point,
    subtract,
)
from .topology import classify, densify_csup, densify_l1, densify_linf

_SPACE_ALIASES = {
    "l1": Space.L1_SEQ,
    "linf": Space.LINF_SEQ,
    "rt": Space.RT,
    "c_ab": Space.C_AB,
    "linf_r": Space.LINF_R,
    "nbv": Space.NBV_AB,
}

_DEFAULT_DIMS = (2, 3, 5, 8, 13)


def _space_of(tag: str) -> Space:
    key = tag.strip().lower()
    if key in _SPACE_ALIASES:
        return _SPACE_ALIASES[key]
    try:
        return Space(tag)
    except ValueError:
        raise MalformedPointError(
            f"unknown space {tag!r}; choose from {sorted(_SPACE_ALIASES)}"
        ) from None


def _read_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedPointError(f"{what} is not valid JSON: {exc}") from exc


def _load_point(args, *, flag: str = "point", file_flag: str = "file"):
    inline = getattr(args, flag, None)
    path = getattr(args, file_flag, None)
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                doc = _read_json(fh.read(), f"--{file_flag} {path}")
        except OSError as exc:
            raise PreconditionFailedError(f"cannot read --{file_flag} {path}: {exc}") from exc
        pt = point_from_dict(doc)
        if getattr(args, "space", None):
            want = _space_of(args.space)
            if pt.space is not want:
                raise SpaceMismatchError(
                    f"document is a {pt.space.value} point but --space says {want.value}"
                )
        return pt
    if inline:
        if not getattr(args, "space", None):
            raise PreconditionFailedError(f"--{flag} needs --space to interpret the coordinates")
        space = _space_of(args.space)
        coords = _read_json(inline, f"--{flag}")
        if not isinstance(coords, list):
            raise MalformedPointError(f"--{flag} must be a JSON array of numbers")
        return seq_point(space, coords)
    raise PreconditionFailedError(f"provide --{flag} or --{file_flag}")


def _config_of(args) -> dict:
    if not getattr(args, "config", None):
        return {}
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = _read_json(fh.read(), f"--config {args.config}")
    except OSError as exc:
        raise PreconditionFailedError(f"cannot read --config {args.config}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise PreconditionFailedError("--config must contain a JSON object")
    return cfg


def _seed_of(args, cfg: dict) -> int:
    if getattr(args, "seed", None) is not None:
        return int(args.seed)
    if "seed" in cfg:
        return int(cfg["seed"])
    env = os.environ.get("BS_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise PreconditionFailedError(f"BS_SEED={env!r} is not an integer") from None
    return BASE_SEED


def _grid_of(args, cfg: dict) -> TGrid:
    t0 = args.t0 if getattr(args, "t0", None) is not None else cfg.get("t0", DEFAULT_GRID.t0)
    rho = args.rho if getattr(args, "rho", None) is not None else cfg.get("rho", DEFAULT_GRID.rho)
    count = (
        args.count_steps
        if getattr(args, "count_steps", None) is not None
        else cfg.get("count", DEFAULT_GRID.count)
    )
    return TGrid(t0=float(t0), rho=float(rho), count=int(count))


def _tol_of(args, cfg: dict) -> float:
    if getattr(args, "tol", None) is not None:
        return float(args.tol)
    return float(cfg.get("tol", DEFAULT_TOL))


def _dims_of(args, cfg: dict) -> tuple[int, ...]:
    raw = getattr(args, "dims", None)
    if raw:
        try:
            return tuple(int(d) for d in raw.split(","))
        except ValueError:
            raise PreconditionFailedError(f"--dims {raw!r} must be comma-separated integers") from None
    if "dims" in cfg:
        return tuple(int(d) for d in cfg["dims"])
    return _DEFAULT_DIMS


def _np_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _emit(doc: dict, output: str | None) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2, default=_np_default) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (inputs_echo, result)


def _cmd_norm(args, cfg):
    x = _load_point(args)
    nv = eval_norm(x)
    return {"point": point_to_dict(x)}, {"norm": nv.value, "witness": nv.witness}


def _cmd_diff(args, cfg):
    x = _load_point(args)
    h = _load_point(args, flag="dir", file_flag="dir_file")
    grid = _grid_of(args, cfg)
    tol = _tol_of(args, cfg)
    verdict = gateaux_verdict(norm_functional(x.space), x, [h], grid, tol)
    echo = {
        "point": point_to_dict(x),
        "dir": point_to_dict(h),
        "grid": {"t0": grid.t0, "rho": grid.rho, "count": grid.count},
        "tol": tol,
    }
    return echo, verdict.to_dict()


def _cmd_classify(args, cfg):
    x = _load_point(args)
    report = classify(x, args.eps)
    return {"point": point_to_dict(x), "eps": args.eps}, report.to_dict()


def _cmd_witness(args, cfg):
    x = _load_point(args)
    if x.space in (Space.LINF_SEQ, Space.RT):
        w = witness_linf(x, args.tie_tol)
    elif x.space is Space.LINF_R:
        w = witness_Linf(x)
    elif x.space is Space.NBV_AB:
        w = witness_nbv(x)
    else:
        raise PreconditionFailedError(f"no witness construction for {x.space.value}")
    return {"point": point_to_dict(x), "tie_tol": args.tie_tol}, {"direction": point_to_dict(w)}


def _cmd_densify(args, cfg):
    x = _load_point(args)
    if x.space is Space.L1_SEQ:
        y = densify_l1(x, args.eps)
    elif x.space in (Space.LINF_SEQ, Space.RT):
        y = densify_linf(x, args.eps)
    elif x.space is Space.C_AB:
        y = densify_csup(x, args.eps)
    else:
        raise PreconditionFailedError(f"no densification for {x.space.value}")
    dist = eval_norm(subtract(y, x)).value
    return (
        {"point": point_to_dict(x), "eps": args.eps},
        {"point": point_to_dict(y), "distance": dist, "report": classify(y).to_dict()},
    )


def _cmd_measure(args, cfg):
    seed = _seed_of(args, cfg)
    spec = standard_normal_spec(args.n) if args.law == "std" else default_spec()
    est = estimate_nondiff_measure(spec, args.n, args.delta, args.count, seed)
    result = est.to_dict()
    if args.n == 2:
        result["oracle_fraction"] = b2_tie_probability_oracle(spec, args.delta)
    echo = {"n": args.n, "delta": args.delta, "count": args.count, "law": args.law, "seed": seed}
    return echo, result


def _cmd_vakhania(args, cfg):
    spec = default_spec() if args.r is None else GaussianSpec(r=float(args.r))
    flag, partial = vakhania_check(spec, args.N)
    return {"N": args.N, "r": spec.r}, {"flag": flag, "partial_sum": partial}


def _cmd_cyl(args, cfg):
    dims = _dims_of(args, cfg)
    sys_ = make_truncation_system(dims)
    cf = make_cylinder(args.base, args.t)
    x = _load_point(args)
    result = {"value": cyl_eval(cf, sys_, x)}
    if getattr(args, "dir", None) or getattr(args, "dir_file", None):
        h = _load_point(args, flag="dir", file_flag="dir_file")
        verdict = cyl_gateaux(cf, sys_, x, h, _grid_of(args, cfg), _tol_of(args, cfg))
        result["verdict"] = verdict.to_dict()
    echo = {"dims": list(dims), "base": args.base, "t": args.t, "point": point_to_dict(x)}
    return echo, result


def _cmd_compose(args, cfg):
    if args.outer not in OUTER_MAPS:
        raise PreconditionFailedError(
            f"unknown outer map {args.outer!r}; available: {sorted(OUTER_MAPS)}"
        )
    dims = _dims_of(args, cfg)
    sys_ = make_truncation_system(dims)
    cf = make_cylinder(args.base, args.t)
    x = _load_point(args)
    h = _load_point(args, flag="dir", file_flag="dir_file")
    verdict = compose_propagate(
        OUTER_MAPS[args.outer], cf, sys_, x, h, _grid_of(args, cfg), _tol_of(args, cfg)
    )
    echo = {
        "dims": list(dims),
        "outer": args.outer,
        "base": args.base,
        "t": args.t,
        "point": point_to_dict(x),
        "dir": point_to_dict(h),
    }
    return echo, verdict.to_dict()


def _cmd_suite(args, cfg):
    seed = _seed_of(args, cfg)
    results = run_all(seed)
    return (
        {"seed": seed},
        {
            "criteria": [r.to_dict() for r in results],
            "all_passed": all(r.passed for r in results),
        },
    )


def _add_point_flags(sub, with_dir: bool = False):
    sub.add_argument("--space", help="space tag: l1, linf, rt, c_ab, linf_r, nbv")
    sub.add_argument("--point", help="JSON array of coordinates (sequence spaces)")
    sub.add_argument("--file", help="path to a point document (any space)")
    if with_dir:
        sub.add_argument("--dir", help="JSON array for the direction")
        sub.add_argument("--dir-file", dest="dir_file", help="path to a direction document")


def _add_grid_flags(sub):
    sub.add_argument("--t0", type=float, help="largest step of the quotient grid")
    sub.add_argument("--rho", type=float, help="geometric step ratio in (0, 1)")
    sub.add_argument("--count-steps", dest="count_steps", type=int, help="number of grid steps")
    sub.add_argument("--tol", type=float, help="convergence/agreement tolerance")


def build_parser() -> argparse.ArgumentParser:
    # Global flags live on a parent parser attached to the main parser and
    # every subparser, so they may appear before or after the subcommand.
    # SUPPRESS defaults keep the subparser pass from clobbering values the
    # main pass already parsed; read them with getattr.
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", default=argparse.SUPPRESS,
                        help="JSON file with default grid/tol/dims/seed")
    shared.add_argument("--output", default=argparse.SUPPRESS,
                        help="write the JSON report here instead of stdout")
    shared.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="parallelism bound (results never depend on it)")
    parser = argparse.ArgumentParser(
        prog="banachdiff",
        description="Differentiability toolkit: norms, derivative verdicts, "
        "membership tests, Gaussian measure estimates, and projective systems.",
        parents=[shared],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name: str, help_: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=help_, parents=[shared])

    p = add_parser("norm", "evaluate the space norm of a point")
    _add_point_flags(p)
    p.set_defaults(handler=_cmd_norm)

    p = add_parser("diff", "differentiability verdict along a direction")
    _add_point_flags(p, with_dir=True)
    _add_grid_flags(p)
    p.set_defaults(handler=_cmd_diff)

    p = add_parser("classify", "membership test for the differentiability set")
    _add_point_flags(p)
    p.add_argument("--eps", type=float, default=0.0, help="required dominance margin")
    p.set_defaults(handler=_cmd_classify)

    p = add_parser("witness", "direction with split one-sided derivatives")
    _add_point_flags(p)
    p.add_argument("--tie-tol", dest="tie_tol", type=float, default=0.0,
                   help="tolerance for recognizing tied maximal coordinates")
    p.set_defaults(handler=_cmd_witness)

    p = add_parser("densify", "repair a point into the differentiability set")
    _add_point_flags(p)
    p.add_argument("--eps", type=float, required=True, help="maximum repair distance")
    p.set_defaults(handler=_cmd_densify)

    p = add_parser("measure", "Monte Carlo mass of the near-tie set")
    p.add_argument("--n", type=int, required=True, help="number of coordinates")
    p.add_argument("--delta", type=float, required=True, help="tie thickness")
    p.add_argument("--count", type=int, required=True, help="sample count")
    p.add_argument("--seed", type=int, help="RNG seed (default: BS_SEED or built-in)")
    p.add_argument("--law", choices=("inv_log", "std"), default="inv_log",
                   help="variance law: default decaying law or unit variances")
    p.set_defaults(handler=_cmd_measure)

    p = add_parser("vakhania", "summability check for the Gaussian law")
    p.add_argument("--N", type=int, required=True, help="number of series terms")
    p.add_argument("--r", type=float, help="exponential rate (default 2.0)")
    p.set_defaults(handler=_cmd_vakhania)

    p = add_parser("cyl", "evaluate/differentiate a cylindrical function")
    _add_point_flags(p, with_dir=True)
    _add_grid_flags(p)
    p.add_argument("--base", required=True, help=f"base map: one of {sorted(CYL_BASES)}")
    p.add_argument("--t", type=int, required=True, help="truncation dimension")
    p.add_argument("--dims", help="comma-separated truncation chain (default 2,3,5,8,13)")
    p.set_defaults(handler=_cmd_cyl)

    p = add_parser("compose", "chain-rule verdict for outer ∘ cylindrical")
    _add_point_flags(p, with_dir=True)
    _add_grid_flags(p)
    p.add_argument("--outer", required=True, help=f"outer map: one of {sorted(OUTER_MAPS)}")
    p.add_argument("--base", required=True, help=f"base map: one of {sorted(CYL_BASES)}")
    p.add_argument("--t", type=int, required=True, help="truncation dimension")
    p.add_argument("--dims", help="comma-separated truncation chain (default 2,3,5,8,13)")
    p.set_defaults(handler=_cmd_compose)

    p = add_parser("suite", "run the acceptance suite")
    p.add_argument("--seed", type=int, help="base seed (default: BS_SEED or built-in)")
    p.set_defaults(handler=_cmd_suite)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_of(args)
        echo, result = args.handler(args, cfg)
    except VALIDATION_ERRORS as exc:
        _emit(
            {
                "error": {"code": exc.code, "message": str(exc), "context": exc.context},
                "version": __version__,
            },
            getattr(args, "output", None),
        )
        return 2
    except ToolkitError as exc:
        _emit(
            {
                "error": {"code": exc.code, "message": str(exc), "context": exc.context},
                "version": __version__,
            },
            getattr(args, "output", None),
        )
        return 3
    doc = {
        "command": args.command,
        "inputs": echo,
        "result": result,
        "version": __version__,
    }
    _emit(doc, getattr(args, "output", None))
    if args.command == "suite" and not result["all_passed"]:
        return 1
    return 0
