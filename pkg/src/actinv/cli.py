"""Command line interface.

Subcommands::

    validate    build and validate the configured scenario, run transform
                self-tests with seeded random vectors
    partition   print the dual partition blocks
    check       run the extra-invariance and decomposability checks on the
                configured subspace
    approx      best invariant / extra-invariant approximation of the
                configured data vectors
    demo NAME   run a built-in configuration (shear | dilation | remark33)
                and assert its embedded expectations

Exit codes: 0 success, 1 malformed configuration, 2 validation failure
(chain, action or invariance preconditions), 3 theorem violation.  All
reports are JSON with sorted keys, so identical configuration and seed
give byte-identical output.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .actions import ActionSpace
from .approx import best_extra_invariant, best_invariant
from .demos import DEMO_CONFIGS, DEMO_EXPECTATIONS
from .errors import (
    ActionError,
    ChainError,
    ConfigError,
    InvarianceError,
    TheoremViolationError,
)
from .extra import (
    canonical_extra_invariant,
    check_decomposable,
    check_extra_invariance,
    dual_partition,
)
from .groups import FiniteAbelianGroup, Subgroup
from .io import ensure_parent, read_columns_csv, write_columns_csv
from .scenario import Scenario
from .spaces import Subspace, span_invariant
from .zak import (
    base_norm,
    full_norm,
    stacked_norm,
    zak_base,
    zak_base_inv,
    zak_full,
    zak_full_inv,
    zak_relation_deviation,
    zak_stacked,
    zak_stacked_inv,
)

SCHEMA_VERSION = 1
DEFAULT_TOL = 1e-9


# -- configuration ------------------------------------------------------------


def load_config(path: str) -> dict:
    p = Path(path)
    if not p.exists():
        raise ConfigError(str(path), "configuration file not found")
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(str(path), "top level must be an object")
    doc.setdefault("_dir", str(p.parent))
    return doc


def _require(doc: dict, field: str, kind, path: str):
    if field not in doc:
        raise ConfigError(f"{path}.{field}", "missing required field")
    value = doc[field]
    if kind is not None and not isinstance(value, kind):
        raise ConfigError(f"{path}.{field}", f"expected {kind.__name__}")
    return value


def _int_list(raw, path: str) -> list[int]:
    if not isinstance(raw, list) or not all(isinstance(v, int) for v in raw):
        raise ConfigError(path, "expected a list of integers")
    return raw


def build_scenario(doc: dict) -> Scenario:
    if doc.get("schema") != SCHEMA_VERSION:
        raise ConfigError("schema", f"expected schema version {SCHEMA_VERSION}")
    group_doc = _require(doc, "group", dict, "")
    moduli = _int_list(_require(group_doc, "moduli", list, "group"), "group.moduli")
    if not moduli or any(n < 1 for n in moduli):
        raise ConfigError("group.moduli", "moduli must be positive integers")
    group = FiniteAbelianGroup(moduli)

    def subgroup(name: str) -> Subgroup:
        sub_doc = _require(doc, name, dict, "")
        gens_raw = _require(sub_doc, "generators", list, name)
        gens = []
        for i, g in enumerate(gens_raw):
            g = _int_list(g, f"{name}.generators[{i}]")
            if len(g) != group.rank:
                raise ConfigError(
                    f"{name}.generators[{i}]",
                    f"expected {group.rank} coordinates",
                )
            gens.append(g)
        return Subgroup(group, gens)

    base, extra = subgroup("base"), subgroup("extra")
    action_doc = _require(doc, "action", dict, "")
    points = _require(action_doc, "points", int, "action")
    perms_raw = _require(action_doc, "permutations", list, "action")
    if len(perms_raw) != group.rank:
        raise ConfigError(
            "action.permutations", f"expected {group.rank} permutations"
        )
    perms = []
    for i, p in enumerate(perms_raw):
        p = _int_list(p, f"action.permutations[{i}]")
        if sorted(p) != list(range(points)):
            raise ConfigError(
                f"action.permutations[{i}]",
                f"not a permutation of 0..{points - 1}",
            )
        perms.append(p)
    weights = action_doc.get("weights")
    if weights is not None:
        if not isinstance(weights, list) or len(weights) != points:
            raise ConfigError("action.weights", f"expected {points} numbers")
        if not all(isinstance(v, (int, float)) and v > 0 for v in weights):
            raise ConfigError("action.weights", "weights must be positive numbers")
    try:
        action = ActionSpace(group, points, perms, weights)
    except (ActionError, ValueError) as exc:
        raise ConfigError("action", str(exc)) from exc
    return Scenario(group, base, extra, action)


def _complex_vector(raw, n: int, path: str) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != n:
        raise ConfigError(path, f"expected {n} [re, im] pairs")
    out = np.empty(n, dtype=complex)
    for i, pair in enumerate(raw):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(v, (int, float)) for v in pair)
        ):
            raise ConfigError(f"{path}[{i}]", "expected an [re, im] pair")
        out[i] = complex(pair[0], pair[1])
    return out


def _vectors_from(doc: dict, section: str, scn: Scenario, config_dir: str) -> np.ndarray:
    sec = doc[section]
    n = scn.action.n_points
    if "vectors" in sec:
        raws = sec["vectors"]
        if not isinstance(raws, list) or not raws:
            raise ConfigError(f"{section}.vectors", "expected a nonempty list")
        return np.column_stack(
            [_complex_vector(v, n, f"{section}.vectors[{i}]") for i, v in enumerate(raws)]
        )
    if "csv" in sec:
        path = Path(config_dir) / sec["csv"]
        try:
            mat = read_columns_csv(path)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"{section}.csv", str(exc)) from exc
        if mat.shape[0] != n:
            raise ConfigError(f"{section}.csv", f"expected {n} rows, got {mat.shape[0]}")
        return mat
    raise ConfigError(section, "expected 'vectors' or 'csv'")


def build_subspace(doc: dict, scn: Scenario, rng: np.random.Generator) -> Subspace:
    if "subspace" not in doc:
        raise ConfigError("subspace", "missing required section")
    sec = doc["subspace"]
    if not isinstance(sec, dict):
        raise ConfigError("subspace", "expected an object")
    if sec.get("canonical"):
        return canonical_extra_invariant(scn)
    if "random" in sec:
        rnd = sec["random"]
        if not isinstance(rnd, dict):
            raise ConfigError("subspace.random", "expected an object")
        kind = rnd.get("kind", "principal")
        count = rnd.get("count", 1)
        if kind not in ("principal", "spanned"):
            raise ConfigError("subspace.random.kind", "expected 'principal' or 'spanned'")
        if not isinstance(count, int) or count < 1:
            raise ConfigError("subspace.random.count", "expected a positive integer")
        if kind == "principal":
            count = 1
        n = scn.action.n_points
        gens = rng.standard_normal((n, count)) + 1j * rng.standard_normal((n, count))
        return span_invariant(scn, gens)
    if "generators" in sec or "csv" in sec:
        key = "generators" if "generators" in sec else "csv"
        shim = {"subspace": {("vectors" if key == "generators" else "csv"): sec[key]}}
        gens = _vectors_from(shim, "subspace", scn, doc.get("_dir", "."))
        return span_invariant(scn, gens)
    raise ConfigError(
        "subspace", "expected one of 'generators', 'csv', 'random', 'canonical'"
    )


def _options(doc: dict, args) -> tuple[float, int]:
    opts = doc.get("options", {})
    if not isinstance(opts, dict):
        raise ConfigError("options", "expected an object")
    tol = args.tol if args.tol is not None else opts.get("tol", DEFAULT_TOL)
    if not isinstance(tol, (int, float)) or tol <= 0:
        raise ConfigError("options.tol", "expected a positive number")
    seed = args.seed if args.seed is not None else opts.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigError("options.seed", "expected an integer")
    return float(tol), int(seed)


# -- reports ------------------------------------------------------------------


def _emit(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if out:
        ensure_parent(out).write_text(text)
    else:
        sys.stdout.write(text)


def _self_test(scn: Scenario, seed: int) -> dict:
    rng = np.random.default_rng(seed)
    n = scn.action.n_points
    worst: dict[str, float] = {
        "base_round_trip": 0.0,
        "full_round_trip": 0.0,
        "stacked_round_trip": 0.0,
        "base_isometry": 0.0,
        "full_isometry": 0.0,
        "stacked_isometry": 0.0,
        "relation": 0.0,
    }
    for _ in range(5):
        f = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        ref = scn.action.norm(f)
        zb, zf, zs = zak_base(scn, f), zak_full(scn, f), zak_stacked(scn, f)
        worst["base_round_trip"] = max(
            worst["base_round_trip"], float(np.max(np.abs(zak_base_inv(scn, zb) - f)))
        )
        worst["full_round_trip"] = max(
            worst["full_round_trip"], float(np.max(np.abs(zak_full_inv(scn, zf) - f)))
        )
        worst["stacked_round_trip"] = max(
            worst["stacked_round_trip"],
            float(np.max(np.abs(zak_stacked_inv(scn, zs) - f))),
        )
        worst["base_isometry"] = max(
            worst["base_isometry"], abs(base_norm(scn, zb) - ref) / ref
        )
        worst["full_isometry"] = max(
            worst["full_isometry"], abs(full_norm(scn, zf) - ref) / ref
        )
        worst["stacked_isometry"] = max(
            worst["stacked_isometry"], abs(stacked_norm(scn, zs) - ref) / ref
        )
        worst["relation"] = max(worst["relation"], zak_relation_deviation(scn, f))
    dft = scn.coset_dft / np.sqrt(scn.n_cosets)
    worst["coset_dft_unitarity"] = float(
        np.max(np.abs(dft @ dft.conj().T - np.eye(scn.n_cosets)))
    )
    return worst


def _scenario_report(scn: Scenario) -> dict:
    return {
        "chain": scn.chain.as_dict(),
        "action": scn.action_report.as_dict(),
        "tiling": {
            "orbit_reps": [int(x) for x in scn.tiling.orbit_reps],
            "tiles": [int(x) for x in scn.tiling.tiles],
            "transversal": [list(a) for a in scn.transversal.representatives],
            "fibers": [list(w) for w in scn.omega],
        },
    }


# -- commands -----------------------------------------------------------------


def cmd_validate(doc: dict, args) -> int:
    scn = build_scenario(doc)
    _, seed = _options(doc, args)
    report = {
        "command": "validate",
        **_scenario_report(scn),
        "self_test": {k: float(v) for k, v in _self_test(scn, seed).items()},
    }
    _emit(report, args.out)
    return 0


def cmd_partition(doc: dict, args) -> int:
    scn = build_scenario(doc)
    part = dual_partition(scn)
    _emit({"command": "partition", **part.as_dict()}, args.out)
    return 0


def cmd_check(doc: dict, args) -> int:
    scn = build_scenario(doc)
    tol, seed = _options(doc, args)
    space = build_subspace(doc, scn, np.random.default_rng(seed))
    report = check_extra_invariance(scn, space, tol)
    dec = check_decomposable(scn, space, tol)
    _emit(
        {
            "command": "check",
            "subspace_dim": int(space.dim),
            "extra_invariance": report.as_dict(),
            "decomposability": dec.as_dict(),
        },
        args.out,
    )
    return 0


def cmd_approx(doc: dict, args) -> int:
    scn = build_scenario(doc)
    tol, seed = _options(doc, args)
    if "data" not in doc or not isinstance(doc["data"], dict):
        raise ConfigError("data", "missing required section")
    data = _vectors_from(doc, "data", scn, doc.get("_dir", "."))
    opts = doc.get("options", {})
    ell = opts.get("ell")
    if not isinstance(ell, int) or ell < 1:
        raise ConfigError("options.ell", "expected a positive integer")
    plain = best_invariant(scn, data, ell)
    extra = best_extra_invariant(scn, data, ell)
    report = {
        "command": "approx",
        "ell": ell,
        "n_vectors": int(data.shape[1]),
        "plain": plain.as_dict(),
        "extra": extra.as_dict(),
    }
    if args.out:
        base = Path(args.out)
        plain_csv = base.with_suffix(".plain_frame.csv")
        extra_csv = base.with_suffix(".extra_frame.csv")
        write_columns_csv(ensure_parent(plain_csv), plain.space.frame)
        write_columns_csv(ensure_parent(extra_csv), extra.space.frame)
        report["frames"] = {"plain": plain_csv.name, "extra": extra_csv.name}
    _emit(report, args.out)
    return 0


def cmd_demo(args) -> int:
    name = args.name
    doc = dict(DEMO_CONFIGS[name])
    expect = DEMO_EXPECTATIONS[name]
    scn = build_scenario(doc)
    tol, seed = _options(doc, args)
    part = dual_partition(scn)
    space = build_subspace(doc, scn, np.random.default_rng(seed))
    report = check_extra_invariance(scn, space, tol)
    failures = []
    part_dict = part.as_dict()
    if part_dict["blocks"] != expect["blocks"]:
        failures.append("partition blocks differ from the embedded expectation")
    if report.extra_invariant != expect["extra_invariant"]:
        failures.append("extra-invariance verdict differs")
    if list(report.component_dims) != expect["component_dims"]:
        failures.append("component dimensions differ")
    if "indices" in expect:
        got = [scn.chain.index_base, scn.chain.index_extra, scn.chain.index_between]
        if got != expect["indices"]:
            failures.append("chain indices differ")
    out = {
        "command": "demo",
        "name": name,
        **_scenario_report(scn),
        "partition": part_dict,
        "extra_invariance": report.as_dict(),
        "expected_ok": not failures,
        "failures": failures,
    }
    _emit(out, args.out)
    return 0 if not failures else 3


# -- entry point --------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="actinv",
        description="Invariant subspaces of weighted finite abelian group actions.",
    )
    parser.add_argument("--config", help="path to a JSON run configuration")
    parser.add_argument("--out", help="write the JSON report here instead of stdout")
    parser.add_argument(
        "--tol", type=float, default=None, help="numerical tolerance (default 1e-9)"
    )
    parser.add_argument(
        "--seed", type=int, default=None, help="override the configured seed"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("validate", "partition", "check", "approx"):
        sub.add_parser(name)
    demo = sub.add_parser("demo")
    demo.add_argument("name", choices=sorted(DEMO_CONFIGS))
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "demo":
            return cmd_demo(args)
        if not args.config:
            raise ConfigError("--config", "required for this command")
        doc = load_config(args.config)
        handler = {
            "validate": cmd_validate,
            "partition": cmd_partition,
            "check": cmd_check,
            "approx": cmd_approx,
        }[args.command]
        return handler(doc, args)
    except ConfigError as exc:
        _emit({"error": {"kind": "config", "detail": str(exc)}}, None)
        return 1
    except (ChainError, ActionError, InvarianceError, ValueError) as exc:
        _emit({"error": {"kind": "validation", "detail": str(exc)}}, None)
        return 2
    except TheoremViolationError as exc:
        _emit(
            {
                "error": {
                    "kind": "theorem-violation",
                    "detail": str(exc),
                    "details": {k: _plain(v) for k, v in exc.details.items()},
                }
            },
            None,
        )
        return 3


def _plain(value):
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    return value


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
