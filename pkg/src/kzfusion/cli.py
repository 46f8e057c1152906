"""Command-line front end.

Verbs: algebra validate, fusion, kz, candidate, batch.  Every run is
reproducible: the resolved configuration is embedded in the JSON report and
execute_config on that configuration reproduces the report bit for bit.

Exit codes: fusion 0 on One/Zero and 2 on Unknown; kz 3 when obstructed
before the requested degree (partial results still written); candidate 1
when there is no obstruction; 1 on malformed input everywhere.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import fusion as fusion_mod
from .errors import KzFusionError, ObstructionError
from .exact import GENERIC_LEVEL, is_generic, parse_scalar
from .gmodules import WeightModule, decompose, expected_hom_dim, hom_space
from .kz import (
    VermaTarget,
    build_prefix,
    build_prefix_contragredient,
    candidate_diagnostics,
    kz_residual,
    obstruction_scan,
    singular_candidate,
    verify_commcomp,
)
from .liealg import algebra_from_dict, algebra_to_dict, load_algebra, sl2
from .liealg import adjoint_probe, casimir_on_probe, check_lemma1, check_lemma2
from .verma import GeneralizedVermaModule, conformal_weight_from_casimir

SCHEMA = "kzfusion-report/1"
OUTPUT_DIR_ENV = "KZFUSION_OUTPUT_DIR"


def _parse_level(text):
    if str(text).strip() == "generic":
        return GENERIC_LEVEL
    return parse_scalar(str(text))


def _level_str(level):
    return "generic" if is_generic(level) else str(level)


def _load(cfg_algebra):
    if isinstance(cfg_algebra, dict):
        return algebra_from_dict(cfg_algebra)
    return load_algebra(cfg_algebra)


def parse_module_spec(text: str) -> dict:
    parts = str(text).split(":")
    kind = parts[0]
    if kind == "finite" and len(parts) == 2:
        return {"kind": "finite", "p": int(parts[1])}
    if kind == "hw" and len(parts) in (2, 3):
        out = {"kind": "highest", "lam": parts[1],
               "depth": int(parts[2]) if len(parts) == 3 else 12}
        return out
    if kind == "dense" and len(parts) in (3, 4):
        return {"kind": "dense", "lam": parts[1], "delta": parts[2],
                "radius": int(parts[3]) if len(parts) == 4 else 4}
    raise KzFusionError(f"cannot parse module spec {text!r}")


def parse_target_spec(text: str) -> dict:
    parts = str(text).split(":")
    if len(parts) == 2 and parts[0] in ("verma", "contragredient"):
        return {"kind": parts[0], "lam3": parts[1]}
    raise KzFusionError(f"cannot parse target spec {text!r}")


# ---------------------------------------------------------------------------
# executors: pure config -> report


def execute_config(cfg: dict) -> dict:
    command = cfg.get("command")
    runners = {
        "algebra_validate": _exec_algebra_validate,
        "fusion": _exec_fusion,
        "kz": _exec_kz,
        "candidate": _exec_candidate,
    }
    if command not in runners:
        raise KzFusionError(f"unknown command {command!r}")
    return runners[command](cfg)


def _report(cfg, body, exit_code):
    out = {"schema": SCHEMA, "config": cfg, "exit_code": exit_code}
    out.update(body)
    return out


def _exec_algebra_validate(cfg):
    alg = _load(cfg.get("algebra", "builtin:sl2"))
    checks = {}
    try:
        alg.validate()
        checks["structure"] = True
    except KzFusionError as err:
        return _report(cfg, {"valid": False, "error": str(err)}, 1)
    probes = [adjoint_probe(alg)]
    for probe in probes:
        probe.validate(alg)
    checks["adjoint_probe"] = True
    basis = [alg.basis_vector(i) for i in range(alg.dim)]
    checks["lemma_bracket_swap"] = all(
        check_lemma1(alg, g, probes) for g in basis
    )
    checks["lemma_dual_coxeter"] = all(
        check_lemma2(alg, g, probes) for g in basis
    )
    cas = casimir_on_probe(alg, probes[0])
    expected = alg.dual_coxeter * 2
    checks["casimir_on_adjoint"] = all(
        cas[i, j] == (expected if i == j else 0)
        for i in range(alg.dim) for j in range(alg.dim)
    )
    ok = all(checks.values())
    body = {"valid": ok, "checks": checks, "algebra": algebra_to_dict(alg)}
    return _report(cfg, body, 0 if ok else 1)


def _exec_fusion(cfg):
    level = _parse_level(cfg["level"])
    q = cfg["query"]
    kind = q["kind"]
    if kind == "finite":
        verdict = fusion_mod.check_finite(level, int(q["p"]), int(q["q"]),
                                          int(q["r"]))
    elif kind == "mixed":
        verdict = fusion_mod.check_mixed(level, int(q["p"]),
                                         Fraction(str(q["lam"])),
                                         Fraction(str(q["mu"])))
    elif kind == "doubly_infinite":
        verdict = fusion_mod.check_doubly_infinite(
            level, Fraction(str(q["lam1"])), Fraction(str(q["lam2"])),
            Fraction(str(q["lam3"])))
    elif kind == "dense":
        verdict = fusion_mod.dense_fusion_check(
            level, Fraction(str(q["lam"])), parse_scalar(str(q["delta"])))
    else:
        raise KzFusionError(f"unknown fusion query kind {kind!r}")
    code = 2 if verdict.kind == "unknown" else 0
    return _report(cfg, verdict.to_json(), code)


def _target_base(alg, lam3: Fraction, depth: int):
    if lam3.denominator == 1 and lam3 >= 0:
        return WeightModule.finite_irreducible(alg, int(lam3))
    return WeightModule.highest_weight(alg, lam3, depth)


def _seed_hom(alg, u1, u2, base3, seed_index):
    try:
        expected = expected_hom_dim(u1, u2, base3)
    except KzFusionError:
        expected = None
    homs = hom_space(u1, u2, base3, expected_dim=expected)
    if not homs:
        raise KzFusionError("the g-homomorphism space is zero; no seed")
    if not 0 <= seed_index < len(homs):
        raise KzFusionError(f"seed index {seed_index} out of range {len(homs)}")
    return homs[seed_index]


def _default_blocks(tensor):
    ws = tensor.block_weights()
    if tensor.u1.kind == "dense" or tensor.u2.kind == "dense":
        mid = len(ws) // 2
        return list(ws[max(mid - 1, 0):mid + 1])
    return list(ws[:2])


def _exec_kz(cfg):
    alg = _load(cfg.get("algebra", "builtin:sl2"))
    level = _parse_level(cfg["level"])
    u1 = WeightModule.from_descriptor(alg, cfg["u1"])
    u2 = WeightModule.from_descriptor(alg, cfg["u2"])
    cutoff = int(cfg["cutoff"])
    tgt = cfg["target"]
    lam3 = Fraction(str(tgt["lam3"]))
    base3 = _target_base(alg, lam3, depth=int(cfg["u2"].get("depth", 12)) + 2)
    f = _seed_hom(alg, u1, u2, base3, int(cfg.get("seed_index", 0)))
    code = 0
    if tgt["kind"] == "verma":
        verma = GeneralizedVermaModule(alg, level, base3, cutoff=max(cutoff, 1))
        target = VermaTarget(verma)
        blocks = [Fraction(str(w)) for w in cfg["blocks"]] if cfg.get("blocks") \
            else (None if u1.is_finite() and u2.is_finite()
                  else _default_blocks(f.tensor))
        try:
            prefix = build_prefix(f, cutoff, target, request_weights=blocks)
        except ObstructionError as err:
            prefix = err.prefix
            code = 3
    elif tgt["kind"] == "contragredient":
        if lam3.denominator != 1 or lam3 < 0:
            raise KzFusionError("contragredient targets need lam3 in N")
        prefix = build_prefix_contragredient(f, cutoff, level, int(lam3))
    else:
        raise KzFusionError(f"unknown target kind {tgt['kind']!r}")
    checks = {
        "commutator_components": bool(verify_commcomp(prefix)),
        "series_recursion_residual": bool(kz_residual(prefix)),
    }
    body = {"prefix": prefix.to_json(), "checks": checks}
    return _report(cfg, body, code)


def _exec_candidate(cfg):
    alg = _load(cfg.get("algebra", "builtin:sl2"))
    level = _parse_level(cfg["level"])
    if is_generic(level):
        return _report(cfg, {"error": "no obstruction at a generic level"}, 1)
    p, q, r = int(cfg["p"]), int(cfg["q"]), int(cfg["r"])
    u1 = WeightModule.finite_irreducible(alg, p)
    u2 = WeightModule.finite_irreducible(alg, q)
    base3 = WeightModule.finite_irreducible(alg, r)
    h3 = conformal_weight_from_casimir(alg, base3.casimir_scalar, level)
    report = obstruction_scan(u1, u2, level, h3)
    if report.is_empty():
        return _report(cfg, {"error": "no obstruction; nothing to compute",
                             "obstructions": report.to_json()}, 1)
    f = _seed_hom(alg, u1, u2, base3, int(cfg.get("seed_index", 0)))
    entry = report.first()
    verma = GeneralizedVermaModule(alg, level, base3, cutoff=entry.degree)
    candidates = []
    for w, vecs in sorted(entry.eigenvectors.items()):
        for col in vecs:
            vec = singular_candidate(f, verma, w, col, report)
            diag = candidate_diagnostics(verma, vec)
            candidates.append({
                "weight": str(w),
                "eigenvector": [str(c) for c in col],
                "vector": vec.to_json(),
                "conformal_weight": str(h3 + entry.degree),
                "diagnostics": diag.to_json(),
            })
    body = {
        "obstructions": report.to_json(),
        "degree": entry.degree,
        "candidates": candidates,
        "all_zero": all(c["diagnostics"]["is_zero"] for c in candidates),
    }
    return _report(cfg, body, 0)


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let values like -1/2 or -3/2 pass as arguments, not option strings
        import re as _re

        self._negative_number_matcher = _re.compile(r"^-\d+(/\d+)?(\.\d+)?$")

    def error(self, message):
        raise KzFusionError(message)


def _build_parser():
    parser = _Parser(prog="kzfusion")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p_alg = sub.add_parser("algebra")
    alg_sub = p_alg.add_subparsers(dest="algverb", required=True,
                                   parser_class=_Parser)
    p_val = alg_sub.add_parser("validate")
    p_val.add_argument("--algebra", default="builtin:sl2")
    p_val.add_argument("--output")

    p_fus = sub.add_parser("fusion")
    p_fus.add_argument("--level", required=True)
    group = p_fus.add_mutually_exclusive_group(required=True)
    group.add_argument("--finite", nargs=3, metavar=("P", "Q", "R"))
    group.add_argument("--mixed", nargs=3, metavar=("P", "LAM", "MU"))
    group.add_argument("--doubly-infinite", nargs=3,
                       metavar=("LAM1", "LAM2", "LAM3"))
    group.add_argument("--dense", nargs=2, metavar=("LAM", "DELTA"))
    p_fus.add_argument("--output")

    p_kz = sub.add_parser("kz")
    p_kz.add_argument("--level", required=True)
    p_kz.add_argument("--u1", required=True)
    p_kz.add_argument("--u2", required=True)
    p_kz.add_argument("--target", required=True)
    p_kz.add_argument("-N", "--cutoff", type=int, required=True)
    p_kz.add_argument("--seed-index", type=int, default=0)
    p_kz.add_argument("--blocks", help="comma-separated weight list")
    p_kz.add_argument("--output")

    p_cand = sub.add_parser("candidate")
    p_cand.add_argument("--level", required=True)
    p_cand.add_argument("--p", type=int, required=True)
    p_cand.add_argument("--q", type=int, required=True)
    p_cand.add_argument("--r", type=int, required=True)
    p_cand.add_argument("--seed-index", type=int, default=0)
    p_cand.add_argument("--output")

    p_batch = sub.add_parser("batch")
    p_batch.add_argument("file")
    p_batch.add_argument("--output")
    return parser


def _config_from_args(args) -> dict:
    if args.verb == "algebra":
        return {"command": "algebra_validate", "algebra": args.algebra}
    if args.verb == "fusion":
        if args.finite:
            p, q, r = args.finite
            query = {"kind": "finite", "p": int(p), "q": int(q), "r": int(r)}
        elif args.mixed:
            p, lam, mu = args.mixed
            query = {"kind": "mixed", "p": int(p), "lam": lam, "mu": mu}
        elif args.doubly_infinite:
            l1, l2, l3 = args.doubly_infinite
            query = {"kind": "doubly_infinite", "lam1": l1, "lam2": l2, "lam3": l3}
        else:
            lam, delta = args.dense
            query = {"kind": "dense", "lam": lam, "delta": delta}
        return {"command": "fusion", "level": args.level, "query": query}
    if args.verb == "kz":
        cfg = {
            "command": "kz",
            "level": args.level,
            "u1": parse_module_spec(args.u1),
            "u2": parse_module_spec(args.u2),
            "target": parse_target_spec(args.target),
            "cutoff": args.cutoff,
            "seed_index": args.seed_index,
        }
        if args.blocks:
            cfg["blocks"] = [w.strip() for w in args.blocks.split(",")]
        return cfg
    if args.verb == "candidate":
        return {"command": "candidate", "level": args.level,
                "p": args.p, "q": args.q, "r": args.r,
                "seed_index": args.seed_index}
    raise KzFusionError(f"unknown verb {args.verb!r}")


def _emit(report: dict, output: str | None, default_name: str):
    text = json.dumps(report, indent=2, sort_keys=True)
    if output is None and os.environ.get(OUTPUT_DIR_ENV):
        output = str(Path(os.environ[OUTPUT_DIR_ENV]) / default_name)
    if output:
        Path(output).write_text(text + "\n")
    print(text)


def _run_batch(args) -> int:
    lines = Path(args.file).read_text().splitlines()
    reports = []
    worst = 0
    for line in lines:
        line = line.strip()
        if not line:
            continue
        cfg = json.loads(line)
        if cfg.get("command") != "fusion":
            raise KzFusionError("batch files hold fusion queries only")
        report = execute_config(cfg)
        worst = max(worst, report["exit_code"])
        reports.append(report)
    out_lines = [json.dumps(r, sort_keys=True) for r in reports]
    text = "\n".join(out_lines)
    if args.output:
        Path(args.output).write_text(text + "\n")
    print(text)
    return worst


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.verb == "batch":
            return _run_batch(args)
        cfg = _config_from_args(args)
        report = execute_config(cfg)
    except KzFusionError as err:
        print(json.dumps({"schema": SCHEMA, "error": str(err)}), file=sys.stderr)
        return 1
    _emit(report, args.output, f"{cfg['command']}.json")
    return report["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
