"""Command-line harness: batch runs across weights with CSV/JSON reports.

Subcommands
-----------
verify-lemma21   certification matrix for the Chebyshev minorant
expand           Fourier / Sato-Tate expansion dump of g
eigen            eigenform dump across a weight range
nf-table         least-negative-eigenvalue table n_f, p_f per form
petersson-check  harmonic weights and held-out decay scan
detector-run     detector G, set-A membership, expansion identity, report

Exit codes: 0 pass, 1 property failure, 2 usage or config error,
3 internal error. All outputs are sorted by (k, form index) before
writing, so --jobs never changes bytes.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import multiprocessing
import os
import sys

from .detector import (detector_G, expansion_identity_check, in_set_A,
                       manual_params, params_from_weight,
                       sign_propagation_check, weighted_average_report,
                       EXPANSION_BUDGET)
from .minorant import (DEFAULT_DELTAS, DEFAULT_L_VALUES, certification_report,
                       minorant_coeffs)
from .modforms import dim_cusp_forms, eigenforms, get_power_cache, sign_statistics
from .petersson import lemma22_decay_scan, weights_by_linear_solve
from .sato_tate import ChebyshevExpansion, expansion_dump

SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
                53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


class PropertyFailure(Exception):
    pass


def _ensure_out(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


def _write_json(path: str, obj) -> None:
    try:
        with open(path, "w") as fh:
            json.dump(obj, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write report {path}: {exc}") from exc


def _write_csv(path: str, header, rows) -> None:
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise OSError(f"cannot write report {path}: {exc}") from exc


def _k_range(cfg) -> list:
    ks = [k for k in range(cfg.k_min, cfg.k_max + 1)
          if k % 2 == 0 and dim_cusp_forms(k) > 0]
    return ks


def _pmap(fn, items, jobs: int):
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with multiprocessing.Pool(processes=jobs) as pool:
        return pool.map(fn, items)


# ---- verify-lemma21 ---------------------------------------------------------

def cmd_verify_lemma21(cfg) -> int:
    Ls = [cfg.L] if cfg.L else list(DEFAULT_L_VALUES)
    deltas = [cfg.delta] if cfg.delta else list(DEFAULT_DELTAS)
    matrix = [(L, d) for L in Ls for d in deltas]
    if not matrix:
        print("warning: empty certification matrix", file=sys.stderr)
        return 0
    reports = _pmap(_lemma21_cell, [(L, d, cfg.bound_scale) for L, d in matrix],
                    cfg.jobs)
    reports.sort(key=lambda r: (r["L"], r["delta"]))
    out = _ensure_out(cfg.out)
    _write_json(os.path.join(out, "lemma21.json"), reports)
    failures = [r for r in reports if not r["pass"]]
    for r in reports:
        tag = "ok" if r["pass"] else "FAIL"
        print(f"L={r['L']:3d} delta={r['delta']:.3f} "
              f"tail_max={r['max_on_tail']:.3e} bound={r['bound']:.3e} {tag}")
    return 1 if failures else 0


def _lemma21_cell(args):
    L, delta, bound_scale = args
    rep = certification_report(L, delta)
    if bound_scale != 1.0:
        rep["bound"] = rep["bound"] * bound_scale
        rep["pass"] = bool(rep["pass"]
                           and rep["max_on_tail"] <= rep["bound"])
    return rep


# ---- expand -----------------------------------------------------------------

def cmd_expand(cfg) -> int:
    Ls = [cfg.L] if cfg.L else list(DEFAULT_L_VALUES)
    deltas = [cfg.delta] if cfg.delta else list(DEFAULT_DELTAS)
    dumps = _pmap(_expand_cell, [(L, d) for L in Ls for d in deltas], cfg.jobs)
    dumps.sort(key=lambda r: (r["L"], r["delta"]))
    out = _ensure_out(cfg.out)
    if cfg.format == "json":
        _write_json(os.path.join(out, "expansion.json"), dumps)
    else:
        rows = []
        for d in dumps:
            for ell, (b, a) in enumerate(zip(d["b"], d["a"])):
                rows.append([d["L"], d["delta"], ell, repr(b), repr(a)])
        _write_csv(os.path.join(out, "expansion.csv"),
                   ["L", "delta", "ell", "b", "a"], rows)
    worst = max(d["checks"]["two_route_defect"] for d in dumps)
    print(f"expansions: {len(dumps)}  worst two-route defect {worst:.3e}")
    return 0 if worst <= 1e-9 else 1


def _expand_cell(args):
    L, delta = args
    return expansion_dump(minorant_coeffs(L, delta))


# ---- eigen ------------------------------------------------------------------

def _eigen_rows(args):
    k, n_max = args
    cache = get_power_cache(n_max)
    rows = []
    for f in eigenforms(k, n_max, cache):
        lam = {p: f.lambda_pp[p] for p in SMALL_PRIMES if p <= f.n_max}
        rows.append({"k": k, "form": f.index, "hecke_prime": f.hecke_prime,
                     "eigen_residual": f.eigen_residual,
                     "crosscheck": f.eq25_crosscheck, "lambda": lam})
    return rows


def cmd_eigen(cfg) -> int:
    ks = _k_range(cfg)
    chunks = _pmap(_eigen_rows, [(k, cfg.n_max) for k in ks], cfg.jobs)
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (r["k"], r["form"]))
    out = _ensure_out(cfg.out)
    if cfg.format == "json":
        _write_json(os.path.join(out, "eigen.json"), rows)
    else:
        flat = []
        for r in rows:
            for p in sorted(r["lambda"]):
                flat.append([r["k"], r["form"], p, repr(r["lambda"][p])])
        _write_csv(os.path.join(out, "eigen.csv"),
                   ["k", "form", "p", "lambda"], flat)
    print(f"eigenforms: {len(rows)} across {len(ks)} weights")
    return 0


# ---- nf-table ---------------------------------------------------------------

def _nf_rows(args):
    k, n_max = args
    stats = sign_statistics(k, n_max)
    return [(k, i, s.n_f, s.p_f, s.ambiguous)
            for i, s in enumerate(stats.records)]


def cmd_nf_table(cfg) -> int:
    ks = _k_range(cfg)
    chunks = _pmap(_nf_rows, [(k, cfg.n_max) for k in ks], cfg.jobs)
    rows = sorted(r for chunk in chunks for r in chunk)
    out = _ensure_out(cfg.out)

    def compare(k):
        llk = math.log(math.log(k))
        return math.log(k) / llk ** 2

    table = [[k, i, nf if nf is not None else "",
              pf if pf is not None else "", int(amb), repr(compare(k))]
             for k, i, nf, pf, amb in rows]
    _write_csv(os.path.join(out, "nf_table.csv"),
               ["k", "form", "n_f", "p_f", "ambiguous",
                "logk_over_loglogk_sq"], table)
    summary = []
    for k in ks:
        per_k = [nf for kk, _, nf, _, _ in rows if kk == k and nf is not None]
        summary.append([k, max(per_k) if per_k else "", repr(compare(k))])
    _write_csv(os.path.join(out, "nf_summary.csv"),
               ["k", "max_n_f", "logk_over_loglogk_sq"], summary)
    bad = [r for r in rows
           if r[2] is not None and r[3] is not None and r[2] > r[3]]
    found = [r[2] for r in rows if r[2] is not None]
    print(f"rows: {len(rows)}  max n_f: {max(found) if found else 'n/a'}")
    return 1 if bad else 0


# ---- petersson-check --------------------------------------------------------

def cmd_petersson_check(cfg) -> int:
    ks = _k_range(cfg)
    scan = lemma22_decay_scan(ks)
    out = _ensure_out(cfg.out)
    _write_csv(os.path.join(out, "decay_scan.csv"), ["k", "m", "D"],
               [[r["k"], r["m"], repr(r["D"])] for r in scan["rows"]])
    _write_json(os.path.join(out, "weights.json"),
                {"beta": scan["beta"], "weights": scan["weights"]})
    neg = [k for k, w in scan["weights"].items()
           if any(x <= 0 for x in w["weights"])]
    print(f"weights for {len(scan['weights'])} weights k; "
          f"fitted decay exponent beta = {scan['beta']:.3f}")
    return 1 if neg else 0


# ---- detector-run -----------------------------------------------------------

def cmd_detector_run(cfg) -> int:
    ks = _k_range(cfg)
    manual = cfg.L is not None and cfg.delta is not None and cfg.z is not None
    reports = []
    failed = False
    for k in ks:
        if manual:
            params = manual_params(cfg.delta, cfg.L, cfg.z)
        elif k >= 16:
            params = params_from_weight(k)
        else:
            print(f"warning: skipping k={k} (coupling needs k >= 16; "
                  f"pass --L --delta --z for manual parameters)",
                  file=sys.stderr)
            continue
        need = max(cfg.n_max, 3 * dim_cusp_forms(k),
                   max(p ** params.L for p in params.primes))
        cache = get_power_cache(need)
        forms = eigenforms(k, need, cache)
        weights = weights_by_linear_solve(forms)
        expansion = ChebyshevExpansion.from_minorant(
            minorant_coeffs(params.L, params.delta))
        rep = weighted_average_report(k, forms, weights, params, expansion)
        if (params.L + 1) ** params.J <= EXPANSION_BUDGET:
            rep["expansion_defects"] = [
                expansion_identity_check(f, params, expansion) for f in forms]
            if max(rep["expansion_defects"]) > 1e-8:
                failed = True
        sp = sign_propagation_check(params.delta, params.z)
        rep["sign_propagation"] = {"ok": sp.ok, "min_margin": sp.min_margin,
                                   "witness": sp.witness}
        if any(g > 1.0 + 1e-9 for g in rep["G_values"]):
            failed = True
        if any(int(m) < g - 1e-9
               for m, g in zip(rep["in_A"], rep["G_values"])):
            failed = True
        reports.append(rep)
    reports.sort(key=lambda r: r["k"])
    out = _ensure_out(cfg.out)
    _write_json(os.path.join(out, "detector.json"), reports)
    for r in reports:
        print(f"k={r['k']:4d} J={r['params']['J']} weighted_G={r['weighted_G']:+.4f} "
              f"a0^J={r['a0_pow_J']:.4f} |A|={r['count_A']}")
    return 1 if failed else 0


# ---- plumbing ---------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="heckesign",
        description="Hecke eigenvalue sign experiments: minorant "
                    "certification, eigenform tables, detector runs.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        sp = sub.add_parser(name, help=fn.__doc__)
        sp.add_argument("--config", default=None,
                        help="JSON config file; flags win over it")
        sp.add_argument("--k-min", type=int, default=12)
        sp.add_argument("--k-max", type=int, default=26)
        sp.add_argument("--n-max", type=int, default=200)
        sp.add_argument("--L", type=int, default=None)
        sp.add_argument("--delta", type=float, default=None)
        sp.add_argument("--z", type=float, default=None)
        sp.add_argument("--quad-nodes", type=int, default=64)
        sp.add_argument("--out", default="heckesign-out")
        sp.add_argument("--format", choices=("csv", "json"), default="json")
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--bound-scale", type=float, default=1.0,
                        help="testing aid: rescales the certified decay "
                             "bound before the pass/fail decision")
    return ap


COMMANDS = {
    "verify-lemma21": cmd_verify_lemma21,
    "expand": cmd_expand,
    "eigen": cmd_eigen,
    "nf-table": cmd_nf_table,
    "petersson-check": cmd_petersson_check,
    "detector-run": cmd_detector_run,
}


def _apply_config_file(args) -> None:
    if not args.config:
        return
    try:
        with open(args.config) as fh:
            values = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad config file {args.config}: {exc}") from exc
    defaults = _build_parser().parse_args(
        [args.command]).__dict__  # per-subcommand defaults
    for key, val in values.items():
        attr = key.replace("-", "_")
        if attr not in defaults:
            raise UsageError(f"unknown config key {key!r}")
        # flags that were left at their default lose to the file
        if getattr(args, attr) == defaults[attr]:
            setattr(args, attr, val)


class UsageError(Exception):
    pass


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        _apply_config_file(args)
        if args.k_min > args.k_max:
            raise UsageError(f"--k-min {args.k_min} > --k-max {args.k_max}")
        for name in ("L", "delta", "z", "n_max", "quad_nodes", "jobs"):
            val = getattr(args, name)
            if val is not None and val <= 0:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PropertyFailure as exc:
        print(f"property failure: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # argparse usage errors
        code = exc.code if isinstance(exc.code, int) else 2
        return 2 if code != 0 else 0
    except Exception as exc:  # noqa: BLE001 - the 3 exit code is the contract
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
