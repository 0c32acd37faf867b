"""Command-line entry point: ``qppldpc <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import alist
from .codes import SpecError, load_profile, load_spec
from .distance import NncsConfig, dmin_recursive, dmin_upper_bound, nncs_search
from .errors import RejectedInputError, StructuralViolationError
from .gf2 import decompose_circulant, qc_rearrange, rank_gf2, to_parity_check, weight_matrix
from .montecarlo import SimConfig, simulate
from .search import search_codes
from .tanner import automorphism_params, girth


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _girth_value(g):
    return None if g == math.inf else int(g)


def cmd_construct(args) -> int:
    spec = load_spec(args.spec)
    graph = spec.graph()
    H = to_parity_check(graph)
    alist.write_alist(H, args.alist)
    ap = automorphism_params(spec.qpp, spec.profile)
    rank = rank_gf2(H)
    _emit({"name": spec.name, "n": spec.n, "r": spec.profile.r, "girth": _girth_value(girth(graph)),
           "beta": ap.beta, "gamma": ap.gamma, "rank": rank, "k": spec.n - rank,
           "alist": str(args.alist)})
    return 0


def cmd_girth(args) -> int:
    spec = load_spec(args.spec)
    graph = spec.graph()
    mode = "exhaustive" if args.exhaustive else "pruned"
    t0 = time.perf_counter()
    g = girth(graph, mode, max_len=args.max_len)
    _emit({"name": spec.name, "mode": mode, "girth": _girth_value(g), "max_len": args.max_len,
           "elapsed": time.perf_counter() - t0})
    return 0


def cmd_qc(args) -> int:
    spec = load_spec(args.spec)
    H = spec.parity_check()
    ap = automorphism_params(spec.qpp, spec.profile)
    Hq, perm = qc_rearrange(H, ap.beta, ap.gamma, check_shift=ap.check_shift)
    dec = decompose_circulant(Hq, spec.profile.r // ap.gamma, spec.n // ap.beta)
    A = weight_matrix(dec)
    out = {"name": spec.name, "beta": ap.beta, "gamma": ap.gamma, "check_shift": perm.check_shift,
           "block_size": dec.size, "weight_matrix": A.tolist(), "first_rows": dec.first_rows()}
    Path(args.weights).write_text(json.dumps(out))
    _emit({k: out[k] for k in ("name", "beta", "gamma", "block_size")} | {"shape": list(A.shape)})
    return 0


def _load_weights(path) -> np.ndarray:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON ({exc})") from None
    A = data.get("weight_matrix") if isinstance(data, dict) else data
    if A is None:
        raise SpecError("missing field 'weight_matrix'")
    try:
        arr = np.array(A, dtype=np.int64)
    except (TypeError, ValueError):
        raise SpecError("field 'weight_matrix' must be a rectangular integer array") from None
    if arr.ndim != 2:
        raise SpecError("field 'weight_matrix' must be 2-D")
    return arr


def cmd_dmin(args) -> int:
    A = _load_weights(args.weights)
    res = dmin_recursive(A) if args.recursive else dmin_upper_bound(A)
    _emit(res.to_dict())
    return 0


def cmd_nncs(args) -> int:
    spec = load_spec(args.spec)
    H = spec.parity_check()
    ap = automorphism_params(spec.qpp, spec.profile)
    cfg = NncsConfig(mode=args.mode, budget=args.budget, seed=args.seed,
                     max_iters=args.iters, background=args.background)
    res = nncs_search(H, cfg, beta=ap.beta, target=args.target)
    out = res.to_dict()
    if not res.found:
        out["note"] = "no upper bound obtained"
    _emit(out)
    return 0


def cmd_search(args) -> int:
    profile = load_profile(args.profile)
    rep = search_codes(profile, args.girth_target, foreign_factors=args.foreign_factors,
                       workers=args.workers, checkpoint=args.checkpoint)
    Path(args.out).write_text(json.dumps(rep.to_dict(), indent=1))
    _emit({"candidates": len(rep.candidates), "examined": rep.examined,
           "chosen": rep.to_dict()["chosen"]})
    return 0


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def cmd_simulate(args) -> int:
    spec = load_spec(args.spec)
    H = spec.parity_check()
    cfg = SimConfig(args.ebno, max_frames=args.max_frames, stop_errors=args.stop_errors,
                    max_iters=args.iters, seed=args.seed, workers=args.workers)
    stats = simulate(H, cfg)
    stats.write_csv(args.out)
    if args.nc_log:
        stats.write_near_codewords(args.nc_log)
    _emit({"rate": stats.rate, "partial": stats.partial, "points": stats.rows()})
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qppldpc", description="QPP-based LDPC code toolkit")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("construct", help="build H and export it as alist")
    s.add_argument("--spec", required=True)
    s.add_argument("--alist", required=True)
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("girth", help="girth of the Tanner graph")
    s.add_argument("--spec", required=True)
    s.add_argument("--exhaustive", action="store_true")
    s.add_argument("--max-len", type=int, default=None)
    s.set_defaults(func=cmd_girth)

    s = sub.add_parser("qc", help="circulant form and weight matrix")
    s.add_argument("--spec", required=True)
    s.add_argument("--weights", required=True)
    s.set_defaults(func=cmd_qc)

    s = sub.add_parser("dmin", help="permanent upper bound on minimum distance")
    s.add_argument("--weights", required=True)
    s.add_argument("--recursive", action="store_true")
    s.set_defaults(func=cmd_dmin)

    s = sub.add_parser("nncs", help="low-weight codeword search")
    s.add_argument("--spec", required=True)
    s.add_argument("--mode", choices=["single", "pair"], default="single")
    s.add_argument("--budget", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--iters", type=int, default=NncsConfig.max_iters)
    s.add_argument("--background", type=float, default=NncsConfig.background)
    s.add_argument("--target", type=int, default=None)
    s.set_defaults(func=cmd_nncs)

    s = sub.add_parser("search", help="search QPP coefficients for large girth")
    s.add_argument("--profile", required=True)
    s.add_argument("--girth-target", type=int, required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--foreign-factors", action="store_true",
                   help="also try multiplying f2 by primes that do not divide N")
    s.add_argument("--checkpoint", default=None)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("simulate", help="BPSK/AWGN Monte Carlo BER/FER")
    s.add_argument("--spec", required=True)
    s.add_argument("--ebno", type=_float_list, required=True)
    s.add_argument("--max-frames", type=int, default=100_000)
    s.add_argument("--stop-errors", type=int, default=50)
    s.add_argument("--iters", type=int, default=200)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", required=True)
    s.add_argument("--nc-log", default=None)
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (SpecError, RejectedInputError, StructuralViolationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
