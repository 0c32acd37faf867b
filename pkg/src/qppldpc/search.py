"""Girth-driven search for QPP coefficients.

The quadratic coefficient starts at the radical of N and is enlarged one
prime factor at a time while the best girth keeps improving. For each
``f2`` the linear coefficient is swept only over ``[1, 2*f2*lcm(lam, rho))``,
since larger values give isomorphic graphs.
"""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .gf2 import rank_gf2, to_parity_check
from .qpp import Qpp, factorize, is_permutation_poly, min_f2
from .tanner import (DEFAULT_GIRTH_CAP, CodeProfile, _beta_only, build_graph,
                     canonical_f1_range, girth_stats)

log = logging.getLogger(__name__)

DEFAULT_FOREIGN_PRIMES = (2, 3, 5, 7, 11, 13)


@dataclass
class Candidate:
    f1: int
    f2: int
    girth: int
    beta: int
    shortest_cycles: int
    rank: int | None = None

    def sort_key(self):
        return (-self.girth, self.shortest_cycles, self.f2, self.f1)


@dataclass
class SearchReport:
    profile: CodeProfile
    girth_target: int
    candidates: list[Candidate]
    examined: int
    skipped_by_canonicalization: int
    rejected_parallel: int
    stages: list[tuple[int, int]] = field(default_factory=list)

    @property
    def chosen(self) -> Candidate | None:
        return self.candidates[0] if self.candidates else None

    def to_dict(self) -> dict:
        return {
            "profile": asdict(self.profile),
            "girth_target": self.girth_target,
            "chosen": asdict(self.chosen) if self.chosen else None,
            "candidates": [asdict(c) for c in self.candidates],
            "examined": self.examined,
            "skipped_by_canonicalization": self.skipped_by_canonicalization,
            "rejected_parallel": self.rejected_parallel,
            "stages": [{"f2": f2, "best_girth": g} for f2, g in self.stages],
        }


def _valid_f1(N: int, f2: int, upper: int) -> list[int]:
    return [f1 for f1 in range(1, min(upper, N)) if is_permutation_poly(N, f1, f2)]


def evaluate(profile: CodeProfile, f1: int, f2: int, cap: int) -> Candidate | None:
    """Pruned girth of one coefficient pair; None if the graph has parallel edges."""
    f = Qpp(profile.N, f1, f2)
    g = build_graph(profile, f)
    if g.has_parallel_edges:
        return None
    beta = _beta_only(f, profile)
    gi, cnt = girth_stats(g, "pruned", max_len=cap, beta=beta)
    if gi == math.inf:
        gi = cap + 2
    return Candidate(f1, f2, int(gi), beta, cnt)


class _Checkpoint:
    def __init__(self, path):
        self.path = Path(path) if path else None
        self.cache: dict[tuple[int, int], dict | None] = {}
        self.stage = 0
        self.f2 = None
        self.f1_offset = 0
        if self.path and self.path.exists():
            data = json.loads(self.path.read_text())
            for rec in data.get("evaluated", []):
                self.cache[(rec["f1"], rec["f2"])] = rec.get("candidate")

    def save(self):
        if not self.path:
            return
        data = {"stage": self.stage, "f2": self.f2, "f1_offset": self.f1_offset,
                "evaluated": [{"f1": k[0], "f2": k[1], "candidate": v}
                              for k, v in sorted(self.cache.items())]}
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        tmp.write_text(json.dumps(data))
        tmp.replace(self.path)


def search_codes(profile: CodeProfile, girth_target: int, f2_schedule=None, *,
                 foreign_factors: bool = False, foreign_primes=DEFAULT_FOREIGN_PRIMES,
                 patience: int = 1, max_stages: int = 8, girth_cap: int = DEFAULT_GIRTH_CAP,
                 finalists: int = 3, workers: int = 1, checkpoint=None,
                 checkpoint_every: int = 64) -> SearchReport:
    """Search ``(f1, f2)`` for graphs of girth ``>= girth_target``.

    ``f2_schedule`` replaces the automatic ``f2`` escalation with an explicit
    list of values. With ``foreign_factors`` the escalation may also multiply
    ``f2`` by primes that do not divide N. Escalation stops after ``patience``
    consecutive stages without a strict girth improvement. Ranks are computed
    for the top ``finalists`` candidates.
    """
    N, lam, rho = profile.N, profile.lam, profile.rho
    cap = max(girth_cap, girth_target)
    ck = _Checkpoint(checkpoint)
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    examined = skipped = rejected = 0
    results: dict[tuple[int, int], Candidate] = {}
    stages: list[tuple[int, int]] = []

    def sweep(f2: int) -> int:
        nonlocal examined, skipped, rejected
        upper = canonical_f1_range(f2, lam, rho)
        f1s = _valid_f1(N, f2, upper)
        if upper < N:
            skipped += sum(1 for f1 in range(upper, N) if is_permutation_poly(N, f1, f2))
        ck.f2 = f2
        todo = [f1 for f1 in f1s if (f1, f2) not in ck.cache]
        for start in range(0, len(todo), checkpoint_every):
            chunk = todo[start:start + checkpoint_every]
            if pool is None:
                out = [evaluate(profile, f1, f2, cap) for f1 in chunk]
            else:
                out = list(pool.map(lambda a: evaluate(profile, a, f2, cap), chunk))
            for f1, cand in zip(chunk, out):
                ck.cache[(f1, f2)] = asdict(cand) if cand else None
            ck.f1_offset = chunk[-1]
            ck.save()
        best = 0
        for f1 in f1s:
            examined += 1
            rec = ck.cache[(f1, f2)]
            if rec is None:
                rejected += 1
                continue
            cand = Candidate(**rec)
            results[(f1, f2)] = cand
            best = max(best, cand.girth)
        stages.append((f2, best))
        log.info("f2=%d: %d candidates, best girth %d", f2, len(f1s), best)
        return best

    try:
        if f2_schedule is not None:
            for ck.stage, f2 in enumerate(f2_schedule):
                sweep(f2 % N)
        else:
            f2 = min_f2(N)
            best = sweep(f2)
            multipliers = sorted(set(factorize(N).primes)
                                 | (set(foreign_primes) if foreign_factors else set()))
            misses = 0
            ck.stage = 1
            while ck.stage < max_stages and misses < patience:
                trials = [(f2 * p) % N for p in multipliers]
                trials = sorted({t for t in trials if t and t != f2})
                if not trials:
                    break
                stage_best, stage_f2 = 0, None
                for t in trials:
                    g = sweep(t)
                    if g > stage_best:
                        stage_best, stage_f2 = g, t
                ck.stage += 1
                if stage_best > best:
                    best, f2, misses = stage_best, stage_f2, 0
                else:
                    misses += 1
    finally:
        if pool is not None:
            pool.shutdown()

    ranked = sorted((c for c in results.values() if c.girth >= girth_target),
                    key=Candidate.sort_key)
    for c in ranked[:finalists]:
        H = to_parity_check(build_graph(profile, Qpp(N, c.f1, c.f2)))
        c.rank = rank_gf2(H)
    return SearchReport(profile, girth_target, ranked, examined, skipped, rejected, stages)
