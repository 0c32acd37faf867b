"""BPSK/AWGN Monte Carlo simulation with all-zero codeword transmission.

Noise for frame block ``b`` at a given Eb/N0 comes from a generator seeded
with ``(seed, round(1000 * ebno_db), b)``, so results do not depend on the
number of workers or on the other SNR points in the run.
"""

from __future__ import annotations

import csv
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .decoder import DecodeResult, SumProductDecoder
from .gf2 import SparseBitMatrix, rank_gf2

log = logging.getLogger(__name__)


@dataclass
class SimConfig:
    ebno_db: list[float]
    max_frames: int = 100_000
    stop_errors: int = 50
    max_iters: int = 80
    seed: int = 0
    workers: int = 1
    block_size: int = 256

    def __post_init__(self):
        self.ebno_db = [float(x) for x in self.ebno_db]
        if self.max_frames < 1 or self.stop_errors < 1 or self.max_iters < 1:
            raise ValueError("max_frames, stop_errors and max_iters must be positive")
        if self.workers < 1 or self.block_size < 1:
            raise ValueError("workers and block_size must be positive")


@dataclass
class PointStats:
    ebno_db: float
    frames: int = 0
    bit_errors: int = 0
    frame_errors: int = 0
    detected: int = 0
    undetected: int = 0
    near_codewords: list[tuple[int, int, int]] = field(default_factory=list)
    undetected_weights: list[int] = field(default_factory=list)
    elapsed: float = 0.0
    partial: bool = False

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.frames * self._n) if self.frames else float("nan")

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames if self.frames else float("nan")

    _n: int = field(default=1, repr=False)


@dataclass
class SimStats:
    n: int
    rate: float
    points: list[PointStats]

    @property
    def partial(self) -> bool:
        return any(p.partial for p in self.points)

    def rows(self) -> list[dict]:
        return [{"ebno_db": p.ebno_db, "frames": p.frames, "bit_errors": p.bit_errors,
                 "frame_errors": p.frame_errors, "detected": p.detected,
                 "undetected": p.undetected, "ber": p.ber, "fer": p.fer}
                for p in self.points]

    def write_csv(self, path) -> None:
        cols = ["ebno_db", "frames", "bit_errors", "frame_errors", "detected",
                "undetected", "ber", "fer"]
        with open(path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=cols)
            w.writeheader()
            for row in self.rows():
                w.writerow(row)

    def near_codeword_log(self) -> list[dict]:
        return [{"ebno_db": p.ebno_db, "frame_index": i, "w": w, "s": s}
                for p in self.points for i, w, s in p.near_codewords]

    def write_near_codewords(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.near_codeword_log(), fh, indent=1)


@dataclass(frozen=True)
class FrameOutcome:
    kind: str  # "success", "detected" or "undetected"
    w: int = 0
    s: int = 0


def classify_frame(result: DecodeResult) -> FrameOutcome:
    """Classify a decode of the all-zero codeword."""
    w = int(np.count_nonzero(result.word))
    s = int(result.syndrome_weight)
    if s > 0:
        return FrameOutcome("detected", w, s)
    if w > 0:
        return FrameOutcome("undetected", w, 0)
    return FrameOutcome("success")


def noise_sigma(ebno_db: float, rate: float) -> float:
    return float(np.sqrt(1.0 / (2.0 * rate * 10.0 ** (ebno_db / 10.0))))


def _run_block(dec: SumProductDecoder, seed: int, ebno_db: float, block: int,
               size: int, sigma: float):
    rng = np.random.default_rng([seed, int(round(ebno_db * 1000)) & 0xFFFFFFFF, block])
    y = 1.0 + sigma * rng.standard_normal((size, dec.n))
    llr = (2.0 / sigma**2) * y
    words, _, sws = dec.decode_batch(llr)
    return words.sum(axis=1, dtype=np.int64), sws


def simulate(H: SparseBitMatrix, config: SimConfig, rate: float | None = None) -> SimStats:
    """Estimate BER/FER at each Eb/N0 point.

    A point stops at ``max_frames`` frames or at the frame where the error
    count reaches ``stop_errors``, whichever is first. Detected errors (the
    decoder gives up with a nonzero syndrome) are logged as near-codewords
    ``(frame_index, w, s)``. Undetected errors (convergence to a nonzero
    codeword) keep their weight, which upper-bounds the minimum distance.
    """
    n = H.n_cols
    if rate is None:
        rate = (n - rank_gf2(H)) / n
    if not 0 < rate <= 1:
        raise ValueError(f"code rate must be in (0, 1], got {rate}")
    dec = SumProductDecoder(H, config.max_iters)
    points = []
    pool = ThreadPoolExecutor(config.workers) if config.workers > 1 else None
    try:
        for eb in config.ebno_db:
            points.append(_simulate_point(dec, config, eb, rate, pool))
            if points[-1].partial:
                break
    finally:
        if pool is not None:
            pool.shutdown()
    return SimStats(n, rate, points)


def _simulate_point(dec, config, eb, rate, pool) -> PointStats:
    t0 = time.perf_counter()
    sigma = noise_sigma(eb, rate)
    st = PointStats(eb)
    st._n = dec.n
    B = config.block_size
    next_block = 0
    done = False
    try:
        while not done:
            todo = []
            for _ in range(config.workers):
                start = next_block * B
                if start >= config.max_frames:
                    break
                todo.append((next_block, min(B, config.max_frames - start)))
                next_block += 1
            if not todo:
                break
            if pool is None:
                results = [_run_block(dec, config.seed, eb, b, size, sigma) for b, size in todo]
            else:
                futs = [pool.submit(_run_block, dec, config.seed, eb, b, size, sigma)
                        for b, size in todo]
                results = [f.result() for f in futs]
            for (b, _), (w, s) in zip(todo, results):
                for t in range(w.size):
                    st.frames += 1
                    if w[t] == 0 and s[t] == 0:
                        continue
                    st.bit_errors += int(w[t])
                    if w[t] == 0:
                        # nonzero syndrome with an all-zero word cannot happen
                        continue
                    st.frame_errors += 1
                    if s[t] > 0:
                        st.detected += 1
                        st.near_codewords.append((b * B + t, int(w[t]), int(s[t])))
                    else:
                        st.undetected += 1
                        st.undetected_weights.append(int(w[t]))
                    if st.frame_errors >= config.stop_errors:
                        done = True
                        break
                if done:
                    break
    except KeyboardInterrupt:
        st.partial = True
    st.elapsed = time.perf_counter() - t0
    log.info("Eb/N0 %.2f dB: %d frames, %d frame errors", eb, st.frames, st.frame_errors)
    return st
