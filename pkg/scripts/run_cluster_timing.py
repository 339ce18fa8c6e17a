#!/usr/bin/env python3
"""Reproduce the sync/async wall-clock table with the calibrated simulation.

Calibrates the additive timing model so a single worker takes 6h11m per
epoch, then simulates both modes on 2..8 workers and prints simulated
epoch times next to the reported ones.

Usage: python scripts/run_cluster_timing.py
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from mtlab.optlab import (
    OptimizerConfig,
    SurrogateConfig,
    SurrogateModel,
    calibrated_cluster_config,
    simulate_cluster,
)
from mtlab.presets import TIMING
from mtlab.synth import toy_lm_stream


def hm(seconds: float) -> str:
    minutes = round(seconds / 60)
    return f"{minutes // 60}h{minutes % 60:02d}m"


def main() -> int:
    iterations = TIMING["iterations_per_epoch"]
    train_ids = toy_lm_stream(iterations * 4 + 1, 24, seed=3)
    val_ids = toy_lm_stream(120, 24, seed=4)

    print(f"single worker (calibration): {hm(TIMING['single_epoch_seconds'])}")
    print(f"{'workers':>8} {'mode':>6} {'simulated':>10} {'reported':>9} {'error':>7}")
    worst = 0.0
    for workers in (2, 4, 6, 8):
        for mode in ("sync", "async"):
            cluster = calibrated_cluster_config(mode, workers,
                                                TIMING["single_epoch_seconds"], iterations)
            model = SurrogateModel(SurrogateConfig(24, 4, 8), seed=9)
            trace = simulate_cluster(model, train_ids, val_ids,
                                     OptimizerConfig("sgd_decay"), cluster,
                                     epochs=1, batch_size=4, seed=2)
            simulated = trace.rows[0].sim_seconds
            reported = TIMING["reported_seconds"][(mode, workers)]
            err = (simulated - reported) / reported
            worst = max(worst, abs(err))
            print(f"{workers:>8} {mode:>6} {hm(simulated):>10} {hm(reported):>9} {err:>+7.1%}")
    print(f"\nworst absolute error: {worst:.1%}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
