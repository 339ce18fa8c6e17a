"""Canonical desk-scale experiment configurations.

The convergence experiment is tuned so the qualitative optimizer story is
reproducible on fixed seeds: Adam leads early, decayed SGD wins at the
end, Adagrad trails everything.  Scripts and the acceptance suite share
these settings.
"""

from __future__ import annotations

import numpy as np

from .optlab import SurrogateConfig, SurrogateModel
from .synth import toy_lm_stream

__all__ = ["CONVERGENCE", "convergence_data", "convergence_model", "TIMING"]

CONVERGENCE = {
    "vocab_size": 128,
    "embed_dim": 96,
    "hidden_dim": 192,
    "train_tokens": 2000,
    "val_tokens": 3000,
    "noise": 0.15,
    "batch_size": 8,
    "epochs": 70,
    "seed": 7,
    "corpus_seed": 11,
}

TIMING = {
    "single_epoch_seconds": 22260.0,
    "iterations_per_epoch": 840,
    "reported_seconds": {
        ("sync", 2): 12660.0, ("async", 2): 21120.0,
        ("sync", 4): 8040.0, ("async", 4): 7500.0,
        ("sync", 6): 5940.0, ("async", 6): 4560.0,
        ("sync", 8): 4980.0, ("async", 8): 3360.0,
    },
}


def convergence_data() -> tuple[np.ndarray, np.ndarray]:
    cfg = CONVERGENCE
    train_ids = toy_lm_stream(cfg["train_tokens"], cfg["vocab_size"],
                              seed=cfg["corpus_seed"], noise=cfg["noise"])
    val_ids = toy_lm_stream(cfg["val_tokens"], cfg["vocab_size"],
                            seed=cfg["corpus_seed"] + 1, noise=cfg["noise"])
    return train_ids, val_ids


def convergence_model() -> SurrogateModel:
    cfg = CONVERGENCE
    return SurrogateModel(
        SurrogateConfig(cfg["vocab_size"], cfg["embed_dim"], cfg["hidden_dim"]),
        seed=cfg["seed"],
    )
