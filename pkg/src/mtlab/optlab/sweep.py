"""Corpus-size sweep: learning curves aligned by iteration count, not epoch."""

from __future__ import annotations

import numpy as np

from .model import SurrogateConfig, SurrogateModel
from .optimizers import Optimizer, OptimizerConfig
from .training import TraceRow, TrainingTrace, epoch_batches

__all__ = ["corpus_size_sweep"]


def corpus_size_sweep(
    model_config: SurrogateConfig,
    streams: list[tuple[str, np.ndarray]],
    val_ids: np.ndarray,
    opt_config: OptimizerConfig,
    iteration_budget: int,
    batch_size: int = 32,
    seed: int = 0,
    checkpoint_every: int = 100,
) -> dict[str, TrainingTrace]:
    """Train one fresh model per (label, token stream) for a fixed number of
    batch iterations, recording validation perplexity every
    `checkpoint_every` iterations so curves are comparable across sizes."""
    results: dict[str, TrainingTrace] = {}
    for label, ids in streams:
        model = SurrogateModel(model_config, seed)
        optimizer = Optimizer(opt_config)
        trace = TrainingTrace()
        iterations = 0
        epoch = 0
        while iterations < iteration_budget:
            epoch += 1
            for x, y in epoch_batches(ids, batch_size, seed, epoch):
                _, grads = model.loss_and_grads(x, y)
                optimizer.step(model.params, grads)
                iterations += 1
                if iterations % checkpoint_every == 0 or iterations == iteration_budget:
                    val_ppl = model.perplexity(val_ids)
                    trace.rows.append(
                        TraceRow(epoch, iterations, 0.0, val_ppl, optimizer.current_lr)
                    )
                if iterations >= iteration_budget:
                    break
            else:
                # full pass completed: apply the end-of-epoch decay rule
                optimizer.end_of_epoch(epoch, model.perplexity(val_ids))
        results[label] = trace
    return results
