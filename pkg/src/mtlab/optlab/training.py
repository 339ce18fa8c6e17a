"""Single-process training loop with per-epoch validation traces."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from ..rng import stream
from .model import SurrogateModel
from .optimizers import Optimizer, OptimizerConfig, accumulate_gradients

__all__ = ["TraceRow", "TrainingTrace", "TrainingError", "epoch_batches", "train"]

DIVERGENCE_PPL = 1e6


class TrainingError(ValueError):
    pass


@dataclass(frozen=True)
class TraceRow:
    epoch: int
    iterations: int
    sim_seconds: float
    val_ppl: float
    lr: float
    bleu: float | None = None


@dataclass
class TrainingTrace:
    rows: list[TraceRow] = field(default_factory=list)
    divergent: bool = False
    max_staleness: int | None = None  # filled in by the cluster simulation

    def final_ppl(self) -> float:
        return self.rows[-1].val_ppl

    def ppl_at_epoch(self, epoch: int) -> float:
        for row in self.rows:
            if row.epoch == epoch:
                return row.val_ppl
        raise KeyError(f"no trace row for epoch {epoch}")

    def lrs(self) -> list[float]:
        return [row.lr for row in self.rows]

    def to_csv(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["epoch", "iterations", "sim_seconds", "val_ppl", "lr", "bleu"])
            for row in self.rows:
                writer.writerow([row.epoch, row.iterations, f"{row.sim_seconds:.6f}",
                                 repr(row.val_ppl), repr(row.lr),
                                 "" if row.bleu is None else repr(row.bleu)])

    @classmethod
    def from_csv(cls, path: str) -> "TrainingTrace":
        trace = cls()
        with open(path, encoding="utf-8", newline="") as fh:
            for record in csv.DictReader(fh):
                trace.rows.append(TraceRow(
                    int(record["epoch"]), int(record["iterations"]),
                    float(record["sim_seconds"]), float(record["val_ppl"]),
                    float(record["lr"]),
                    float(record["bleu"]) if record["bleu"] else None,
                ))
        return trace


def epoch_batches(ids: np.ndarray, batch_size: int, seed: int, epoch: int) -> list:
    """Shuffled (inputs, targets) bigram batches for one epoch.

    Shared by the sequential trainer and the cluster simulation so both
    consume the exact same batch sequence for a given (seed, epoch).
    """
    ids = np.asarray(ids)
    if len(ids) < 2:
        raise TrainingError("token stream must contain at least one bigram")
    inputs = ids[:-1]
    targets = ids[1:]
    order = stream(seed, f"data-epoch-{epoch}").permutation(len(inputs))
    batches = []
    for start in range(0, len(order), batch_size):
        index = order[start : start + batch_size]
        batches.append((inputs[index], targets[index]))
    return batches


def train(
    model: SurrogateModel,
    train_ids: np.ndarray,
    val_ids: np.ndarray,
    opt_config: OptimizerConfig,
    epochs: int,
    batch_size: int = 32,
    seed: int = 0,
    accum_steps: int = 1,
    seconds_per_batch: float = 0.0,
    metric: object = None,
) -> TrainingTrace:
    """Train to a per-epoch validation trace; deterministic given the seed.

    `accum_steps` averages that many consecutive batches into one update
    (the sequential equivalent of synchronous data parallelism).  A
    validation perplexity above 1e6 aborts the run with the trace flagged
    divergent.
    """
    optimizer = Optimizer(opt_config)
    trace = TrainingTrace()
    iterations = 0
    clock = 0.0
    for epoch in range(1, epochs + 1):
        batches = epoch_batches(train_ids, batch_size, seed, epoch)
        for start in range(0, len(batches), accum_steps):
            group = batches[start : start + accum_steps]
            grads_list = [model.loss_and_grads(x, y)[1] for x, y in group]
            optimizer.step(model.params, accumulate_gradients(grads_list))
            iterations += len(group)
            clock += seconds_per_batch * len(group)
        val_ppl = model.perplexity(val_ids)
        lr = optimizer.end_of_epoch(epoch, val_ppl)
        score = metric(model) if metric is not None else None
        trace.rows.append(TraceRow(epoch, iterations, clock, val_ppl, lr, score))
        if val_ppl > DIVERGENCE_PPL:
            trace.divergent = True
            break
    return trace
