"""Deterministic discrete-event simulation of sync/async data-parallel SGD.

Synchronous mode: every worker computes a gradient on its own batch, the
mean gradient is applied as one update, and the logical clock advances by
the compute time plus a per-batch synchronization overhead.

Asynchronous mode: one worker is reserved to hold the master parameters;
each remaining trainer loops pull -> compute -> push, with pushes applied
in event order against possibly stale parameters.  For better
initialization the first warmup iterations run on a single trainer.
"""

from __future__ import annotations

import heapq
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .model import SurrogateModel
from .optimizers import Optimizer, OptimizerConfig, accumulate_gradients
from .training import DIVERGENCE_PPL, TraceRow, TrainingTrace, epoch_batches

__all__ = [
    "ClusterConfig",
    "ClusterError",
    "simulate_cluster",
    "calibrated_cluster_config",
    "SYNC_EPOCH_OVERHEAD_SECONDS",
    "ASYNC_EPOCH_OVERHEAD_SECONDS",
]

# Overhead budget per epoch, fitted once against the reported wall-clock
# table (one constant per mode); divide by the iteration count to get the
# per-batch figures used by a calibrated simulation.
SYNC_EPOCH_OVERHEAD_SECONDS = 2100.0
ASYNC_EPOCH_OVERHEAD_SECONDS = 600.0


class ClusterError(ValueError):
    pass


@dataclass(frozen=True)
class ClusterConfig:
    worker_count: int
    mode: str  # "sync" | "async"
    per_batch_compute_time: float = 1.0
    sync_overhead_per_batch: float = 0.0
    async_comm_time: float = 0.0
    async_warmup_iterations: int = 6000
    async_master_reserved: bool = True

    def __post_init__(self):
        if self.mode not in ("sync", "async"):
            raise ClusterError(f"unknown cluster mode {self.mode!r}")
        if self.worker_count < 1:
            raise ClusterError("worker_count must be at least 1")
        if self.mode == "async" and self.async_master_reserved and self.worker_count < 2:
            raise ClusterError("async mode reserves one worker for the master copy; need K >= 2")

    @property
    def trainer_count(self) -> int:
        if self.mode == "async" and self.async_master_reserved:
            return self.worker_count - 1
        return self.worker_count


def calibrated_cluster_config(
    mode: str,
    worker_count: int,
    single_epoch_seconds: float = 22260.0,
    iterations_per_epoch: int = 840,
    warmup_iterations: int = 0,
) -> ClusterConfig:
    """Timing parameters calibrated so one worker takes `single_epoch_seconds`."""
    return ClusterConfig(
        worker_count=worker_count,
        mode=mode,
        per_batch_compute_time=single_epoch_seconds / iterations_per_epoch,
        sync_overhead_per_batch=SYNC_EPOCH_OVERHEAD_SECONDS / iterations_per_epoch,
        async_comm_time=ASYNC_EPOCH_OVERHEAD_SECONDS / iterations_per_epoch,
        async_warmup_iterations=warmup_iterations,
    )


def simulate_cluster(
    model: SurrogateModel,
    train_ids: np.ndarray,
    val_ids: np.ndarray,
    opt_config: OptimizerConfig,
    cluster: ClusterConfig,
    epochs: int,
    batch_size: int = 32,
    seed: int = 0,
    use_threads: bool = False,
) -> TrainingTrace:
    """Run the cluster simulation; returns a trace with staleness stats.

    The batch schedule is the one `train` would consume for the same seed,
    so synchronous runs with zero overhead reproduce sequential gradient
    accumulation bit-exactly.  `use_threads` computes synchronous rounds in
    a thread pool (throughput experiments only; results are identical).
    """
    optimizer = Optimizer(opt_config)
    trace = TrainingTrace()
    state = _SimState(model, optimizer, cluster)
    for epoch in range(1, epochs + 1):
        batches = epoch_batches(train_ids, batch_size, seed, epoch)
        if cluster.mode == "sync":
            state.run_sync_epoch(batches, use_threads)
        else:
            state.run_async_epoch(batches)
        val_ppl = model.perplexity(val_ids)
        lr = optimizer.end_of_epoch(epoch, val_ppl)
        trace.rows.append(TraceRow(epoch, state.iterations, state.clock, val_ppl, lr))
        if val_ppl > DIVERGENCE_PPL:
            trace.divergent = True
            break
    trace.max_staleness = state.max_staleness
    return trace


class _SimState:
    def __init__(self, model: SurrogateModel, optimizer: Optimizer, cluster: ClusterConfig):
        self.model = model
        self.optimizer = optimizer
        self.cluster = cluster
        self.clock = 0.0
        self.iterations = 0   # batches consumed
        self.version = 0      # master updates applied
        self.max_staleness = 0

    def run_sync_epoch(self, batches: list, use_threads: bool) -> None:
        k = self.cluster.worker_count
        compute = lambda batch: self.model.loss_and_grads(batch[0], batch[1])[1]
        for start in range(0, len(batches), k):
            round_batches = batches[start : start + k]
            if use_threads and len(round_batches) > 1:
                with ThreadPoolExecutor(max_workers=len(round_batches)) as pool:
                    grads_list = list(pool.map(compute, round_batches))
            else:
                grads_list = [compute(b) for b in round_batches]
            self.optimizer.step(self.model.params, accumulate_gradients(grads_list))
            self.version += 1
            self.iterations += len(round_batches)
            self.clock += (
                self.cluster.per_batch_compute_time
                + self.cluster.sync_overhead_per_batch * len(round_batches)
            )

    def run_async_epoch(self, batches: list) -> None:
        cluster = self.cluster
        trainers = cluster.trainer_count
        cycle = cluster.per_batch_compute_time + cluster.async_comm_time
        cursor = 0
        seq = 0
        heap: list = []
        active: set[int] = set()

        def start_cycle(trainer: int, now: float) -> None:
            nonlocal cursor, seq
            if cursor >= len(batches):
                return
            x, y = batches[cursor]
            cursor += 1
            # gradient is taken against the parameters as pulled now; it may
            # be stale by the time the push lands
            _, grads = self.model.loss_and_grads(x, y)
            heapq.heappush(heap, (now + cycle, seq, trainer, grads, self.version))
            seq += 1

        def activate_all(now: float) -> None:
            for trainer in range(trainers):
                if trainer not in active:
                    active.add(trainer)
                    start_cycle(trainer, now)

        if self.iterations < cluster.async_warmup_iterations:
            active.add(0)
            start_cycle(0, self.clock)
        else:
            activate_all(self.clock)

        while heap:
            time, _, trainer, grads, pulled_version = heapq.heappop(heap)
            staleness = self.version - pulled_version
            self.max_staleness = max(self.max_staleness, staleness)
            self.optimizer.step(self.model.params, grads)
            self.version += 1
            self.iterations += 1
            self.clock = time
            if len(active) < trainers and self.iterations >= cluster.async_warmup_iterations:
                activate_all(self.clock)
            start_cycle(trainer, self.clock)
