"""A tiny bigram neural language model with hand-derived gradients.

Stands in for a production translation network so optimizer and cluster
dynamics stay observable on a desk: embedding -> tanh hidden layer ->
softmax over next token.  Loss is mean negative log-likelihood; reported
perplexity is exp(loss).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..rng import stream

__all__ = ["SurrogateConfig", "SurrogateModel", "check_gradients"]


@dataclass(frozen=True)
class SurrogateConfig:
    vocab_size: int = 200
    embed_dim: int = 16
    hidden_dim: int = 32


class SurrogateModel:
    def __init__(self, config: SurrogateConfig = SurrogateConfig(), seed: int = 0):
        self.config = config
        rng = stream(seed, "init")
        v, d, h = config.vocab_size, config.embed_dim, config.hidden_dim
        self.params: dict[str, np.ndarray] = {
            "emb": rng.normal(0.0, 0.1, (v, d)),
            "w1": rng.normal(0.0, 1.0 / np.sqrt(d), (d, h)),
            "b1": np.zeros(h),
            "w2": rng.normal(0.0, 1.0 / np.sqrt(h), (h, v)),
            "b2": np.zeros(v),
        }

    def _forward(self, inputs: np.ndarray):
        p = self.params
        e = p["emb"][inputs]
        a = e @ p["w1"] + p["b1"]
        z = np.tanh(a)
        logits = z @ p["w2"] + p["b2"]
        shifted = logits - logits.max(axis=1, keepdims=True)
        log_z = np.log(np.exp(shifted).sum(axis=1, keepdims=True)) + logits.max(axis=1, keepdims=True)
        logp = logits - log_z
        return e, z, logp

    def loss(self, inputs: np.ndarray, targets: np.ndarray) -> float:
        _, _, logp = self._forward(inputs)
        return float(-logp[np.arange(len(targets)), targets].mean())

    def loss_and_grads(self, inputs: np.ndarray, targets: np.ndarray):
        p = self.params
        batch = len(targets)
        e, z, logp = self._forward(inputs)
        loss = float(-logp[np.arange(batch), targets].mean())

        dlogits = np.exp(logp)
        dlogits[np.arange(batch), targets] -= 1.0
        dlogits /= batch
        dz = dlogits @ p["w2"].T
        da = (1.0 - z * z) * dz
        de = da @ p["w1"].T
        demb = np.zeros_like(p["emb"])
        np.add.at(demb, inputs, de)
        grads = {
            "emb": demb,
            "w1": e.T @ da,
            "b1": da.sum(axis=0),
            "w2": z.T @ dlogits,
            "b2": dlogits.sum(axis=0),
        }
        return loss, grads

    def perplexity(self, ids: np.ndarray, chunk: int = 8192) -> float:
        """exp(mean NLL) of a token stream under the bigram model."""
        ids = np.asarray(ids)
        if len(ids) < 2:
            raise ValueError("need at least two tokens to evaluate perplexity")
        total, count = 0.0, 0
        for start in range(0, len(ids) - 1, chunk):
            inputs = ids[start : start + chunk]
            targets = ids[start + 1 : start + chunk + 1]
            inputs = inputs[: len(targets)]
            total += self.loss(inputs, targets) * len(targets)
            count += len(targets)
        return float(np.exp(total / count))


def check_gradients(
    model: SurrogateModel,
    inputs: np.ndarray,
    targets: np.ndarray,
    n_samples: int = 200,
    step: float = 1e-5,
    seed: int = 0,
    floor: float = 1e-4,
) -> float:
    """Worst relative error of analytic vs central-difference gradients.

    Coordinates are sampled uniformly over all parameter blocks; the
    `floor` keeps pure round-off noise on near-zero coordinates from
    registering (a planted wrong gradient still shows up as ~1.0).
    Returns 0.0 on an empty sample set.
    """
    _, grads = model.loss_and_grads(inputs, targets)
    names = sorted(model.params)
    sizes = [model.params[n].size for n in names]
    total = sum(sizes)
    if total == 0 or n_samples <= 0:
        return 0.0
    rng = stream(seed, "gradcheck")
    flat_choices = rng.integers(0, total, size=n_samples)
    worst = 0.0
    for flat in flat_choices:
        for name, size in zip(names, sizes):
            if flat < size:
                break
            flat -= size
        param = model.params[name]
        index = np.unravel_index(flat, param.shape)
        original = param[index]
        param[index] = original + step
        plus = model.loss(inputs, targets)
        param[index] = original - step
        minus = model.loss(inputs, targets)
        param[index] = original
        fd = (plus - minus) / (2.0 * step)
        analytic = grads[name][index]
        err = abs(analytic - fd) / max(abs(fd), floor)
        worst = max(worst, err)
    return worst
