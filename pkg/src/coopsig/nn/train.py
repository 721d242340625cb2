"""Minibatch training loop and batched evaluation."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from ..rng import DOMAIN_DROPOUT, DOMAIN_SHUFFLE, stream
from .network import Network
from .optim import Hyperparameters, SgdMomentum, lr_at_epoch

logger = logging.getLogger(__name__)


@dataclass
class TrainHistory:
    """Per-epoch training loss, accuracy, and learning rate."""

    loss: list[float] = field(default_factory=list)
    accuracy: list[float] = field(default_factory=list)
    lr: list[float] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"loss": self.loss, "accuracy": self.accuracy, "lr": self.lr}

    @classmethod
    def from_json(cls, d: dict) -> "TrainHistory":
        return cls(loss=list(d["loss"]), accuracy=list(d["accuracy"]), lr=list(d["lr"]))


def fit(net: Network, x: np.ndarray, y: np.ndarray, hyper: Hyperparameters) -> TrainHistory:
    """Shuffled minibatch SGD with the halving schedule.

    Shuffling and dropout masks derive from hyper.seed, so identical
    (network init, data, hyper) reruns produce identical histories.
    """
    if len(x) == 0:
        raise ValueError("training set is empty")
    if len(x) != len(y):
        raise ValueError("inputs and labels disagree on sample count")
    rng_shuffle = stream(hyper.seed, DOMAIN_SHUFFLE)
    rng_dropout = stream(hyper.seed, DOMAIN_DROPOUT)
    opt = SgdMomentum(net.parameters(), hyper.momentum)
    history = TrainHistory()

    n = len(x)
    for epoch in range(hyper.epochs):
        tic = time.time()
        lr = lr_at_epoch(epoch, hyper)
        perm = rng_shuffle.permutation(n)
        loss_sum = 0.0
        correct = 0
        for start in range(0, n, hyper.batch_size):
            idx = perm[start : start + hyper.batch_size]
            xb = x[idx]
            yb = y[idx]
            loss, probs = net.loss_and_grads(xb, yb, rng=rng_dropout)
            if not np.isfinite(loss):
                raise FloatingPointError(f"non-finite loss at epoch {epoch}")
            opt.step(lr)
            loss_sum += loss * len(idx)
            correct += int((probs.argmax(axis=1) == yb).sum())
        history.loss.append(loss_sum / n)
        history.accuracy.append(correct / n)
        history.lr.append(lr)
        logger.info(
            "epoch %d/%d lr=%.5f loss=%.4f acc=%.4f (%.1fs)",
            epoch + 1, hyper.epochs, lr, history.loss[-1], history.accuracy[-1],
            time.time() - tic,
        )
    return history


def predict(net: Network, x: np.ndarray, batch_size: int = 256) -> np.ndarray:
    """Eval-mode confidence vectors, chunked with a fixed batch size."""
    outs = [net.predict_probs(x[s : s + batch_size]) for s in range(0, len(x), batch_size)]
    return np.concatenate(outs, axis=0)
