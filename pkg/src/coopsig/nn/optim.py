"""Classical-momentum SGD and the halving learning-rate schedule."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .layers import Param


@dataclass(frozen=True)
class Hyperparameters:
    """Training settings; the defaults are the full-scale profile."""

    learning_rate: float = 0.01
    halving_period: int = 10  # epochs between halvings
    epochs: int = 40
    momentum: float = 0.9
    batch_size: int = 128
    seed: int = 0

    def __post_init__(self):
        if min(self.learning_rate, self.halving_period, self.epochs, self.batch_size) <= 0:
            raise ValueError("hyperparameters must be positive")

    def to_json(self) -> dict:
        return {
            "learning_rate": self.learning_rate,
            "halving_period": self.halving_period,
            "epochs": self.epochs,
            "momentum": self.momentum,
            "batch_size": self.batch_size,
            "seed": self.seed,
        }


def lr_at_epoch(epoch: int, hyper: Hyperparameters) -> float:
    """initial * 0.5^floor(epoch / halving_period)."""
    if not 0 <= epoch < hyper.epochs:
        raise ValueError(f"epoch {epoch} outside [0, {hyper.epochs})")
    return hyper.learning_rate * 0.5 ** (epoch // hyper.halving_period)


def sgd_momentum_step(value, grad, velocity, lr: float, momentum: float):
    """v <- mu*v + g; p <- p - lr*v (classical momentum). In-place."""
    velocity *= momentum
    velocity += grad
    value -= lr * velocity
    return value, velocity


class SgdMomentum:
    def __init__(self, params: list[Param], momentum: float):
        self.params = params
        self.momentum = momentum
        self.velocities = [np.zeros_like(p.value) for p in params]

    def step(self, lr: float) -> None:
        for p, v in zip(self.params, self.velocities):
            sgd_momentum_step(p.value, p.grad, v, lr, self.momentum)
