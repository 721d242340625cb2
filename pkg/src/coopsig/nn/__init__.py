"""Minimal deterministic NN engine for 1-D convolutional classifiers."""

from .gradcheck import check_layer_gradients, check_network_gradients, relative_error
from .layers import (
    BN_EPS,
    BN_MOMENTUM,
    BatchNorm1d,
    Conv1d,
    Dense,
    Dropout,
    GlobalAvgPool,
    Layer,
    MaxPool2,
    Param,
    ReLU,
    Residual,
    Softmax,
)
from .loss import softmax_xent, xent_grad
from .network import Network
from .optim import Hyperparameters, SgdMomentum, lr_at_epoch, sgd_momentum_step
from .train import TrainHistory, fit, predict

__all__ = [
    "BN_EPS",
    "BN_MOMENTUM",
    "BatchNorm1d",
    "Conv1d",
    "Dense",
    "Dropout",
    "GlobalAvgPool",
    "Hyperparameters",
    "Layer",
    "MaxPool2",
    "Network",
    "Param",
    "ReLU",
    "Residual",
    "SgdMomentum",
    "Softmax",
    "TrainHistory",
    "check_layer_gradients",
    "check_network_gradients",
    "fit",
    "lr_at_epoch",
    "predict",
    "relative_error",
    "sgd_momentum_step",
    "softmax_xent",
    "xent_grad",
]
