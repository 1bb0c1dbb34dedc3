"""Weight training: losses, the Adam optimizer and the training loop."""

from .losses import bce_loss, bce_loss_and_grad, mse_teacher_loss, mse_teacher_loss_and_grad
from .optim import Adam
from .trainer import TrainConfig, TrainReport, loss_and_weight_grad, train, validation_ber

__all__ = [
    "Adam",
    "TrainConfig",
    "TrainReport",
    "bce_loss",
    "bce_loss_and_grad",
    "loss_and_weight_grad",
    "mse_teacher_loss",
    "mse_teacher_loss_and_grad",
    "train",
    "validation_ber",
]
