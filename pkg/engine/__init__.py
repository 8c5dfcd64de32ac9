"""Numpy neural engine: hazard network, gradients, Adam and training"""

from engine.spec import BlockWidths, HeadSpec, ModelSpec, build_model_spec
from engine.batch import FeatureBatch, HeadTargets, TrainingSet
from engine.state import ModelState, init_state
from engine.network import backward, batch_loss, forward, forward_arrays, recurrent_encode
from engine.optim import adam_step
from engine.trainer import EpochRecord, TrainConfig, TrainResult, train
from engine.losses import baseline_loss, binary_cross_entropy, squared_error
from engine.checkpoint import load_checkpoint, save_checkpoint

__all__ = [
    "BlockWidths",
    "HeadSpec",
    "ModelSpec",
    "build_model_spec",
    "FeatureBatch",
    "HeadTargets",
    "TrainingSet",
    "ModelState",
    "init_state",
    "backward",
    "batch_loss",
    "forward",
    "forward_arrays",
    "recurrent_encode",
    "adam_step",
    "EpochRecord",
    "TrainConfig",
    "TrainResult",
    "train",
    "baseline_loss",
    "binary_cross_entropy",
    "squared_error",
    "load_checkpoint",
    "save_checkpoint",
]
