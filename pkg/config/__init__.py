"""Experiment configuration: constants and the config schema"""

from config.schema import (
    EvaluationSection,
    ExperimentConfig,
    GeneratorConfig,
    ModelSection,
    PathsSection,
    TrainingSection,
)

__all__ = [
    "EvaluationSection",
    "ExperimentConfig",
    "GeneratorConfig",
    "ModelSection",
    "PathsSection",
    "TrainingSection",
]
