"""Desk-scale presets for the repro pipeline"""

from config.schema import EvaluationSection, ExperimentConfig, GeneratorConfig, PathsSection, TrainingSection
from utils.errors import ConfigError

REPRO_PRESETS = ("offline-suite", "case-studies")


def repro_preset(name: str) -> ExperimentConfig:
    """offline-suite trains the full comparison grid; case-studies only what the case studies need"""
    if name not in REPRO_PRESETS:
        raise ConfigError(f"unknown repro preset '{name}' (known: {', '.join(REPRO_PRESETS)})")
    generator = GeneratorConfig(seed=42, n_campaigns=200)
    training = TrainingSection(epochs=30, seed=42)
    evaluation = EvaluationSection()
    if name == "case-studies":
        evaluation = EvaluationSection(ablation_days=[])
    return ExperimentConfig(
        generator=generator,
        training=training,
        evaluation=evaluation,
        paths=PathsSection(out_dir=f"runs/{name}"),
    )
