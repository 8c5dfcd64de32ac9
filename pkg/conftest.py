"""Shared pytest fixtures"""

import numpy as np
import pytest

from config.schema import (
    EvaluationSection,
    ExperimentConfig,
    GeneratorConfig,
    PathsSection,
    TrainingSection,
)
from datagen import generate
from features.records import AdCreative, DailyPerformance


def make_daily(rows):
    """DailyPerformance rows from (impressions, clicks, conversions, spend) tuples"""
    return [
        DailyPerformance(day=day, impressions=i, clicks=c, conversions=v, spend=s)
        for day, (i, c, v, s) in enumerate(rows, start=1)
    ]


def make_creative(
    creative_id="c1",
    campaign_id="camp1",
    rows=((1000, 10, 1, 10.0),),
    lifetime=None,
    censored=False,
    total_sales=100.0,
    target_cpa=10.0,
    gender="all",
    genre="games",
    dim=4,
    seed=0,
):
    rng = np.random.default_rng(seed)
    daily = make_daily(rows)
    return AdCreative(
        creative_id=creative_id,
        campaign_id=campaign_id,
        gender=gender,
        genre=genre,
        target_cpa=target_cpa,
        text_embedding=rng.standard_normal(dim).tolist(),
        image_embedding=rng.standard_normal(dim).tolist(),
        daily=daily,
        lifetime_days=float(len(daily) if lifetime is None else lifetime),
        censored=censored,
        total_sales=total_sales,
    )


@pytest.fixture
def creative_factory():
    return make_creative


@pytest.fixture(scope="session")
def small_generator():
    return GeneratorConfig(seed=7, n_campaigns=30, creatives_per_campaign=(3, 6), text_dim=6, image_dim=6)


@pytest.fixture(scope="session")
def small_dataset(small_generator):
    return generate(small_generator)


@pytest.fixture
def small_config(tmp_path, small_generator):
    """A config that runs every command in seconds"""
    return ExperimentConfig(
        generator=small_generator,
        training=TrainingSection(epochs=2, batch_size=16, seed=3),
        evaluation=EvaluationSection(ablation_days=[0, 1]),
        paths=PathsSection(out_dir=str(tmp_path / "run")),
    )
