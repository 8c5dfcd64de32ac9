"""Feature pipeline: creative records to model input blocks"""

from features.records import (
    AdCreative,
    DailyPerformance,
    read_creatives,
    read_daily_csv,
    with_daily,
    write_creatives,
    write_daily_csv,
)
from features.statistical import STAT_NAMES, cumulative_totals, encode_statistical
from features.categorical import build_genre_vocabulary, encode_categorical, gender_one_hot, genre_index
from features.series import build_series_inputs
from features.assemble import (
    FeatureMask,
    FeatureVector,
    as_of_day,
    assemble,
    build_training_set,
    encode_batch,
    head_targets,
    impression_percentile,
    impression_weight,
    weighting_ratios,
)
from features.metadata import DatasetMetadata, read_metadata, write_metadata

__all__ = [
    "AdCreative",
    "DailyPerformance",
    "read_creatives",
    "read_daily_csv",
    "with_daily",
    "write_creatives",
    "write_daily_csv",
    "STAT_NAMES",
    "cumulative_totals",
    "encode_statistical",
    "build_genre_vocabulary",
    "encode_categorical",
    "gender_one_hot",
    "genre_index",
    "build_series_inputs",
    "FeatureMask",
    "FeatureVector",
    "as_of_day",
    "assemble",
    "build_training_set",
    "encode_batch",
    "head_targets",
    "impression_percentile",
    "impression_weight",
    "weighting_ratios",
    "DatasetMetadata",
    "read_metadata",
    "write_metadata",
]
