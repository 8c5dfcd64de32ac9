"""Synthetic campaign generator, share tables and campaign-stratified splits"""

from datagen.generator import (
    MECHANISMS,
    GeneratedDataset,
    OracleTrace,
    generate,
    rolling_crossing,
)
from datagen.shares import LIFETIME_BUCKETS, bucket_label, lifetime_shares, sales_share
from datagen.split import split, split_creatives

__all__ = [
    "MECHANISMS",
    "GeneratedDataset",
    "OracleTrace",
    "generate",
    "rolling_crossing",
    "LIFETIME_BUCKETS",
    "bucket_label",
    "lifetime_shares",
    "sales_share",
    "split",
    "split_creatives",
]
