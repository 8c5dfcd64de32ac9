"""Configuration settings for the ad creative discontinuation toolkit"""

# Config document schema
SCHEMA_VERSION = 1

# Time grids (days). Interval l is (bounds[l-1], bounds[l]]
SHORT_BOUNDS = (1.0, 3.0, 5.0, 7.0, 10.0)
LONG_BOUNDS = (1.0, 10.0, 30.0, 60.0, 90.0, 120.0)
MERGED_BOUNDS = (1.0, 3.0, 5.0, 7.0, 10.0, 30.0, 60.0, 90.0, 120.0)
GRID_PRESETS = {
    "short": SHORT_BOUNDS,
    "long": LONG_BOUNDS,
    "overall-merged": MERGED_BOUNDS,
}

# Loss settings
PROB_EPSILON = 1e-7
MTL_LAMBDA = 0.5
WEIGHTING_MODES = ("none", "ctr", "impression")

# Training defaults (batch 32, 50 epochs, Adam)
BATCH_SIZE = 32
EPOCHS = 50
LEARNING_RATE = 1e-3
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPSILON = 1e-8
TRUNK_LAYERS = ((64, "relu"), (64, "relu"))
TASK_MODES = ("short", "long", "overall", "multi-task", "classification", "regression")

# Feature blocks
GENDERS = ("all", "male", "female")
GENRE_EMBEDDING_DIM = 8
UNKNOWN_GENRE_INDEX = 0
TEXT_EMBEDDING_DIM = 16
IMAGE_EMBEDDING_DIM = 16
STAT_FEATURE_COUNT = 6
SERIES_INPUT_WIDTH = 2
SERIES_HIDDEN_WIDTH = 10
DAYS_USED = 3
IMPRESSION_PERCENTILE = 95.0

# Evaluation
DISCONTINUATION_THRESHOLD = 0.9
F1_THRESHOLD = 0.5
F1_HORIZONS = (3, 7, 30, 90)
TOP_SALES_FRACTION = 0.25
CHECKPOINT_EVERY_DAYS = 10
LONG_CASE_MIN_DAYS = 10

# Dataset layout
SPLIT_NAMES = ("train", "validation", "test")
SPLIT_FRACTIONS = (0.6, 0.2, 0.2)
DAILY_CSV_COLUMNS = ("creative_id", "day", "impressions", "clicks", "conversions", "spend")

# Display settings
SEPARATOR_LENGTH = 80

# Logging
LOGGER_NAME = "ad_survival"
LOG_DIR = "logs"
LOG_LEVEL = "INFO"
