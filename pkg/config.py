"""
Configuration module for ShapeletBoard
Contains all configuration settings and constants
"""

import os
import pytz
from datetime import datetime

# Timezone configuration (used for manifest timestamps only)
LOCAL_TIMEZONE = pytz.timezone(os.environ.get("SHAPELET_TIMEZONE", "UTC"))

# Tool / artifact versions
TOOL_NAME = "shapeletboard"
TOOL_VERSION = "1.0.0"
MODEL_VERSION = "nnstne-model-v1"
REPORT_VERSION = "shapeletboard-report-v1"
MANIFEST_VERSION = "shapeletboard-manifest-v1"
BENCHMARK_VERSION = "shapeletboard-benchmark-v1"
STATS_VERSION = "shapeletboard-stats-v1"

# Environment variable prefix for CLI flag overrides
ENV_PREFIX = "SHAPELET_"

# Exit codes
EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4

# Numerical tolerances
ZNORM_EPS = 1e-12  # std below this z-normalizes to zeros
SHIFT_TIE_TOL = 1e-12  # correlations closer than this count as a tie

# Embedding
DEFAULT_ALPHA = 1.0

# Objective weights
DEFAULT_LAMBDA = 1.0
DEFAULT_BETA = 0.01

# Optimizer
DEFAULT_LEARNING_RATE = 0.01
DEFAULT_MAX_ITERS = 500
DEFAULT_TOLERANCE = 1e-6
MAX_BACKOFFS = 20
DEFAULT_TRIM_EPSILON = 0.01
DEFAULT_SEED = 0

# K-means
KMEANS_INIT_MAX_ITER = 300
KMEANS_INIT_TOL = 1e-6
DEFAULT_RESTARTS = 10

# Distance tensor chunking (complex entries per chunk)
CHUNK_BUDGET = 4_000_000

# Preprocessing modes
PREPROCESS_MODES = ("none", "zscore", "minmax")
DEFAULT_PREPROCESS = "none"

# Feature kinds for evaluation
FEATURE_KINDS = ("raw", "F", "q")
DEFAULT_FEATURE_KIND = "F"

# Loss export columns
LOSS_COLUMNS = ["spectral", "diversity", "l1", "total"]

# Viewer configuration
PAGE_CONFIG = {
    "page_title": "ShapeletBoard",
    "page_icon": "〰️",
    "layout": "wide",
    "initial_sidebar_state": "collapsed",
}
RUNS_CACHE_TTL = 30

MESSAGES = {
    "app_title": "ShapeletBoard",
    "runs": "📁 Runs",
    "model": "〰️ Model",
    "evaluation": "📊 Evaluation",
    "runs_dir": "Runs directory",
    "no_runs": "No run manifests found in {path}",
    "no_models": "No model files found in {path}",
    "no_reports": "No evaluation reports found in {path}",
    "select_model": "Select Model",
    "shapelets_tab": "〰️ Shapelets",
    "loss_tab": "📉 Loss History",
    "config_tab": "⚙️ Config",
    "shapelet_count": "Shapelets (K)",
    "nominal_length": "Nominal Length (M)",
    "iterations": "Iterations",
    "final_loss": "Final Loss",
    "total_runs": "Total Runs",
    "commands": "Commands",
    "best_ri": "Best RI ({kind})",
    "download_csv": "Download CSV",
    "error": "Error",
    "data_error": "Data error: {detail}",
    "config_error": "Invalid arguments: {detail}",
    "diverged": "Training diverged: {detail}",
    "model_required": "--model is required for --features {kind}",
    "data_required": "--data is required for --what {what}",
    "wrote": "Wrote {what} to {path}",
    "train_done": "Trained {count} shapelets in {iterations} iterations (loss {loss:.6g})",
    "rand_index": "RI={value:.4f}",
    "seed_result": "seed={seed} RI={value:.4f}",
    "benchmark_summary": "best RI={best:.4f} raw RI={raw:.4f}",
    "stats_line": "{name}  {train}/{test} ({total})  {length}  {classes}  {counts}",
}


def get_text(key, **kwargs):
    """Get message text with optional formatting"""
    text = MESSAGES.get(key, key)
    if kwargs:
        return text.format(**kwargs)
    return text


def get_current_time():
    """Get current time in local timezone"""
    return datetime.now(LOCAL_TIMEZONE)
