from gridvsla.config.settings import (
    CONCENTRIC_EPS,
    CONVERGED_GUARD,
    DATA_DIR,
    DEGENERATE_STD,
    DIVERGENCE_MISMATCH,
    ENFORCE_Q_LIMITS,
    FLOAT_FORMAT,
    HISTOGRAM_BINS,
    IEEE30_CASE_PATH,
    JOBS,
    LAMBDA_MAX,
    LAMBDA_MIN_STEP,
    LAMBDA_START,
    LAMBDA_STEP,
    LINEARITY_EPS,
    LOG_LEVEL,
    MIRROR_FALLBACK_EPS,
    PF_MAX_ITER,
    PF_TOLERANCE,
    Q_LIMIT_MAX_ROUNDS,
    RADICAND_EPS,
    SAMPLE_STD,
    TANGENCY_EPS,
    Z_THRESHOLD,
)

__all__ = [
    "CONCENTRIC_EPS",
    "CONVERGED_GUARD",
    "DATA_DIR",
    "DEGENERATE_STD",
    "DIVERGENCE_MISMATCH",
    "ENFORCE_Q_LIMITS",
    "FLOAT_FORMAT",
    "HISTOGRAM_BINS",
    "IEEE30_CASE_PATH",
    "JOBS",
    "LAMBDA_MAX",
    "LAMBDA_MIN_STEP",
    "LAMBDA_START",
    "LAMBDA_STEP",
    "LINEARITY_EPS",
    "LOG_LEVEL",
    "MIRROR_FALLBACK_EPS",
    "PF_MAX_ITER",
    "PF_TOLERANCE",
    "Q_LIMIT_MAX_ROUNDS",
    "RADICAND_EPS",
    "SAMPLE_STD",
    "TANGENCY_EPS",
    "Z_THRESHOLD",
]
