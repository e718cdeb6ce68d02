from pathlib import Path


_ROOT = Path(__file__).resolve().parents[2]
DATA_DIR = _ROOT / "data"
IEEE30_CASE_PATH = DATA_DIR / "case_ieee30.m"

# POWER FLOW
PF_TOLERANCE = 1e-8                         # Max |mismatch| (per-unit) at non-slack equations
PF_MAX_ITER = 30                            # Newton iterations before giving up
ENFORCE_Q_LIMITS = 0                        # 1 = switch PV buses to PQ at their Q limits; 0 = ignore limits
Q_LIMIT_MAX_ROUNDS = 10                     # Outer PV->PQ switching rounds when limits are enforced
DIVERGENCE_MISMATCH = 1e10                  # Mismatch above this aborts the iteration early
CONVERGED_GUARD = 1e-6                      # Jacobian diagnostics refuse snapshots with mismatch above this

# LCI GEOMETRY
LINEARITY_EPS = 1e-8                        # |t1| or |t4| at or below this makes the locus a line
TANGENCY_EPS = 1e-10                        # w2^2 in [-eps, 0) is clamped to a tangent point
RADICAND_EPS = 1e-10                        # Radius radicand in [-eps, 0) is clamped to zero
CONCENTRIC_EPS = 1e-10                      # Center distance below this counts as concentric
MIRROR_FALLBACK_EPS = 1e-6                  # Mirror offset (relative to radius) below which the direct line-circle form is used

# STRESS SWEEP
LAMBDA_START = 1.0                          # First load/generation multiplier
LAMBDA_STEP = 0.05                          # Initial multiplier increment
LAMBDA_MIN_STEP = 1e-4                      # Sweep stops once the halved step drops below this
LAMBDA_MAX = 100.0                          # Sweep never scales past this multiplier

# SCENARIO ANALYSIS
Z_THRESHOLD = -2.0                          # Buses with z-score <= this are critical
DEGENERATE_STD = 1e-15                      # Spread below this disables selection (warning only)
HISTOGRAM_BINS = 20                         # Equal-width bins for critical LCI histograms
SAMPLE_STD = 0                              # 1 = 1/(N-1) standard deviation; 0 = population

# OUTPUT
FLOAT_FORMAT = ".17g"                       # Canonical float formatting in CSV/TSV files
JOBS = 1                                    # Parallel scenario workers
LOG_LEVEL = "INFO"
