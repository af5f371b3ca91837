import os
from dotenv import load_dotenv

load_dotenv()

# --- Logging / run output ---
LOG_MODE = os.getenv("HG_LOG_MODE", "live").lower()  # live | debug | trace
LOG_FILE = os.getenv("HG_LOG_FILE", "hgspec.log")    # empty string disables the file handler
RUNS_DIR = os.getenv("HG_RUNS_DIR", "runs")
LOG_RATE_LIMITS_S = {
    "QUAD.panel_split": 0.5,
    "INVERT.grid_point": 0.5,
    "CAUCHY.eval": 0.2,
    "BRANCH.inner": 0.2,
}

# JSON outputs carry this tag so downstream tooling can pin a schema version.
SCHEMA_TAG = "hypergroup-spectra/1"

# A timed phase slower than this logs its END line as a warning.
SLOW_PHASE_S = float(os.getenv("HG_SLOW_PHASE_S", "300"))

# --- Exact algebra ---
# Bounded LRU of basis products keyed by (m, n, r). 0 disables the cache.
PRODUCT_CACHE_SIZE = int(os.getenv("HG_PRODUCT_CACHE_SIZE", "4096"))
MAX_DEGREE = int(os.getenv("HG_MAX_DEGREE", "400"))

# --- Orthogonal polynomials ---
# |c^2 - 4r(1-r)| <= DEGENERATE_TOL * max(1, |c|^2) switches to the double-root form.
DEGENERATE_TOL = float(os.getenv("HG_DEGENERATE_TOL", "1e-14"))

# --- Stieltjes inversion ---
EPS_BASE = float(os.getenv("HG_EPS_BASE", "1e-2"))
EPS_STEPS = int(os.getenv("HG_EPS_STEPS", "9"))  # eps_k = EPS_BASE * 2^-k, k = 0..EPS_STEPS-1
RICHARDSON_LEVELS = int(os.getenv("HG_RICHARDSON_LEVELS", "2"))
DENSITY_RESIDUAL_TOL = float(os.getenv("HG_DENSITY_RESIDUAL_TOL", "1e-5"))
ATOM_TOL = float(os.getenv("HG_ATOM_TOL", "1e-8"))
ATOM_RESIDUAL_TOL = float(os.getenv("HG_ATOM_RESIDUAL_TOL", "1e-6"))
ATOM_EXCLUSION_FACTOR = float(os.getenv("HG_ATOM_EXCLUSION_FACTOR", "10"))
GRID_SIZE = int(os.getenv("HG_GRID_SIZE", "200"))
END_BAND = float(os.getenv("HG_END_BAND", "0.05"))

# --- Quadrature ---
QUAD_TOL = float(os.getenv("HG_QUAD_TOL", "1e-10"))
QUAD_ORDER = int(os.getenv("HG_QUAD_ORDER", "20"))
QUAD_MAX_DEPTH = int(os.getenv("HG_QUAD_MAX_DEPTH", "40"))

# --- Regime classification ---
REGIME_REL_TOL = float(os.getenv("HG_REGIME_REL_TOL", "1e-12"))

# --- Free group oracle resource bounds ---
MAX_SPHERE_SIZE = int(os.getenv("HG_MAX_SPHERE_SIZE", "8748"))  # |G_8| for l = 2
MAX_CONVOLVE_DEGREE = int(os.getenv("HG_MAX_CONVOLVE_DEGREE", "12"))
MAX_BALL_DIM = int(os.getenv("HG_MAX_BALL_DIM", "2000"))
DENSE_EIG_MAX_DIM = int(os.getenv("HG_DENSE_EIG_MAX_DIM", "500"))
PSD_TOL = float(os.getenv("HG_PSD_TOL", "1e-10"))

# --- SVG plot viewport ---
SVG_WIDTH = 800
SVG_HEIGHT = 500
