"""Constants and configuration defaults."""
from pathlib import Path

VERSION = "0.1.0"
ROOT_DIR = Path(__file__).parent.parent.resolve()

# Optional INI file with a [laver] section, see laver_tables.config
CONFIG_FILE = ROOT_DIR / "config.ini"

# Directory definitions
DATA_DIR = ROOT_DIR / "data"
CACHE_DIR = DATA_DIR / "cache"
LOG_DIR = DATA_DIR / "logs"

# Environment variables overriding config.ini (CLI flags override both)
ENV_MAX_N = "LAVER_MAX_N"
ENV_CACHE_DIR = "LAVER_CACHE_DIR"
ENV_SEED = "LAVER_SEED"

# Largest table exponent build_table accepts without an explicit override.
# A_16 has 65536 rows, the period-compressed storage stays small.
MAX_N: int = 16

# Largest n for which the dense 2^n x 2^n table may be unrolled (64 MB at n = 12)
DENSE_MAX_N: int = 12

# Poset commands (column sets, Hasse diagram) refuse above this exponent
POSET_MAX_N: int = 10

# Exhaustive cocycle checks, indexed by cochain arity
COCYCLE_CHECK_MAX_N: dict[int, int] = {1: 10, 2: 8, 3: 4, 4: 2}

# Kernel / Smith normal form computations, indexed by the arity of the
# cochains the differential is applied to
KERNEL_MAX_N: dict[int, int] = {1: 8, 2: 5, 3: 3, 4: 2}

# Dense IntegerMatrix guard (number of entries)
MATRIX_ELEMENT_BUDGET: int = 1 << 22

# Left-selfdistributivity sweep: exhaustive up to this many triples,
# uniform random sample of this size above it
LD_BUDGET: int = 1 << 24

# Braid colorings: exhaustive up to EXHAUSTIVE_COLORINGS cases,
# otherwise a seeded uniform sample of SAMPLED_COLORINGS
EXHAUSTIVE_COLORINGS: int = 1 << 16
SAMPLED_COLORINGS: int = 1 << 12

# Default seed for every sampled sweep
DEFAULT_SEED: int = 20150101

# A CheckReport keeps at most this many witnesses (the failure count is exact)
WITNESS_LIMIT: int = 20
