"""Domain constants for unit-disk clique computations."""

# Grid cells are axis-parallel squares of this side; any two points in one
# cell are closer than 1 apart.
CELL_SIDE = 0.5

# N(C) is the (2r+1) x (2r+1) block of cells around C. r = 2 covers every
# unit disk centred inside C.
NEIGHBOR_RADIUS_CELLS = 2
MAX_NEIGHBOR_CELLS = (2 * NEIGHBOR_RADIUS_CELLS + 1) ** 2

# Generators keep every squared pairwise distance at least this far from 1
DISTANCE_MARGIN = 1e-7
# ... and at least this far from 0 (no near-duplicates)
DUPLICATE_MARGIN = 1e-9
MAX_RESAMPLE_ATTEMPTS = 10_000

MAX_ROTATION_RETRIES = 64

# Bron-Kerbosch oracle refuses anything larger
ORACLE_MAX_POINTS = 64

DEFAULT_REPEAT_MULTIPLIER = 3.0
DEFAULT_BENCH_TIMEOUT_S = 60.0

# Total insertions + deletions over a whole convex sweep stay below this
# multiple of the point count
SWEEP_UPDATE_BUDGET = 6

THREADS_ENV_VAR = "UDG_CLIQUE_THREADS"
