# wres/metrics.py
from prometheus_client import Counter, Histogram, Gauge, generate_latest

# Blowup steps: labels = mode, status
BLOWUP_STEPS = Counter(
    'wres_blowup_steps_total',
    'Weighted blowup steps performed by the resolution driver',
    ['mode', 'status']  # status = ok|failed
)

# Buchberger runs: label = monomial order tag
BUCHBERGER_RUNS = Counter(
    'wres_buchberger_runs_total',
    'Groebner basis computations',
    ['order']
)

BUCHBERGER_DURATION = Histogram(
    'wres_buchberger_duration_seconds',
    'Time spent in Buchberger runs',
    ['order']
)

INVARIANT_DURATION = Histogram(
    'wres_invariant_duration_seconds',
    'Time spent computing the invariant at a point'
)

# Leaves of the last resolution tree, by status
TREE_LEAVES = Gauge(
    'wres_tree_leaves',
    'Leaf count of the most recent resolution tree',
    ['status']
)


def dump():
    return generate_latest().decode("utf-8")
