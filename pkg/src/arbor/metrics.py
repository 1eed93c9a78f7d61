# src/arbor/metrics.py

from prometheus_client import Counter, Histogram

trees_enumerated_total = Counter(
    "arbor_trees_enumerated_total",
    "Number of trees produced by family enumeration",
    ["family"],
)

compositions_total = Counter(
    "arbor_compositions_total",
    "Number of map compositions computed",
    ["algebra", "path"],
)

inversions_total = Counter(
    "arbor_inversions_total",
    "Number of compositional inverses computed",
    ["algebra", "path"],
)

inversion_duration_seconds = Histogram(
    "arbor_inversion_duration_seconds",
    "Wall time spent computing compositional inverses",
    ["algebra", "path"],
)

fern_checks_total = Counter(
    "arbor_fern_checks_total",
    "Number of Jacobian nilpotency checks",
    ["path", "verdict"],
)

resource_limit_total = Counter(
    "arbor_resource_limit_total",
    "Number of computations refused because a configured cap was exceeded",
    ["resource"],
)
