"""Shipped example experiment specs, written by the ``examples`` subcommand."""

WEIGHTED_SEQUENCE = {
    "seed": 42,
    "schedule": [8, 16, 32, 64, 128, 256],
    "measure": {"kind": "counting"},
    "families": {
        "psi": {"constructor": "weighted_onb", "part": "psi", "m": "1/n"},
        "phi": {"constructor": "weighted_onb", "part": "phi", "m": "1/n"},
    },
    "operators": {
        "A": {"kind": "diagonal", "rule": "n"},
    },
    "tasks": [
        {"task": "classify", "family": "psi"},
        {"task": "classify", "family": "phi"},
        {"task": "bessel_bound", "family": "psi"},
        {"task": "lower_frame_bound", "family": "phi"},
        {"task": "dual_pair", "family": "phi", "dual": "psi"},
        {"task": "weak_a_lower", "family": "phi", "operator": "A"},
        {"task": "alt_upper", "family": "psi", "operator": "A"},
        {"task": "canonical_dual", "family": "phi", "probes": 50},
    ],
}

METRIC_OPERATOR = {
    "seed": 42,
    "schedule": [4, 8, 16, 32],
    "measure": {"kind": "counting"},
    "operators": {
        "S": {"kind": "diagonal", "rule": "n/2"},
        "G": {"kind": "metric_from", "source": "S"},
    },
    "families": {
        "phi": {"constructor": "metric_columns", "metric": "G"},
    },
    "tasks": [
        {"task": "classify", "family": "phi"},
        {"task": "lower_frame_bound", "family": "phi"},
        {"task": "coercivity", "family": "phi", "operator": "S"},
        {"task": "weak_expansion", "family": "phi", "operator": "S", "rhs": "1/n"},
        {"task": "factor_loop", "family": "phi", "operator": "G", "probes": 20},
        {"task": "canonical_dual", "family": "phi", "probes": 25},
    ],
}

KERNEL_SPACE = {
    "seed": 42,
    "schedule": [4, 8],
    "measure": {"kind": "counting"},
    "families": {
        "phi": {
            "constructor": "rkhs",
            "part": "phi",
            "grid": "(n - 1)/2 + 1/4",
            "weight": "1 + x^2",
            "power": 1,
            "bandwidth": 1.0,
        },
        "psi": {
            "constructor": "rkhs",
            "part": "psi",
            "grid": "(n - 1)/2 + 1/4",
            "weight": "1 + x^2",
            "power": 1,
            "bandwidth": 1.0,
        },
    },
    "operators": {},
    "tasks": [
        {"task": "rkhs_suite", "family": "psi", "dual": "phi", "probes": 20},
        {"task": "bessel_bound", "family": "psi"},
        {"task": "lower_frame_bound", "family": "phi"},
    ],
}

EXAMPLE_SPECS = {
    "weighted_sequence.json": WEIGHTED_SEQUENCE,
    "metric_operator.json": METRIC_OPERATOR,
    "kernel_space.json": KERNEL_SPACE,
}
