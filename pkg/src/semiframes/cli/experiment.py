"""Experiment specs: strict JSON parsing, batch execution, report emission.

A spec names families and operators (closed-form rules or explicit
sections), a measure, a truncation schedule and a list of tasks.  ``run``
executes every task at every schedule point with seeded probe vectors and
returns a plain-dict report; ``emit`` writes ``report.json`` (sorted keys,
shortest round-trip floats) plus one CSV per trend table.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .. import __version__, _kernels
from .. import constructions as cx
from .. import diagnostics as dx
from .. import duality as du
from .. import factorization as fz
from .. import reconstruction as rc
from ..errors import (
    DimensionMismatch,
    ParseError,
    SemiframeError,
    ValidationError,
)
from ..numkernel import operator_norm
from ..spaces import MeasureSpace, OperatorSpec, VectorFamily, omega_form, scale_norm
from .expr import compile_rule

DEFAULT_TOL = 1e-9

_TOP_KEYS = {"seed", "schedule", "measure", "families", "operators", "tasks"}
_MEASURE_KINDS = {
    "counting": set(),
    "weights": {"rule", "values"},
    "partition": {"blocks", "weights"},
}
_FAMILY_KEYS = {
    "onb": set(),
    "weighted_onb": {"part", "m", "sup_bound"},
    "diagonal": {"rule"},
    "metric_columns": {"metric"},
    "partition_pair": {"metric", "part"},
    "rkhs": {"part", "grid", "weight", "power", "bandwidth"},
    "explicit": {"vectors"},
}
_FAMILY_REQUIRED = {
    "onb": set(),
    "weighted_onb": {"part", "m"},
    "diagonal": {"rule"},
    "metric_columns": {"metric"},
    "partition_pair": {"metric", "part"},
    "rkhs": {"part", "grid", "weight"},
    "explicit": {"vectors"},
}
_OPERATOR_KEYS = {
    "identity": set(),
    "zero": set(),
    "scaled_identity": {"scale"},
    "diagonal": {"rule"},
    "dense": {"entries"},
    "metric_from": {"source"},
}

# task name -> (required params, optional params, uses random probes)
_TASKS = {
    "classify": ({"family"}, set(), False),
    "bessel_bound": ({"family"}, set(), False),
    "lower_frame_bound": ({"family"}, set(), False),
    "mu_total": ({"family"}, set(), False),
    "dual_pair": ({"family", "dual"}, {"tol"}, False),
    "weak_g_dual": ({"family", "dual", "operator"}, {"tol"}, False),
    "weak_a_lower": ({"family", "operator"}, set(), False),
    "weak_a_upper": ({"family", "operator"}, set(), False),
    "controlled_bounds": ({"family", "operator"}, {"tol"}, False),
    "alt_upper": ({"family", "operator"}, {"tol"}, False),
    "canonical_dual": ({"family"}, {"probes", "tol"}, True),
    "factor_loop": ({"family", "operator"}, {"probes", "tol"}, True),
    "upper_factor": ({"family", "operator"}, {"tol"}, False),
    "aphi_chain": ({"family", "dual", "operator"}, {"a_operator", "tol"}, False),
    "coercivity": ({"family", "operator"}, set(), False),
    "weak_expansion": ({"family", "operator", "rhs"}, {"tol"}, False),
    "rkhs_suite": ({"family", "dual"}, {"probes", "tol"}, True),
}

_NOTES = [
    "density of analysis domains has no finite-section analogue; "
    "domain statements are reported as trends across truncations only",
    "operator-relative reports are per supplied extension section",
]


@dataclass(frozen=True)
class ExperimentSpec:
    """Validated experiment description (already rule-compiled)."""

    raw: dict
    seed: int | None
    schedule: tuple
    measure: dict
    families: dict
    operators: dict = field(repr=False)
    tasks: tuple = ()


def _fail(path, message):
    raise ValidationError(message, path=path)


def _strict(obj, allowed, required, path):
    if not isinstance(obj, dict):
        _fail(path, "expected an object")
    for key in obj:
        if key not in allowed:
            _fail(f"{path}.{key}" if path else key, "unknown field")
    for key in required:
        if key not in obj:
            _fail(f"{path}.{key}" if path else key, "missing required field")


def _rule_at(obj, key, path):
    try:
        return compile_rule(obj[key])
    except ParseError as err:
        _fail(f"{path}.{key}", str(err))


def _as_complex(entry, path):
    if isinstance(entry, (int, float)):
        return complex(entry)
    if (
        isinstance(entry, list)
        and len(entry) == 2
        and all(isinstance(part, (int, float)) for part in entry)
    ):
        return complex(entry[0], entry[1])
    _fail(path, "numbers must be real scalars or [re, im] pairs")


def _matrix_from(entries, path):
    if not isinstance(entries, list) or not entries:
        _fail(path, "expected a non-empty list of rows")
    rows = []
    width = None
    for i, row in enumerate(entries):
        if not isinstance(row, list) or (width is not None and len(row) != width):
            _fail(f"{path}[{i}]", "rows must be lists of equal length")
        width = len(row)
        rows.append([_as_complex(v, f"{path}[{i}][{j}]") for j, v in enumerate(row)])
    return np.array(rows, dtype=np.complex128)


def parse_spec(text):
    """Parse and validate a JSON experiment spec (strict: unknown fields and
    dangling references are rejected with their path)."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(f"invalid JSON at line {err.lineno} column {err.colno}: {err.msg}")
    return validate_spec(raw)


def validate_spec(raw):
    if not isinstance(raw, dict):
        _fail("", "spec must be a JSON object")
    _strict(raw, _TOP_KEYS, {"schedule", "measure", "families", "tasks"}, "")

    seed = raw.get("seed")
    if seed is not None and not isinstance(seed, int):
        _fail("seed", "seed must be an integer")

    schedule = raw["schedule"]
    if (
        not isinstance(schedule, list)
        or not schedule
        or not all(isinstance(d, int) and d >= 1 for d in schedule)
        or any(b <= a for a, b in zip(schedule, schedule[1:]))
    ):
        _fail("schedule", "schedule must be a strictly increasing list of positive integers")
    schedule = tuple(schedule)

    measure = raw["measure"]
    _strict(measure, {"kind", *{k for keys in _MEASURE_KINDS.values() for k in keys}},
            {"kind"}, "measure")
    kind = measure.get("kind")
    if kind not in _MEASURE_KINDS:
        _fail("measure.kind", f"unknown measure kind {kind!r}")
    _strict(measure, {"kind", *_MEASURE_KINDS[kind]}, {"kind"}, "measure")
    measure_info = {"kind": kind}
    if kind == "weights":
        if ("rule" in measure) == ("values" in measure):
            _fail("measure", "weights need exactly one of 'rule' or 'values'")
        if "rule" in measure:
            measure_info["rule"] = _rule_at(measure, "rule", "measure")
        else:
            values = measure["values"]
            if not isinstance(values, list) or not all(
                isinstance(v, (int, float)) and v > 0 for v in values
            ):
                _fail("measure.values", "weights must be positive numbers")
            if len(values) < schedule[-1]:
                _fail(
                    "measure.values",
                    f"need at least {schedule[-1]} weights for the largest truncation",
                )
            measure_info["values"] = np.asarray(values, dtype=float)
    if kind == "partition":
        for need in ("blocks", "weights"):
            if need not in measure:
                _fail(f"measure.{need}", "missing required field")
        blocks = measure["blocks"]
        weights = measure["weights"]
        if not isinstance(weights, list) or not all(
            isinstance(w, (int, float)) and w > 0 for w in weights
        ):
            _fail("measure.weights", "weights must be positive numbers")
        if not isinstance(blocks, list) or not all(
            isinstance(b, list) and all(isinstance(i, int) for i in b) for b in blocks
        ):
            _fail("measure.blocks", "blocks must be lists of integer indices")
        flat = sorted(i for b in blocks for i in b)
        if flat != list(range(len(weights))):
            _fail("measure.blocks", "blocks must disjointly cover the weight indices")
        measure_info["blocks"] = tuple(tuple(b) for b in blocks)
        measure_info["weights"] = np.asarray(weights, dtype=float)

    operators = {}
    raw_operators = raw.get("operators", {})
    if not isinstance(raw_operators, dict):
        _fail("operators", "expected an object")
    pending = {}
    for name, op in raw_operators.items():
        path = f"operators.{name}"
        _strict(op, {"kind", *{k for keys in _OPERATOR_KEYS.values() for k in keys}},
                {"kind"}, path)
        okind = op.get("kind")
        if okind not in _OPERATOR_KEYS:
            _fail(f"{path}.kind", f"unknown operator kind {okind!r}")
        _strict(op, {"kind", *_OPERATOR_KEYS[okind]}, {"kind"}, path)
        if okind == "identity":
            operators[name] = OperatorSpec.identity(label=name)
        elif okind == "zero":
            operators[name] = OperatorSpec.zero(label=name)
        elif okind == "scaled_identity":
            scale = _as_complex(op.get("scale", 1.0), f"{path}.scale")
            operators[name] = OperatorSpec.scaled_identity(scale, label=name)
        elif okind == "diagonal":
            if "rule" not in op:
                _fail(f"{path}.rule", "missing required field")
            operators[name] = OperatorSpec.diagonal(_rule_at(op, "rule", path), label=name)
        elif okind == "dense":
            if "entries" not in op:
                _fail(f"{path}.entries", "missing required field")
            matrix = _matrix_from(op["entries"], f"{path}.entries")
            if matrix.shape[0] != matrix.shape[1]:
                _fail(f"{path}.entries", "dense operator must be square")
            operators[name] = OperatorSpec.dense(matrix, label=name)
        else:  # metric_from: resolved after plain operators, any order
            pending[name] = op.get("source")
    while pending:
        progressed = False
        for name, source in list(pending.items()):
            if source in operators:
                operators[name] = cx.metric_from_operator(operators[source])
                del pending[name]
                progressed = True
        if not progressed:
            name, source = next(iter(pending.items()))
            _fail(
                f"operators.{name}.source",
                f"operator {source!r} is undefined or part of a reference cycle",
            )

    families = {}
    raw_families = raw.get("families", {})
    if not isinstance(raw_families, dict) or not raw_families:
        _fail("families", "expected a non-empty object")
    for name, fam in raw_families.items():
        path = f"families.{name}"
        _strict(fam, {"constructor", *{k for keys in _FAMILY_KEYS.values() for k in keys}},
                {"constructor"}, path)
        ctor = fam.get("constructor")
        if ctor not in _FAMILY_KEYS:
            _fail(f"{path}.constructor", f"unknown family constructor {ctor!r}")
        _strict(fam, {"constructor", *_FAMILY_KEYS[ctor]}, {"constructor",
                *_FAMILY_REQUIRED[ctor]}, path)
        info = {"constructor": ctor}
        if ctor in ("weighted_onb", "partition_pair", "rkhs"):
            part = fam.get("part")
            if part not in ("psi", "phi"):
                _fail(f"{path}.part", "part must be 'psi' or 'phi'")
            info["part"] = part
        if ctor == "weighted_onb":
            info["m"] = _rule_at(fam, "m", path)
            info["sup_bound"] = fam.get("sup_bound")
            if info["sup_bound"] is not None and not (
                isinstance(info["sup_bound"], (int, float)) and info["sup_bound"] > 0
            ):
                _fail(f"{path}.sup_bound", "sup_bound must be a positive number")
        elif ctor == "diagonal":
            info["rule"] = _rule_at(fam, "rule", path)
        elif ctor in ("metric_columns", "partition_pair"):
            metric = fam.get("metric")
            if metric not in operators:
                _fail(f"{path}.metric", f"operator {metric!r} is not defined")
            info["metric"] = metric
            if ctor == "partition_pair" and measure_info["kind"] != "partition":
                _fail(f"{path}.metric", "partition_pair needs a partition measure")
        elif ctor == "rkhs":
            info["grid"] = _rule_at(fam, "grid", path)
            info["weight"] = _rule_at(fam, "weight", path)
            info["power"] = fam.get("power", 1)
            info["bandwidth"] = fam.get("bandwidth", 1.0)
            if not isinstance(info["power"], int) or info["power"] < 0:
                _fail(f"{path}.power", "power must be a non-negative integer")
            if not isinstance(info["bandwidth"], (int, float)) or info["bandwidth"] <= 0:
                _fail(f"{path}.bandwidth", "bandwidth must be positive")
            info["raw"] = {k: fam[k] for k in ("grid", "weight")}
        elif ctor == "explicit":
            matrix = _matrix_from(fam["vectors"], f"{path}.vectors")
            if len(schedule) != 1 or schedule[0] != matrix.shape[1]:
                _fail(
                    f"{path}.vectors",
                    "explicit families need a single-point schedule matching their dimension",
                )
            info["vectors"] = matrix
        families[name] = info

    tasks = raw["tasks"]
    if not isinstance(tasks, list):
        _fail("tasks", "expected a list")
    uses_probes = False
    validated_tasks = []
    for i, task in enumerate(tasks):
        path = f"tasks[{i}]"
        if not isinstance(task, dict) or "task" not in task:
            _fail(path, "each task needs a 'task' name")
        name = task["task"]
        if name not in _TASKS:
            _fail(f"{path}.task", f"unknown task {name!r}")
        required, optional, probes = _TASKS[name]
        _strict(task, {"task", *required, *optional}, {"task", *required}, path)
        for ref_key in ("family", "dual"):
            if ref_key in task and task[ref_key] not in families:
                _fail(f"{path}.{ref_key}", f"family {task[ref_key]!r} is not defined")
        for ref_key in ("operator", "a_operator"):
            if ref_key in task and task[ref_key] not in operators:
                _fail(f"{path}.{ref_key}", f"operator {task[ref_key]!r} is not defined")
        if "tol" in task and not (isinstance(task["tol"], (int, float)) and task["tol"] > 0):
            _fail(f"{path}.tol", "tol must be a positive number")
        if "probes" in task and not (isinstance(task["probes"], int) and task["probes"] > 0):
            _fail(f"{path}.probes", "probes must be a positive integer")
        if "rhs" in task:
            _rule_at(task, "rhs", path)  # must compile; evaluated at run time
        if name == "classify" and len(schedule) < 2:
            _fail(f"{path}.task", "classify needs at least two schedule points")
        if name == "rkhs_suite":
            for ref_key in ("family", "dual"):
                if families[task[ref_key]]["constructor"] != "rkhs":
                    _fail(f"{path}.{ref_key}", "rkhs_suite needs rkhs families")
            fam_a = families[task["family"]]
            fam_b = families[task["dual"]]
            if fam_a["raw"] != fam_b["raw"] or fam_a["power"] != fam_b["power"] or \
                    fam_a["bandwidth"] != fam_b["bandwidth"]:
                _fail(f"{path}.dual", "rkhs_suite families must share kernel parameters")
        uses_probes = uses_probes or probes
        validated_tasks.append(task)

    if uses_probes and seed is None:
        _fail("seed", "seed is required when any task draws random probes")

    return ExperimentSpec(
        raw=raw,
        seed=seed,
        schedule=schedule,
        measure=measure_info,
        families=families,
        operators=operators,
        tasks=tuple(validated_tasks),
    )


# ---------------------------------------------------------------------------
# Realization


class _Realizer:
    """Materializes families, measures and probe vectors per truncation."""

    def __init__(self, spec: ExperimentSpec):
        self.spec = spec
        self._family_cache = {}

    def family(self, name, d):
        key = (name, d)
        if key not in self._family_cache:
            self._family_cache[key] = self._build_family(name, d)
        return self._family_cache[key]

    def _build_family(self, name, d):
        info = self.spec.families[name]
        ctor = info["constructor"]
        if ctor == "onb":
            return VectorFamily(np.eye(d), label=name), None, None
        if ctor == "weighted_onb":
            rule = info["m"]
            sup = info["sup_bound"]
            if sup is None:
                sup = max(abs(rule(n)) for n in range(1, d + 1)) * (1.0 + 1e-9) + 1e-300
            m = cx.WeightSequence(rule, sup_bound=sup)
            pair = cx.weighted_onb_pair(m, d)
            fam = pair[0] if info["part"] == "psi" else pair[1]
            return VectorFamily(fam.vectors, label=name), None, None
        if ctor == "diagonal":
            rule = info["rule"]
            rows = np.zeros((d, d), dtype=np.complex128)
            for n in range(1, d + 1):
                rows[n - 1, n - 1] = rule(n)
            return VectorFamily(rows, label=name), None, None
        if ctor == "metric_columns":
            fam = cx.lower_from_metric(self.spec.operators[info["metric"]], d)
            return VectorFamily(fam.vectors, label=name), None, None
        if ctor == "partition_pair":
            sp = self.measure_for_count(len(self.spec.measure["weights"]))
            phi, psi = cx.partition_G_family(self.spec.operators[info["metric"]], sp, dim=d)
            fam = phi if info["part"] == "phi" else psi
            return VectorFamily(fam.vectors, label=name), None, None
        if ctor == "rkhs":
            kf = self.kernel_family(info, d)
            phi, psi = cx.rkhs_pair(kf)
            fam = phi if info["part"] == "phi" else psi
            return VectorFamily(fam.vectors, label=name), kf.gram, kf
        # explicit
        vectors = info["vectors"]
        if vectors.shape[1] != d:
            raise DimensionMismatch(
                f"explicit family {name!r} has dimension {vectors.shape[1]}, not {d}"
            )
        return VectorFamily(vectors, label=name), None, None

    def kernel_family(self, info, d):
        grid = np.array([info["grid"](n) for n in range(1, d + 1)])
        return cx.gaussian_kernel_family(
            grid, info["weight"], power=info["power"], bandwidth=info["bandwidth"]
        )

    def measure_for_count(self, count):
        info = self.spec.measure
        if info["kind"] == "counting":
            return MeasureSpace.counting(count)
        if info["kind"] == "weights":
            if "values" in info:
                if count > info["values"].size:
                    raise DimensionMismatch(
                        f"measure lists {info['values'].size} weights, family needs {count}"
                    )
                return MeasureSpace(info["values"][:count])
            weights = np.array([info["rule"](n) for n in range(1, count + 1)])
            return MeasureSpace(weights)
        weights = info["weights"]
        if count != weights.size:
            raise DimensionMismatch(
                f"partition measure has {weights.size} points, family has {count}"
            )
        return MeasureSpace(weights, partition=info["blocks"])

    def pair(self, name, d):
        """(family, measure, gram) with the measure sized to the family."""
        fam, gram, kf = self.family(name, d)
        return fam, self.measure_for_count(fam.count), gram

    def probes(self, rng, d, count):
        draws = rng.standard_normal((count, d)) + 1j * rng.standard_normal((count, d))
        norms = np.linalg.norm(draws, axis=1)
        norms[norms == 0.0] = 1.0
        return draws / norms[:, None]


# ---------------------------------------------------------------------------
# Task execution


def _verdict_str(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _trend(rows):
    dims = [r[0] for r in rows]
    vals = [r[1] for r in rows]
    if len(dims) < 2 or any(not math.isfinite(v) or v <= 0.0 for v in vals):
        return None
    slope = dx.fit_trend_slope(dims, vals)
    return {"slope": slope, "regime": dx.trend_regime(slope)}


def _run_classify(realizer, params, spec, rng, tol):
    name = params["family"]

    def fam_rule(d):
        return realizer.family(name, d)[0]

    def sp_rule(d):
        return realizer.measure_for_count(realizer.family(name, d)[0].count)

    gram_rule = None
    if spec.families[name]["constructor"] == "rkhs":
        def gram_rule(d):
            return realizer.family(name, d)[1]

    verdict = dx.classify(fam_rule, sp_rule, spec.schedule, gram_rule=gram_rule)
    ev = verdict.evidence
    tables = {
        "lambda_min": [
            (d, v, verdict.value) for d, v in zip(ev["dims"], ev["lambda_min"])
        ],
        "lambda_max": [
            (d, v, verdict.value) for d, v in zip(ev["dims"], ev["lambda_max"])
        ],
    }
    result = {
        "class": verdict.value,
        "slope_min": ev["slope_min"],
        "slope_max": ev["slope_max"],
        "regime_min": ev["regime_min"],
        "regime_max": ev["regime_max"],
        "mu_total": ev["mu_total"],
    }
    return result, tables


def _scalar_task(fn):
    """Wrap a per-dimension BoundsReport runner into trend tables."""

    def runner(realizer, params, spec, rng, tol):
        rows = []
        detail = {}
        for d in spec.schedule:
            report = fn(realizer, params, d, rng, tol)
            rows.append((d, float(report.constant), report.verdict))
            detail = {"kind": report.kind, "verdict": report.verdict}
        trend = _trend(rows)
        result = {
            "constant_at_largest": rows[-1][1],
            "verdict": rows[-1][2],
            **detail,
        }
        if trend is not None:
            result["trend"] = trend
            if trend["regime"] == "diverges":
                result["verdict"] = "diverges"
        return result, {"constant": rows}

    return runner


@_scalar_task
def _run_bessel(realizer, params, d, rng, tol):
    fam, sp, gram = realizer.pair(params["family"], d)
    return dx.bessel_bound(fam, sp, gram=gram)


@_scalar_task
def _run_lower(realizer, params, d, rng, tol):
    fam, sp, gram = realizer.pair(params["family"], d)
    return dx.lower_frame_bound(fam, sp, gram=gram)


@_scalar_task
def _run_weak_a_upper(realizer, params, d, rng, tol):
    fam, sp, gram = realizer.pair(params["family"], d)
    op = realizer.spec.operators[params["operator"]]
    return dx.weak_upper_alpha(fam, sp, op, gram=gram)


def _run_weak_a_lower(realizer, params, spec, rng, tol):
    rows = []
    finiteness = {}
    verdicts = []
    for d in spec.schedule:
        fam, sp, gram = realizer.pair(params["family"], d)
        op = spec.operators[params["operator"]]
        report = dx.weak_A_frame_alpha(fam, sp, op, gram=gram)
        rows.append((d, float(report.constant), report.verdict))
        verdicts.append(report.verdict)
        for k in range(min(3, d)):
            probe = np.zeros(d)
            probe[k] = 1.0
            finiteness.setdefault(k, []).append(
                (d, omega_form(fam, sp, probe, probe, gram=gram).real)
            )
    result = {"constant_at_largest": rows[-1][1], "verdict": verdicts[-1]}
    trend = _trend(rows)
    if trend is not None:
        result["trend"] = trend
    mass_trends = {}
    for k, series in finiteness.items():
        t = _trend([(d, v, "") for d, v in series])
        mass_trends[f"e_{k + 1}"] = None if t is None else t["slope"]
    if len(spec.schedule) >= 2:
        result["analysis_mass_probe_slopes"] = mass_trends
    return result, {"constant": rows}


def _run_mu_total(realizer, params, spec, rng, tol):
    rows = []
    for d in spec.schedule:
        fam, sp, gram = realizer.pair(params["family"], d)
        total = dx.mu_total_check(fam, sp, gram=gram)
        rows.append((d, 1.0 if total else 0.0, "total" if total else "not_total"))
    return {"mu_total_at_largest": rows[-1][2] == "total"}, {"constant": rows}


def _run_dual_pair(realizer, params, spec, rng, tol):
    rows = []
    for d in spec.schedule:
        phi, sp, gram = realizer.pair(params["family"], d)
        psi, _, gram2 = realizer.pair(params["dual"], d)
        _require_same_gram(gram, gram2)
        report = du.dual_pair_check(phi, psi, sp, tol=params.get("tol", tol), gram=gram)
        rows.append((d, report.max_residual, _verdict_str(report.verdict)))
    return {
        "residual_at_largest": rows[-1][1],
        "verdict": rows[-1][2],
    }, {"constant": rows}


def _run_weak_g_dual(realizer, params, spec, rng, tol):
    rows = []
    for d in spec.schedule:
        phi, sp, gram = realizer.pair(params["family"], d)
        psi, _, gram2 = realizer.pair(params["dual"], d)
        _require_same_gram(gram, gram2)
        op = spec.operators[params["operator"]]
        report = du.weak_G_dual_check(phi, psi, sp, op, tol=params.get("tol", tol), gram=gram)
        rows.append((d, report.max_residual, _verdict_str(report.verdict)))
    return {
        "residual_at_largest": rows[-1][1],
        "verdict": rows[-1][2],
    }, {"constant": rows}


def _run_controlled(realizer, params, spec, rng, tol):
    lower_rows, upper_rows = [], []
    verdict = ""
    for d in spec.schedule:
        fam, sp, gram = realizer.pair(params["family"], d)
        report = dx.controlled_frame_bounds(fam, sp, spec.operators[params["operator"]])
        lo, hi = report.constant
        verdict = report.verdict
        lower_rows.append((d, lo, verdict))
        upper_rows.append((d, hi, verdict))
    return {
        "bounds_at_largest": [lower_rows[-1][1], upper_rows[-1][1]],
        "verdict": verdict,
    }, {"lower": lower_rows, "upper": upper_rows}


def _run_alt_upper(realizer, params, spec, rng, tol):
    tables = {"composed": [], "mixed": [], "adjoint_family": []}
    verdicts = {}
    for d in spec.schedule:
        fam, sp, gram = realizer.pair(params["family"], d)
        ra, rb, rc_ = dx.alt_upper_checks(fam, sp, spec.operators[params["operator"]])
        for key, report in (("composed", ra), ("mixed", rb), ("adjoint_family", rc_)):
            tables[key].append((d, float(report.constant), report.verdict))
            verdicts[key] = report.verdict
    return {
        "constants_at_largest": {k: v[-1][1] for k, v in tables.items()},
        "verdicts": verdicts,
    }, tables


def _run_canonical_dual(realizer, params, spec, rng, tol):
    rows = []
    for d in spec.schedule:
        fam, sp, gram = realizer.pair(params["family"], d)
        chi = du.canonical_dual(fam, sp, gram=gram)
        probes = realizer.probes(rng, d, params.get("probes", 100))
        defect = du.tightness_defect(fam, chi, sp, probes, gram=gram)
        recon = _reconstruction_defect(fam, chi, sp, probes)
        worst = max(defect, recon)
        rows.append((d, worst, _verdict_str(worst <= params.get("tol", 1e-8))))
    return {"max_defect": max(r[1] for r in rows), "verdict": rows[-1][2]}, {"constant": rows}


def _reconstruction_defect(fam, chi, sp, probes):
    worst = 0.0
    for f in probes:
        coeff = sp.weights * (np.conj(fam.vectors) @ f)
        recon = chi.vectors.T @ coeff
        worst = max(worst, float(np.linalg.norm(recon - f) / max(1.0, np.linalg.norm(f))))
    return worst


def _run_factor_loop(realizer, params, spec, rng, tol):
    rows = []
    for d in spec.schedule:
        phi, sp, gram = realizer.pair(params["family"], d)
        b_op = spec.operators[params["operator"]]
        result = fz.lower_factorize(b_op, phi, sp, tol=params.get("tol", tol))
        psi = fz.bessel_dual_from_factor(result, sp)
        dual = du.weak_G_dual_check(phi, psi, sp, b_op, tol=params.get("tol", 1e-8))
        worst = max(result.residual, dual.max_residual)
        bessel = dx.bessel_bound(psi, sp).constant
        gamma_cap = operator_norm(result.factor) ** 2
        for f in realizer.probes(rng, d, params.get("probes", 20)):
            coeff = fz.atomic_coefficients(f, psi, sp, b_op, phi, tol=params.get("tol", 1e-8))
            excess = np.linalg.norm(coeff.coefficients) - coeff.gamma * np.linalg.norm(f)
            worst = max(worst, float(excess))
        ok = dual.verdict and bessel <= gamma_cap + 1e-9
        rows.append((d, worst, _verdict_str(ok)))
    return {"max_residual": max(r[1] for r in rows), "verdict": rows[-1][2]}, {"constant": rows}


def _run_upper_factor(realizer, params, spec, rng, tol):
    rows = []
    lam = 0.0
    for d in spec.schedule:
        psi, sp, gram = realizer.pair(params["family"], d)
        result = fz.upper_factorize(psi, sp, spec.operators[params["operator"]],
                                    tol=params.get("tol", 1e-8))
        rel = result.detail["relative_residual"]
        lam = result.lambda_hat
        rows.append((d, rel, _verdict_str(rel <= params.get("tol", 1e-8))))
    return {
        "relative_residual_at_largest": rows[-1][1],
        "lambda_hat_at_largest": lam,
        "verdict": rows[-1][2],
    }, {"constant": rows}


def _run_aphi_chain(realizer, params, spec, rng, tol):
    rows = []
    alphas = []
    for d in spec.schedule:
        psi, sp, gram = realizer.pair(params["family"], d)
        phi, _, _ = realizer.pair(params["dual"], d)
        f_op = spec.operators[params["operator"]]
        a_op = spec.operators[params.get("a_operator", params["operator"])]
        report = fz.aphi_lower_chain(psi, phi, sp, f_op, a_op, tol=params.get("tol", 1e-8))
        rows.append((d, float(report.constant), report.verdict))
        alphas.append(report.detail["alpha"])
    return {
        "infimum_at_largest": rows[-1][1],
        "alpha_at_largest": alphas[-1],
        "verdict": rows[-1][2],
    }, {"constant": rows}


def _run_coercivity(realizer, params, spec, rng, tol):
    alpha_rows, gamma_rows = [], []
    for d in spec.schedule:
        fam, sp, gram = realizer.pair(params["family"], d)
        report = rc.coercivity_constants(fam, sp, spec.operators[params["operator"]])
        verdict = _verdict_str(report.holds)
        alpha_rows.append((d, report.alpha_prime, verdict))
        gamma_rows.append((d, report.gamma, verdict))
    return {
        "alpha_prime_at_largest": alpha_rows[-1][1],
        "gamma_at_largest": gamma_rows[-1][1],
        "verdict": alpha_rows[-1][2],
    }, {"alpha_prime": alpha_rows, "gamma": gamma_rows}


def _run_weak_expansion(realizer, params, spec, rng, tol):
    rule = compile_rule(params["rhs"])
    rows = []
    for d in spec.schedule:
        fam, sp, gram = realizer.pair(params["family"], d)
        rhs = np.array([rule(n) for n in range(1, fam.ambient_dim + 1)], dtype=np.complex128)
        w = rc.weak_expansion(fam, sp, spec.operators[params["operator"]], rhs,
                              tol=params.get("tol", tol))
        residual = 0.0
        for k in range(min(5, d)):
            e = np.zeros(d)
            e[k] = 1.0
            residual = max(
                residual,
                abs(omega_form(fam, sp, w, e) - complex(np.vdot(e, rhs))),
            )
        rows.append((d, residual, _verdict_str(residual <= params.get("tol", tol) * 10)))
    return {"max_defect": max(r[1] for r in rows), "verdict": rows[-1][2]}, {"constant": rows}


def _run_rkhs_suite(realizer, params, spec, rng, tol):
    rows = []
    mono_ok = True
    for d in spec.schedule:
        psi, sp, gram = realizer.pair(params["family"], d)
        phi, _, _ = realizer.pair(params["dual"], d)
        info = spec.families[params["family"]]
        kf = realizer.kernel_family(info, d)
        count = params.get("probes", 20)
        coeffs = realizer.probes(rng, d, count)
        repro = cx.reproducing_defect(kf, coeffs[: min(count, 10)])
        g = cx.embedding_operator(kf, sp)
        dual = du.weak_G_dual_check(psi, phi, sp, g, tol=params.get("tol", 1e-8), gram=kf.gram)
        scale_op = OperatorSpec.dense(np.diag(kf.weights()))
        for f in coeffs:
            norms = [scale_norm(scale_op, a, f) for a in (0.0, 0.5, 1.0, 2.0)]
            mono_ok = mono_ok and all(b >= a - 1e-12 for a, b in zip(norms, norms[1:]))
        worst = max(repro, dual.max_residual)
        ok = worst <= params.get("tol", 1e-8) and mono_ok
        rows.append((d, worst, _verdict_str(ok)))
    return {
        "max_residual": max(r[1] for r in rows),
        "scale_norms_monotone": mono_ok,
        "verdict": rows[-1][2],
    }, {"constant": rows}


def _require_same_gram(gram_a, gram_b):
    if (gram_a is None) != (gram_b is None):
        raise DimensionMismatch("families pair different ambient inner products")
    if gram_a is not None and not np.allclose(gram_a, gram_b, atol=1e-12):
        raise DimensionMismatch("families pair different ambient inner products")


_RUNNERS = {
    "classify": _run_classify,
    "bessel_bound": _run_bessel,
    "lower_frame_bound": _run_lower,
    "mu_total": _run_mu_total,
    "dual_pair": _run_dual_pair,
    "weak_g_dual": _run_weak_g_dual,
    "weak_a_lower": _run_weak_a_lower,
    "weak_a_upper": _run_weak_a_upper,
    "controlled_bounds": _run_controlled,
    "alt_upper": _run_alt_upper,
    "canonical_dual": _run_canonical_dual,
    "factor_loop": _run_factor_loop,
    "upper_factor": _run_upper_factor,
    "aphi_chain": _run_aphi_chain,
    "coercivity": _run_coercivity,
    "weak_expansion": _run_weak_expansion,
    "rkhs_suite": _run_rkhs_suite,
}


def run(spec: ExperimentSpec, tolerance=DEFAULT_TOL, seed=None):
    """Execute every task of the spec; deterministic for a fixed seed.

    Task errors become per-task failure entries and execution continues.
    """
    effective_seed = seed if seed is not None else spec.seed
    realizer = _Realizer(spec)
    entries = []
    for index, task in enumerate(spec.tasks):
        name = task["task"]
        params = {k: v for k, v in task.items() if k != "task"}
        rng = np.random.default_rng(
            [effective_seed if effective_seed is not None else 0, index]
        )
        entry = {"index": index, "task": name, "params": params, "status": "ok",
                 "error": None, "result": None, "trend_tables": {}}
        try:
            result, tables = _RUNNERS[name](realizer, params, spec, rng, tolerance)
            entry["result"] = result
            entry["trend_tables"] = tables
        except SemiframeError as err:
            entry["status"] = "error"
            entry["error"] = {"type": type(err).__name__, "message": str(err)}
        except (ZeroDivisionError, FloatingPointError, ValueError) as err:
            entry["status"] = "error"
            entry["error"] = {"type": type(err).__name__, "message": str(err)}
        entries.append(entry)
    report = {
        "environment": {
            "package": "semiframes",
            "version": __version__,
            "kernel_backend": _kernels.backend_name(),
            "seed": effective_seed,
            "tolerance": tolerance,
        },
        "schedule": list(spec.schedule),
        "notes": list(_NOTES),
        "tasks": entries,
    }
    return report


# ---------------------------------------------------------------------------
# Emission


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.complexfloating, complex)):
        return [_jsonable(float(np.real(value))), _jsonable(float(np.imag(value)))]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.bool_,)):
        return bool(value)
    return value


def _csv_cell(value):
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def emit(report, out_dir):
    """Write report.json and trends/*.csv under ``out_dir``.

    Returns the list of written paths.  Raises IoError on filesystem
    problems.
    """
    import os

    from ..errors import IoError

    written = []
    try:
        os.makedirs(out_dir, exist_ok=True)
        report_path = os.path.join(out_dir, "report.json")
        payload = _jsonable(report)
        with open(report_path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2, allow_nan=False)
            fh.write("\n")
        written.append(report_path)
        trends_dir = os.path.join(out_dir, "trends")
        first = True
        for entry in report["tasks"]:
            for series, rows in (entry.get("trend_tables") or {}).items():
                if first:
                    os.makedirs(trends_dir, exist_ok=True)
                    first = False
                name = f"task{entry['index']:03d}_{entry['task']}_{series}.csv"
                path = os.path.join(trends_dir, name)
                with open(path, "w", encoding="utf-8") as fh:
                    fh.write("dimension,constant,verdict\n")
                    for dim, constant, verdict in rows:
                        fh.write(
                            f"{int(dim)},{_csv_cell(float(constant))},{verdict}\n"
                        )
                written.append(path)
    except OSError as err:
        raise IoError(f"could not write report files: {err}")
    return written
