"""Declarative scenario configs: schema, execution, and result files.

A scenario is one YAML mapping with the keys

    experiment   one of the registered experiment names
    params       experiment-specific block (strict: unknown keys rejected)
    seed         64-bit unsigned; required for stochastic experiments
    samples      Monte Carlo sample/trial count where the experiment uses one
    sweep        optional list of param-override mappings, run in order
    output       optional {path, format} block; the CLI can override both

Validation is strict and has no defaults for physical parameters: silent
defaults would hide modeling choices.  Results are written as JSON (one
structured record) or CSV (header plus one line per record, complex values
as _re/_im column pairs); both carry the seed and library version, and the
numeric payload is byte-identical across reruns of the same config.
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import __version__, kernels
from .bidirectional import (
    CptAmplitudePair,
    DominanceModel,
    born_emergence_experiment,
    cpt_asymmetry,
    dominance_experiment,
    dominance_fraction_exact,
)
from .decision_tree import DecisionRun, enumerate_histories, overlap_scaling_experiment
from .errors import ConfigError
from .gedanken import (
    EllipsoidConfig,
    HbtConfig,
    WitnessConfig,
    cat_witness_coherence,
    ellipsoid_experiment,
    hbt_rate,
    stern_gerlach_recombine,
)
from .hilbert import StateVector, make_rng, random_state, random_unitary
from .two_boundary import (
    Evolve,
    Measure,
    Schedule,
    TwoBoundaryProcess,
    computational_event,
    two_outcome_event,
)

__all__ = [
    "ScenarioConfig",
    "RunOutput",
    "EXPERIMENTS",
    "validate_config",
    "run_scenario",
    "write_result",
    "list_experiments_text",
]

MAX_SEED = 2**64 - 1


# ---------------------------------------------------------------------------
# parameter coercion helpers


def _reject_bool(value, name):
    if isinstance(value, bool):
        raise ConfigError(f"field '{name}' must be a number, got a boolean")


def _as_float(value, name) -> float:
    _reject_bool(value, name)
    if not isinstance(value, (int, float)):
        raise ConfigError(f"field '{name}' must be a number")
    return float(value)


def _as_int(value, name, minimum=None) -> int:
    _reject_bool(value, name)
    if not isinstance(value, int):
        raise ConfigError(f"field '{name}' must be an integer")
    if minimum is not None and value < minimum:
        raise ConfigError(f"field '{name}' must be >= {minimum}")
    return value


def _as_bool(value, name) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"field '{name}' must be true or false")
    return value


def _as_complex(value, name) -> complex:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)
    ):
        raise ConfigError(f"field '{name}' must be a [re, im] pair")
    return complex(float(value[0]), float(value[1]))


def _as_complex_vector(value, name) -> list[complex]:
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError(f"field '{name}' must be a list of [re, im] pairs")
    return [_as_complex(v, f"{name}[{i}]") for i, v in enumerate(value)]


def _as_arcs(value, name):
    if not isinstance(value, (list, tuple)):
        raise ConfigError(f"field '{name}' must be a list of [start, stop] arcs")
    arcs = []
    for i, arc in enumerate(value):
        if not isinstance(arc, (list, tuple)) or len(arc) != 2:
            raise ConfigError(f"field '{name}[{i}]' must be a [start, stop] pair")
        arcs.append((_as_float(arc[0], name), _as_float(arc[1], name)))
    return tuple(arcs)


def _as_choice(value, name, choices) -> str:
    if value not in choices:
        raise ConfigError(f"field '{name}' must be one of {sorted(choices)}")
    return value


# ---------------------------------------------------------------------------
# experiment registry


@dataclass(frozen=True)
class RunOutput:
    """What one experiment execution produced.

    ``scalars`` land in both JSON and CSV; ``rows`` (if any) become the CSV
    lines; ``extra`` is JSON-only structured payload.
    """

    scalars: dict
    rows: list | None = None
    extra: dict | None = None


def _never_needs_seed(params):
    return False


def _always_needs_seed(params):
    return True


def _no_finalize(params):
    return params


@dataclass(frozen=True)
class Experiment:
    name: str
    description: str
    param_keys: dict  # name -> (coerce(value, name) -> value, required)
    runner: Callable
    needs_samples: bool = False
    needs_seed: Callable = _never_needs_seed
    finalize: Callable = _no_finalize
    produces_rows: bool = False
    seed_note: str | None = None

    def validate_params(self, raw, require_all: bool = True) -> dict:
        """Coerce and check a params mapping.

        With ``require_all`` false (a base block that sweep points will
        complete), required-key and cross-field checks are deferred to the
        merged per-point validation.
        """
        if not isinstance(raw, dict):
            raise ConfigError("'params' must be a mapping")
        params = {}
        for key, value in raw.items():
            if key not in self.param_keys:
                raise ConfigError(
                    f"unknown parameter '{key}' for experiment '{self.name}'"
                )
            coerce, _ = self.param_keys[key]
            params[key] = coerce(value, key)
        if not require_all:
            return params
        for key, (_, required) in self.param_keys.items():
            if required and key not in params:
                raise ConfigError(
                    f"experiment '{self.name}' requires parameter '{key}'"
                )
        return self.finalize(params)


def _run_abl(params, seed, samples):
    if params.get("preset") == "three_box":
        amp = 1.0 / np.sqrt(3.0)
        initial = StateVector([amp, amp, amp])
        final = StateVector([amp, amp, -amp])
        first_box = computational_event(3).projectors[0]
        schedule = Schedule([Measure(two_outcome_event(first_box))])
        proc = TwoBoundaryProcess(initial, final, schedule)
    else:
        dim = params["dim"]
        steps = []
        if "initial" in params and "final" in params:
            initial = StateVector(params["initial"]).normalize()
            final = StateVector(params["final"]).normalize()
            for _ in range(params["n_events"]):
                steps.append(Measure(computational_event(dim)))
        else:
            rng = make_rng(seed)
            initial = random_state(dim, rng)
            final = random_state(dim, rng)
            for _ in range(params["n_events"]):
                steps.append(Evolve(random_unitary(dim, rng)))
                steps.append(Measure(computational_event(dim)))
        proc = TwoBoundaryProcess(initial, final, Schedule(steps))
    histories = enumerate_histories(proc)
    rows = [
        {
            "outcomes": "-".join(str(k) for k in h.outcomes),
            "amplitude": h.amplitude,
            "probability": h.probability,
        }
        for h in histories
    ]
    total = float(sum(h.probability for h in histories))
    return RunOutput(scalars={"total_probability": total}, rows=rows)


def _abl_finalize(params):
    if "preset" in params:
        if len(params) > 1:
            raise ConfigError("abl preset 'three_box' takes no other parameters")
        return params
    for key in ("dim", "n_events"):
        if key not in params:
            raise ConfigError(f"experiment 'abl' requires parameter '{key}'")
    given = ("initial" in params) + ("final" in params)
    if given == 1:
        raise ConfigError("abl needs both 'initial' and 'final' or neither")
    if given == 2:
        for key in ("initial", "final"):
            if len(params[key]) != params["dim"]:
                raise ConfigError(f"field '{key}' must have length dim={params['dim']}")
    return params


def _abl_needs_seed(params):
    return "preset" not in params and "initial" not in params


def _run_overlap_scaling(params, seed, samples):
    run = DecisionRun(
        n_decisions=params["n_decisions"],
        branching_factor=params["branching_factor"],
        rng=make_rng(seed),
    )
    res = overlap_scaling_experiment(run)
    rows = [
        {"n": int(n), "log_sq_overlap": float(v)}
        for n, v in zip(res.n_values, res.log_sq_overlaps)
    ]
    return RunOutput(
        scalars={
            "decay_base": res.decay_base,
            "amplitude_decay_base": res.amplitude_decay_base,
        },
        rows=rows,
    )


def _run_born_emergence(params, seed, samples):
    theta = params["theta"]
    empirical = born_emergence_experiment(theta, samples, make_rng(seed))
    expected = float(np.cos(theta / 2.0) ** 2)
    return RunOutput(
        scalars={
            "empirical_p": empirical,
            "expected_p": expected,
            "std_error": float(np.sqrt(max(expected * (1 - expected), 0.0) / samples)),
        }
    )


def _run_dominance(params, seed, samples):
    model = DominanceModel(h=params["h"], k=params["k"], rng=make_rng(seed))
    fraction = dominance_experiment(model, samples)
    scalars = {"fraction_dominant": fraction}
    if params["k"] == 2:
        scalars["closed_form_k2"] = dominance_fraction_exact(params["h"])
    scalars["weight_model"] = model.weight_model
    return RunOutput(scalars=scalars)


def _run_cpt(params, seed, samples):
    pair = CptAmplitudePair(a=params["a"], a_prime=params["a_prime"])
    return RunOutput(scalars={"asymmetry": cpt_asymmetry(pair)})


def _run_hbt(params, seed, samples):
    cfg = HbtConfig(
        a13=params["a13"],
        a14=params["a14"],
        a23=params["a23"],
        a24=params["a24"],
        statistics=params["statistics"],
    )
    return RunOutput(scalars={"rate": hbt_rate(cfg)})


def _run_ellipsoid(params, seed, samples):
    cfg = EllipsoidConfig(
        semi_major=params["semi_major"],
        semi_minor=params["semi_minor"],
        wavenumber=params["wavenumber"],
        n_surface=params["n_surface"],
        dark_spot=params.get("dark_spot", ()),
        relative_phase=params["relative_phase"],
        inverse_r_weighting=params.get("inverse_r_weighting", False),
    )
    res = ellipsoid_experiment(cfg)
    return RunOutput(
        scalars={
            "rate_direct": res.rate_direct,
            "rate_interference": res.rate_interference,
            "total_rate": res.total_rate,
            "emission_probability_shift": res.emission_probability_shift,
        }
    )


def _run_stern_gerlach(params, seed, samples):
    state = StateVector(params["input"]).normalize()
    if params["with_witness"]:
        res = stern_gerlach_recombine(
            state, with_witness=True, witness_overlap=params["witness_overlap"]
        )
        extra = {
            "reduced_density": [list(row) for row in res.reduced_density.entries]
        }
    else:
        res = stern_gerlach_recombine(state, with_witness=False)
        extra = {"output_state": list(res.output_state.amps)}
    return RunOutput(scalars={"return_fidelity": res.return_fidelity}, extra=extra)


def _stern_gerlach_finalize(params):
    if len(params["input"]) != 2:
        raise ConfigError("field 'input' must list exactly 2 amplitudes")
    if params["with_witness"] and "witness_overlap" not in params:
        raise ConfigError(
            "experiment 'stern_gerlach' requires parameter 'witness_overlap' "
            "when with_witness is true"
        )
    return params


def _run_cat_witness(params, seed, samples):
    cfg = WitnessConfig(witness_overlap=params["witness_overlap"])
    return RunOutput(scalars={"coherence": cat_witness_coherence(cfg)})


EXPERIMENTS = {
    exp.name: exp
    for exp in [
        Experiment(
            name="abl",
            description=(
                "Histories of a pre- and post-selected measurement chain "
                "with their amplitudes and ABL probabilities"
            ),
            param_keys={
                "preset": (lambda v, n: _as_choice(v, n, ("three_box",)), False),
                "dim": (lambda v, n: _as_int(v, n, minimum=2), False),
                "n_events": (lambda v, n: _as_int(v, n, minimum=1), False),
                "initial": (_as_complex_vector, False),
                "final": (_as_complex_vector, False),
            },
            runner=_run_abl,
            needs_seed=_abl_needs_seed,
            finalize=_abl_finalize,
            produces_rows=True,
            seed_note="required unless boundaries are explicit or preset is used",
        ),
        Experiment(
            name="overlap_scaling",
            description=(
                "Per-decision decay of the squared overlap between the "
                "initial and final boundary states"
            ),
            param_keys={
                "n_decisions": (lambda v, n: _as_int(v, n, minimum=1), True),
                "branching_factor": (lambda v, n: _as_int(v, n, minimum=2), True),
            },
            runner=_run_overlap_scaling,
            needs_seed=_always_needs_seed,
            produces_rows=True,
            seed_note="required",
        ),
        Experiment(
            name="born_emergence",
            description=(
                "Up/down frequency decided per sample by the dominant "
                "matched border weight, against the squared-overlap rule"
            ),
            param_keys={"theta": (_as_float, True)},
            runner=_run_born_emergence,
            needs_samples=True,
            needs_seed=_always_needs_seed,
            seed_note="required",
        ),
        Experiment(
            name="dominance",
            description=(
                "Fraction of trials where the largest of k exponentially "
                "small matched weights beats the runner-up 100-fold"
            ),
            param_keys={
                "h": (_as_float, True),
                "k": (lambda v, n: _as_int(v, n, minimum=2), True),
            },
            runner=_run_dominance,
            needs_samples=True,
            needs_seed=_always_needs_seed,
            seed_note="required",
        ),
        Experiment(
            name="cpt",
            description=(
                "Amplitude-level conjugation asymmetry between a process "
                "amplitude and its boundary-swapped partner"
            ),
            param_keys={"a": (_as_complex, True), "a_prime": (_as_complex, True)},
            runner=_run_cpt,
        ),
        Experiment(
            name="hbt",
            description=(
                "Two-source/two-sink coincidence rate with boson or "
                "fermion exchange pairing"
            ),
            param_keys={
                "a13": (_as_complex, True),
                "a14": (_as_complex, True),
                "a23": (_as_complex, True),
                "a24": (_as_complex, True),
                "statistics": (
                    lambda v, n: _as_choice(v, n, ("boson", "fermion")),
                    True,
                ),
            },
            runner=_run_hbt,
        ),
        Experiment(
            name="ellipsoid",
            description=(
                "Interference of two focal antennae in a mirrored ellipse "
                "with a dark spot configured mid-flight"
            ),
            param_keys={
                "semi_major": (_as_float, True),
                "semi_minor": (_as_float, True),
                "wavenumber": (_as_float, True),
                "n_surface": (lambda v, n: _as_int(v, n, minimum=64), True),
                "dark_spot": (_as_arcs, True),
                "relative_phase": (_as_float, True),
                "inverse_r_weighting": (_as_bool, False),
            },
            runner=_run_ellipsoid,
        ),
        Experiment(
            name="stern_gerlach",
            description=(
                "Fidelity of a split-and-recombine spin loop, optionally "
                "with a which-path witness of tunable overlap"
            ),
            param_keys={
                "input": (_as_complex_vector, True),
                "with_witness": (_as_bool, True),
                "witness_overlap": (_as_complex, False),
            },
            runner=_run_stern_gerlach,
            finalize=_stern_gerlach_finalize,
        ),
        Experiment(
            name="cat_witness",
            description=(
                "Coherence surviving between two boxed macroscopic branches "
                "as a function of the witness-record overlap"
            ),
            param_keys={"witness_overlap": (_as_complex, True)},
            runner=_run_cat_witness,
        ),
    ]
}


# ---------------------------------------------------------------------------
# config validation


@dataclass
class ScenarioConfig:
    experiment: Experiment
    params: dict
    seed: int | None
    samples: int | None
    sweep: list
    output_path: str | None
    output_format: str | None
    echo: dict = field(default_factory=dict)


_TOP_KEYS = {"experiment", "params", "seed", "samples", "sweep", "output"}


def validate_config(raw) -> ScenarioConfig:
    """Validate a parsed scenario mapping; raises ConfigError naming the field."""
    if not isinstance(raw, dict):
        raise ConfigError("scenario file must contain a mapping at top level")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown top-level field '{sorted(unknown)[0]}'")
    if "experiment" not in raw:
        raise ConfigError("missing top-level field 'experiment'")
    name = raw["experiment"]
    if name not in EXPERIMENTS:
        raise ConfigError(
            f"unknown experiment '{name}'; run 'prepost list' for choices"
        )
    exp = EXPERIMENTS[name]
    if "params" not in raw:
        raise ConfigError("missing top-level field 'params'")
    sweep_raw = raw.get("sweep", [])
    if sweep_raw and exp.produces_rows:
        raise ConfigError(
            f"experiment '{name}' produces a per-run table and does not "
            "support 'sweep'"
        )
    if not isinstance(sweep_raw, list):
        raise ConfigError("'sweep' must be a list of parameter mappings")
    # A swept scenario may leave required params to the sweep points.
    params = exp.validate_params(raw["params"], require_all=not sweep_raw)
    sweep = []
    for i, overrides in enumerate(sweep_raw):
        if not isinstance(overrides, dict) or not overrides:
            raise ConfigError(f"'sweep[{i}]' must be a non-empty parameter mapping")
        merged = dict(raw["params"])
        merged.update(overrides)
        sweep.append((overrides, exp.validate_params(merged)))

    if sweep:
        needs_seed = any(exp.needs_seed(merged) for _, merged in sweep)
    else:
        needs_seed = exp.needs_seed(params)
    seed = raw.get("seed")
    if seed is not None:
        seed = _as_int(seed, "seed", minimum=0)
        if seed > MAX_SEED:
            raise ConfigError("field 'seed' must fit in 64 bits")
    elif needs_seed:
        raise ConfigError(
            f"experiment '{name}' is stochastic: top-level field 'seed' is required"
        )

    samples = raw.get("samples")
    if exp.needs_samples:
        if samples is None:
            raise ConfigError(
                f"experiment '{name}' requires the top-level field 'samples'"
            )
        samples = _as_int(samples, "samples", minimum=1)
    elif samples is not None:
        raise ConfigError(f"field 'samples' is not used by experiment '{name}'")

    output_path = None
    output_format = None
    if "output" in raw:
        out = raw["output"]
        if not isinstance(out, dict):
            raise ConfigError("'output' must be a mapping")
        unknown = set(out) - {"path", "format"}
        if unknown:
            raise ConfigError(f"unknown output field '{sorted(unknown)[0]}'")
        if "path" in out:
            if not isinstance(out["path"], str) or not out["path"]:
                raise ConfigError("field 'output.path' must be a non-empty string")
            output_path = out["path"]
        if "format" in out:
            output_format = _as_choice(out["format"], "output.format", ("json", "csv"))

    return ScenarioConfig(
        experiment=exp,
        params=params,
        seed=seed,
        samples=samples,
        sweep=sweep,
        output_path=output_path,
        output_format=output_format,
        echo=raw,
    )


# ---------------------------------------------------------------------------
# execution


def run_scenario(cfg: ScenarioConfig, threads: int = 1) -> dict:
    """Execute all points of a validated scenario; returns the result record."""
    if threads < 1:
        raise ConfigError("--threads must be >= 1")
    points = cfg.sweep if cfg.sweep else [({}, cfg.params)]
    start = time.perf_counter()

    def run_point(point):
        overrides, merged = point
        out = cfg.experiment.runner(merged, cfg.seed, cfg.samples)
        # echo the validated (coerced) values so complex params flatten
        # cleanly in both output formats
        entry = {"point": {k: merged[k] for k in overrides}, "scalars": out.scalars}
        if out.rows is not None:
            entry["rows"] = out.rows
        if out.extra is not None:
            entry["extra"] = out.extra
        return entry

    if threads > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_point, points))
    else:
        results = [run_point(p) for p in points]
    wall = time.perf_counter() - start
    return {
        "scenario": cfg.echo,
        "results": results,
        "meta": {
            "seed": cfg.seed,
            "version": __version__,
            "backend": kernels.active_backend(),
            "wall_time_s": wall,
        },
    }


# ---------------------------------------------------------------------------
# output writers


def _to_jsonable(value):
    if isinstance(value, dict):
        return {str(k): _to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        c = complex(value)
        return {"re": c.real, "im": c.imag}
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _flatten_record(record: dict) -> dict:
    flat = {}
    for key, value in record.items():
        if isinstance(value, (complex, np.complexfloating)):
            c = complex(value)
            flat[f"{key}_re"] = c.real
            flat[f"{key}_im"] = c.imag
        else:
            flat[key] = value
    return flat


def _csv_payload(record: dict) -> str:
    buf = io.StringIO()
    buf.write(f"# seed={record['meta']['seed']}\n")
    buf.write(f"# version={record['meta']['version']}\n")
    buf.write(f"# backend={record['meta']['backend']}\n")
    buf.write(f"# wall_time_s={record['meta']['wall_time_s']!r}\n")
    results = record["results"]
    if any("rows" in entry for entry in results):
        # a table-producing run is always a single point
        entry = results[0]
        for key, value in entry["scalars"].items():
            buf.write(f"# {key}={_format_cell(value)}\n")
        rows = [_flatten_record(r) for r in entry["rows"]]
    else:
        rows = [
            _flatten_record({**entry["point"], **entry["scalars"]})
            for entry in results
        ]
    columns = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format_cell(row[k]) if k in row else "" for k in columns])
    return buf.getvalue()


def write_result(record: dict, path: str, fmt: str) -> None:
    if fmt == "json":
        payload = json.dumps(_to_jsonable(record), sort_keys=True, indent=2) + "\n"
    elif fmt == "csv":
        payload = _csv_payload(record)
    else:
        raise ConfigError(f"unknown output format '{fmt}'")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(payload)


def list_experiments_text() -> str:
    """Stable, alphabetical listing of every experiment and its parameters."""
    lines = []
    for name in sorted(EXPERIMENTS):
        exp = EXPERIMENTS[name]
        required = sorted(k for k, (_, req) in exp.param_keys.items() if req)
        optional = sorted(k for k, (_, req) in exp.param_keys.items() if not req)
        lines.append(f"{name}")
        lines.append(f"  {exp.description}")
        lines.append(f"  required params: {', '.join(required) if required else '-'}")
        if optional:
            lines.append(f"  optional params: {', '.join(optional)}")
        if exp.seed_note:
            lines.append(f"  seed: {exp.seed_note}")
        if exp.needs_samples:
            lines.append("  samples: required")
    return "\n".join(lines) + "\n"
