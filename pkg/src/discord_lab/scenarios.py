"""Declarative parameter sweeps and the four built-in experiments.

A scenario config (JSON, schema in ``data/scenario.schema.json``) names one
state, fixed channel settings on mode B, an optional detector and exactly one
swept parameter. Each sweep point is pushed through

    state -> classical noise on B -> attenuation of B -> detector map

and evaluated either analytically or through the sampler and bootstrap
estimator.
"""

from __future__ import annotations

import copy
import csv
import hashlib
import io
import json
import math
import os
from dataclasses import dataclass, field
from importlib import resources

import jsonschema
import numpy as np

from . import __version__
from ._parallel import ordered_map
from .channels import (
    DetectorSpec,
    add_classical_noise_mode_b,
    attenuate_mode_b,
    db_to_transmittance,
    detector_map,
)
from .covariance import TwoModeCovariance
from .errors import ConfigError, DiscordLabError
from .estimator import DEFAULT_RESAMPLES, measures_with_errors
from .measures import CSV_COLUMNS, MeasureReport, base_for_units, measure_report
from .sampler import sample
from .states import (
    SqueezerSpec,
    split_thermal,
    split_thermal_from_photons,
    tmsv,
    tmsv_from_photons,
    two_mode_from_squeezers,
    two_mode_squeezing_db,
)

DEFAULT_ATTENUATION_POINTS = 21
DEFAULT_MODULATION_POINTS = 25
DEFAULT_MODULATION_RANGE = (0.1, 1000.0)
FIG4_DEFAULTS = ((1.0, 0.5), (2.0, 1.0), (4.0, 2.0), (8.0, 4.0))
FIG5_PHOTONS = (1.0, 10.0, 100.0)
REFERENCE_DETECTOR = {"efficiency": 0.85, "electronic_noise_db": -20.0}

_STATE_PARAMS = {
    "squeezers": {"squeezing_db", "antisqueezing_db"},
    "tmsv": {"r", "mean_photons"},
    "split_thermal": {"modulation", "mean_photons"},
    "covariance": set(),
}
_COVARIANCE_FIELDS = ("a_xx", "a_pp", "b_xx", "b_pp", "c_x", "c_p")
_CHANNEL_PARAMS = {"attenuation", "attenuation_db", "added_noise"}
_DETECTOR_PARAMS = {"efficiency", "cmr_db", "electronic_noise_db"}


def _schema():
    text = resources.files("discord_lab").joinpath("data/scenario.schema.json").read_text()
    return json.loads(text)


# -- config handling ----------------------------------------------------------


def sweep_values(sweep: dict) -> list[float]:
    if "values" in sweep:
        values = [float(v) for v in sweep["values"]]
    elif "linspace" in sweep:
        a, b, num = sweep["linspace"]
        values = np.linspace(a, b, int(num)).tolist()
    else:
        a, b, num = sweep["logspace"]
        if a <= 0 or b <= 0:
            raise ConfigError("logspace bounds must be positive", "sweep.logspace")
        values = np.geomspace(a, b, int(num)).tolist()
    if len(set(values)) != len(values):
        raise ConfigError("sweep values must be distinct", "sweep")
    return sorted(values)


def validate_config(config: dict) -> dict:
    """Schema check plus cross-field rules. Returns a normalised deep copy.

    Raises:
        ConfigError: naming the first offending field.
    """
    if not isinstance(config, dict):
        raise ConfigError("scenario config must be a JSON object")
    errors = sorted(jsonschema.Draft202012Validator(_schema()).iter_errors(config), key=lambda e: list(e.path))
    if errors:
        err = errors[0]
        where = ".".join(str(p) for p in err.path) or "<root>"
        raise ConfigError(err.message, where)
    cfg = copy.deepcopy(config)
    cfg.setdefault("channel", {})
    cfg.setdefault("detector", None)
    cfg.setdefault("mode", {"kind": "analytic"})
    cfg.setdefault("units", "bits")

    state = cfg["state"]
    kind = state["kind"]
    known = set(_STATE_PARAMS[kind])
    if kind == "covariance":
        known |= set(_COVARIANCE_FIELDS)
        missing = [k for k in _COVARIANCE_FIELDS if k not in state]
        if missing:
            raise ConfigError(f"missing fields {missing}", "state")
    extra = set(state) - {"kind"} - known
    if extra:
        raise ConfigError(f"fields {sorted(extra)} do not apply to state kind {kind!r}", "state")
    if "attenuation" in cfg["channel"] and "attenuation_db" in cfg["channel"]:
        raise ConfigError("give either attenuation or attenuation_db, not both", "channel")

    param = cfg["sweep"]["parameter"]
    allowed = _STATE_PARAMS[kind] | _CHANNEL_PARAMS | (_DETECTOR_PARAMS if cfg["detector"] is not None else set())
    if param not in allowed:
        raise ConfigError(
            f"unknown or inapplicable sweep parameter {param!r}; allowed here: {sorted(allowed)}",
            "sweep.parameter",
        )
    values = sweep_values(cfg["sweep"])
    for v in values:
        _check_point_domain(param, v)
    if cfg["mode"]["kind"] == "sampled":
        cfg["mode"].setdefault("n", 100_000)
        cfg["mode"].setdefault("resamples", DEFAULT_RESAMPLES)
        if "seed" not in cfg["mode"]:
            raise ConfigError("sampled mode requires an explicit seed", "mode.seed")
    return cfg


def _check_point_domain(param: str, v: float) -> None:
    bad = (
        (param == "attenuation" and not 0 <= v <= 1)
        or (param == "efficiency" and not 0 < v <= 1)
        or (param in {"attenuation_db", "added_noise", "modulation", "mean_photons", "r", "squeezing_db", "antisqueezing_db"} and v < 0)
    )
    if bad:
        raise ConfigError(f"value {v} outside the domain of {param}", "sweep.values")


def fingerprint(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def build_state(state: dict) -> tuple[TwoModeCovariance, float]:
    """State covariance and its modulation depth (leaks through finite CMR)."""
    kind = state["kind"]
    if kind == "squeezers":
        spec = SqueezerSpec(state.get("squeezing_db", 3.2), state.get("antisqueezing_db", 6.7))
        return two_mode_from_squeezers(spec), 0.0
    if kind == "tmsv":
        if "mean_photons" in state:
            return tmsv_from_photons(state["mean_photons"]), 0.0
        return tmsv(state.get("r", 0.0)), 0.0
    if kind == "split_thermal":
        if "mean_photons" in state:
            depth = 2.0 * state["mean_photons"]
            return split_thermal_from_photons(state["mean_photons"]), depth
        depth = state.get("modulation", 0.0)
        return split_thermal(depth), depth
    return TwoModeCovariance(*(state[k] for k in _COVARIANCE_FIELDS)), 0.0


def _point_config(cfg: dict, value: float) -> dict:
    point = copy.deepcopy(cfg)
    param = cfg["sweep"]["parameter"]
    if param in _CHANNEL_PARAMS:
        if param.startswith("attenuation"):
            point["channel"].pop("attenuation", None)
            point["channel"].pop("attenuation_db", None)
        point["channel"][param] = value
    elif param in _DETECTOR_PARAMS:
        point["detector"][param] = value
    else:
        state = point["state"]
        if param == "mean_photons":
            state.pop("r", None)
            state.pop("modulation", None)
        elif param in ("r", "modulation"):
            state.pop("mean_photons", None)
        state[param] = value
    return point


def point_state(point: dict) -> TwoModeCovariance:
    """Apparent covariance for one fully specified sweep point."""
    sigma, depth = build_state(point["state"])
    channel = point.get("channel", {})
    sigma = add_classical_noise_mode_b(sigma, channel.get("added_noise", 0.0))
    if "attenuation_db" in channel:
        t = db_to_transmittance(channel["attenuation_db"])
    else:
        t = 1.0 - channel.get("attenuation", 0.0)
    sigma = attenuate_mode_b(sigma, min(max(t, 0.0), 1.0))
    det = point.get("detector")
    if det is not None:
        spec = DetectorSpec(
            efficiency=det.get("efficiency", 1.0),
            electronic_noise_db=-math.inf if det.get("electronic_noise_db") is None else det["electronic_noise_db"],
            cmr_db=math.inf if det.get("cmr_db") is None else det["cmr_db"],
        )
        sigma = detector_map(sigma, spec, depth)
    return sigma


# -- results --------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRecord:
    param: float
    report: MeasureReport
    errors: dict | None = None


@dataclass
class SweepResult:
    label: str
    parameter: str
    records: list
    config: dict
    fingerprint: str
    version: str = __version__

    @property
    def params(self) -> np.ndarray:
        return np.array([r.param for r in self.records])

    def column(self, name: str) -> np.ndarray:
        attr = {"I": "mutual_info_I", "J": "classical_info_J", "D": "discord_D", "E_N": "log_negativity"}.get(name, name)
        return np.array([getattr(r.report, attr) for r in self.records])

    def error_column(self, name: str) -> np.ndarray | None:
        if not self.records or self.records[0].errors is None:
            return None
        return np.array([r.errors[name] for r in self.records])

    @property
    def sampled(self) -> bool:
        return bool(self.records) and self.records[0].errors is not None

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = ["param", *CSV_COLUMNS]
        if self.sampled:
            header += ["I_err", "J_err", "D_err", "E_N_err"]
        writer.writerow(header)
        for rec in self.records:
            row = [repr(rec.param), *(repr(v) if isinstance(v, float) else v for v in rec.report.csv_fields())]
            if self.sampled:
                row += [repr(rec.errors[k]) for k in ("I", "J", "D", "E_N")]
            writer.writerow(row)
        return buf.getvalue()

    def sidecar(self) -> dict:
        return {
            "label": self.label,
            "parameter": self.parameter,
            "config": self.config,
            "fingerprint": self.fingerprint,
            "version": self.version,
            "units": self.config.get("units", "bits"),
        }


def _evaluate_point(cfg: dict, index: int, value: float) -> SweepRecord:
    point = _point_config(cfg, value)
    try:
        sigma = point_state(point)
    except DiscordLabError as exc:
        raise ConfigError(f"sweep point {value}: {exc}", "sweep.values") from exc
    base = base_for_units(cfg["units"])
    mode = cfg["mode"]
    if mode["kind"] == "analytic":
        return SweepRecord(value, measure_report(sigma, base))
    # Independent, order-free streams per point derived from the scenario seed.
    point_seed = np.random.SeedSequence([mode["seed"], index])
    sample_seed, boot_seed = (int(s.generate_state(1, np.uint64)[0]) for s in point_seed.spawn(2))
    est = measures_with_errors(sample(sigma, mode["n"], sample_seed), mode["resamples"], boot_seed, base)
    return SweepRecord(value, est.value, dict(est.sigma))


def run_generic(config: dict, label: str | None = None) -> SweepResult:
    """Run one validated sweep.

    Raises:
        ConfigError: with field-level diagnostics for invalid configs.
    """
    cfg = validate_config(config)
    values = sweep_values(cfg["sweep"])
    records = ordered_map(lambda iv: _evaluate_point(cfg, *iv), list(enumerate(values)))
    return SweepResult(
        label=label or cfg.get("label") or cfg.get("name") or "sweep",
        parameter=cfg["sweep"]["parameter"],
        records=records,
        config=cfg,
        fingerprint=fingerprint(cfg),
    )


# -- built-in experiments ---------------------------------------------------------------


@dataclass
class ScenarioOutcome:
    name: str
    curves: dict
    validators: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.validators.values())

    def summary(self) -> str:
        verdicts = ", ".join(f"{k}: {'PASS' if v else 'FAIL'}" for k, v in self.validators.items())
        return f"{self.name}: {verdicts}"


def _mode(n=None, seed=None, resamples=None) -> dict:
    if n is None:
        return {"kind": "analytic"}
    if seed is None:
        raise ConfigError("sampled mode requires an explicit seed", "mode.seed")
    return {"kind": "sampled", "n": int(n), "seed": int(seed), "resamples": int(resamples or DEFAULT_RESAMPLES)}


def _attenuation_sweep(points=DEFAULT_ATTENUATION_POINTS) -> dict:
    return {"parameter": "attenuation", "linspace": [0.0, 1.0, points]}


def _strictly_decreasing(v) -> bool:
    return bool(np.all(np.diff(v) < 0))


def _strictly_increasing(v) -> bool:
    return bool(np.all(np.diff(v) > 0))


def fig2_configs(squeezing_db=3.2, antisqueezing_db=6.7, mode=None, units="bits") -> dict:
    return {
        "entangled": {
            "name": "fig2",
            "state": {"kind": "squeezers", "squeezing_db": squeezing_db, "antisqueezing_db": antisqueezing_db},
            "sweep": _attenuation_sweep(),
            "mode": mode or _mode(),
            "units": units,
        }
    }


def run_entangled_attenuation(configs: dict | None = None, **kwargs) -> ScenarioOutcome:
    """Two-mode squeezed state from the OPA pair, mode B attenuated."""
    configs = configs or fig2_configs(**kwargs)
    curves = {label: run_generic(cfg, label) for label, cfg in configs.items()}
    res = curves["entangled"]
    validators = {
        "monotone-decrease": all(_strictly_decreasing(res.column(k)) for k in ("I", "J", "D", "E_N")),
        "vanishing": bool(res.params[-1] < 1 or all(abs(res.column(k)[-1]) < 1e-9 for k in ("I", "D", "E_N"))),
    }
    return ScenarioOutcome("fig2", curves, validators)


def fig3_configs(cmr_values=(27.0, 15.0), points=DEFAULT_MODULATION_POINTS, mode=None, units="bits") -> dict:
    lo, hi = DEFAULT_MODULATION_RANGE
    sweep = {"parameter": "modulation", "logspace": [lo, hi, points]}
    configs = {
        "ideal": {
            "name": "fig3",
            "state": {"kind": "split_thermal", "modulation": 0.0},
            "sweep": sweep,
            "mode": mode or _mode(),
            "units": units,
        }
    }
    for cmr in cmr_values:
        configs[f"cmr{cmr:g}"] = {
            "name": "fig3",
            "state": {"kind": "split_thermal", "modulation": 0.0},
            "detector": {**REFERENCE_DETECTOR, "cmr_db": cmr},
            "sweep": sweep,
            "mode": mode or _mode(),
            "units": units,
        }
    return configs


def _saturating(values) -> bool:
    steps = np.diff(values)
    return bool(steps[-1] < 0.1 * steps.max())


def _interior_max(values) -> bool:
    k = int(np.argmax(values))
    return 0 < k < len(values) - 1


def run_modulation_sweep(configs: dict | None = None, **kwargs) -> ScenarioOutcome:
    """Split thermal state versus modulation depth, ideal and CMR-limited detectors."""
    configs = configs or fig3_configs(**kwargs)
    curves = {label: run_generic(cfg, label) for label, cfg in configs.items()}
    ideal = curves["ideal"].column("D")
    validators = {
        "ideal-increasing": _strictly_increasing(ideal),
        "ideal-saturating": _saturating(ideal),
    }
    for label, res in curves.items():
        if label != "ideal":
            validators[f"{label}-rise-fall"] = _interior_max(res.column("D"))
    return ScenarioOutcome("fig3", curves, validators)


def fig4_configs(pairs=FIG4_DEFAULTS, mode=None, units="bits") -> dict:
    return {
        f"M{m:g}_k{k:g}": {
            "name": "fig4",
            "state": {"kind": "split_thermal", "modulation": m},
            "channel": {"added_noise": k},
            "sweep": _attenuation_sweep(),
            "mode": mode or _mode(),
            "units": units,
        }
        for m, k in pairs
    }


def run_dissipation_revival(configs: dict | None = None, **kwargs) -> ScenarioOutcome:
    """Noisy split thermal states under attenuation of mode B."""
    configs = configs or fig4_configs(**kwargs)
    curves = {label: run_generic(cfg, label) for label, cfg in configs.items()}
    revival = True
    details = {}
    for label, res in curves.items():
        d = res.column("D")
        kappa = res.config["channel"].get("added_noise", 0.0)
        gain = float(d.max() / d[0] - 1) if d[0] > 0 else math.inf
        details[label] = {"added_noise": kappa, "relative_gain": gain, "argmax": float(res.params[np.argmax(d)])}
        ends_at_zero = res.params[-1] < 1 or abs(d[-1]) < 1e-9
        if kappa > 0:
            revival &= bool(d.max() > d[0] and _interior_max(d) and ends_at_zero)
        else:
            revival &= bool(ends_at_zero)
    return ScenarioOutcome("fig4", curves, {"revival": revival}, details)


def fig5_configs(photons=FIG5_PHOTONS, points=DEFAULT_ATTENUATION_POINTS, max_db=30.0, mode=None, units="bits") -> dict:
    sweep = {"parameter": "attenuation_db", "linspace": [0.0, max_db, points]}
    configs = {}
    for n in photons:
        for kind, tag in (("tmsv", "tmsv"), ("split_thermal", "mix")):
            configs[f"{tag}_n{n:g}"] = {
                "name": "fig5",
                "state": {"kind": kind, "mean_photons": n},
                "sweep": sweep,
                "mode": mode or _mode(),
                "units": units,
            }
    return configs


def run_energy_comparison(configs: dict | None = None, **kwargs) -> ScenarioOutcome:
    """Pure TMSV against the split thermal state at equal total photon number."""
    configs = configs or fig5_configs(**kwargs)
    curves = {label: run_generic(cfg, label) for label, cfg in configs.items()}
    dominance = True
    details = {}
    for label, res in curves.items():
        if not label.startswith("tmsv_"):
            continue
        mix = curves.get("mix_" + label[len("tmsv_"):])
        if mix is None:
            continue
        dominance &= bool(np.all(res.column("D") > mix.column("D")))
        n = res.config["state"]["mean_photons"]
        details[label] = {"two_mode_squeezing_db": two_mode_squeezing_db(tmsv_from_photons(n))}
    return ScenarioOutcome("fig5", curves, {"dominance": dominance}, details)


NAMED = {
    "fig2": (run_entangled_attenuation, fig2_configs),
    "fig3": (run_modulation_sweep, fig3_configs),
    "fig4": (run_dissipation_revival, fig4_configs),
    "fig5": (run_energy_comparison, fig5_configs),
}


def run_named(name: str, mode: dict | None = None, units: str = "bits") -> ScenarioOutcome:
    try:
        runner, make = NAMED[name]
    except KeyError:
        raise ConfigError(f"unknown scenario {name!r}; expected one of {sorted(NAMED)}", "scenario") from None
    return runner(make(mode=mode, units=units))


def run_config(config: dict) -> ScenarioOutcome:
    """Run a user config as a one-curve scenario (no validators)."""
    res = run_generic(config)
    return ScenarioOutcome(config.get("name", "custom"), {res.label: res})


def write_outcome(outcome: ScenarioOutcome, out_dir) -> list[str]:
    """Write ``<name>_<curve>.csv`` plus a JSON sidecar per curve, atomically."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for label, res in outcome.curves.items():
        stem = os.path.join(out_dir, f"{outcome.name}_{label}")
        meta = res.sidecar()
        meta["scenario"] = outcome.name
        meta["validators"] = outcome.validators
        meta["details"] = outcome.details.get(label)
        for path, text in ((stem + ".csv", res.to_csv()), (stem + ".json", json.dumps(meta, indent=2) + "\n")):
            _atomic_write(path, text)
            written.append(path)
    return written


def _atomic_write(path: str, text: str) -> None:
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)
