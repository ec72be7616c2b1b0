"""YAML run configuration.

Every physical key carries its unit in the name.  Unknown keys are
rejected; missing optional keys take the defaults in ``DEFAULTS``.  See
``configs/example.yaml`` for an annotated document.
"""

from __future__ import annotations

import copy
import os
from dataclasses import dataclass
from pathlib import Path

import yaml

from .coupled_mode import ComplexIndex, CouplerSpec, first_5050_lengths
from .exceptions import ConfigError, DegenerateError
from .experiment_sim import MODIFIED, STANDARD, ExperimentConfig, stage_scan
from .fock_interference import OverlapModel

SEED_ENV = "LOSSYHOM_SEED"
FIRST_5050 = "first_5050"

DEFAULTS = {
    "coupler": {
        "n_symmetric": None,
        "n_antisymmetric": None,
        "wavelength_um": 1.55,
        "length_um": FIRST_5050,
    },
    "source": {
        "pair_rate_hz": 7000.0,
        "efficiency_arm1": 0.3,
        "efficiency_arm2": 0.3,
        "background_rate_hz": 0.0,
    },
    "overlap": {
        "coherence_length_um": 162.6,
        "center_offset_um": 0.0,
    },
    "scan": {
        "start_um": -500.0,
        "stop_um": 500.0,
        "points": 61,
        "integration_time_s": 1.0,
    },
    "experiment": {
        "configuration": STANDARD,
        "visibility_cap": 1.0,
        "rng_seed": 0,
    },
    "fit": {
        "polarity": "auto",
        "max_iter": 200,
    },
    "sweep": {
        "max_length_um": 25.0,
        "lengths_um": None,
    },
}

_REQUIRED = {("coupler", "n_symmetric"), ("coupler", "n_antisymmetric")}


@dataclass(frozen=True)
class RunConfig:
    coupler: CouplerSpec
    experiment: ExperimentConfig
    fit_polarity: str
    fit_max_iter: int
    sweep_max_length_um: float
    sweep_lengths_um: tuple[float, ...] | None
    raw: dict


def _number(section, key, value, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{section}.{key}: expected a number, got {value!r}")
    if integer and not isinstance(value, int):
        raise ConfigError(f"{section}.{key}: expected an integer, got {value!r}")
    return value


def _index(key, value) -> ComplexIndex:
    if isinstance(value, dict):
        extra = set(value) - {"real_part", "loss_part"}
        if extra:
            raise ConfigError(f"coupler.{key}: unknown keys {sorted(extra)}")
        if "real_part" not in value:
            raise ConfigError(f"coupler.{key}: missing real_part")
        return ComplexIndex(float(_number("coupler", key, value["real_part"])),
                            float(_number("coupler", key, value.get("loss_part", 0.0))))
    if isinstance(value, (int, float, str)) and not isinstance(value, bool):
        return ComplexIndex.from_complex(value)
    raise ConfigError(f"coupler.{key}: expected a complex literal or a mapping, got {value!r}")


def merge_defaults(doc) -> dict:
    """Validate section/key names and fill in defaults."""
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a mapping of sections")
    merged = copy.deepcopy(DEFAULTS)
    for section, body in doc.items():
        if section not in DEFAULTS:
            raise ConfigError(f"unknown section {section!r}")
        if body is None:
            continue
        if not isinstance(body, dict):
            raise ConfigError(f"section {section!r} must be a mapping")
        for key, value in body.items():
            if key not in DEFAULTS[section]:
                raise ConfigError(f"unknown key {section}.{key}")
            merged[section][key] = value
    for section, key in _REQUIRED:
        if merged[section][key] is None:
            raise ConfigError(f"missing required key {section}.{key}")
    return merged


def build(doc, seed: int | None = None) -> RunConfig:
    """Turn a parsed document into validated library objects.

    Seed precedence: explicit ``seed`` argument, then the ``LOSSYHOM_SEED``
    environment variable, then ``experiment.rng_seed``.
    """
    m = merge_defaults(doc)
    c = m["coupler"]
    n1 = _index("n_symmetric", c["n_symmetric"])
    n2 = _index("n_antisymmetric", c["n_antisymmetric"])
    coupler = CouplerSpec(n1, n2, float(_number("coupler", "wavelength_um", c["wavelength_um"])))
    if c["length_um"] == FIRST_5050:
        try:
            length = first_5050_lengths(n1, n2, coupler.wavelength_um, 1)[0]
        except DegenerateError as exc:
            raise DegenerateError(f"coupler.length_um = {FIRST_5050}: {exc}") from exc
    else:
        length = float(_number("coupler", "length_um", c["length_um"]))
    coupler = coupler.with_length(length)

    s, o, sc, e = m["source"], m["overlap"], m["scan"], m["experiment"]
    for section in ("source", "overlap", "scan"):
        for key, value in m[section].items():
            _number(section, key, value, integer=(key == "points"))
    if seed is None and os.environ.get(SEED_ENV, "").strip():
        try:
            seed = int(os.environ[SEED_ENV])
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV} must be an integer") from exc
    if seed is None:
        seed = _number("experiment", "rng_seed", e["rng_seed"], integer=True)
    if e["configuration"] not in (STANDARD, MODIFIED):
        raise ConfigError(f"experiment.configuration must be {STANDARD!r} or {MODIFIED!r}")

    experiment = ExperimentConfig(
        coupler=coupler,
        overlap=OverlapModel(float(o["coherence_length_um"]), float(o["center_offset_um"])),
        stage_positions_um=stage_scan(float(sc["start_um"]), float(sc["stop_um"]), sc["points"]),
        pair_rate_hz=float(s["pair_rate_hz"]),
        efficiency_arm1=float(s["efficiency_arm1"]),
        efficiency_arm2=float(s["efficiency_arm2"]),
        integration_time_s=float(sc["integration_time_s"]),
        configuration=e["configuration"],
        visibility_cap=float(_number("experiment", "visibility_cap", e["visibility_cap"])),
        rng_seed=int(seed),
        background_rate_hz=float(s["background_rate_hz"]),
    )

    f = m["fit"]
    polarity = f["polarity"]
    if polarity == "auto":
        polarity = "dip" if experiment.configuration == STANDARD else "peak"
    if polarity not in ("dip", "peak"):
        raise ConfigError("fit.polarity must be dip, peak or auto")
    max_iter = _number("fit", "max_iter", f["max_iter"], integer=True)

    sw = m["sweep"]
    max_len = float(_number("sweep", "max_length_um", sw["max_length_um"]))
    lengths = sw["lengths_um"]
    if lengths is not None:
        if not isinstance(lengths, list) or not lengths:
            raise ConfigError("sweep.lengths_um must be a non-empty list")
        lengths = tuple(float(_number("sweep", "lengths_um", v)) for v in lengths)
    return RunConfig(coupler, experiment, polarity, max_iter, max_len, lengths, m)


def load(path, seed: int | None = None) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from exc
    return build(doc, seed=seed)
