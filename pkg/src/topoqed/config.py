"""Run configuration: JSON ingestion, unit normalization, defaults.

Every frequency-like quantity in the config carries an explicit unit tag
(GHz | MHz | rad_per_s) and a ``times_2pi`` boolean; ingestion normalizes
everything to angular frequency (rad/s) and the normalized values are echoed
into every output summary so a run can be reproduced from its own metadata.

Decay rates kappa/gamma are normalized the same way, except that the
``rate_convention`` setting takes precedence over their ``times_2pi`` flags:
"plain" honors the flags as written (1 MHz -> 1e6 1/s), "angular" multiplies
the plain values by 2*pi regardless of the flags.

Unknown keys anywhere in the document are errors: a silently ignored typo in
a physics parameter is the main operational hazard this format guards
against.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .circuit import CircuitParams
from .wire import WireParams

__all__ = ["ConfigError", "RunConfig", "SweepSpec", "default_config_dict", "load_config"]

SCHEMA_VERSION = 1

_UNIT_SCALE = {"GHz": 1e9, "MHz": 1e6, "rad_per_s": 1.0}


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


def _require_keys(section: dict, allowed: set[str], required: set[str], where: str):
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)} in {where}")
    missing = required - set(section)
    if missing:
        raise ConfigError(f"missing keys {sorted(missing)} in {where}")


def _frequency(node, where: str, rate_convention: Optional[str] = None) -> float:
    """Normalize a tagged frequency field to rad/s (or 1/s for rates)."""
    if not isinstance(node, dict):
        raise ConfigError(f"{where} must be an object with value/unit/times_2pi")
    _require_keys(node, {"value", "unit", "times_2pi"}, {"value", "unit"}, where)
    value = node["value"]
    unit = node["unit"]
    if unit not in _UNIT_SCALE:
        raise ConfigError(f"{where}: unit must be one of {sorted(_UNIT_SCALE)}, got {unit!r}")
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"{where}: value must be a number")
    base = float(value) * _UNIT_SCALE[unit]
    times_2pi = bool(node.get("times_2pi", False))
    if rate_convention is not None:
        times_2pi = rate_convention == "angular"
    return base * (2.0 * math.pi) if times_2pi else base


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    min: float
    max: float
    steps: int

    def __post_init__(self):
        if self.steps < 1:
            raise ConfigError("sweep needs at least 1 step")
        if not self.max > self.min:
            raise ConfigError("sweep requires max > min")

    def values(self):
        step = (self.max - self.min) / self.steps
        return [self.min + i * step for i in range(self.steps + 1)]


@dataclass(frozen=True)
class RunConfig:
    wire: WireParams
    circuit: CircuitParams
    kappa: float
    gamma: float
    rate_convention: str
    k: int
    fock_cutoff: int
    lambda2_pinned: Optional[float]
    sweep: Optional[SweepSpec]
    out_dir: str
    formats: tuple[str, ...]
    curve_x_max: float
    curve_steps: int

    def normalized(self) -> dict:
        """Normalized parameter echo (rad/s everywhere) for output metadata."""
        return {
            "schema_version": SCHEMA_VERSION,
            "wire": {
                "v_F_m_per_s": self.wire.v_F,
                "L_m": self.wire.L,
                "W_m": self.wire.W,
                "T_K": self.wire.T,
                "Delta0_rad_per_s": self.wire.Delta0,
            },
            "circuit": {
                "E_J_rad_per_s": self.circuit.E_J,
                "E_J0_rad_per_s": self.circuit.E_J0,
                "E_c_rad_per_s": self.circuit.E_c,
                "omega_r_rad_per_s": self.circuit.omega_r,
                "n_g": self.circuit.n_g,
                "g": self.circuit.g,
                "phi_e_rad": self.circuit.phi_e,
                "phi_c_rad": self.circuit.phi_c,
                "eta": self.circuit.eta,
            },
            "bath": {
                "kappa_per_s": self.kappa,
                "gamma_per_s": self.gamma,
                "rate_convention": self.rate_convention,
            },
            "schedule": {
                "k": self.k,
                "fock_cutoff": self.fock_cutoff,
                "lambda2_rad_per_s": self.lambda2_pinned,
            },
            "curve": {"x_max": self.curve_x_max, "steps": self.curve_steps},
            "sweep": (
                None
                if self.sweep is None
                else {
                    "variable": self.sweep.variable,
                    "min": self.sweep.min,
                    "max": self.sweep.max,
                    "steps": self.sweep.steps,
                }
            ),
            "output": {"directory": self.out_dir, "formats": list(self.formats)},
        }


def default_config_dict() -> dict:
    """Built-in defaults: the device parameters used throughout the study."""
    return {
        "schema_version": SCHEMA_VERSION,
        "wire": {
            "v_F_m_per_s": 1e5,
            "L_m": 5e-6,
            "W_m": 1e-7,
            "T_K": 0.02,
            "Delta0": {"value": 32.0, "unit": "GHz", "times_2pi": True},
        },
        "circuit": {
            "E_J": {"value": 16.0, "unit": "GHz", "times_2pi": True},
            "E_J0": {"value": 160.0, "unit": "GHz", "times_2pi": True},
            "E_c": {"value": 160.0, "unit": "GHz", "times_2pi": True},
            "omega_r": {"value": 6.0, "unit": "GHz", "times_2pi": True},
            "n_g": 0.5,
            "g": 0.01,
            "phi_e_rad": 0.0,
            "phi_c_rad": 0.5,
        },
        "bath": {
            "kappa": {"value": 1.0, "unit": "MHz", "times_2pi": False},
            "gamma": {"value": 1.0, "unit": "MHz", "times_2pi": False},
            "rate_convention": "plain",
        },
        "schedule": {
            "k": 1,
            "fock_cutoff": 16,
            "lambda2": {"value": 32.0, "unit": "MHz", "times_2pi": True},
        },
        "curve": {"x_max": 1.1, "steps": 44},
        "sweep": None,
        "output": {"directory": "out", "formats": ["csv", "json", "svg"]},
    }


def parse_config(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    _require_keys(
        doc,
        {"schema_version", "wire", "circuit", "bath", "schedule", "curve", "sweep", "output"},
        {"schema_version", "wire", "circuit", "bath", "schedule"},
        "top level",
    )
    if doc["schema_version"] != SCHEMA_VERSION:
        raise ConfigError(
            f"unsupported schema_version {doc['schema_version']!r}; expected {SCHEMA_VERSION}"
        )

    w = doc["wire"]
    _require_keys(
        w,
        {"v_F_m_per_s", "L_m", "W_m", "T_K", "Delta0"},
        {"v_F_m_per_s", "L_m", "Delta0"},
        "wire",
    )
    try:
        wire = WireParams(
            v_F=float(w["v_F_m_per_s"]),
            L=float(w["L_m"]),
            Delta0=_frequency(w["Delta0"], "wire.Delta0"),
            W=float(w.get("W_m", 0.0)),
            T=float(w.get("T_K", 0.02)),
        )
    except ValueError as exc:
        raise ConfigError(f"wire: {exc}") from exc

    c = doc["circuit"]
    _require_keys(
        c,
        {"E_J", "E_J0", "E_c", "omega_r", "n_g", "g", "phi_e_rad", "phi_c_rad"},
        {"E_J", "E_J0", "E_c"},
        "circuit",
    )
    try:
        circuit = CircuitParams(
            E_J=_frequency(c["E_J"], "circuit.E_J"),
            E_J0=_frequency(c["E_J0"], "circuit.E_J0"),
            E_c=_frequency(c["E_c"], "circuit.E_c"),
            n_g=float(c.get("n_g", 0.5)),
            g=float(c.get("g", 0.01)),
            phi_e=float(c.get("phi_e_rad", 0.0)),
            phi_c=float(c.get("phi_c_rad", 0.0)),
            omega_r=_frequency(c["omega_r"], "circuit.omega_r") if "omega_r" in c else 0.0,
        )
    except ValueError as exc:
        raise ConfigError(f"circuit: {exc}") from exc

    b = doc["bath"]
    _require_keys(b, {"kappa", "gamma", "rate_convention"}, {"kappa", "gamma"}, "bath")
    convention = b.get("rate_convention", "plain")
    if convention not in ("plain", "angular"):
        raise ConfigError(f"bath.rate_convention must be 'plain' or 'angular', got {convention!r}")
    kappa = _frequency(b["kappa"], "bath.kappa", rate_convention=convention)
    gamma = _frequency(b["gamma"], "bath.gamma", rate_convention=convention)
    if kappa < 0 or gamma < 0:
        raise ConfigError("bath rates must be non-negative")

    s = doc["schedule"]
    _require_keys(s, {"k", "fock_cutoff", "lambda2"}, {"k"}, "schedule")
    k = s["k"]
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ConfigError("schedule.k must be a positive integer")
    fock = s.get("fock_cutoff", 16)
    if not isinstance(fock, int) or fock < 8:
        raise ConfigError("schedule.fock_cutoff must be an integer >= 8")
    lambda2_pinned = None
    if s.get("lambda2") is not None:
        lambda2_pinned = _frequency(s["lambda2"], "schedule.lambda2")
        if lambda2_pinned <= 0:
            raise ConfigError("schedule.lambda2 must be positive when given")

    curve = doc.get("curve") or {}
    _require_keys(curve, {"x_max", "steps"}, set(), "curve")
    x_max = float(curve.get("x_max", 1.1))
    steps = curve.get("steps", 44)
    if not isinstance(steps, int) or steps < 1 or x_max <= 0:
        raise ConfigError("curve requires integer steps >= 1 and x_max > 0")

    sweep = None
    if doc.get("sweep") is not None:
        sw = doc["sweep"]
        _require_keys(
            sw, {"variable", "min", "max", "steps"}, {"variable", "min", "max", "steps"}, "sweep"
        )
        if not isinstance(sw["steps"], int):
            raise ConfigError("sweep.steps must be an integer")
        sweep = SweepSpec(
            variable=str(sw["variable"]),
            min=float(sw["min"]),
            max=float(sw["max"]),
            steps=sw["steps"],
        )

    out = doc.get("output") or {}
    _require_keys(out, {"directory", "formats"}, set(), "output")
    formats = tuple(out.get("formats", ["csv", "json", "svg"]))
    bad = set(formats) - {"csv", "json", "svg"}
    if bad:
        raise ConfigError(f"unknown output formats {sorted(bad)}")

    return RunConfig(
        wire=wire,
        circuit=circuit,
        kappa=kappa,
        gamma=gamma,
        rate_convention=convention,
        k=k,
        fock_cutoff=fock,
        lambda2_pinned=lambda2_pinned,
        sweep=sweep,
        out_dir=str(out.get("directory", "out")),
        formats=formats,
        curve_x_max=x_max,
        curve_steps=steps,
    )


def load_config(path: Optional[str] = None) -> RunConfig:
    """Parse the config file at ``path``, or the built-in defaults if None."""
    if path is None:
        return parse_config(default_config_dict())
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return parse_config(doc)
