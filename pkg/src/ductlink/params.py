"""System parameter data model and the key-value configuration format.

Parameters describe the physical link: duct geometry, pump flow rates, the
injected dose, the susceptometer window, and material constants. Instances
are immutable and always valid; construction rejects the first violated
invariant by field name.
"""

from __future__ import annotations

import math
from dataclasses import MISSING, dataclass, fields
from pathlib import Path

from . import units

__all__ = [
    "SystemParameters",
    "validate_parameters",
    "receiver_volume",
    "baseline_parameters",
    "parse_parameter_file",
]


@dataclass(frozen=True)
class SystemParameters:
    tube_radius: float              # duct inner radius a [m]
    injection_tube_radius: float    # injection tube inner radius [m]
    receiver_radius: float          # sensing coil inner radius a_RX [m]
    receiver_length: float          # sensing coil axial length c_z [m]
    propagation_distance: float     # injection point to coil entrance d [m]
    background_flow_rate: float     # carrier flow Q_b [m^3/s]
    injection_flow_rate: float      # dose pump flow Q_p [m^3/s]
    injection_volume: float         # dose volume V_i [m^3]
    symbol_duration: float          # OOK symbol interval T [s]
    reference_susceptibility: float  # suspension susceptibility chi_ref [-]
    kinematic_viscosity: float = 1e-6    # carrier liquid nu [m^2/s]
    diffusion_coefficient: float = 1e-11  # particle diffusivity D [m^2/s]
    baseline_susceptibility: float = -9.04e-6  # carrier liquid chi [-]

    def __post_init__(self) -> None:
        _check_invariants(self)


# Fields that must be strictly positive, in declaration order. The two
# susceptibility baselines are exempt (water's is negative).
_POSITIVE_FIELDS = (
    "tube_radius",
    "injection_tube_radius",
    "receiver_radius",
    "receiver_length",
    "propagation_distance",
    "background_flow_rate",
    "injection_flow_rate",
    "injection_volume",
    "symbol_duration",
    "reference_susceptibility",
    "kinematic_viscosity",
    "diffusion_coefficient",
)


def _check_invariants(p: SystemParameters) -> None:
    for name in _POSITIVE_FIELDS:
        value = getattr(p, name)
        if not (isinstance(value, (int, float)) and math.isfinite(value)):
            raise ValueError(f"{name} must be a finite number")
        if value <= 0:
            raise ValueError(f"{name} must be positive")
    if not math.isfinite(p.baseline_susceptibility):
        raise ValueError("baseline_susceptibility must be a finite number")


def validate_parameters(p: SystemParameters) -> SystemParameters:
    """Re-check all invariants and return ``p`` unchanged. Idempotent."""
    _check_invariants(p)
    return p


def receiver_volume(p: SystemParameters) -> float:
    """Volume of the sensing window: ``c_z * pi * a_RX**2`` [m^3]."""
    return p.receiver_length * math.pi * p.receiver_radius**2


def baseline_parameters() -> SystemParameters:
    """Default configuration of the physical testbed this package models."""
    return SystemParameters(
        tube_radius=0.75 * units.MM,
        injection_tube_radius=0.40 * units.MM,
        receiver_radius=5.0 * units.MM,
        receiver_length=18.0 * units.MM,
        propagation_distance=5.0 * units.CM,
        background_flow_rate=5.0 * units.ML_PER_MIN,
        injection_flow_rate=5.26 * units.ML_PER_MIN,
        injection_volume=14.0 * units.UL,
        symbol_duration=4.0,
        reference_susceptibility=7.28e-3,
    )


# ---------------------------------------------------------------------------
# Parameter file format: one `key = value` per line, `#` starts a comment.
# Keys are field names with an explicit unit suffix (dimensionless fields
# use the bare field name), e.g. `tube_radius_mm = 0.75`.

_FIELD_SUFFIXES: dict[str, dict[str, float] | None] = {
    "tube_radius": units.LENGTH_SUFFIXES,
    "injection_tube_radius": units.LENGTH_SUFFIXES,
    "receiver_radius": units.LENGTH_SUFFIXES,
    "receiver_length": units.LENGTH_SUFFIXES,
    "propagation_distance": units.LENGTH_SUFFIXES,
    "background_flow_rate": units.FLOW_SUFFIXES,
    "injection_flow_rate": units.FLOW_SUFFIXES,
    "injection_volume": units.VOLUME_SUFFIXES,
    "symbol_duration": units.TIME_SUFFIXES,
    "reference_susceptibility": None,
    "kinematic_viscosity": units.DIFFUSIVITY_SUFFIXES,
    "diffusion_coefficient": units.DIFFUSIVITY_SUFFIXES,
    "baseline_susceptibility": None,
}

def _known_keys() -> dict[str, tuple[str, float]]:
    """Map accepted file keys to (field name, SI conversion factor)."""
    keys: dict[str, tuple[str, float]] = {}
    for field_name, suffixes in _FIELD_SUFFIXES.items():
        if suffixes is None:
            keys[field_name] = (field_name, 1.0)
        else:
            for suffix, factor in suffixes.items():
                keys[f"{field_name}_{suffix}"] = (field_name, factor)
    return keys


_KEY_TABLE = _known_keys()

_EXAMPLE_KEYS = {
    "tube_radius": "tube_radius_mm",
    "injection_tube_radius": "injection_tube_radius_mm",
    "receiver_radius": "receiver_radius_mm",
    "receiver_length": "receiver_length_mm",
    "propagation_distance": "propagation_distance_cm",
    "background_flow_rate": "background_flow_rate_ml_per_min",
    "injection_flow_rate": "injection_flow_rate_ml_per_min",
    "injection_volume": "injection_volume_ul",
    "symbol_duration": "symbol_duration_s",
    "reference_susceptibility": "reference_susceptibility",
}


def _classify_unknown_key(key: str) -> str:
    for field_name in _FIELD_SUFFIXES:
        if key == field_name or key.startswith(field_name + "_"):
            suffix = key[len(field_name) + 1:] or "(none)"
            return f"unknown unit suffix '{suffix}' for {field_name}"
    return f"unknown key '{key}'"


def parse_parameter_file(path: str | Path) -> SystemParameters:
    """Read a key-value parameter file and return validated SI parameters."""
    text = Path(path).read_text(encoding="utf-8")
    resolved: dict[str, float] = {}
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value_text = line.partition("=")
        key = key.strip()
        value_text = value_text.strip()
        if key not in _KEY_TABLE:
            raise ValueError(f"line {lineno}: {_classify_unknown_key(key)}")
        field_name, factor = _KEY_TABLE[key]
        if field_name in seen:
            raise ValueError(f"line {lineno}: duplicate value for {field_name}")
        try:
            value = float(value_text)
        except ValueError:
            raise ValueError(f"line {lineno}: malformed number for '{key}': {value_text!r}") from None
        resolved[field_name] = value * factor
        seen.add(field_name)

    for field in fields(SystemParameters):
        required = field.default is MISSING and field.default_factory is MISSING
        if required and field.name not in resolved:
            example = _EXAMPLE_KEYS.get(field.name, field.name)
            raise ValueError(f"missing required key for {field.name} (e.g. '{example}')")
    return SystemParameters(**resolved)
