"""Dimensionless-number analysis and the laminar duct velocity field.

The carrier flow is characterized by its Reynolds number (laminar below
about 2100 in a circular duct) and by the Peclet number relative to d/a,
which decides whether advection or diffusion dominates transport over the
propagation distance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .params import SystemParameters

__all__ = [
    "LAMINAR_TURBULENT_REYNOLDS",
    "FlowField",
    "effective_velocity",
    "reynolds_number",
    "peclet_number",
    "flow_regime",
    "transport_regime",
    "velocity_at",
    "flow_field_from_parameters",
    "FlowAnalysis",
    "analyze_flow",
]

# Transition value for circular ducts.
LAMINAR_TURBULENT_REYNOLDS = 2100.0


@dataclass(frozen=True)
class FlowField:
    """Parabolic velocity profile ``v(r) = v0 * (1 - r^2/a^2)``."""

    center_velocity: float  # v0 [m/s]
    tube_radius: float      # a [m]

    def __post_init__(self) -> None:
        if not (self.center_velocity > 0):
            raise ValueError("center_velocity must be positive")
        if not (self.tube_radius > 0):
            raise ValueError("tube_radius must be positive")


def effective_velocity(p: SystemParameters) -> float:
    """Area-averaged carrier velocity in the duct.

    Parameters
    ----------
    p : SystemParameters
        Validated system parameters.

    Returns
    -------
    float
        ``Q_b / (pi * a**2)`` in m/s; equals half the centerline velocity
        for a parabolic profile.
    """
    return p.background_flow_rate / (math.pi * p.tube_radius**2)


def reynolds_number(p: SystemParameters) -> float:
    """Reynolds number of the carrier flow.

    Parameters
    ----------
    p : SystemParameters
        Validated system parameters.

    Returns
    -------
    float
        ``2a * v_eff / nu``. Compare against
        :data:`LAMINAR_TURBULENT_REYNOLDS` via :func:`flow_regime`.
    """
    return 2.0 * p.tube_radius * effective_velocity(p) / p.kinematic_viscosity


def peclet_number(p: SystemParameters) -> float:
    """Peclet number of particle transport in the duct.

    Parameters
    ----------
    p : SystemParameters
        Validated system parameters; requires a positive diffusion
        coefficient.

    Returns
    -------
    float
        ``a * v_eff / D``. Advection dominates over the propagation
        distance when this is much larger than ``d/a``; compare via
        :func:`transport_regime`.
    """
    return p.tube_radius * effective_velocity(p) / p.diffusion_coefficient


def flow_regime(reynolds: float) -> str:
    """Classify a Reynolds number as ``"laminar"`` or ``"turbulent"``."""
    return "laminar" if reynolds < LAMINAR_TURBULENT_REYNOLDS else "turbulent"


def transport_regime(peclet: float, d_over_a: float) -> str:
    """Classify transport as flow- or diffusion-dominated over distance d."""
    return "flow-dominated" if peclet > d_over_a else "diffusion-dominated"


def velocity_at(r, field: FlowField):
    """Axial velocity at radial offset(s) ``r``; zero at the wall ``r = a``."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0) or np.any(r_arr > field.tube_radius):
        raise ValueError("r must lie in [0, tube_radius]")
    v = field.center_velocity * (1.0 - (r_arr / field.tube_radius) ** 2)
    return float(v) if np.isscalar(r) or r_arr.ndim == 0 else v


def flow_field_from_parameters(p: SystemParameters) -> FlowField:
    """Parabolic field with ``v0 = 2 * v_eff`` from the background flow.

    The classification is advisory: above the transition Reynolds number a
    warning is emitted but the laminar profile is still returned.
    """
    re = reynolds_number(p)
    if flow_regime(re) == "turbulent":
        warnings.warn(
            f"Reynolds number {re:.0f} exceeds {LAMINAR_TURBULENT_REYNOLDS:.0f}; "
            "the parabolic profile assumes laminar flow",
            stacklevel=2,
        )
    return FlowField(center_velocity=2.0 * effective_velocity(p),
                     tube_radius=p.tube_radius)


@dataclass(frozen=True)
class FlowAnalysis:
    effective_velocity: float
    center_velocity: float
    reynolds: float
    peclet: float
    d_over_a: float
    flow_regime: str
    transport_regime: str


def analyze_flow(p: SystemParameters) -> FlowAnalysis:
    """Bundle the dimensionless numbers and classifications for reporting."""
    v_eff = effective_velocity(p)
    re = reynolds_number(p)
    pe = peclet_number(p)
    d_over_a = p.propagation_distance / p.tube_radius
    return FlowAnalysis(
        effective_velocity=v_eff,
        center_velocity=2.0 * v_eff,
        reynolds=re,
        peclet=pe,
        d_over_a=d_over_a,
        flow_regime=flow_regime(re),
        transport_regime=transport_regime(pe, d_over_a),
    )
