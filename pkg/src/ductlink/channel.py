"""Closed-form channel model for an axially concentrated particle release.

A dose released at the injection site is described by a radially symmetric
cross-sectional density with a single shape parameter ``beta`` (0 = uniform;
larger values concentrate the dose toward the centerline). Pure advection by
the parabolic profile then gives a piecewise closed form for the probability
that a particle is inside the sensing window at time t, and the expected
susceptibility signal is that probability scaled by the dose-to-window
volume ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hydrodynamics import flow_field_from_parameters
from .params import SystemParameters, receiver_volume

__all__ = [
    "InitialDistribution",
    "SystemResponse",
    "initial_pdf",
    "radial_cdf",
    "system_response",
    "peak",
    "susceptibility",
    "pulse_amplitude",
    "peak_susceptibility",
    "response_from_parameters",
]


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not (math.isfinite(beta) and beta >= 0):
        raise ValueError("shape parameter beta must be >= 0")
    return beta


@dataclass(frozen=True)
class InitialDistribution:
    """Cross-sectional release density ``(beta+1)/(pi a^2) (1 - r^2/a^2)^beta``."""

    beta: float
    tube_radius: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", _check_beta(self.beta))
        if not (self.tube_radius > 0):
            raise ValueError("tube_radius must be positive")


@dataclass(frozen=True)
class SystemResponse:
    """Probability-of-observation pulse for one release.

    Zero until the fastest particles reach the window at ``d/v0``, rising to
    its peak when they leave it at ``(d + c_z)/v0``, then decaying like
    ``t**-(beta+1)``.
    """

    beta: float
    distance: float         # d [m]
    receiver_length: float  # c_z [m]
    center_velocity: float  # v0 [m/s]

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", _check_beta(self.beta))
        for name in ("distance", "receiver_length", "center_velocity"):
            if not (getattr(self, name) > 0):
                raise ValueError(f"{name} must be positive")

    @property
    def t_entry(self) -> float:
        return self.distance / self.center_velocity

    @property
    def t_peak(self) -> float:
        return (self.distance + self.receiver_length) / self.center_velocity


def initial_pdf(x, y, dist: InitialDistribution):
    """Release density at cross-section point(s) ``(x, y)`` [1/m^2]."""
    x_arr = np.asarray(x, dtype=float)
    y_arr = np.asarray(y, dtype=float)
    rho2 = x_arr**2 + y_arr**2
    a2 = dist.tube_radius**2
    if np.any(rho2 > a2):
        raise ValueError("point outside the duct cross section")
    out = (dist.beta + 1.0) / (math.pi * a2) * (1.0 - rho2 / a2) ** dist.beta
    scalar = np.isscalar(x) and np.isscalar(y)
    return float(out) if scalar or out.ndim == 0 else out


def radial_cdf(rho, dist: InitialDistribution):
    """Probability that a released particle lies within radius ``rho``."""
    rho_arr = np.asarray(rho, dtype=float)
    if np.any(rho_arr < 0) or np.any(rho_arr > dist.tube_radius):
        raise ValueError("rho must lie in [0, tube_radius]")
    out = 1.0 - (1.0 - (rho_arr / dist.tube_radius) ** 2) ** (dist.beta + 1.0)
    return float(out) if np.isscalar(rho) or out.ndim == 0 else out


def system_response(t, resp: SystemResponse):
    """Probability that a released particle is inside the window at time ``t``.

    Accepts scalars or arrays; times at or before the entry time (including
    negative times) map to exactly 0. Branch values agree at the breakpoints,
    so each breakpoint is assigned to one branch with no tolerance games.
    """
    scalar = np.ndim(t) == 0
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    e = resp.beta + 1.0
    v0 = resp.center_velocity
    d = resp.distance
    d_exit = d + resp.receiver_length
    out = np.zeros_like(t_arr)

    rising = (t_arr > resp.t_entry) & (t_arr < resp.t_peak)
    if np.any(rising):
        out[rising] = 1.0 - (d / (v0 * t_arr[rising])) ** e
    decaying = t_arr >= resp.t_peak
    if np.any(decaying):
        out[decaying] = (d_exit**e - d**e) / (v0 * t_arr[decaying]) ** e
    return float(out[0]) if scalar else out


def peak(resp: SystemResponse) -> tuple[float, float]:
    """Peak time and height of the response pulse.

    The pulse is maximal when the fastest particles exit the window:
    ``t_peak = (d + c_z)/v0`` with height ``1 - (1 + c_z/d)**-(beta+1)``.
    """
    height = 1.0 - (1.0 + resp.receiver_length / resp.distance) ** (-(resp.beta + 1.0))
    return resp.t_peak, height


def pulse_amplitude(p: SystemParameters) -> float:
    """Susceptibility scale of one dose: ``chi_ref * V_i / V_RX``."""
    return p.reference_susceptibility * p.injection_volume / receiver_volume(p)


def susceptibility(t, resp: SystemResponse, p: SystemParameters):
    """Expected susceptibility signal of one release at time(s) ``t``."""
    return pulse_amplitude(p) * system_response(t, resp)


def peak_susceptibility(resp: SystemResponse, p: SystemParameters) -> tuple[float, float]:
    """Peak time and peak susceptibility of one release."""
    t_pk, height = peak(resp)
    return t_pk, pulse_amplitude(p) * height


def response_from_parameters(p: SystemParameters, beta: float) -> SystemResponse:
    """Response for the configured geometry with ``v0`` derived from ``Q_b``."""
    field = flow_field_from_parameters(p)
    return SystemResponse(
        beta=beta,
        distance=p.propagation_distance,
        receiver_length=p.receiver_length,
        center_velocity=field.center_velocity,
    )
