"""Conversion factors between configuration units and internal SI units.

All computation inside the package is done in SI base units; the factors
below are applied once when external values are ingested.
"""

MM = 1e-3
CM = 1e-2
UM = 1e-6

ML = 1e-6
UL = 1e-9

MS = 1e-3
MINUTE = 60.0

ML_PER_MIN = ML / MINUTE

# Accepted key suffixes in parameter files, per quantity kind.
LENGTH_SUFFIXES = {"m": 1.0, "cm": CM, "mm": MM, "um": UM}
FLOW_SUFFIXES = {"m3_per_s": 1.0, "ml_per_min": ML_PER_MIN}
VOLUME_SUFFIXES = {"m3": 1.0, "ml": ML, "ul": UL}
TIME_SUFFIXES = {"s": 1.0, "ms": MS}
DIFFUSIVITY_SUFFIXES = {"m2_per_s": 1.0}
