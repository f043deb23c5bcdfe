"""On-off-keying modem over the particle channel.

Text is sent as 8-bit codes of capital letters, one injection per 1-bit,
one symbol interval apart. All capital-letter codes begin 0,1,0, so every
character is guaranteed a pulse at its second symbol; the decoder uses the
first detected pulse peak for synchronization and then samples the trace at
fixed offsets, comparing against a constant threshold. Decoding is offline:
the whole trace is analyzed after the fact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import response_from_parameters, susceptibility
from .params import SystemParameters
from .trace import SusceptibilityTrace

__all__ = [
    "CHARACTER_PREFIX",
    "NOISE_RNG_ALGORITHM",
    "NoiseModel",
    "DetectionConfig",
    "DecodedMessage",
    "SynchronizationError",
    "IncompleteCharacterError",
    "encode_text",
    "decode_bits",
    "injection_times",
    "synthesize_trace",
    "detect_peaks",
    "decode_trace",
]

CHARACTER_PREFIX = (0, 1, 0)
BITS_PER_CHAR = 8
NOISE_RNG_ALGORITHM = "pcg64(numpy default_rng)"

# Synthesized traces extend past the last symbol until a lone pulse would
# have decayed to this fraction of its peak.
_TAIL_FRACTION = 0.01


class SynchronizationError(ValueError):
    """No above-threshold peak exists to synchronize on."""


class IncompleteCharacterError(ValueError):
    """Trace ends inside a character's sampling window."""

    def __init__(self, complete_characters: int):
        self.complete_characters = complete_characters
        super().__init__(
            f"trace too short for a full character after "
            f"{complete_characters} complete character(s)")


def encode_text(message: str) -> list[int]:
    """Encode capital letters A-Z as big-endian 8-bit codes."""
    bits: list[int] = []
    for ch in message:
        if not ("A" <= ch <= "Z"):
            raise ValueError(f"{ch!r} is not a capital letter A-Z")
        code = ord(ch)
        bits.extend((code >> (7 - i)) & 1 for i in range(8))
    return bits


def decode_bits(bits) -> str:
    """Inverse of :func:`encode_text`; checks the 0,1,0 prefix per character."""
    bits = _validated_bits(bits)
    if len(bits) % BITS_PER_CHAR != 0:
        raise ValueError(f"bit count {len(bits)} is not a multiple of {BITS_PER_CHAR}")
    chars = []
    for j in range(len(bits) // BITS_PER_CHAR):
        group = bits[j * BITS_PER_CHAR:(j + 1) * BITS_PER_CHAR]
        if tuple(group[:3]) != CHARACTER_PREFIX:
            raise ValueError(f"prefix violation at character {j}")
        code = 0
        for b in group:
            code = (code << 1) | b
        chars.append(chr(code))
    return "".join(chars)


def _validated_bits(bits) -> list[int]:
    out = [int(b) for b in bits]
    if any(b not in (0, 1) for b in out):
        raise ValueError("bits must be 0 or 1")
    return out


@dataclass(frozen=True)
class NoiseModel:
    """Receiver noise: additive level noise plus per-dose gain variation.

    The additive term is zero-mean Gaussian per sample; the per-pulse gain
    is ``1 + jitter`` with jitter Gaussian truncated at three standard
    deviations. Distribution shapes are modeling choices; the physical
    system constrains only their magnitudes.
    """

    additive_sigma: float = 0.0
    amplitude_jitter_sigma: float = 0.0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.additive_sigma < 0 or self.amplitude_jitter_sigma < 0:
            raise ValueError("noise standard deviations must be >= 0")


@dataclass(frozen=True)
class DetectionConfig:
    threshold: float           # constant decision level chi_0 (> 0)
    symbol_duration: float     # T [s]
    bits_per_char: int = BITS_PER_CHAR
    prefix: tuple[int, ...] = CHARACTER_PREFIX
    data_bit_offsets: tuple[int, ...] = (1, 2, 3, 4, 5)

    def __post_init__(self) -> None:
        if not (self.threshold > 0):
            raise ValueError("threshold must be positive")
        if not (self.symbol_duration > 0):
            raise ValueError("symbol_duration must be positive")
        offsets = tuple(int(k) for k in self.data_bit_offsets)
        if any(k < 1 for k in offsets) or list(offsets) != sorted(set(offsets)):
            raise ValueError("data_bit_offsets must be strictly increasing and >= 1")
        if self.bits_per_char != len(self.prefix) + len(offsets):
            raise ValueError("bits_per_char must equal prefix length plus offset count")
        object.__setattr__(self, "prefix", tuple(int(b) for b in self.prefix))
        object.__setattr__(self, "data_bit_offsets", offsets)


@dataclass
class DecodedMessage:
    bits: list[int]
    text: str
    sync_times: list[float]
    margins: np.ndarray  # (characters, sampled bits): signed chi minus threshold


def injection_times(bits, symbol_duration: float) -> list[float]:
    """Release instants for the 1-bits: symbol k injects at ``k * T``."""
    return [k * symbol_duration for k, b in enumerate(_validated_bits(bits)) if b]


def _truncated_normal(rng: np.random.Generator, sigma: float, size: int,
                      bound: float = 3.0) -> np.ndarray:
    draws = rng.normal(0.0, sigma, size)
    if sigma > 0:
        bad = np.abs(draws) > bound * sigma
        while bad.any():
            draws[bad] = rng.normal(0.0, sigma, int(bad.sum()))
            bad = np.abs(draws) > bound * sigma
    return draws


def synthesize_trace(bits, p: SystemParameters, beta: float,
                     noise: NoiseModel | None = None,
                     sample_rate: float = 50.0,
                     *,
                     amplitude_scale: float = 1.0,
                     include_baseline: bool = False) -> SusceptibilityTrace:
    """Linear superposition of one channel response per transmitted 1-bit.

    The trace spans ``(len(bits) + 2) * T`` plus the tail a lone pulse needs
    to decay to 1% of its peak. With ``noise`` unset the trace is exact; the
    optional ``amplitude_scale`` multiplies every pulse (measured amplitudes
    need not match the nominal dose-to-window ratio), and
    ``include_baseline`` adds the carrier liquid's susceptibility offset.
    """
    bits = _validated_bits(bits)
    if not (sample_rate > 0):
        raise ValueError("sample_rate must be positive")
    resp = response_from_parameters(p, beta)
    T = p.symbol_duration
    tail = resp.t_peak * _TAIL_FRACTION ** (-1.0 / (beta + 1.0))
    duration = (len(bits) + 2) * T + tail
    n = int(math.floor(duration * sample_rate)) + 1
    t = np.arange(n) / sample_rate

    rng = np.random.default_rng(noise.rng_seed) if noise is not None else None
    if noise is not None and noise.amplitude_jitter_sigma > 0:
        gains = 1.0 + _truncated_normal(rng, noise.amplitude_jitter_sigma, len(bits))
    else:
        gains = np.ones(len(bits))

    chi = np.zeros(n)
    for k, b in enumerate(bits):
        if not b:
            continue
        # The response is identically 0 until the entry time; skip that span.
        start = np.searchsorted(t, k * T + resp.t_entry, side="right")
        if start >= n:
            continue
        chi[start:] += gains[k] * amplitude_scale * susceptibility(t[start:] - k * T, resp, p)

    metadata = {
        "source": "synthesize_trace",
        "beta": repr(float(beta)),
        "sample_rate_hz": repr(float(sample_rate)),
        "amplitude_scale": repr(float(amplitude_scale)),
    }
    if noise is not None:
        if noise.additive_sigma > 0:
            chi += rng.normal(0.0, noise.additive_sigma, n)
        metadata["rng"] = NOISE_RNG_ALGORITHM
        metadata["rng_seed"] = str(noise.rng_seed)
    if include_baseline:
        chi += p.baseline_susceptibility
        metadata["baseline_offset"] = repr(p.baseline_susceptibility)
    return SusceptibilityTrace(t, chi, metadata)


def detect_peaks(trace: SusceptibilityTrace, threshold: float) -> list[float]:
    """Times of the maximum sample of each above-threshold excursion.

    An excursion is a maximal run of consecutive samples strictly above the
    threshold; ties within a run resolve to the earliest sample.
    """
    if not (threshold > 0):
        raise ValueError("threshold must be positive")
    if len(trace) == 0:
        raise ValueError("empty trace")
    above = np.flatnonzero(trace.values > threshold)
    if above.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(above) > 1)
    peak_times = []
    for run in np.split(above, breaks + 1):
        j = run[np.argmax(trace.values[run])]  # argmax takes the first maximum
        peak_times.append(float(trace.times[j]))
    return peak_times


def decode_trace(trace: SusceptibilityTrace, cfg: DetectionConfig) -> DecodedMessage:
    """Synchronize on the first pulse peak and threshold-sample the data bits.

    Character j is anchored at ``t0 + j * bits_per_char * T``; its prefix is
    reconstructed (never sampled) and each data bit k is 1 iff the
    interpolated trace value at ``anchor + T + k*T`` is strictly above the
    threshold. Decoding continues while the anchor instant itself is above
    the threshold, i.e. while a sync pulse is present; a character whose
    sampling window runs past the end of the trace raises
    :class:`IncompleteCharacterError`.
    """
    peaks = detect_peaks(trace, cfg.threshold)
    if not peaks:
        raise SynchronizationError("no synchronization")
    t0 = peaks[0]
    T = cfg.symbol_duration
    frame = cfg.bits_per_char * T

    bits: list[int] = []
    sync_times: list[float] = []
    margins: list[list[float]] = []
    j = 0
    while True:
        anchor = t0 + j * frame
        if anchor > trace.t_end:
            break
        if not (trace.value_at(anchor) > cfg.threshold):
            break
        last_sample = anchor + T + cfg.data_bit_offsets[-1] * T
        if last_sample > trace.t_end:
            raise IncompleteCharacterError(j)
        samples = [trace.value_at(anchor + T + k * T) for k in cfg.data_bit_offsets]
        bits.extend(cfg.prefix)
        bits.extend(1 if s > cfg.threshold else 0 for s in samples)
        margins.append([s - cfg.threshold for s in samples])
        sync_times.append(anchor)
        j += 1

    return DecodedMessage(
        bits=bits,
        text=decode_bits(bits),
        sync_times=sync_times,
        margins=np.array(margins) if margins else np.empty((0, len(cfg.data_bit_offsets))),
    )
