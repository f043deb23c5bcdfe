"""Command-line interface tying the toolkit together.

Subcommands: analyze, response, oracle, transmit, synthesize, decode, fit.
Every randomized subcommand requires an explicit --seed; runs that write an
output file also write ``<output>.manifest`` (use --manifest to get one for
stdout output). Errors exit nonzero with a single ``error: ...`` line.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__, channel, estimation, hydrodynamics, modem, oracle
from .manifest import RunManifest, write_manifest
from .params import SystemParameters, parse_parameter_file
from .trace import SusceptibilityTrace, read_trace, write_trace


def _load_params(args) -> SystemParameters:
    return parse_parameter_file(args.params)


def _new_manifest(args, p: SystemParameters | None = None, **extras: str) -> RunManifest:
    m = RunManifest(subcommand=args.command, version=__version__)
    if p is not None:
        m.parameters = {k: float(v) for k, v in asdict(p).items()}
    for name in ("params", "trace"):
        path = getattr(args, name, None)
        if path:
            m.add_input(path)
    seed = getattr(args, "seed", None)
    if seed is not None:
        m.seeds["seed"] = seed
    m.extras.update(extras)
    return m


def _emit(args, manifest: RunManifest) -> None:
    out = getattr(args, "out", None)
    target = args.manifest or (str(out) + ".manifest" if out else None)
    if target:
        write_manifest(manifest, target)


def _write_or_print_trace(trace: SusceptibilityTrace, out: str | None) -> None:
    if out:
        write_trace(trace, out)
    else:
        sys.stdout.write("time_s,chi\n")
        for t, v in zip(trace.times.tolist(), trace.values.tolist()):
            sys.stdout.write(f"{t!r},{v!r}\n")


def _cmd_analyze(args) -> int:
    p = _load_params(args)
    a = hydrodynamics.analyze_flow(p)
    print(f"v_eff_mm_per_s = {a.effective_velocity * 1e3:.6g}")
    print(f"v0_mm_per_s = {a.center_velocity * 1e3:.6g}")
    print(f"reynolds = {a.reynolds:.6g}")
    print(f"peclet = {a.peclet:.6g}")
    print(f"d_over_a = {a.d_over_a:.6g}")
    print(f"classification = {a.flow_regime}, {a.transport_regime}")
    _emit(args, _new_manifest(args, p))
    return 0


def _cmd_response(args) -> int:
    p = _load_params(args)
    resp = channel.response_from_parameters(p, args.beta)
    n = int(args.duration * args.rate) + 1
    t = args.t_start + np.arange(n) / args.rate
    trace = SusceptibilityTrace(t, channel.susceptibility(t, resp, p))
    _write_or_print_trace(trace, args.out)
    _emit(args, _new_manifest(args, p, beta=repr(args.beta)))
    return 0


def _cmd_oracle(args) -> int:
    p = _load_params(args)
    resp = channel.response_from_parameters(p, args.beta)
    if args.times:
        points = tuple(float(s) for s in args.times.split(","))
    else:
        t_max = args.t_max if args.t_max is not None else 5.0 * resp.t_peak
        points = tuple(np.linspace(0.0, t_max, args.points))
    cfg = oracle.OracleConfig(args.particles, args.seed, points)
    run = oracle.run_oracle(resp, cfg)

    lines = ["time_s,analytic,monte_carlo,abs_err,tolerance"]
    lines += [f"{pt.time!r},{pt.analytic!r},{pt.monte_carlo!r},{pt.abs_err!r},{pt.tolerance!r}"
              for pt in run.points]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    ok = sum(pt.within_tolerance for pt in run.points)
    verdict = "PASS" if run.all_within_tolerance else "FAIL"
    print(f"oracle: {verdict} ({ok}/{len(run.points)} points within tolerance)")
    _emit(args, _new_manifest(args, p, rng_algorithm=run.rng_algorithm,
                              beta=repr(args.beta)))
    return 0 if run.all_within_tolerance else 1


def _cmd_transmit(args) -> int:
    bits = modem.encode_text(args.text)
    T = args.symbol_duration
    lines = ["symbol_index,bit,injection_time_s"]
    lines += [f"{k},{b},{k * T!r}" for k, b in enumerate(bits)]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    _emit(args, _new_manifest(args, None, symbol_duration_s=repr(T)))
    return 0


def _parse_bits(text: str) -> list[int]:
    cleaned = text.replace(",", "").replace(" ", "")
    if not cleaned or any(c not in "01" for c in cleaned):
        raise ValueError("--bits must be a string of 0s and 1s")
    return [int(c) for c in cleaned]


def _cmd_synthesize(args) -> int:
    p = _load_params(args)
    bits = modem.encode_text(args.text) if args.text is not None else _parse_bits(args.bits)
    noisy = args.noise_sigma > 0 or args.jitter_sigma > 0
    if noisy and args.seed is None:
        raise ValueError("--seed is required when synthesizing with noise")
    noise = None
    if noisy:
        noise = modem.NoiseModel(additive_sigma=args.noise_sigma,
                                 amplitude_jitter_sigma=args.jitter_sigma,
                                 rng_seed=args.seed)
    trace = modem.synthesize_trace(
        bits, p, args.beta, noise, args.rate,
        amplitude_scale=args.amplitude_scale,
        include_baseline=args.include_baseline)
    _write_or_print_trace(trace, args.out)
    extras = {"beta": repr(args.beta)}
    if noisy:
        extras["rng_algorithm"] = modem.NOISE_RNG_ALGORITHM
    _emit(args, _new_manifest(args, p, **extras))
    return 0


def _cmd_decode(args) -> int:
    trace = read_trace(args.trace)
    cfg = modem.DetectionConfig(threshold=args.threshold,
                                symbol_duration=args.symbol_duration)
    message = modem.decode_trace(trace, cfg)
    print(f"text = {message.text}")
    print(f"bits = {''.join(str(b) for b in message.bits)}")
    print("sync_times_s = " + ",".join(repr(t) for t in message.sync_times))
    if args.report:
        lines = ["char_index,offset_k,sample_time_s,bit,margin"]
        for j, anchor in enumerate(message.sync_times):
            for col, k in enumerate(cfg.data_bit_offsets):
                t_k = anchor + cfg.symbol_duration + k * cfg.symbol_duration
                bit = message.bits[j * cfg.bits_per_char + len(cfg.prefix) + col]
                lines.append(f"{j},{k},{t_k!r},{bit},{float(message.margins[j, col])!r}")
        Path(args.report).write_text("\n".join(lines) + "\n", encoding="utf-8")
    _emit(args, _new_manifest(args, None, threshold=repr(args.threshold)))
    return 0


def _cmd_fit(args) -> int:
    p = _load_params(args)
    trace = read_trace(args.trace)
    if args.average_pulses:
        if args.threshold is None:
            raise ValueError("--average-pulses requires --threshold")
        trace = estimation.average_pulses(trace, args.average_pulses, args.threshold)
    window = tuple(args.window) if args.window else None
    result = estimation.fit_beta(
        trace, p,
        window=window,
        threshold=args.threshold,
        free_amplitude=args.free_amplitude,
        beta_max=args.beta_max)
    print(f"beta_hat = {result.beta_hat!r}")
    print(f"time_shift_s = {result.time_shift!r}")
    print(f"amplitude_scale = {result.amplitude_scale!r}")
    print(f"residual_sse = {result.residual_sse!r}")
    print(f"iterations = {result.iterations}")
    print(f"converged = {result.converged}")
    print(f"window_s = {result.window[0]!r},{result.window[1]!r}")
    if args.curve_out:
        sub = trace.windowed(*result.window)
        resp = channel.response_from_parameters(p, result.beta_hat)
        fitted = result.amplitude_scale * channel.susceptibility(
            sub.times + result.time_shift, resp, p)
        lines = ["time_s,measured,fitted,residual"]
        lines += [f"{t!r},{m!r},{f!r},{f - m!r}"
                  for t, m, f in zip(sub.times.tolist(), sub.values.tolist(), fitted.tolist())]
        Path(args.curve_out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    _emit(args, _new_manifest(args, p))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ductlink",
        description="Flow-driven molecular communication link toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, **kwargs):
        sp = sub.add_parser(name, help=help_text, **kwargs)
        sp.add_argument("--manifest", help="write a run manifest to this path")
        return sp

    sp = add("analyze", "dimensionless numbers and flow classification")
    sp.add_argument("--params", required=True, help="parameter file")

    sp = add("response", "emit the single-release susceptibility pulse as CSV")
    sp.add_argument("--params", required=True)
    sp.add_argument("--beta", type=float, required=True, help="release shape parameter")
    sp.add_argument("--duration", type=float, required=True, help="grid length [s]")
    sp.add_argument("--t-start", type=float, default=0.0)
    sp.add_argument("--rate", type=float, default=50.0, help="sample rate [Hz]")
    sp.add_argument("--out", help="output CSV (default stdout)")

    sp = add("oracle", "Monte Carlo check of the closed-form response")
    sp.add_argument("--params", required=True)
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--particles", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--points", type=int, default=20, help="number of time points")
    sp.add_argument("--t-max", type=float, default=None,
                    help="last time point [s] (default 5 peak times)")
    sp.add_argument("--times", help="explicit comma-separated time points [s]")
    sp.add_argument("--out", help="output CSV (default stdout)")

    sp = add("transmit", "bit schedule for a text message")
    sp.add_argument("--text", required=True, help="capital letters A-Z")
    sp.add_argument("--symbol-duration", type=float, required=True, help="T [s]")
    sp.add_argument("--out", help="output CSV (default stdout)")

    sp = add("synthesize", "synthesize the received trace for a message")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--text", help="capital letters A-Z")
    group.add_argument("--bits", help="bit string, e.g. 01000110")
    sp.add_argument("--params", required=True)
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--noise-sigma", type=float, default=0.0,
                    help="additive noise standard deviation")
    sp.add_argument("--jitter-sigma", type=float, default=0.0,
                    help="relative per-pulse gain standard deviation")
    sp.add_argument("--seed", type=int, default=None,
                    help="RNG seed (required when noise is on)")
    sp.add_argument("--rate", type=float, default=50.0)
    sp.add_argument("--amplitude-scale", type=float, default=1.0)
    sp.add_argument("--include-baseline", action="store_true",
                    help="add the carrier liquid susceptibility offset")
    sp.add_argument("--out", help="output CSV (default stdout)")

    sp = add("decode", "decode a trace to text and bits")
    sp.add_argument("--trace", required=True, help="trace CSV")
    sp.add_argument("--threshold", type=float, required=True)
    sp.add_argument("--symbol-duration", type=float, required=True)
    sp.add_argument("--report", help="per-bit margins CSV")

    sp = add("fit", "fit the release shape parameter to a pulse")
    sp.add_argument("--trace", required=True)
    sp.add_argument("--params", required=True)
    sp.add_argument("--threshold", type=float, default=None)
    sp.add_argument("--free-amplitude", action="store_true")
    sp.add_argument("--window", type=float, nargs=2, metavar=("T0", "T1"))
    sp.add_argument("--average-pulses", type=int, default=None, metavar="K")
    sp.add_argument("--beta-max", type=float, default=50.0)
    sp.add_argument("--curve-out", help="CSV of measured vs fitted values")

    return parser


_HANDLERS = {
    "analyze": _cmd_analyze,
    "response": _cmd_response,
    "oracle": _cmd_oracle,
    "transmit": _cmd_transmit,
    "synthesize": _cmd_synthesize,
    "decode": _cmd_decode,
    "fit": _cmd_fit,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (ValueError, OSError) as exc:
        message = str(exc).splitlines()[0] if str(exc) else exc.__class__.__name__
        print(f"error: {message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
