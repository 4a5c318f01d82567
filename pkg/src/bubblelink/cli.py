"""Command-line entry points for the microbubble communication toolkit.

Exit codes: 0 on success, 2 on validation/configuration errors, 1 on I/O
and resource errors.
"""

from __future__ import annotations

import argparse
import sys

from . import config as cfgmod
from . import dsp, metrics, plot, trace_io
from .channel import simulate
from .errors import ResourceLimitError, ValidationError
from .modem import TimingMode, TimingParams, decode, encode, validate_bits
from .pipeline import run_pipeline


def _parse_bits_arg(text: str):
    bad = set(text) - {"0", "1"}
    if bad:
        raise ValidationError(f"--bits: invalid characters {sorted(bad)!r}")
    return validate_bits([int(c) for c in text])


def _timing_from_args(args) -> TimingParams:
    return TimingParams(t_on=args.t_on, t_off=args.t_off, mode=TimingMode(args.mode))


def _collect_values(args) -> dict[str, str]:
    overrides = {}
    for item in args.set or []:
        if "=" not in item:
            raise ValidationError(f"--set expects key=value, got {item!r}")
        key, _, value = item.partition("=")
        overrides[key.strip()] = value.strip()
    return overrides


def cmd_encode(args) -> int:
    bits = trace_io.read_bits(args.bits_file) if args.bits_file else _parse_bits_arg(args.bits)
    schedule = encode(bits, _timing_from_args(args), args.dose)
    trace_io.write_schedule(schedule, args.out)
    return 0


def cmd_simulate(args) -> int:
    values = {}
    if args.preset:
        values.update(cfgmod.parse_config_text(cfgmod.preset_text(args.preset)))
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            values.update(cfgmod.parse_config_text(fh.read()))
    values.update(_collect_values(args))
    params = cfgmod.build_channel(values)
    schedule = trace_io.read_schedule(args.schedule)
    trace_io.write_trace(simulate(schedule, params), args.out)
    return 0


def cmd_filter(args) -> int:
    trace = trace_io.read_trace(args.infile)
    if args.method == "maf":
        window = args.window or dsp.default_maf_window(trace.sample_interval)
        out = dsp.moving_average(trace, dsp.MafParams(window))
    else:
        if args.q is not None and args.r is not None:
            x0 = args.x0 if args.x0 is not None else float(trace.samples[0])
            p0 = args.p0 if args.p0 is not None else args.r
            params = dsp.KalmanParams(q=args.q, r=args.r, x0=x0, p0=p0)
        else:
            params = dsp.default_kalman_params(trace)
        out = dsp.kalman_filter(trace, params)
    trace_io.write_trace(out, args.out)
    return 0


def cmd_detect(args) -> int:
    trace = trace_io.read_trace(args.infile)
    threshold = args.threshold if args.threshold is not None else dsp.default_threshold(trace)
    min_distance = args.min_distance or dsp.default_min_distance(trace.sample_interval)
    peaks = dsp.detect_peaks(trace, dsp.PeakDetectParams(threshold, min_distance))
    trace_io.write_peaks(peaks, args.out)
    return 0


def cmd_decode(args) -> int:
    peaks = trace_io.read_peaks(args.peaks)
    timing = _timing_from_args(args)
    window = args.window if args.window is not None else timing.symbol_duration / 2
    bits = decode(peaks, timing, args.delay, args.n_bits, window)
    trace_io.write_bits(bits, args.out)
    return 0


def cmd_evaluate(args) -> int:
    peaks = trace_io.read_peaks(args.peaks)
    truth = trace_io.read_schedule(args.truth)
    if args.truth_shift:
        truth = truth.shifted(args.truth_shift)
    match = metrics.match_peaks(peaks, truth, args.tolerance)
    peaks_total = args.peaks_total if args.peaks_total is not None else len(truth)
    report = metrics.build_report(match, peaks_total)
    lines = [
        "key,value",
        f"tp,{match.tp}",
        f"fp,{match.fp}",
        f"fn,{match.fn}",
        f"precision,{report.precision:.9g}",
        f"recall,{report.recall:.9g}",
        f"f1,{report.f1:.9g}",
        f"ber,{report.ber:.9g}",
        f"bsr,{report.bsr:.9g}",
        f"peaks_total,{peaks_total}",
    ]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_pipeline(args) -> int:
    cfg = cfgmod.load_config(path=args.config, preset=args.preset, overrides=_collect_values(args))
    results = run_pipeline(cfg, args.out_dir)
    for name, res in results.items():
        r = res.report
        print(f"{name}: f1={r.f1:.4f} ber={r.ber:.4f} bsr={r.bsr:.4f}")
        if res.warning:
            print(f"{name}: warning: {res.warning}", file=sys.stderr)
    return 0


def cmd_plot(args) -> int:
    trace = trace_io.read_trace(args.trace)
    peaks = trace_io.read_peaks(args.peaks) if args.peaks else None
    truth = trace_io.read_schedule(args.truth) if args.truth else None
    plot.write_svg(args.out, trace, peaks, truth)
    return 0


def _add_timing_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t-on", type=float, required=True, help="injection duration in seconds")
    p.add_argument("--t-off", type=float, required=True, help="idle duration in seconds")
    p.add_argument("--mode", choices=["framed", "variable"], default="framed")


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="path to a key=value config file")
    p.add_argument("--preset", choices=sorted(cfgmod.PRESETS), help="built-in config preset")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bubblelink",
        description="Microbubble OOK communication toolkit: encode, simulate, filter, detect, decode, evaluate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="bits -> injection schedule CSV")
    p.add_argument("--bits", help="bit string, e.g. 10110")
    p.add_argument("--bits-file", help="file holding the bit string")
    _add_timing_flags(p)
    p.add_argument("--dose", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_encode, check=lambda a: a.bits is not None or a.bits_file is not None,
                   check_msg="encode requires --bits or --bits-file")

    p = sub.add_parser("simulate", help="schedule CSV -> sensor trace CSV")
    p.add_argument("--schedule", required=True)
    _add_config_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("filter", help="smooth a trace with MAF or Kalman")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--method", choices=["maf", "kalman"], required=True)
    p.add_argument("--window", type=int, help="MAF window in samples")
    p.add_argument("--q", type=float, help="Kalman process-noise variance")
    p.add_argument("--r", type=float, help="Kalman measurement-noise variance")
    p.add_argument("--x0", type=float, help="Kalman initial state")
    p.add_argument("--p0", type=float, help="Kalman initial variance")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("detect", help="trace CSV -> peaks CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--threshold", type=float, help="default: half the 95th percentile")
    p.add_argument("--min-distance", type=int, help="default: ~1 s in samples")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("decode", help="peaks CSV -> bits (framed mode)")
    p.add_argument("--peaks", required=True)
    _add_timing_flags(p)
    p.add_argument("--delay", type=float, required=True, help="channel delay in seconds")
    p.add_argument("--n-bits", type=int, required=True)
    p.add_argument("--window", type=float, help="acceptance half-width, default T_sym/2")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("evaluate", help="score detected peaks against a truth schedule")
    p.add_argument("--peaks", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--tolerance", type=float, default=1.0)
    p.add_argument("--truth-shift", type=float, default=0.0,
                   help="shift truth times by this many seconds (e.g. channel transit time)")
    p.add_argument("--peaks-total", type=int, help="BER denominator, default: number of truth events")
    p.add_argument("--out", help="report CSV path; default: stdout")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("pipeline", help="full encode->simulate->filter->detect->evaluate run")
    _add_config_flags(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("plot", help="render a trace (plus peaks/truth) to SVG")
    p.add_argument("--trace", required=True)
    p.add_argument("--peaks")
    p.add_argument("--truth")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        check = getattr(args, "check", None)
        if check is not None and not check(args):
            raise ValidationError(args.check_msg)
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
