"""Experiment configuration: flat key=value files with dotted section keys.

Example::

    timing.t_on=0.3
    timing.t_off=2.0
    channel.flow_rate=1.24
    ...
    bits.value=10110
    preamble=1

The `paper-like` preset ships with the package (``presets/paper_like.cfg``)
and carries the calibrated channel and detector settings used by the
acceptance scenarios. The environment variable ``BUBBLELINK_SEED``
overrides ``channel.rng_seed``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .channel import ChannelParams
from .dsp import KalmanParams, MafParams, default_maf_window, default_min_distance
from .errors import ValidationError
from .modem import Bits, TimingMode, TimingParams, validate_bits

SEED_ENV_VAR = "BUBBLELINK_SEED"

PRESETS = {"paper-like": "paper_like.cfg"}

BRANCHES = ("raw", "maf", "kalman")


@dataclass(frozen=True)
class ExperimentConfig:
    timing: TimingParams
    channel: ChannelParams
    maf: MafParams
    kalman: KalmanParams | None  # None -> tuned per trace at run time
    peak_min_distance: int
    peak_thresholds: dict[str, float | None]  # per branch; None -> heuristic
    tolerance: float
    decode_window: float
    dose: float
    preamble: int
    payload: Bits

    @property
    def bits(self) -> Bits:
        """Preamble 1-bits followed by the payload."""
        return [1] * self.preamble + list(self.payload)


def parse_config_text(text: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def preset_text(name: str) -> str:
    if name not in PRESETS:
        raise ValidationError(f"unknown preset {name!r}; available: {sorted(PRESETS)}")
    return resources.files("bubblelink.presets").joinpath(PRESETS[name]).read_text("utf-8")


def _get_float(values: dict[str, str], key: str, default: float | None = None) -> float:
    if key not in values:
        if default is None:
            raise ValidationError(f"config: missing required key {key!r}")
        return default
    try:
        return float(values[key])
    except ValueError:
        raise ValidationError(f"config key {key!r}: cannot parse {values[key]!r} as a number") from None


def _get_int(values: dict[str, str], key: str, default: int | None = None) -> int:
    if key not in values:
        if default is None:
            raise ValidationError(f"config: missing required key {key!r}")
        return default
    try:
        return int(values[key])
    except ValueError:
        raise ValidationError(f"config key {key!r}: cannot parse {values[key]!r} as an integer") from None


def _resolve_payload(values: dict[str, str]) -> Bits:
    if "bits.length" in values:
        length = _get_int(values, "bits.length")
        seed = _get_int(values, "bits.seed", 0)
        if length < 0:
            raise ValidationError("bits.length must be non-negative")
        rng = np.random.Generator(np.random.PCG64(seed))
        return [int(b) for b in rng.random(length) < 0.5]
    if "bits.value" in values:
        text = values["bits.value"]
        bad = set(text) - {"0", "1"}
        if bad:
            raise ValidationError(f"bits.value: invalid characters {sorted(bad)!r}")
        return validate_bits([int(c) for c in text])
    raise ValidationError("config: provide bits.value or bits.length")


def build_timing(values: dict[str, str]) -> TimingParams:
    try:
        mode = TimingMode(values.get("timing.mode", "framed"))
    except ValueError:
        raise ValidationError(
            f"timing.mode must be 'framed' or 'variable', got {values['timing.mode']!r}"
        ) from None
    return TimingParams(
        t_on=_get_float(values, "timing.t_on"),
        t_off=_get_float(values, "timing.t_off"),
        mode=mode,
    )


def build_channel(values: dict[str, str]) -> ChannelParams:
    seed = _get_int(values, "channel.rng_seed", 0)
    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError:
            raise ValidationError(f"{SEED_ENV_VAR}={env_seed!r} is not an integer") from None

    return ChannelParams(
        flow_rate=_get_float(values, "channel.flow_rate"),
        tube_diameter=_get_float(values, "channel.tube_diameter"),
        distance_to_sensor=_get_float(values, "channel.distance_to_sensor"),
        loop_length=_get_float(values, "channel.loop_length"),
        dispersion_coeff=_get_float(values, "channel.dispersion_coeff"),
        initial_spread=_get_float(values, "channel.initial_spread"),
        pass_decay=_get_float(values, "channel.pass_decay"),
        echo_cutoff=_get_float(values, "channel.echo_cutoff"),
        noise_std=_get_float(values, "channel.noise_std", 0.0),
        spike_rate=_get_float(values, "channel.spike_rate", 0.0),
        spike_amplitude_max=_get_float(values, "channel.spike_amplitude_max", 0.0),
        sample_interval=_get_float(values, "channel.sample_interval"),
        rng_seed=seed,
        max_samples=_get_int(values, "channel.max_samples", 1_000_000),
    )


def build_config(values: dict[str, str]) -> ExperimentConfig:
    timing = build_timing(values)
    channel = build_channel(values)

    dt = channel.sample_interval
    maf = MafParams(window=_get_int(values, "maf.window", default_maf_window(dt, timing.t_on)))

    kalman = None
    if "kalman.q" in values or "kalman.r" in values:
        kalman = KalmanParams(
            q=_get_float(values, "kalman.q"),
            r=_get_float(values, "kalman.r"),
            x0=_get_float(values, "kalman.x0", 0.0),
            p0=_get_float(values, "kalman.p0", _get_float(values, "kalman.r")),
        )

    thresholds: dict[str, float | None] = {}
    base = values.get("peak.threshold")
    for branch in BRANCHES:
        specific = values.get(f"peak.threshold.{branch}", base)
        thresholds[branch] = float(specific) if specific is not None else None

    tolerance = _get_float(values, "tolerance", 1.0)
    if not tolerance > 0:
        raise ValidationError("tolerance must be positive")
    decode_window = _get_float(
        values, "decode.window", min(tolerance, timing.symbol_duration / 2)
    )
    preamble = _get_int(values, "preamble", 1)
    if preamble < 1:
        raise ValidationError("preamble must be at least 1 (decode delay estimation needs it)")

    return ExperimentConfig(
        timing=timing,
        channel=channel,
        maf=maf,
        kalman=kalman,
        peak_min_distance=_get_int(values, "peak.min_distance", default_min_distance(dt)),
        peak_thresholds=thresholds,
        tolerance=tolerance,
        decode_window=decode_window,
        dose=_get_float(values, "dose", 1.0),
        preamble=preamble,
        payload=_resolve_payload(values),
    )


def load_config(
    path: str | None = None,
    preset: str | None = None,
    overrides: dict[str, str] | None = None,
) -> ExperimentConfig:
    """Build an ExperimentConfig from a file and/or preset plus overrides.

    Override keys replace base keys; setting ``bits.length`` in the overrides
    discards any ``bits.value`` from the base (and vice versa).
    """
    if path is None and preset is None:
        raise ValidationError("a config file or a preset is required")
    values: dict[str, str] = {}
    if preset is not None:
        values.update(parse_config_text(preset_text(preset)))
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                values.update(parse_config_text(fh.read()))
        except FileNotFoundError:
            raise
    if overrides:
        if "bits.length" in overrides:
            values.pop("bits.value", None)
        if "bits.value" in overrides:
            values.pop("bits.length", None)
            values.pop("bits.seed", None)
        values.update(overrides)
    return build_config(values)
