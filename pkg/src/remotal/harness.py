"""Experiment orchestration: declarative configs, reports, the property
suite driver, and the golden max-norm reproduction.

A config is a JSON object; reports echo the full config so re-running the
echo reproduces every numeric value bit for bit on the same platform.
CSV floats are printed with 17 significant digits for round-trip exactness.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from ._version import __version__
from .diagnostics import (
    DecayProfile,
    Thresholds,
    Verdict,
    chebyshev_profile,
    classify,
    gd_identity_profile,
    get_sphere,
    one_over_n_schedule,
    q_decay_profile,
    uniform_decay_profile,
)
from .errors import SamplingFloorError, ValidationError
from .farthest import farthest_mask
from .norms import NormSpec, norm_values
from .propcheck import ALL_CHECKS, PropertyCase
from .sets import Scheme, sampling_floor
from .setmetrics import pair_extreme_value

PROFILE_KINDS = ("q-decay", "uniform", "gd-identity", "chebyshev")


@dataclass(frozen=True)
class ExperimentConfig:
    norm: NormSpec
    resolution: int
    profile: str
    delta_schedule: tuple[float, ...] | None = None
    schedule_n_max: int | None = None
    probes: tuple[tuple[float, ...], ...] | None = None
    probe_count: int | None = None
    probe_seed: int = 0
    scheme: Scheme | None = None
    output_format: str | None = None  # "csv" | "json"
    output_path: str | None = None
    thresholds: Thresholds = field(default_factory=Thresholds)

    @staticmethod
    def from_json(obj: dict) -> "ExperimentConfig":
        if not isinstance(obj, dict):
            raise ValidationError("config: expected a JSON object")
        if "norm" not in obj:
            raise ValidationError("config.norm: required")
        norm = NormSpec.from_json(obj["norm"])
        resolution = obj.get("resolution")
        if not isinstance(resolution, int) or resolution < 3:
            raise ValidationError("config.resolution: expected an integer >= 3")
        profile = obj.get("profile", "q-decay")
        if profile not in PROFILE_KINDS:
            raise ValidationError(
                f"config.profile: expected one of {PROFILE_KINDS}, got {profile!r}"
            )

        schedule, n_max = _parse_schedule(obj.get("delta_schedule"))
        probes, probe_count, probe_seed = _parse_probes(obj.get("probes"), norm.dim)
        scheme = Scheme.from_json(obj["scheme"]) if "scheme" in obj else None

        out_format = out_path = None
        if "output" in obj:
            out = obj["output"]
            if not isinstance(out, dict) or out.get("format") not in ("csv", "json"):
                raise ValidationError("config.output.format: expected csv or json")
            if not isinstance(out.get("path"), str):
                raise ValidationError("config.output.path: expected a string")
            out_format, out_path = out["format"], out["path"]

        thresholds = Thresholds()
        if "thresholds" in obj:
            th = obj["thresholds"]
            if not isinstance(th, dict):
                raise ValidationError("config.thresholds: expected an object")
            try:
                thresholds = Thresholds(
                    lur_eps=float(th.get("lur_eps", Thresholds.lur_eps)),
                    tol=float(th.get("tol", Thresholds.tol)),
                    stall_factor=float(th.get("stall_factor", Thresholds.stall_factor)),
                )
            except (TypeError, ValueError):
                raise ValidationError("config.thresholds: fields must be numbers") from None

        return ExperimentConfig(
            norm=norm,
            resolution=resolution,
            profile=profile,
            delta_schedule=schedule,
            schedule_n_max=n_max,
            probes=probes,
            probe_count=probe_count,
            probe_seed=probe_seed,
            scheme=scheme,
            output_format=out_format,
            output_path=out_path,
            thresholds=thresholds,
        )

    def to_json(self) -> dict:
        out: dict = {
            "norm": self.norm.to_json(),
            "resolution": self.resolution,
            "profile": self.profile,
        }
        if self.schedule_n_max is not None:
            out["delta_schedule"] = {"kind": "one-over-n", "n_max": self.schedule_n_max}
        elif self.delta_schedule is not None:
            out["delta_schedule"] = list(self.delta_schedule)
        if self.probes is not None:
            out["probes"] = [list(p) for p in self.probes]
        elif self.probe_count is not None:
            out["probes"] = {"count": self.probe_count, "seed": self.probe_seed}
        if self.scheme is not None:
            out["scheme"] = self.scheme.to_json()
        if self.output_format is not None:
            out["output"] = {"format": self.output_format, "path": self.output_path}
        out["thresholds"] = {
            "lur_eps": self.thresholds.lur_eps,
            "tol": self.thresholds.tol,
            "stall_factor": self.thresholds.stall_factor,
        }
        return out


def _parse_schedule(raw):
    if raw is None:
        return None, 20  # default: 1/n down to n = 20
    if isinstance(raw, dict):
        if raw.get("kind") != "one-over-n":
            raise ValidationError("config.delta_schedule.kind: expected 'one-over-n'")
        n_max = raw.get("n_max")
        if not isinstance(n_max, int) or n_max < 1:
            raise ValidationError("config.delta_schedule.n_max: expected an integer >= 1")
        return None, n_max
    if isinstance(raw, (list, tuple)):
        try:
            deltas = tuple(float(d) for d in raw)
        except (TypeError, ValueError):
            raise ValidationError("config.delta_schedule: entries must be numbers") from None
        if not deltas:
            raise ValidationError("config.delta_schedule: must be non-empty")
        return deltas, None
    raise ValidationError("config.delta_schedule: expected a list or a one-over-n object")


def _parse_probes(raw, dim: int):
    if raw is None:
        return None, None, 0
    if isinstance(raw, dict):
        count = raw.get("count")
        if not isinstance(count, int) or count < 1:
            raise ValidationError("config.probes.count: expected an integer >= 1")
        seed = raw.get("seed", 0)
        if not isinstance(seed, int):
            raise ValidationError("config.probes.seed: expected an integer")
        return None, count, seed
    if isinstance(raw, (list, tuple)):
        probes = []
        for k, p in enumerate(raw):
            try:
                pt = tuple(float(c) for c in p)
            except (TypeError, ValueError):
                raise ValidationError(f"config.probes[{k}]: expected a point") from None
            if len(pt) != dim:
                raise ValidationError(f"config.probes[{k}]: expected {dim} coordinates")
            if not any(pt):
                raise ValidationError(f"config.probes[{k}]: probe must be nonzero")
            probes.append(pt)
        if not probes:
            raise ValidationError("config.probes: must be non-empty")
        return tuple(probes), None, 0
    raise ValidationError("config.probes: expected a list of points or {count, seed}")


@dataclass(frozen=True)
class Report:
    config: dict
    profiles: tuple[DecayProfile, ...]
    verdicts: tuple[Verdict, ...]
    property_summary: dict | None
    wall_clock_s: float
    version: str = __version__

    def to_json(self) -> dict:
        return {
            "config": self.config,
            "profiles": [p.to_json() for p in self.profiles],
            "verdicts": [v.to_json() for v in self.verdicts],
            "property_summary": self.property_summary,
            "wall_clock_s": self.wall_clock_s,
            "version": self.version,
        }


def _resolve_schedule(config: ExperimentConfig) -> list[float]:
    sample = get_sphere(config.norm, config.resolution, config.scheme)
    floor = sampling_floor(sample)
    if config.delta_schedule is not None:
        deltas = list(config.delta_schedule)
        if min(deltas) < floor:
            raise SamplingFloorError(
                f"config.delta_schedule: minimum {min(deltas):g} is below the "
                f"sampling floor {floor:g} at resolution {config.resolution}"
            )
        return deltas
    return one_over_n_schedule(config.schedule_n_max, floor)


def run_experiment(config: ExperimentConfig) -> Report:
    """Execute the configured profiles, classify, optionally write output."""
    start = time.perf_counter()
    deltas = _resolve_schedule(config)
    profiles: list[DecayProfile] = []

    if config.profile == "q-decay":
        for probe in _pointwise_probes(config):
            profiles.append(
                q_decay_profile(config.norm, probe, deltas, config.resolution, config.scheme)
            )
    elif config.profile == "chebyshev":
        for probe in _pointwise_probes(config):
            profiles.append(
                chebyshev_profile(config.norm, probe, deltas, config.resolution, config.scheme)
            )
    elif config.profile == "uniform":
        count = config.probe_count if config.probe_count is not None else 8
        profiles.append(
            uniform_decay_profile(
                config.norm, count, deltas, config.resolution, config.probe_seed, config.scheme
            )
        )
    else:  # gd-identity
        if config.probes is None or len(config.probes) != 2:
            raise ValidationError("config.probes: gd-identity needs exactly two probes")
        profiles.append(
            gd_identity_profile(
                config.norm,
                config.probes[0],
                config.probes[1],
                deltas,
                config.resolution,
                config.scheme,
            )
        )

    verdicts = tuple(classify(profiles, config.thresholds))
    report = Report(
        config=config.to_json(),
        profiles=tuple(profiles),
        verdicts=verdicts,
        property_summary=None,
        wall_clock_s=time.perf_counter() - start,
    )
    if config.output_format is not None:
        write_report(report, config.output_format, config.output_path)
    return report


def _pointwise_probes(config: ExperimentConfig):
    if config.probes is not None:
        return [np.asarray(p, dtype=np.float64) for p in config.probes]
    raise ValidationError("config.probes: this profile kind needs explicit probes")


def write_report(report: Report, fmt: str, path: str):
    import json as _json

    if fmt == "json":
        with open(path, "w", encoding="utf-8") as fh:
            _json.dump(report.to_json(), fh, indent=2)
            fh.write("\n")
        return
    if len(report.profiles) == 1:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(report.profiles[0].to_csv())
        return
    stem, dot, ext = path.rpartition(".")
    base = stem if dot else path
    for k, profile in enumerate(report.profiles):
        target = f"{base}.{k}.{ext}" if dot else f"{base}.{k}"
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(profile.to_csv())


# -- golden reproduction -------------------------------------------------------


@dataclass(frozen=True)
class ReproRow:
    probe: tuple[float, float]
    n: int
    d_value: float
    expected: float
    abs_err: float


REPRO_CSV_HEADER = "probe_x,probe_y,n,d_value,expected,abs_err"

_DEFAULT_REPRO_PROBES = ((1.0, 0.0), (1.0, 0.5))


def reproduce_linf_r2(
    n_max: int,
    resolution: int,
    probes: tuple[tuple[float, float], ...] = _DEFAULT_REPRO_PROBES,
) -> list[ReproRow]:
    """Antipodal infimal-distance table for the max norm on R^2.

    For unit-sphere probes x, the distance between the almost-farthest sets
    of x and -x at level 1/n equals 2*(1 - 1/n); each row reports the
    sampled value against that closed form.
    """
    if n_max < 1:
        raise ValidationError("n_max must be >= 1")
    norm = NormSpec.lp(math.inf, 2)
    sample = get_sphere(norm, resolution)
    floor = sampling_floor(sample)
    if 1.0 / n_max < floor:
        raise SamplingFloorError(
            f"resolution {resolution} has sampling floor {floor:g}, too coarse for n_max {n_max}"
        )
    pts = sample.points
    rows: list[ReproRow] = []
    for probe in probes:
        x = np.asarray(probe, dtype=np.float64)
        d_pos = norm_values(norm, x[None, :] - pts)
        d_neg = norm_values(norm, -x[None, :] - pts)
        r_pos = float(d_pos.max())
        r_neg = float(d_neg.max())
        for n in range(1, n_max + 1):
            delta = 1.0 / n
            q_pos = pts[farthest_mask(d_pos, r_pos, delta)]
            q_neg = pts[farthest_mask(d_neg, r_neg, delta)]
            d_val = pair_extreme_value(q_pos, q_neg, norm, "min")
            expected = 2.0 * (1.0 - delta)
            rows.append(
                ReproRow(
                    probe=(float(x[0]), float(x[1])),
                    n=n,
                    d_value=d_val,
                    expected=expected,
                    abs_err=abs(d_val - expected),
                )
            )
    return rows


def repro_rows_to_csv(rows: list[ReproRow]) -> str:
    lines = [REPRO_CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.probe[0]:.17g},{r.probe[1]:.17g},{r.n},"
            f"{r.d_value:.17g},{r.expected:.17g},{r.abs_err:.17g}"
        )
    return "\n".join(lines) + "\n"


# -- property suite driver --------------------------------------------------------


def run_property_suite(
    seed: int, trials_per_property: int
) -> tuple[dict, list[PropertyCase]]:
    """Run every check; returns (summary, all cases)."""
    if trials_per_property < 1:
        raise ValidationError("trials_per_property must be >= 1")
    summary: dict = {}
    all_cases: list[PropertyCase] = []
    for name, fn in ALL_CHECKS.items():
        cases = fn(seed, trials_per_property)
        failures = sum(1 for c in cases if c.outcome == "fail")
        summary[name] = {"trials": len(cases), "failures": failures}
        all_cases.extend(cases)
    summary["total_failures"] = sum(v["failures"] for v in summary.values() if isinstance(v, dict))
    return summary, all_cases
