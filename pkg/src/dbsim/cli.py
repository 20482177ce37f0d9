"""Command line experiments: ``run``, ``sweep`` and ``compare``.

Configuration files are flat ``key = value`` documents (``#`` starts a
comment). Every key is optional; unknown keys are rejected::

    n_d = 15
    n_g = 10000
    side_l = 1000
    radius_r = 30
    radius_overlap = 60
    phi = 25
    loss = 5
    drone_speed = 5
    node_step = 1
    t_max = 1000
    check_interval = 1
    seed = 0
    policy = feedback        # or randomwalk

A ``run_meta.json`` written by any command is also accepted as ``--config``;
it carries the resolved configuration and the experiment grid, so passing it
back reproduces the original artifacts.

Exit status: 0 on success, 1 on configuration errors, 2 on I/O errors.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .engine import run as run_engine
from .metrics import average_connectivity, drone_stats, trend_slope
from .model import Policy, SimConfig, ValidationError

__all__ = [
    "ParseError",
    "UnknownKey",
    "ExperimentSpec",
    "parse_config",
    "render_config",
    "cmd_run",
    "cmd_sweep",
    "cmd_compare",
    "main",
]

CONFIG_KEYS = tuple(f.name for f in fields(SimConfig))
_INT_KEYS = {"n_d", "n_g", "phi", "loss", "t_max", "check_interval", "seed"}
_FLOAT_KEYS = {"side_l", "radius_r", "radius_overlap", "drone_speed", "node_step"}
POLICY_ORDER = (Policy.FEEDBACK, Policy.RANDOM_WALK)

TIMESERIES_HEADER = ["t", "drone_id", "m"]
SUMMARY_HEADER = ["drone_id", "mean_m", "min_m", "max_m", "final_m"]
SWEEP_HEADER = ["n_d", "seed", "policy", "avg_connectivity"]
AGGREGATE_HEADER = [
    "n_d", "policy", "mean_avg_connectivity", "min_avg_connectivity", "max_avg_connectivity",
]
COMPARE_HEADER = ["t", "mean_m_feedback", "mean_m_randomwalk"]


class ParseError(ValidationError):
    pass


class UnknownKey(ParseError):
    pass


def fmt(x: float) -> str:
    """Six significant digits, locale independent."""
    return format(float(x), ".6g")


def _convert(key: str, raw: str):
    raw = raw.strip()
    if key == "policy":
        return Policy.parse(raw)
    try:
        if key in _INT_KEYS:
            return int(raw, 10)
        return float(raw)
    except ValueError:
        raise ParseError(f"{key}: cannot parse {raw!r} as a number") from None


def parse_config(text: str) -> SimConfig:
    cp = configparser.ConfigParser(
        delimiters=("=",), comment_prefixes=("#",), inline_comment_prefixes=("#",),
        interpolation=None, default_section="\0none",
    )
    cp.optionxform = str
    try:
        cp.read_string("[sim]\n" + text)
    except configparser.Error as exc:
        raise ParseError(f"malformed configuration: {exc}") from None
    if cp.sections() != ["sim"]:
        raise ParseError("section headers are not allowed in a configuration")
    values = {}
    for key, raw in cp["sim"].items():
        if key not in CONFIG_KEYS:
            raise UnknownKey(f"unknown configuration key {key!r}; valid keys: {', '.join(CONFIG_KEYS)}")
        values[key] = _convert(key, raw)
    return SimConfig(**values)


def render_config(config: SimConfig) -> str:
    lines = []
    for key in CONFIG_KEYS:
        v = getattr(config, key)
        if key == "policy":
            v = v.value
        elif key in _FLOAT_KEYS:
            v = repr(float(v))
        lines.append(f"{key} = {v}")
    return "\n".join(lines) + "\n"


@dataclass
class ExperimentSpec:
    base: SimConfig
    drone_counts: list[int] = field(default_factory=list)
    seeds: list[int] = field(default_factory=list)
    policies: list[Policy] = field(default_factory=lambda: list(POLICY_ORDER))
    out_dir: Path = Path("out")

    def __post_init__(self):
        self.out_dir = Path(self.out_dir)
        self.policies = [p for p in POLICY_ORDER if p in {Policy.parse(q) for q in self.policies}]
        if not self.policies:
            raise ValidationError("at least one policy is required")
        for n in self.drone_counts:
            if isinstance(n, bool) or int(n) != n or n < 1:
                raise ValidationError(f"drone counts must be positive integers, got {n!r}")
        for s in self.seeds:
            if isinstance(s, bool) or int(s) != s or not 0 <= s < 2 ** 64:
                raise ValidationError(f"seeds must be 64-bit unsigned integers, got {s!r}")


def load_config(path) -> tuple[SimConfig, dict]:
    """Read a key-value config or a ``run_meta.json``; returns ``(config, experiment)``."""
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        try:
            meta = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: invalid JSON: {exc}") from None
        if "config_text" not in meta:
            raise ParseError(f"{path}: not a run_meta document")
        return parse_config(meta["config_text"]), meta.get("experiment", {})
    return parse_config(text), {}


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _write_meta(out_dir: Path, config: SimConfig, experiment: dict) -> dict:
    config_text = render_config(config)
    canonical = json.dumps({"config_text": config_text, "experiment": experiment}, sort_keys=True)
    meta = {
        "config": config.as_dict(),
        "config_text": config_text,
        "experiment": experiment,
        "spec_hash": hashlib.sha256(canonical.encode()).hexdigest(),
        "rng": "PCG64 raw stream; uniform=(raw>>11)*2^-53, bit=raw>>63",
    }
    (out_dir / "run_meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return meta


def cmd_run(spec: ExperimentSpec) -> Path:
    """Single run; writes timeseries.csv, summary.csv and run_meta.json."""
    config = spec.base
    spec.out_dir.mkdir(parents=True, exist_ok=True)
    result = run_engine(config)
    _write_csv(
        spec.out_dir / "timeseries.csv",
        TIMESERIES_HEADER,
        ((tr.t, i, int(m)) for tr in result.traces for i, m in enumerate(tr.per_drone_m)),
    )
    _write_csv(
        spec.out_dir / "summary.csv",
        SUMMARY_HEADER,
        ((s.drone_id, fmt(s.mean_m), s.min_m, s.max_m, s.final_m) for s in drone_stats(result.traces)),
    )
    _write_meta(spec.out_dir, config, {"command": "run", "seed": config.seed, "policy": config.policy.value})
    return spec.out_dir


def _cell(config: SimConfig) -> float:
    return average_connectivity(run_engine(config).traces)


def cmd_sweep(spec: ExperimentSpec, jobs: int = 1) -> Path:
    """Grid over drone counts, seeds and policies; writes sweep.csv and aggregate.csv."""
    if not spec.drone_counts:
        raise ValidationError("sweep needs at least one drone count")
    if not spec.seeds:
        raise ValidationError("sweep needs at least one seed")
    spec.out_dir.mkdir(parents=True, exist_ok=True)
    cells = [
        (n, s, p) for n in spec.drone_counts for s in spec.seeds for p in spec.policies
    ]
    configs = [replace(spec.base, n_d=n, seed=s, policy=p) for n, s, p in cells]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            values = list(ex.map(_cell, configs))
    else:
        values = [_cell(c) for c in configs]

    _write_csv(
        spec.out_dir / "sweep.csv",
        SWEEP_HEADER,
        ((n, s, p.value, fmt(v)) for (n, s, p), v in zip(cells, values)),
    )
    agg_rows = []
    for n in spec.drone_counts:
        for p in spec.policies:
            vals = np.array([v for (cn, _, cp), v in zip(cells, values) if cn == n and cp == p])
            agg_rows.append((n, p.value, fmt(vals.mean()), fmt(vals.min()), fmt(vals.max())))
    _write_csv(spec.out_dir / "aggregate.csv", AGGREGATE_HEADER, agg_rows)
    _write_meta(spec.out_dir, spec.base, {
        "command": "sweep",
        "drone_counts": list(spec.drone_counts),
        "seeds": list(spec.seeds),
        "trials_per_cell": len(spec.seeds),
        "policies": [p.value for p in spec.policies],
    })
    return spec.out_dir


def cmd_compare(spec: ExperimentSpec) -> str:
    """Both policies on the same seed; writes compare.csv and verdict.txt, returns the verdict."""
    spec.out_dir.mkdir(parents=True, exist_ok=True)
    base = spec.base
    results = {p: run_engine(replace(base, policy=p)) for p in POLICY_ORDER}
    means = {p: r.m_matrix.mean(axis=1) for p, r in results.items()}
    fb, rw = means[Policy.FEEDBACK], means[Policy.RANDOM_WALK]
    _write_csv(
        spec.out_dir / "compare.csv",
        COMPARE_HEADER,
        ((t, fmt(a), fmt(b)) for t, (a, b) in enumerate(zip(fb, rw))),
    )
    avg = {p: average_connectivity(r.traces) for p, r in results.items()}
    slope = {p: (trend_slope(means[p]) if len(means[p]) >= 2 else 0.0) for p in POLICY_ORDER}
    better = avg[Policy.FEEDBACK] > avg[Policy.RANDOM_WALK]
    verdict = (
        f"avg_connectivity_feedback={fmt(avg[Policy.FEEDBACK])} "
        f"avg_connectivity_randomwalk={fmt(avg[Policy.RANDOM_WALK])} "
        f"slope_feedback={fmt(slope[Policy.FEEDBACK])} "
        f"slope_randomwalk={fmt(slope[Policy.RANDOM_WALK])} "
        f"feedback_better={'true' if better else 'false'}"
    )
    (spec.out_dir / "verdict.txt").write_text(verdict + "\n")
    _write_meta(spec.out_dir, base, {
        "command": "compare",
        "seeds": {p.value: base.seed for p in POLICY_ORDER},
        "policies": [p.value for p in POLICY_ORDER],
    })
    return verdict


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValidationError(f"expected a comma-separated list of integers, got {text!r}") from None


def parse_seeds(text: str) -> list[int]:
    """``"10"`` means seeds 0..9; anything with a comma is an explicit list."""
    if "," in text:
        return _int_list(text)
    try:
        count = int(text)
    except ValueError:
        raise ValidationError(f"--seeds expects a count or comma list, got {text!r}") from None
    if count < 1:
        raise ValidationError("--seeds count must be at least 1")
    return list(range(count))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dbsim", description="Drone base station mobility simulator")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="single run: per-tick and per-drone connectivity")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="out")
    p.add_argument("--seed", type=int)
    p.add_argument("--policy", choices=[q.value for q in Policy])

    p = sub.add_parser("sweep", help="average connectivity over drone counts and seeds")
    p.add_argument("--config", required=True)
    p.add_argument("--drones")
    p.add_argument("--seeds")
    p.add_argument("--policies", choices=["both", "feedback", "randomwalk"])
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("compare", help="feedback policy against the random-walk baseline")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config, exp = load_config(args.config)
        if args.command == "run":
            if args.seed is not None:
                config = replace(config, seed=args.seed)
            if args.policy is not None:
                config = replace(config, policy=args.policy)
            cmd_run(ExperimentSpec(config, out_dir=args.out))
            print(f"wrote {args.out}")
        elif args.command == "sweep":
            drones = _int_list(args.drones) if args.drones else exp.get("drone_counts")
            seeds = parse_seeds(args.seeds) if args.seeds else exp.get("seeds", list(range(10)))
            if not drones:
                raise ValidationError("--drones is required")
            if args.policies in (None, "both"):
                policies = exp.get("policies", list(POLICY_ORDER)) if args.policies is None else list(POLICY_ORDER)
            else:
                policies = [args.policies]
            spec = ExperimentSpec(config, drones, seeds, policies, args.out)
            cmd_sweep(spec, jobs=args.jobs)
            print(f"wrote {args.out}")
        else:
            print(cmd_compare(ExperimentSpec(config, out_dir=args.out)))
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
