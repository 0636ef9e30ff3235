"""Command-line front end: presets, config files, CSV/summary/manifest output.

Outputs per campaign: ``samples.csv`` (one row per rate sample),
``summary.txt`` (stable ``scheme.metric = value`` lines), and
``manifest.json`` (the exact configuration; replaying it reproduces the
data files byte for byte).  Sweep presets write one subdirectory per
sweep point plus a top-level manifest listing them.

Value precedence: command-line flags override config-file values, which
override the built-in defaults.
"""

import argparse
import dataclasses
import json
import os
import sys
import time
from dataclasses import replace

import numpy as np

from . import __version__
from .errors import ConfigurationError, SimError
from .experiment import (CBF, RIS_OPT, ZFP, CampaignConfig, RateSamples,
                         run_campaign, summarize)
from .scenario import AreaSpec, generate_layout

_CONFIG_FIELDS = {f.name for f in dataclasses.fields(CampaignConfig)}

SAMPLES_NAME = "samples.csv"
SUMMARY_NAME = "summary.txt"
MANIFEST_NAME = "manifest.json"


def parse_config(path: str) -> CampaignConfig:
    """Load a JSON campaign configuration; unknown keys are rejected."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(
                f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
                f"{exc.msg}") from exc
    return config_from_dict(raw, source=path)


def config_from_dict(raw: dict, source: str = "config") -> CampaignConfig:
    if not isinstance(raw, dict):
        raise ConfigurationError(f"{source}: top level must be an object")
    unknown = set(raw) - _CONFIG_FIELDS
    if unknown:
        raise ConfigurationError(f"{source}: unknown keys {sorted(unknown)}")
    if "schemes" in raw:
        raw = dict(raw, schemes=tuple(raw["schemes"]))
    return CampaignConfig(**raw)


def serialize_config(cfg: CampaignConfig) -> dict:
    out = dataclasses.asdict(cfg)
    out["schemes"] = list(out["schemes"])
    return out


# ---------------------------------------------------------------------------
# presets

def _preset_fig3() -> list[tuple[str, CampaignConfig]]:
    return [("", CampaignConfig())]


def _preset_fig4() -> list[tuple[str, CampaignConfig]]:
    base = CampaignConfig(trials=150, realizations_per_trial=3, k=1)
    return [(f"K_{k:02d}", replace(base, k=k)) for k in range(1, 23)]


def _preset_fig5a() -> list[tuple[str, CampaignConfig]]:
    base = CampaignConfig(schemes=(CBF, ZFP), trials=300,
                          realizations_per_trial=1, s=0, n_per_surface=0)
    return [(f"M_{m}", replace(base, m=m)) for m in (100, 200, 500)]


def _preset_fig5b() -> list[tuple[str, CampaignConfig]]:
    base = CampaignConfig(schemes=(RIS_OPT,), trials=300, realizations_per_trial=3)
    points = [(1, 1000), (5, 100), (5, 200), (10, 100)]
    return [(f"S{s:02d}_N{n:04d}", replace(base, s=s, n_per_surface=n))
            for s, n in points]


PRESETS = {
    "fig3": _preset_fig3,
    "fig4": _preset_fig4,
    "fig5a": _preset_fig5a,
    "fig5b": _preset_fig5b,
}


# ---------------------------------------------------------------------------
# output files

def _format_rate(x: float) -> str:
    return f"{x:.9g}"


def write_samples_csv(path: str, cfg: CampaignConfig,
                      samples: RateSamples) -> RateSamples:
    """Write the flat sample file and return the grid as serialized.

    The returned copy holds the values exactly as they appear in the
    file (9 significant digits), so statistics derived from it agree
    with any tool that re-reads the CSV.
    """
    rounded: dict[str, np.ndarray] = {}
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write("scheme,trial,realization,user,rate_bps_hz\n")
        for scheme in cfg.schemes:
            grid = samples.rates[scheme]
            out = np.empty_like(grid)
            trials, reals, k = grid.shape
            for t in range(trials):
                for r in range(reals):
                    row = grid[t, r]
                    for u in range(k):
                        text = _format_rate(row[u])
                        out[t, r, u] = float(text)
                        fh.write(f"{scheme},{t},{r},{u},{text}\n")
            rounded[scheme] = out
    os.replace(tmp, path)
    return RateSamples(rates=rounded, redraws=samples.redraws)


def write_summary(path: str, cfg: CampaignConfig, samples: RateSamples) -> dict:
    stats = summarize(samples)
    lines = []
    for scheme in cfg.schemes:
        s = stats[scheme]
        lines.append(f"{scheme}.p05_se = {s.p05!r}")
        lines.append(f"{scheme}.median_se = {s.median!r}")
        lines.append(f"{scheme}.mean_sum_throughput = {s.mean_sum_throughput!r}")
        lines.append(f"{scheme}.samples = {s.samples}")
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)
    return stats


def _write_json(path: str, payload: dict) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)


def run_campaign_dir(cfg: CampaignConfig, out_dir: str, workers: int,
                     preset: str | None = None) -> dict:
    """Run one campaign and write its three output files."""
    os.makedirs(out_dir, exist_ok=True)
    started = time.time()
    samples = run_campaign(cfg, workers=workers)
    rounded = write_samples_csv(os.path.join(out_dir, SAMPLES_NAME), cfg, samples)
    stats = write_summary(os.path.join(out_dir, SUMMARY_NAME), cfg, rounded)
    manifest = {
        "tool": "cfris",
        "version": __version__,
        "preset": preset,
        "config": serialize_config(cfg),
        "seed": cfg.seed,
        "workers": workers,
        "redraws": samples.redraws,
        "started_unix": started,
        "finished_unix": time.time(),
        "outputs": {"samples": SAMPLES_NAME, "summary": SUMMARY_NAME},
    }
    _write_json(os.path.join(out_dir, MANIFEST_NAME), manifest)
    return stats


def _apply_overrides(cfg: CampaignConfig, args) -> CampaignConfig:
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.trials is not None:
        changes["trials"] = args.trials
    return replace(cfg, **changes) if changes else cfg


def cmd_run(args) -> int:
    if args.preset is not None:
        points = PRESETS[args.preset]()
    elif args.config is not None:
        points = [("", parse_config(args.config))]
    else:
        points = [("", CampaignConfig())]
    points = [(label, _apply_overrides(cfg, args)) for label, cfg in points]

    os.makedirs(args.out, exist_ok=True)
    if len(points) == 1 and points[0][0] == "":
        run_campaign_dir(points[0][1], args.out, args.workers, preset=args.preset)
        return 0

    for label, cfg in points:
        print(f"running {label} ...", file=sys.stderr)
        run_campaign_dir(cfg, os.path.join(args.out, label), args.workers,
                         preset=args.preset)
    _write_json(os.path.join(args.out, MANIFEST_NAME), {
        "tool": "cfris",
        "version": __version__,
        "preset": args.preset,
        "points": [{"label": label, "config": serialize_config(cfg)}
                   for label, cfg in points],
        "workers": args.workers,
    })
    return 0


def cmd_replay(args) -> int:
    with open(args.manifest, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    if "config" in manifest:
        cfg = config_from_dict(manifest["config"], source=args.manifest)
        run_campaign_dir(cfg, args.out, args.workers,
                         preset=manifest.get("preset"))
        return 0
    if "points" in manifest:
        for point in manifest["points"]:
            cfg = config_from_dict(point["config"], source=args.manifest)
            run_campaign_dir(cfg, os.path.join(args.out, point["label"]),
                             args.workers, preset=manifest.get("preset"))
        return 0
    raise ConfigurationError(f"{args.manifest}: neither 'config' nor 'points' present")


def cmd_layout(args) -> int:
    area = AreaSpec(side_length=args.side)
    layout = generate_layout(area, args.m, args.k, args.s,
                             np.random.default_rng(args.seed))
    rows = ["kind,index,x_m,y_m"]
    for i, p in enumerate(layout.ap_positions):
        rows.append(f"AP,{i},{p[0]:.9g},{p[1]:.9g}")
    rows.append(f"BS,0,{layout.bs_position[0]:.9g},{layout.bs_position[1]:.9g}")
    for i, p in enumerate(layout.ris_positions):
        rows.append(f"RIS,{i},{p[0]:.9g},{p[1]:.9g}")
    for i, p in enumerate(layout.user_positions):
        rows.append(f"UE,{i},{p[0]:.9g},{p[1]:.9g}")
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(rows) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfris",
        description="Monte Carlo comparison of cell-free massive MIMO and "
                    "RIS-aided downlinks")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a campaign or a figure preset")
    source = p_run.add_mutually_exclusive_group()
    source.add_argument("--preset", choices=sorted(PRESETS))
    source.add_argument("--config", help="JSON campaign configuration file")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--trials", type=int, default=None)
    p_run.add_argument("--workers", type=int, default=1)
    p_run.set_defaults(func=cmd_run)

    p_replay = sub.add_parser("replay", help="re-run a recorded manifest")
    p_replay.add_argument("manifest")
    p_replay.add_argument("--out", required=True)
    p_replay.add_argument("--workers", type=int, default=1)
    p_replay.set_defaults(func=cmd_replay)

    p_layout = sub.add_parser("layout", help="dump one random layout as CSV")
    p_layout.add_argument("--out", required=True)
    p_layout.add_argument("--seed", type=int, default=0)
    p_layout.add_argument("--m", type=int, default=100)
    p_layout.add_argument("--k", type=int, default=5)
    p_layout.add_argument("--s", type=int, default=5)
    p_layout.add_argument("--side", type=float, default=1000.0)
    p_layout.set_defaults(func=cmd_layout)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SimError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
