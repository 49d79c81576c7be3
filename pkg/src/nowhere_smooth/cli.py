"""Command-line front end.

    nowhere-smooth curve          [--config F] [--out DIR] [--top N] [--seed N]
    nowhere-smooth cantor-curve   [--config F] [--out DIR] [--top N] [--seed N]
    nowhere-smooth verify         [--config F] [--out DIR] [--grid N]
    nowhere-smooth singularities  [--config F] [--top N]

The config file is flat ``key = value`` text (``#`` starts a comment); flags
override it.  Exit codes: 0 success, 2 profile invalid, 3 config invalid,
4 verification not achievable at the requested resolution.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import cantor_profile as cp
from . import neighborhood_lab as nl
from . import polar_curve as pc
from . import radial_profile as rp
from .errors import ConfigurationError, EmptyErosion, InsufficientScales, NonPositiveProfile, NoneFound

EXIT_OK, EXIT_PROFILE, EXIT_CONFIG, EXIT_RESOLUTION = 0, 2, 3, 4


def _floats(text: str) -> tuple:
    return tuple(float(t) for t in text.split(",") if t.strip())


def _ints(text: str) -> tuple:
    return tuple(int(t) for t in text.split(",") if t.strip())


@dataclass(frozen=True)
class RunConfig:
    weights: str = "geometric"
    ratio: float = 0.5
    total: float = 1.0
    truncation: int = 40
    enumeration: str = "denominator-major"
    cantor_depth: int = 48
    cantor_recursion: int = 32
    grid: int = 2048
    epsilon_ladder: tuple = nl.DEFAULT_LADDER  # factors of the rasterised inradius
    out: str = "out"
    seed: int = 0
    top: int = 18
    samples: int = 4096
    box_depths: tuple = tuple(range(4, 13))

    def __post_init__(self):
        if self.truncation < 2:
            raise ConfigurationError("truncation must be >= 2")
        if not 1 <= self.top <= self.truncation:
            raise ConfigurationError(f"top must lie in [1, truncation={self.truncation}]")
        if self.grid < 16:
            raise ConfigurationError("grid must be >= 16")
        if self.samples < 16:
            raise ConfigurationError("samples must be >= 16")
        if self.seed < 0:
            raise ConfigurationError("seed must be nonnegative")
        lad = self.epsilon_ladder
        if not lad or any(f <= 0 for f in lad) or any(a < b for a, b in zip(lad, lad[1:])):
            raise ConfigurationError("epsilon_ladder must be positive and descending")
        if any(not 1 <= d <= 30 for d in self.box_depths):
            raise ConfigurationError("box_depths must lie in [1, 30]")
        # delegated validation: these raise ConfigurationError on bad values
        rp.WeightSequence(self.ratio, self.total, self.weights)
        cp.CantorConfig(self.cantor_depth, self.cantor_recursion)
        if self.enumeration not in ("denominator-major",):
            raise ConfigurationError(f"unknown enumeration scheme {self.enumeration!r}")

    def profile_config(self) -> rp.ProfileConfig:
        return rp.ProfileConfig.build(
            rp.WeightSequence(self.ratio, self.total, self.weights), self.truncation, self.enumeration
        )

    def cantor_config(self) -> cp.CantorConfig:
        return cp.CantorConfig(self.cantor_depth, self.cantor_recursion)


_PARSERS = {
    "weights": str, "ratio": float, "total": float, "truncation": int, "enumeration": str,
    "cantor_depth": int, "cantor_recursion": int, "grid": int, "epsilon_ladder": _floats,
    "out": str, "seed": int, "top": int, "samples": int, "box_depths": _ints,
}
assert set(_PARSERS) == {f.name for f in fields(RunConfig)}


def parse_config(text: str) -> dict:
    """Parse ``key = value`` lines into typed values; unknown keys are errors."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _PARSERS:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        try:
            out[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigurationError(f"line {lineno}: bad value for {key}: {exc}") from None
    return out


def load_config(path: Optional[str], overrides: dict) -> RunConfig:
    values = {}
    if path is not None:
        try:
            values = parse_config(Path(path).read_text())
        except OSError as exc:
            raise ConfigurationError(f"cannot read config: {exc}") from None
    values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**values)


# -- commands ----------------------------------------------------------------

def _out_dir(cfg: RunConfig) -> Path:
    d = Path(cfg.out)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _kv(pairs) -> str:
    return "".join(f"{k}={v}\n" for k, v in pairs)


def _write_curve(cfg: RunConfig, profile: rp.RadialProfile, wedges, extra) -> Path:
    d = _out_dir(cfg)
    sample = pc.sample_curve(profile, cfg.samples)
    (d / "curve.csv").write_bytes(pc.export_csv(sample))
    (d / "curve.svg").write_bytes(pc.export_svg(sample, wedges))
    star = pc.star_shape_check(sample)
    rows = list(extra) + [
        ("samples", len(sample)),
        ("closed", str(sample.closed).lower()),
        ("sampling_step", "%.17g" % sample.sampling_step),
        ("min_sampled_radius", "%.17g" % star.min_radius),
        ("wedges", len(wedges)),
    ]
    (d / "summary.txt").write_text(_kv(rows))
    return d


def cmd_curve(cfg: RunConfig) -> int:
    pcfg = cfg.profile_config()
    C = rp.semiconvexity_constant(pcfg)
    prof = rp.as_radial(pcfg)
    conv = rp.midpoint_convexity(prof, prof.error_at, C, seed=cfg.seed)
    right0, left2pi = rp.seam_derivatives(pcfg)
    wedges = pc.wedge_turn_angles(pcfg, cfg.top)
    _write_curve(cfg, prof, wedges, [
        ("profile", "S"),
        ("L", "%.17g" % pcfg.L),
        ("V", "%.17g" % pcfg.V),
        ("truncation", pcfg.truncation),
        ("tail", "%.17g" % pcfg.tail),
        ("certified_min_radius", "%.17g" % rp.certified_minimum(pcfg)),
        ("seam_right_slope_at_0", "%.17g" % right0.value),
        ("seam_left_slope_at_2pi", "%.17g" % left2pi.value),
        ("semiconvexity_constant", "%.17g" % C),
        ("convexity_seed", cfg.seed),
        ("convexity_passed", str(conv.passed).lower()),
    ])
    return EXIT_OK


def cmd_cantor_curve(cfg: RunConfig) -> int:
    if len(cfg.box_depths) < 3:
        raise ConfigurationError("box counting needs at least 3 depths")
    pcfg = cfg.profile_config()
    ccfg = cfg.cantor_config()
    C = cp.combined_semiconvexity_constant(pcfg)
    prof = cp.as_radial(pcfg, ccfg)
    conv = rp.midpoint_convexity(prof, prof.error_at, C, seed=cfg.seed)
    wedges = pc.wedge_turn_angles(pcfg, cfg.top, ccfg)
    # S_g >= pi with S > 0, so T > pi; report the sampled evidence
    x = np.linspace(0.0, math.tau, 20001)
    min_t = float(np.min(prof(x) - prof.error_at(x)))
    d = _write_curve(cfg, prof, wedges, [
        ("profile", "T"),
        ("cantor_depth", ccfg.depth),
        ("cantor_recursion", ccfg.recursion),
        ("min_radius", "%.17g" % min_t),
        ("min_radius_above_pi", str(min_t > math.pi).lower()),
        ("semiconvexity_constant", "%.17g" % C),
        ("convexity_seed", cfg.seed),
        ("convexity_passed", str(conv.passed).lower()),
    ])
    fset = cp.curvature_failure_intervals(max(cfg.box_depths))
    dim = cp.box_counting_dimension(fset, cfg.box_depths)
    (d / "dimension.txt").write_text(_kv([
        ("depths", ",".join(map(str, cfg.box_depths))),
        ("dimension", "%.10f" % dim),
        ("reference", "%.10f" % cp.LOG2_OVER_LOG3),
    ]))
    return EXIT_OK


def _verify_case(name: str, profile, cfg: RunConfig, d: Path):
    sample = pc.sample_curve(profile, cfg.samples)
    grid = nl.grid_for(sample, cfg.grid, max(cfg.epsilon_ladder))
    eps, rep = nl.epsilon_search(sample, grid, factors=cfg.epsilon_ladder, return_report=True)
    (d / f"E_{name}.pgm").write_bytes(nl.write_pgm(rep.eroded))
    return rep


def cmd_verify(cfg: RunConfig) -> int:
    d = _out_dir(cfg)
    pcfg = cfg.profile_config()
    cases = [
        ("disk", rp.constant_profile(1.0)),
        ("S", rp.as_radial(pcfg)),
        ("T", cp.as_radial(pcfg, cfg.cantor_config())),
    ]
    text = [f"grid={cfg.grid}\n"]
    ok = True
    try:
        for name, prof in cases:
            rep = _verify_case(name, prof, cfg, d)
            text.append(rep.to_text(prefix=f"{name}."))
            ok &= rep.passed
    finally:
        (d / "report.txt").write_text("".join(text))
    return EXIT_OK if ok else EXIT_RESOLUTION


def singularity_rows(cfg: RunConfig) -> list[str]:
    pcfg = cfg.profile_config()
    table = rp.singularity_table(cfg.top, pcfg)
    turns = {w.index: w.turn_angle for w in pc.wedge_turn_angles(pcfg, cfg.top)}
    rows = []
    for q, jump, n in table:
        rows.append("%d\t%s\t%.17g\t%.17g\t%.17g" % (n, q, float(q), jump, turns.get(n, 0.0)))
    return rows


def cmd_singularities(cfg: RunConfig) -> int:
    sys.stdout.write("".join(r + "\n" for r in singularity_rows(cfg)))
    return EXIT_OK


COMMANDS = {
    "curve": cmd_curve,
    "cantor-curve": cmd_cantor_curve,
    "verify": cmd_verify,
    "singularities": cmd_singularities,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nowhere-smooth", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", metavar="PATH", help="flat key=value config file")
    p.add_argument("--out", metavar="DIR", help="output directory")
    p.add_argument("--top", type=int, metavar="N", help="number of wedges to mark or list")
    p.add_argument("--grid", type=int, metavar="N", help="raster size N x N")
    p.add_argument("--seed", type=int, metavar="N", help="seed for randomised checks")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {"out": args.out, "top": args.top, "grid": args.grid, "seed": args.seed}
    try:
        cfg = load_config(args.config, overrides)
        return COMMANDS[args.command](cfg)
    except (ConfigurationError, InsufficientScales) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonPositiveProfile as exc:
        print(f"profile error: {exc}", file=sys.stderr)
        return EXIT_PROFILE
    except (NoneFound, EmptyErosion) as exc:
        print(f"verification error: {exc}", file=sys.stderr)
        return EXIT_RESOLUTION


if __name__ == "__main__":
    sys.exit(main())
