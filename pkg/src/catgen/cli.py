"""Command-line figure regeneration. Every command writes CSV with a '#' header."""
from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__, conditional, fock, single_mode, wigner
from .channel import channel
from .errors import NumericalError
from .opo import QUAD_RTOL, OpoParams

FIG34_RATIOS = (0.1, 0.3, 0.5)
FIG6_ALPHA_SQ = (2.0, 2.5, 2.6, 3.0, 3.5)
WIGNER_HALF_WIDTH = 8.0
WIGNER_POINTS = 401


@dataclass
class RunConfig:
    epsilon_ratio: float | None = None
    delta_grid: list[float] | None = None
    alpha_grid: list[float] | None = None
    truncation: int = 40
    quad_tol: float = QUAD_RTOL
    output_dir: Path = field(default_factory=lambda: Path("out"))
    workers: int | None = None

    def validate(self):
        if self.epsilon_ratio is not None and not 0 < self.epsilon_ratio < 1:
            raise ValueError(f"epsilon ratio must lie in (0, 1), got {self.epsilon_ratio}")
        for name in ("delta_grid", "alpha_grid"):
            grid = getattr(self, name)
            if grid is None:
                continue
            if not grid:
                raise ValueError(f"{name} is empty")
            if any(b < a for a, b in zip(grid, grid[1:])):
                raise ValueError(f"{name} must be sorted")
        if self.delta_grid is not None and self.delta_grid[0] < 0:
            raise ValueError("click separations must be non-negative")
        if self.alpha_grid is not None and self.alpha_grid[0] <= 0:
            raise ValueError("alpha values must be positive")
        if self.truncation < 4:
            raise ValueError("truncation must be at least 4")
        if not 0 < self.quad_tol < 1e-2:
            raise ValueError("quad tolerance must lie in (0, 1e-2)")
        return self


def grid(lo: float, hi: float, step: float) -> list[float]:
    if step <= 0 or hi < lo:
        raise ValueError("need step > 0 and max >= min")
    n = int(round((hi - lo) / step))
    return [round(lo + k * step, 12) for k in range(n + 1)]


def fmt(x) -> str:
    return format(float(x), ".15g")


def describe_grid(values) -> str:
    """Uniform grids are summarised as 'lo:hi:step (n points)'."""
    if len(values) > 4:
        steps = np.diff(values)
        if np.allclose(steps, steps[0], rtol=1e-9, atol=1e-12):
            return f"{fmt(values[0])}:{fmt(values[-1])}:{fmt(round(steps[0], 12))} ({len(values)} points)"
    return " ".join(fmt(v) for v in values)


def write_csv(path: Path, cfg: RunConfig, columns, rows, notes=(), footer=()):
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# catgen {__version__}"]
    for key, val in asdict(cfg).items():
        if key in ("output_dir", "workers"):
            continue
        if isinstance(val, list):
            val = describe_grid(val)
        lines.append(f"# {key} = {val}")
    lines.extend(f"# {n}" for n in notes)
    lines.append(",".join(columns))
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    lines.extend(f"# {f}" for f in footer)
    path.write_text("\n".join(lines) + "\n")
    return path


def cmd_fig1(cfg: RunConfig) -> list[Path]:
    alphas = cfg.alpha_grid or list(single_mode.FIG1_ALPHAS)
    two_ps = single_mode.optimal_fidelity_curve(alphas, "2PS", cfg.workers)
    psi2 = single_mode.optimal_fidelity_curve(alphas, "psi2", cfg.workers)
    rows = [(a.alpha, a.fidelity, a.r_opt, b.fidelity, b.r_opt) for a, b in zip(two_ps, psi2)]
    cols = ("alpha", "F_2PS", "r_opt_2PS", "F_psi2", "r_opt_psi2")
    # Fock-space cross-check of the psi2 column at N and 2N
    gaps = []
    for dim in (cfg.truncation, 2 * cfg.truncation):
        gaps.append(max(abs(fock.fidelity_pure(fock.cat_state(pt.alpha, "even", dim),
                                               single_mode.psi2_state(pt.alpha, pt.r_opt, dim)) - pt.fidelity)
                        for pt in psi2))
    notes = [f"r bracket = {single_mode.R_BRACKET}", "fidelities from exact Hermite projections",
             f"Fock-route max |dF| at N = {cfg.truncation}: {gaps[0]:.3e}, at 2N: {gaps[1]:.3e}"]
    cfg = replace(cfg, alpha_grid=alphas)
    return [write_csv(cfg.output_dir / "fig1.csv", cfg, cols, rows, notes)]


def cmd_fig34(cfg: RunConfig) -> list[Path]:
    deltas = cfg.delta_grid or grid(0.0, 6.0, 0.05)
    ratios = (cfg.epsilon_ratio,) if cfg.epsilon_ratio else FIG34_RATIOS
    out = []
    for ratio in ratios:
        rows = conditional.mixing_curves(deltas, OpoParams.from_ratio(ratio))
        run = replace(cfg, epsilon_ratio=ratio, delta_grid=deltas)
        out.append(write_csv(cfg.output_dir / f"fig34_eps{ratio:g}.csv", run,
                             ("zeta0_delta", "C_phi", "C_v", "c2_sq", "c0_sq"), rows))
    return out


def cmd_wigner(cfg: RunConfig, deltas=None, half_width=WIGNER_HALF_WIDTH,
               points=WIGNER_POINTS) -> list[Path]:
    ratio = cfg.epsilon_ratio or wigner.FIG5_RATIO
    params = OpoParams.from_ratio(ratio)
    axis = np.linspace(-half_width, half_width, points)
    out = []
    for delta in deltas or cfg.delta_grid or wigner.FIG5_DELTAS:
        dec, ch = wigner.plus_state(delta, params, rtol=cfg.quad_tol)
        grid_w = wigner.w_plus_grid(axis, axis, dec, ch)
        # the numeric transform is the aliasing guard; it raises if chi is not resolved
        wigner.w_plus_numeric(axis[::50], axis[::50], dec, ch)
        run = replace(cfg, epsilon_ratio=ratio, delta_grid=[delta])
        notes = [f"grid = [{-half_width:g}, {half_width:g}]^2, {points} points per axis",
                 f"G_X = {fmt(ch.gx)}, G_P = {fmt(ch.gp)}, F_X = {fmt(ch.fx)}, F_P = {fmt(ch.fp)}",
                 f"C_phi = {fmt(dec.C_phi)}, c2 = {fmt(dec.c2)}, c0 = {fmt(dec.c0)}"]
        footer = [f"normalization = {fmt(grid_w.integral())}", f"min W = {fmt(grid_w.values.min())}"]
        out.append(write_csv(cfg.output_dir / f"wigner_delta{delta:g}.csv", run,
                             ("x", "p", "W"), grid_w.rows(), notes, footer))
    return out


def cmd_fig6(cfg: RunConfig) -> list[Path]:
    ratio = cfg.epsilon_ratio or wigner.FIG5_RATIO
    deltas = cfg.delta_grid or grid(0.0, 4.0, 0.02)
    alphas = cfg.alpha_grid or [float(np.sqrt(a2)) for a2 in FIG6_ALPHA_SQ]
    fids = wigner.fidelity_sweep(deltas, OpoParams.from_ratio(ratio), alphas, cfg.workers, cfg.quad_tol)
    cols = ["zeta0_delta"] + [f"F_alpha_sq_{a * a:.4g}" for a in alphas]
    rows = [[d, *f] for d, f in zip(deltas, fids)]
    run = replace(cfg, epsilon_ratio=ratio, delta_grid=deltas, alpha_grid=alphas)
    return [write_csv(cfg.output_dir / "fig6.csv", run, cols, rows,
                      ["fidelity refinement tolerance = 1e-4"])]


def cmd_fig78(cfg: RunConfig) -> list[Path]:
    deltas = cfg.delta_grid or grid(0.0, 6.0, 0.05)
    ratios = (cfg.epsilon_ratio,) if cfg.epsilon_ratio else FIG34_RATIOS
    kept = [d for d in deltas if d > 0]
    notes = ["zeta0_delta = 0 omitted: antisymmetric mode undefined"] if len(kept) < len(deltas) else []
    out = []
    for ratio in ratios:
        params = OpoParams.from_ratio(ratio)
        rows = []
        for d in kept:
            cp = channel(d, params, "plus", rtol=cfg.quad_tol)
            cm = channel(d, params, "minus", rtol=cfg.quad_tol)
            rows.append((d, abs(cp.r), abs(cm.r), cp.n_bar, cm.n_bar))
        run = replace(cfg, epsilon_ratio=ratio, delta_grid=deltas)
        out.append(write_csv(cfg.output_dir / f"fig78_eps{ratio:g}.csv", run,
                             ("zeta0_delta", "abs_r_plus", "abs_r_minus", "n_bar_plus", "n_bar_minus"),
                             rows, notes))
    return out


COMMANDS = {"fig1": cmd_fig1, "fig34": cmd_fig34, "wigner": cmd_wigner, "fig6": cmd_fig6, "fig78": cmd_fig78}


def read_config(path: str) -> dict[str, str]:
    """key = value lines; '#' starts a comment."""
    out = {}
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise ValueError(f"bad config line: {line!r}")
        out[key.strip().replace("-", "_")] = val.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; flags take precedence")
    common.add_argument("--epsilon-ratio", type=float)
    common.add_argument("--delta-min", type=float)
    common.add_argument("--delta-max", type=float)
    common.add_argument("--delta-step", type=float)
    common.add_argument("--alpha", type=float, action="append", help="cat amplitude (repeatable)")
    common.add_argument("--alpha-sq", type=float, action="append", help="|alpha|^2 (repeatable)")
    common.add_argument("--truncation", type=int)
    common.add_argument("--quad-tol", type=float)
    common.add_argument("--workers", type=int)
    common.add_argument("--out")

    parser = argparse.ArgumentParser(prog="catgen", description="Regenerate cat-state figures as CSV.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "wigner":
            p.add_argument("--zeta0-delta", type=float, action="append")
            p.add_argument("--half-width", type=float, default=WIGNER_HALF_WIDTH)
            p.add_argument("--points", type=int, default=WIGNER_POINTS)
    return parser


def config_from_args(args) -> RunConfig:
    settings = read_config(args.config) if args.config else {}
    for key in ("epsilon_ratio", "delta_min", "delta_max", "delta_step", "truncation", "quad_tol", "out",
                "workers"):
        val = getattr(args, key)
        if val is not None:
            settings[key] = val
    cfg = RunConfig()
    if "epsilon_ratio" in settings:
        cfg.epsilon_ratio = float(settings["epsilon_ratio"])
    span = [settings.get(k) for k in ("delta_min", "delta_max", "delta_step")]
    if any(v is not None for v in span):
        if any(v is None for v in span):
            raise ValueError("--delta-min, --delta-max and --delta-step go together")
        cfg.delta_grid = grid(*(float(v) for v in span))
    alphas = list(args.alpha or [])
    alphas += [float(np.sqrt(a2)) for a2 in (args.alpha_sq or [])]
    if not alphas and "alpha" in settings:
        alphas = [float(a) for a in settings["alpha"].replace(",", " ").split()]
    if alphas:
        cfg.alpha_grid = sorted(alphas)
    if "truncation" in settings:
        cfg.truncation = int(settings["truncation"])
    if "quad_tol" in settings:
        cfg.quad_tol = float(settings["quad_tol"])
    if "out" in settings:
        cfg.output_dir = Path(settings["out"])
    if "workers" in settings:
        cfg.workers = int(settings["workers"])
    return cfg.validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        if args.command == "wigner":
            paths = cmd_wigner(cfg, args.zeta0_delta, args.half_width, args.points)
        else:
            paths = COMMANDS[args.command](cfg)
    except NumericalError as exc:
        print(f"catgen: numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"catgen: {exc}", file=sys.stderr)
        return 2
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
