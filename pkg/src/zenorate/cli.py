"""Command-line front end.

    zenorate rate      --t 5 --n 20 --gamma 0.1
    zenorate sweep     --grid 0:400:401 --n 20
    zenorate crossover --n 20 --window 0.1:400
    zenorate figure    --preset fig2
    zenorate integral  --grid 1e-5:1e5:41:log

Output is CSV (``#`` metadata preamble, header row, data rows) or a JSON
object with ``metadata`` and ``rows``. Floats are written in shortest
round-trip form, so identical invocations give byte-identical output.

Exit codes: 0 success, 2 usage/config error, 3 numerical failure,
4 no crossover found.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .exceptions import NoCrossoverError, QuadratureWarning, SweepError, ZenoRateError
from .quadrature import QuadratureConfig
from .response import PhysicalParams
from .spreading import width_sq, zeno_integral, zeno_integral_large, zeno_integral_small
from .zeno import MeasurementSchedule, classify, repeated_rate, survival_ratio, sweep, transition_time

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_NO_CROSSOVER = 4

COMMANDS = ("rate", "sweep", "crossover", "figure", "integral")

UNITS_NOTE = ("consistent caller units; defaults hbar = m = sigma = 1 (sigma_sq = 1) "
              "with gamma in units of 1/t")

PRESETS = {
    "fig1": {"gamma": 0.1, "n": 20, "hbar": 1.0, "mass": 1.0, "sigma_sq": 1.0, "grid": "0:5:101"},
    "fig2": {"gamma": 0.1, "n": 20, "hbar": 1.0, "mass": 1.0, "sigma_sq": 1.0, "grid": "0:400:401"},
}

DEFAULTS = {
    "gamma": 0.1,
    "n": 20,
    "mass": 1.0,
    "hbar": 1.0,
    "sigma_sq": 1.0,
    "temperature": 0.0,
    "rel_tol": 1e-10,
    "format": "csv",
    "preset": "fig1",
}

# config-file keys and how to parse them
_KEYS = {
    "gamma": float,
    "t": float,
    "n": int,
    "sigma_sq": float,
    "mass": float,
    "hbar": float,
    "temperature": float,
    "grid": str,
    "preset": str,
    "window": str,
    "format": str,
    "out": str,
    "rel_tol": float,
}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class GridSpec:
    start: float
    stop: float
    points: int
    log: bool = False

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        parts = text.split(":")
        if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
            raise UsageError(f"grid: expected START:STOP:POINTS[:log], got {text!r}")
        try:
            start, stop, points = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise UsageError(f"grid: malformed numbers in {text!r}") from None
        spec = cls(start, stop, points, len(parts) == 4)
        if points < 1 or not (math.isfinite(start) and math.isfinite(stop)):
            raise UsageError(f"grid: need finite bounds and POINTS >= 1, got {text!r}")
        if points > 1 and not stop > start:
            raise UsageError(f"grid: STOP must exceed START, got {text!r}")
        if spec.log and start <= 0:
            raise UsageError(f"grid: log spacing needs START > 0, got {text!r}")
        return spec

    def values(self) -> np.ndarray:
        if self.points == 1:
            return np.array([self.start])
        make = np.geomspace if self.log else np.linspace
        v = make(self.start, self.stop, self.points)
        v[0], v[-1] = self.start, self.stop
        return v

    def __str__(self):
        return f"{self.start!r}:{self.stop!r}:{self.points}" + (":log" if self.log else "")


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: PhysicalParams
    quadrature: QuadratureConfig
    n: int
    t: float | None = None
    grid: GridSpec | None = None
    window: tuple[float, float] | None = None
    preset: str | None = None
    format: str = "csv"
    out: str | None = None


def read_config_file(path) -> dict:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"config: cannot read {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config {path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _KEYS:
            raise UsageError(f"config {path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def _convert(key, value):
    try:
        return _KEYS[key](value)
    except (TypeError, ValueError):
        raise UsageError(f"{key}: invalid value {value!r}") from None


def _parse_window(text):
    parts = str(text).split(":")
    if len(parts) != 2:
        raise UsageError(f"window: expected A:B, got {text!r}")
    try:
        a, b = float(parts[0]), float(parts[1])
    except ValueError:
        raise UsageError(f"window: malformed numbers in {text!r}") from None
    if not (0 < a < b and math.isfinite(b)):
        raise UsageError(f"window: need 0 < A < B, got {text!r}")
    return a, b


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--gamma", type=float, help="Ohmic friction rate")
    common.add_argument("--t", type=float, help="total time")
    common.add_argument("--n", type=int, help="number of measurements")
    common.add_argument("--sigma-sq", dest="sigma_sq", type=float, help="initial packet variance")
    common.add_argument("--mass", type=float)
    common.add_argument("--hbar", type=float)
    common.add_argument("--temperature", type=float, help=argparse.SUPPRESS)
    common.add_argument("--grid", help="START:STOP:POINTS[:log]")
    common.add_argument("--preset", choices=sorted(PRESETS))
    common.add_argument("--window", help="crossover search window A:B")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--config", help="flat key = value config file")
    common.add_argument("--rel-tol", dest="rel_tol", type=float)

    parser = argparse.ArgumentParser(prog="zenorate",
                                     description="Exact Zeno / anti-Zeno rates for a damped Gaussian packet.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "rate": "R(t) and R(t/n)^n at a single time",
        "sweep": "R(t) and R(t/n)^n over a time grid",
        "crossover": "total time where R(t/n)^n crosses R(t)",
        "figure": "reproduce the gamma = 0.1, n = 20 comparison curves",
        "integral": "I(x) against its small- and large-x asymptotes",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge built-in defaults, preset, config file and flags (later wins)."""
    merged = dict(DEFAULTS)
    from_file = read_config_file(args.config) if args.config else {}
    flags = {k: v for k, v in vars(args).items() if k in _KEYS and v is not None}

    preset = flags.get("preset", from_file.get("preset", merged["preset"]))
    if args.command == "figure":
        if preset not in PRESETS:
            raise UsageError(f"preset: unknown preset {preset!r}")
        merged.update(PRESETS[preset])
    merged.update({k: _convert(k, v) for k, v in from_file.items()})
    merged.update(flags)

    if merged["format"] not in ("csv", "json"):
        raise UsageError(f"format: expected csv or json, got {merged['format']!r}")
    try:
        params = PhysicalParams(gamma=merged["gamma"], mass=merged["mass"], hbar=merged["hbar"],
                                sigma_sq=merged["sigma_sq"], temperature=merged["temperature"])
        quad = QuadratureConfig(rel_tol=merged["rel_tol"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    n = merged["n"]
    if n < 1:
        raise UsageError(f"n: must be >= 1, got {n}")

    t = merged.get("t")
    if args.command == "rate":
        if t is None:
            raise UsageError("rate: --t is required")
        if not (t >= 0 and math.isfinite(t)):
            raise UsageError(f"t: must be finite and >= 0, got {t!r}")

    grid = None
    if args.command in ("sweep", "figure", "integral"):
        text = merged.get("grid")
        if text is None:
            if args.command == "sweep":
                raise UsageError("sweep: --grid is required")
            text = "1e-5:1e5:41:log"
        grid = GridSpec.parse(str(text))

    window = None
    if args.command == "crossover":
        if params.gamma == 0:
            raise UsageError("crossover: gamma must be > 0")
        window = _parse_window(merged["window"]) if merged.get("window") else (1e-2, 1e3 / params.gamma)

    return RunConfig(
        command=args.command,
        params=params,
        quadrature=quad,
        n=n,
        t=t,
        grid=grid,
        window=window,
        preset=preset if args.command == "figure" else None,
        format=merged["format"],
        out=merged.get("out"),
    )


def metadata(cfg: RunConfig) -> dict:
    p, q = cfg.params, cfg.quadrature
    meta = {
        "tool": "zenorate",
        "version": __version__,
        "command": cfg.command,
    }
    if cfg.preset:
        meta["preset"] = cfg.preset
    meta.update({
        "gamma": p.gamma,
        "mass": p.mass,
        "hbar": p.hbar,
        "sigma_sq": p.sigma_sq,
        "temperature": p.temperature,
        "n": cfg.n,
        "rel_tol": q.rel_tol,
        "abs_tol": q.abs_tol,
        "split_point": q.split_point,
        "tail_terms": q.tail_terms,
        "units": UNITS_NOTE,
    })
    if cfg.grid is not None:
        meta["grid"] = str(cfg.grid)
    if cfg.window is not None:
        meta["window"] = f"{cfg.window[0]!r}:{cfg.window[1]!r}"
    return meta


def cmd_rate(cfg: RunConfig) -> list[dict]:
    p, q, t, n = cfg.params, cfg.quadrature, cfg.t, cfg.n
    r1 = survival_ratio(t, p, q)
    rn = repeated_rate(MeasurementSchedule(t, n), p, q)
    w = width_sq(t, p, q)
    return [{
        "t": t,
        "n": n,
        "tau": t / n,
        "r_single": r1,
        "r_repeated": rn,
        "delta": rn - r1,
        "regime": classify(r1, rn).value,
        "sigma_sq": w.sigma_sq,
        "sigma_q_sq": w.sigma_q_sq,
        "msd": w.msd,
        "w_sq": w.total,
    }]


def cmd_sweep(cfg: RunConfig) -> list[dict]:
    points = sweep(cfg.grid.values(), cfg.n, cfg.params, cfg.quadrature)
    return [{"t": pt.t, "r_single": pt.r_single, "r_repeated": pt.r_repeated, "regime": pt.regime.value}
            for pt in points]


cmd_figure = cmd_sweep


def cmd_crossover(cfg: RunConfig) -> list[dict]:
    res = transition_time(cfg.n, cfg.params, cfg.quadrature, cfg.window)
    return [{
        "t_star": res.t_star,
        "gamma_t_star": res.gamma_t_star,
        "bracket_lo": res.bracket[0],
        "bracket_hi": res.bracket[1],
        "residual": res.residual,
        "iterations": res.iterations,
        "sign_changes": res.sign_changes,
        "multiple_roots": res.multiple_roots,
    }]


def cmd_integral(cfg: RunConfig) -> list[dict]:
    rows = []
    for x in cfg.grid.values():
        x = float(x)
        row = {"x": x, "I": None, "small_x_form": None, "large_x_form": None,
               "rel_dev_small": None, "rel_dev_large": None, "error": None}
        if not x > 0:
            row["error"] = "x must be > 0"
            rows.append(row)
            continue
        value = zeno_integral(x, cfg.quadrature)
        small = zeno_integral_small(x)
        large = zeno_integral_large(x)
        row.update({
            "I": value,
            "small_x_form": small,
            "large_x_form": large,
            "rel_dev_small": value / small - 1.0 if small != 0 else None,
            "rel_dev_large": value / large - 1.0 if large != 0 else None,
        })
        rows.append(row)
    return rows


HANDLERS = {
    "rate": cmd_rate,
    "sweep": cmd_sweep,
    "crossover": cmd_crossover,
    "figure": cmd_figure,
    "integral": cmd_integral,
}


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(meta: dict, rows: list[dict]) -> str:
    buf = io.StringIO()
    for key, value in meta.items():
        buf.write(f"# {key}: {_cell(value)}\n")
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(rows[0]))
        for row in rows:
            writer.writerow([_cell(v) for v in row.values()])
    return buf.getvalue()


def render_json(meta: dict, rows: list[dict]) -> str:
    return json.dumps({"metadata": meta, "rows": rows}, indent=2, allow_nan=False) + "\n"


def render(cfg: RunConfig, rows: list[dict]) -> str:
    meta = metadata(cfg)
    return render_json(meta, rows) if cfg.format == "json" else render_csv(meta, rows)


def run(cfg: RunConfig) -> str:
    """Execute a resolved configuration and return the rendered output.

    Quadrature shortfalls are promoted from warnings to errors here, so a
    result that was written is one that met its tolerance.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("error", QuadratureWarning)
        rows = HANDLERS[cfg.command](cfg)
    return render(cfg, rows)


def _diagnostic(kind: str, message: str, **extra) -> str:
    return json.dumps({"error": kind, "message": message, **extra}, default=repr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with EXIT_USAGE

    try:
        text = run(cfg)
    except NoCrossoverError as exc:
        lo, hi = exc.delta_at_ends
        print(_diagnostic("no-crossover", str(exc), window=list(exc.window),
                          delta_at_ends=[float(lo), float(hi)]), file=sys.stderr)
        return EXIT_NO_CROSSOVER
    except SweepError as exc:
        failures = [{"t": t, "reason": f"{type(e).__name__}: {e}"} for t, e in exc.failures]
        print(_diagnostic("numerical", str(exc), failures=failures), file=sys.stderr)
        return EXIT_NUMERICAL
    except (QuadratureWarning, ZenoRateError, ArithmeticError) as exc:
        print(_diagnostic("numerical", f"{type(exc).__name__}: {exc}"), file=sys.stderr)
        return EXIT_NUMERICAL

    if cfg.out:
        try:
            Path(cfg.out).write_text(text, encoding="utf-8", newline="\n")
        except OSError as exc:
            print(_diagnostic("usage", f"cannot write {cfg.out}: {exc.strerror}"), file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
