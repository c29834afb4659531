"""Command-line front end: parameter sweeps, figure/table reproduction.

Subcommands mirror the library tracks: ``profiles``, ``xi``, ``w0``,
``transform``, ``saddle``, ``integral-check``, ``orders``, ``instanton``
produce one table per run (CSV is the golden format: stable column order,
17 significant digits, no timestamps; JSON wraps the same rows with a
config/version/timestamp header; SVG renders the series as labeled line
plots).  ``compare`` reports the deviation between two runs on a shared
grid.  ``--figure PATH`` additionally renders a matplotlib figure next to
the delimited output of any run.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, backgrounds, perturbative, worldline
from .backgrounds import FieldScales, PulseKind, WeakPulse
from .errors import GridError, SchwingerKitError

THREADS_ENV = "SCHWINGER_KIT_THREADS"


class ConfigError(ValueError):
    """Invalid command-line or config-file input (exit code 2)."""


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------

def _parse_float(text: str) -> float:
    t = text.strip().lower()
    if t in ("pi/2", "pi-half"):
        return 0.5 * math.pi
    if t == "pi":
        return math.pi
    try:
        return float(t)
    except ValueError as exc:
        raise ConfigError(f"cannot parse number '{text}'") from exc


def parse_grid(text: str) -> np.ndarray:
    """Parse 'a..b:n[:log]' into a grid, or 'v1,v2,...' into listed values."""
    t = text.strip()
    if ".." in t:
        try:
            span, rest = t.split(":", 1)
            lo_s, hi_s = span.split("..")
            parts = rest.split(":")
            count = int(parts[0])
            spacing = parts[1] if len(parts) > 1 else "linear"
        except (ValueError, IndexError) as exc:
            raise ConfigError(f"bad grid '{text}' (want a..b:n[:log])") from exc
        lo, hi = _parse_float(lo_s), _parse_float(hi_s)
        if count < 2:
            raise ConfigError(f"grid count must be >= 2, got {count}")
        if spacing == "log":
            if lo <= 0 or hi <= 0:
                raise ConfigError("log grid needs positive endpoints")
            return np.geomspace(lo, hi, count)
        if spacing != "linear":
            raise ConfigError(f"unknown grid spacing '{spacing}'")
        return np.linspace(lo, hi, count)
    return np.array([_parse_float(v) for v in t.split(",") if v.strip()])


def _parse_int_list(text: str) -> list[int]:
    out = []
    for v in text.split(","):
        v = v.strip()
        if not v:
            continue
        try:
            out.append(int(v))
        except ValueError as exc:
            raise ConfigError(f"cannot parse integer '{v}'") from exc
    return out


def _parse_kinds(text: str, default_N: int | None) -> list[WeakPulse]:
    """Parse 'sg:3,sauter,lorentzian' into pulses (unit omega)."""
    pulses = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if ":" in item:
            name, n_s = item.split(":", 1)
            try:
                n = int(n_s)
            except ValueError as exc:
                raise ConfigError(f"bad order in kind '{item}'") from exc
        else:
            name, n = item, None
        try:
            kind = PulseKind.parse(name)
        except SchwingerKitError as exc:
            raise ConfigError(str(exc)) from exc
        if kind is PulseKind.SUPER_GAUSSIAN and n is None:
            n = default_N
            if n is None:
                raise ConfigError(f"kind '{item}' needs an order (sg:N or --N)")
        try:
            pulses.append(WeakPulse(kind, omega=1.0, N=n))
        except SchwingerKitError as exc:
            raise ConfigError(str(exc)) from exc
    if not pulses:
        raise ConfigError("no pulse kinds given")
    return pulses


def _pulse_tag(p: WeakPulse) -> str:
    if p.kind is PulseKind.SUPER_GAUSSIAN:
        return f"sg_N{p.N}"
    return p.kind.value.replace("-", "_")


def _n_workers() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            n = int(env)
        except ValueError as exc:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got '{env}'") from exc
        if n < 1:
            raise ConfigError(f"{THREADS_ENV} must be >= 1")
        return n
    return min(8, os.cpu_count() or 1)


def _map_ordered(fn, values):
    """Worker-pool map that preserves grid order (deterministic output)."""
    n = _n_workers()
    if n == 1 or len(values) < 16:
        return [fn(v) for v in values]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, values))


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _csv_bytes(header: list[str], rows: list[list]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue().encode()


def _json_doc(header, rows, config: dict) -> str:
    data = [
        {k: (v if isinstance(v, (int, float, str, bool)) else _fmt(v)) for k, v in zip(header, row)}
        for row in rows
    ]
    doc = {
        "meta": {
            "config": config,
            "version": __version__,
            "timestamp": datetime.now(timezone.utc).isoformat(),
        },
        "data": data,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _render_figure(path: str, header, rows, *, xlabel=None, ylabel=None,
                   parametric=False) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "schwinger-kit"  # reproducible svg ids
    cols = list(zip(*rows)) if rows else [[] for _ in header]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    if parametric:
        # closed orbit: second vs third column
        ax.plot(cols[1], cols[2], lw=1.2)
        ax.set_aspect("equal", adjustable="datalim")
        ax.set_xlabel(header[1])
        ax.set_ylabel(header[2])
    else:
        x = cols[0]
        for name, col in zip(header[1:], cols[1:]):
            try:
                ys = [float(v) for v in col]
            except (TypeError, ValueError):
                continue  # non-numeric column (e.g. branch labels)
            ax.plot(x, ys, lw=1.2, label=name)
        ax.set_xlabel(xlabel or header[0])
        if ylabel:
            ax.set_ylabel(ylabel)
        if len(header) > 2:
            ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    metadata = {"Date": None} if str(path).endswith(".svg") else None
    fig.savefig(path, metadata=metadata)
    plt.close(fig)


def _emit(args, header, rows, config: dict, *, xlabel=None, ylabel=None,
          parametric=False) -> None:
    fmt = args.format
    out = getattr(args, "output", None)
    if fmt == "csv":
        payload = _csv_bytes(header, rows)
        if out:
            Path(out).write_bytes(payload)
        else:
            sys.stdout.write(payload.decode())
    elif fmt == "json":
        payload = _json_doc(header, rows, config)
        if out:
            Path(out).write_text(payload)
        else:
            sys.stdout.write(payload)
    elif fmt == "svg":
        if not out:
            raise ConfigError("--format svg needs --output PATH")
        _render_figure(out, header, rows, xlabel=xlabel, ylabel=ylabel,
                       parametric=parametric)
    else:  # pragma: no cover
        raise ConfigError(f"unknown format {fmt}")
    fig = getattr(args, "figure", None)
    if fig:
        _render_figure(fig, header, rows, xlabel=xlabel, ylabel=ylabel,
                       parametric=parametric)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_profiles(args) -> None:
    pulses = _parse_kinds(args.kind, args.N)
    ts = parse_grid(args.t)
    if ts.size < 2:
        raise ConfigError("profiles: need a t grid with at least 2 points")
    header = ["t"] + [f"g_{_pulse_tag(p)}" for p in pulses]
    shift = args.modified_sauter_shift
    cols = []
    for p in pulses:
        if p.kind is PulseKind.MODIFIED_SAUTER and shift != 1.0:
            p = WeakPulse(p.kind, omega=p.omega * shift)
        cols.append(np.asarray(backgrounds.profile(p, ts)))
    rows = [[float(t)] + [float(c[i]) for c in cols] for i, t in enumerate(ts)]
    _emit(args, header, rows, _config_dict(args), xlabel="t [1/m]", ylabel="g(t)")


def _cmd_xi(args) -> None:
    Ns = _parse_int_list(args.N)
    eps_list = [float(e) for e in parse_grid(args.eps)]
    if not Ns:
        raise ConfigError("xi: need at least one N")
    header = ["N"] + [f"xi_eps{e:g}" for e in eps_list]
    def row(n):
        return [n] + [worldline.xi(n, e) for e in eps_list]
    rows = _map_ordered(row, Ns)
    _emit(args, header, rows, _config_dict(args), xlabel="N", ylabel="xi")


def _scales_for(args, gamma: float) -> FieldScales:
    try:
        return FieldScales.from_gamma(args.E, args.eps, gamma)
    except SchwingerKitError as exc:
        # bad --E/--eps flags surface here deterministically
        raise ConfigError(str(exc)) from exc


def _gamma_grid(args) -> np.ndarray:
    if (args.gamma is None) == (args.omega is None):
        raise ConfigError("specify exactly one of --gamma or --omega")
    if args.gamma is not None:
        grid = parse_grid(args.gamma)
    else:
        grid = parse_grid(args.omega) / args.E
    if grid.size < 2:
        raise ConfigError("grid count must be >= 2")
    return grid


def _cmd_w0(args) -> None:
    if args.kind.strip().lower() in ("sg", "super-gaussian") and args.N:
        try:
            pulses = [WeakPulse(PulseKind.SUPER_GAUSSIAN, omega=1.0, N=n)
                      for n in _parse_int_list(args.N)]
        except SchwingerKitError as exc:
            raise ConfigError(str(exc)) from exc
    else:
        pulses = _parse_kinds(args.kind, None)
    grid = _gamma_grid(args)
    if args.with_references:
        pulses = pulses + [WeakPulse(PulseKind.SAUTER), WeakPulse(PulseKind.LORENTZIAN)]
    single = len(pulses) == 1
    if single:
        header = ["gamma", "w0", "branch", "x4_frac"]
        def row(g):
            r = worldline.stationary_action(pulses[0], _scales_for(args, g))
            return [float(g), r.action, r.branch.value, r.x4_frac]
        rows = _map_ordered(row, list(grid))
    else:
        header = ["gamma"] + [f"w0_{_pulse_tag(p)}" for p in pulses]
        def row(g):
            sc = _scales_for(args, g)
            return [float(g)] + [worldline.stationary_action(p, sc).action for p in pulses]
        rows = _map_ordered(row, list(grid))
    _emit(args, header, rows, _config_dict(args),
          xlabel="gamma", ylabel="W0 [E_S/E]")


def _cmd_transform(args) -> None:
    pulses = _parse_kinds(args.kind, args.N)
    xs = parse_grid(args.x)
    if xs.size < 2:
        raise ConfigError("transform: need an x grid with at least 2 points")
    header = ["x"] + [f"wgt_{_pulse_tag(p)}" for p in pulses]
    cols = [np.asarray(backgrounds.spectral_function(p)(xs)) for p in pulses]
    rows = [[float(x)] + [float(c[i]) for c in cols] for i, x in enumerate(xs)]
    _emit(args, header, rows, _config_dict(args),
          xlabel="x = varpi/omega", ylabel="omega*gtilde")


def _cmd_saddle(args) -> None:
    E_list = [float(e) for e in parse_grid(args.E_list)]
    grid = parse_grid(args.gamma)
    if grid.size < 2:
        raise ConfigError("grid count must be >= 2")
    if np.min(grid) <= 1.0:
        raise ConfigError("saddle: gamma grid must lie in (1, inf)")
    header = ["gamma"]
    for E in E_list:
        header += [f"residual_E{E:g}", f"oscillation_E{E:g}", f"valid_E{E:g}"]
    scans = [perturbative.saddle_scan(E, list(grid), kappa=args.kappa) for E in E_list]
    rows = []
    for i, g in enumerate(grid):
        row = [float(g)]
        for scan in scans:
            d = scan[i]
            row += [d.derivative_at_sp, d.oscillation, d.valid]
        rows.append(row)
    _emit(args, header, rows, _config_dict(args),
          xlabel="gamma", ylabel="saddle residual")


def _cmd_integral_check(args) -> None:
    pulses = _parse_kinds(args.kind, args.N)
    target = math.sqrt(0.5 * math.pi)
    header = ["kind", "value", "target", "deviation"]
    rows = []
    for p in pulses:
        v = perturbative.integral_condition(p)
        rows.append([_pulse_tag(p), v, target, v - target])
    _emit(args, header, rows, _config_dict(args))


def _cmd_orders(args) -> None:
    pulses = _parse_kinds(args.kind, None)
    if len(pulses) != 1:
        raise ConfigError("orders: exactly one kind per run")
    pulse = pulses[0]
    grid = _gamma_grid(args)
    if np.min(grid) <= 1.0:
        raise ConfigError("orders: gamma grid must lie in (1, inf)")
    n_list = _parse_int_list(args.n_photons)
    header = ["gamma"] + [f"log_P_n{n}" for n in n_list]
    rows = []
    for g in grid:
        sc = _scales_for(args, float(g))
        sigma = perturbative.saddle_frequency(float(g)) / 2.0
        row = [float(g)]
        for n in n_list:
            cfg = perturbative.OrderConfig(n, max(1, n // 2), min(max(sigma, 1e-9), 1 - 1e-12))
            row.append(perturbative.higher_order_exponent(pulse, sc, cfg))
        rows.append(row)
    _emit(args, header, rows, _config_dict(args),
          xlabel="gamma", ylabel="log P_n")


def _cmd_instanton(args) -> None:
    pulse = WeakPulse(PulseKind.SUPER_GAUSSIAN, omega=1.0, N=args.N)
    scales = FieldScales.from_gamma(args.E, args.eps, _parse_float(args.gamma_point))
    loop = worldline.shoot_instanton(pulse, scales, tol=args.tol, n_nodes=args.samples)
    header = ["u", "x3", "x4", "v3", "v4"]
    rows = [
        [float(loop.u[i]), float(loop.x3[i]), float(loop.x4[i]),
         float(loop.v3[i]), float(loop.v4[i])]
        for i in range(len(loop.u))
    ]
    print(
        f"a={loop.a:.12g} action={loop.action:.12g} [E_S/E] "
        f"closure_defect={loop.closure_defect:.3g}",
        file=sys.stderr,
    )
    cfg = _config_dict(args)
    cfg["summary"] = {
        "a": loop.a, "action_ES_over_E": loop.action,
        "closure_defect": loop.closure_defect,
    }
    _emit(args, header, rows, cfg, parametric=True)


def _cmd_compare(args) -> None:
    rows_a, header_a = _read_csv(args.table_a)
    rows_b, header_b = _read_csv(args.table_b)
    col = args.column
    if col is None:
        if len(header_a) < 2 or len(header_b) < 2:
            raise ConfigError("compare: tables need at least two columns")
        ca, cb = 1, 1
    else:
        if col not in header_a or col not in header_b:
            raise ConfigError(f"compare: column '{col}' missing from a table")
        ca, cb = header_a.index(col), header_b.index(col)
    ga = np.array([r[0] for r in rows_a])
    gb = np.array([r[0] for r in rows_b])
    if ga.shape != gb.shape or not np.allclose(ga, gb, rtol=1e-12, atol=0.0):
        raise GridError("compare: the two runs do not share a grid")
    va = np.array([r[ca] for r in rows_a])
    vb = np.array([r[cb] for r in rows_b])
    denom = np.where(np.abs(vb) > 0.0, np.abs(vb), 1.0)
    signed = (va - vb) / denom
    rel = np.abs(signed)
    report = {
        "max_rel_dev": float(np.max(rel)),
        "mean_rel_dev": float(np.mean(rel)),
        "argmax_gamma": float(ga[int(np.argmax(rel))]),
        "max_signed_rel_dev": float(np.max(signed)),
        "min_signed_rel_dev": float(np.min(signed)),
    }
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _read_csv(path: str) -> tuple[list[list[float]], list[str]]:
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = []
            for raw in reader:
                row = []
                for v in raw:
                    try:
                        row.append(float(v))
                    except ValueError:
                        row.append(math.nan)
                rows.append(row)
    except OSError as exc:
        raise ConfigError(f"compare: cannot read '{path}': {exc}") from exc
    if not rows:
        raise ConfigError(f"compare: '{path}' holds no data rows")
    return rows, header


# ---------------------------------------------------------------------------
# wiring
# ---------------------------------------------------------------------------

def _config_dict(args) -> dict:
    skip = {"func", "figure", "output", "format", "config"}
    return {
        k: v for k, v in sorted(vars(args).items())
        if k not in skip and v is not None and not callable(v)
    }


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["csv", "json", "svg"], default="csv")
    p.add_argument("-o", "--output", help="output file (default: stdout for csv/json)")
    p.add_argument("--figure", help="also render a matplotlib figure to this path")
    p.add_argument("--config", help="key=value defaults file (flags win)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="schwinger-kit",
        description="Assisted tunnelling exponents: sweeps, tables, figures.",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profiles", help="weak-pulse profiles g(t)")
    p.add_argument("--kind", required=True, help="comma list, e.g. sg:1,sauter,lorentzian")
    p.add_argument("--N", type=int, default=None, help="order for bare 'sg' entries")
    p.add_argument("--t", required=True, help="time grid a..b:n[:log] (units 1/omega)")
    p.add_argument("--modified-sauter-shift", type=_parse_float, default=1.0,
                   help="frequency rescale applied to modified-sauter entries (e.g. pi/2)")
    _add_common(p)
    p.set_defaults(func=_cmd_profiles)

    p = sub.add_parser("xi", help="reflection-shift parameter xi versus N")
    p.add_argument("--N", required=True, help="comma list of orders, e.g. 1,2,5,20")
    p.add_argument("--eps", required=True, help="comma list of field-strength ratios")
    _add_common(p)
    p.set_defaults(func=_cmd_xi)

    p = sub.add_parser("w0", help="stationary action W0 versus gamma")
    p.add_argument("--kind", required=True, help="sg (with --N list) or kind list")
    p.add_argument("--N", default=None, help="comma list of sg orders")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--E", type=float, default=0.05, help="E/E_S bookkeeping scale")
    p.add_argument("--gamma", default=None, help="gamma grid a..b:n[:log]")
    p.add_argument("--omega", default=None, help="omega grid (gamma derived via E)")
    p.add_argument("--with-references", action="store_true",
                   help="append Sauter and Lorentzian reference columns")
    _add_common(p)
    p.set_defaults(func=_cmd_w0)

    p = sub.add_parser("transform", help="rescaled Fourier transforms")
    p.add_argument("--kind", required=True)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--x", required=True, help="x grid a..b:n[:log]")
    _add_common(p)
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("saddle", help="saddle-condition residual versus gamma")
    p.add_argument("--E", dest="E_list", required=True, help="comma list of E/E_S")
    p.add_argument("--gamma", required=True, help="gamma grid in (1, inf)")
    p.add_argument("--kappa", type=float, default=1e-4,
                   help="rectangular-limit realization of the transform")
    _add_common(p)
    p.set_defaults(func=_cmd_saddle)

    p = sub.add_parser("integral-check", help="half-line transform integrals")
    p.add_argument("--kind", required=True)
    p.add_argument("--N", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_integral_check)

    p = sub.add_parser("orders", help="n-photon exponents versus gamma")
    p.add_argument("--kind", default="lorentzian")
    p.add_argument("--n-photons", default="1,2,3")
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--E", type=float, default=1e-4)
    p.add_argument("--gamma", default=None)
    p.add_argument("--omega", default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_orders)

    p = sub.add_parser("instanton", help="shoot one closed Euclidean orbit")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--gamma", dest="gamma_point", required=True)
    p.add_argument("--E", type=float, default=0.05)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--samples", type=int, default=512)
    _add_common(p)
    p.set_defaults(func=_cmd_instanton)

    p = sub.add_parser("compare", help="deviation report between two CSV runs")
    p.add_argument("table_a")
    p.add_argument("table_b")
    p.add_argument("--column", default=None, help="column name (default: second column)")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_compare)

    return ap


def _apply_config_file(argv: list[str]) -> list[str]:
    """Insert key=value file entries as defaults ahead of explicit flags."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise ConfigError("--config needs a file path")
    path = argv[idx + 1]
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file '{path}': {exc}") from exc
    extra: list[str] = []
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"bad config line '{line}' (want key=value)")
        key, value = line.split("=", 1)
        extra += [f"--{key.strip().replace('_', '-')}", value.strip()]
    # defaults go right after the subcommand so explicit flags override them
    return argv[:1] + extra + argv[1:]


_VALUE_FLAGS = {"--t", "--x", "--gamma", "--omega", "--eps", "--E", "--N"}


def _merge_negative_values(argv: list[str]) -> list[str]:
    """Join grid values that start with '-' onto their flag (argparse quirk)."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        if argv and not argv[0].startswith("-"):
            argv = _apply_config_file(argv)
        argv = _merge_negative_values(argv)
        args = parser.parse_args(argv)
        args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except GridError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SchwingerKitError as exc:
        cmd = argv[0] if argv else "?"
        print(f"numerical failure in '{cmd}': {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
