"""Command-line front end.

Subcommands: classify, critical, price, breach, calibrate, table1,
sweep. Human-readable text by default, CSV with --csv. Exit codes:
0 success, 2 input validation, 3 numerical failure. A config file of
key=value lines (# comments, UTF-8) can supply any flag; explicit
flags win over file values, unknown keys are rejected.
"""

from __future__ import annotations

import argparse
import math
import sys

from .calibrate import FLOOR_THETA, implied_nu, numeric_critical_price, reproduce_table1
from .classify import classify_double, classify_down_and_out, classify_up_and_out
from .critical import critical_prices, s_ml_flat, s_mu_flat
from .model import (
    BarrierCurve,
    BarrierSet,
    BarrierShape,
    MarketParams,
    NumericsError,
    OptionSpec,
    Payoff,
    ValidationError,
)
from .numerics import nu_for_accuracy
from .passage import breach_prob_closed_flat, breach_prob_mc, breach_prob_pde, default_grid
from .pricing import (
    McConfig,
    bs_vanilla,
    double_knockout_closed,
    down_and_out_call_closed,
    mc_price,
    up_and_out_call_closed,
)

_MARKET = ("sigma", "r", "T")
_BARRIER = ("lower", "upper", "lower-growth", "upper-growth", "lower-file", "upper-file")
_ACCURACY = ("nu", "pi", "digits")
_MC = ("paths", "steps", "seed")
_COMMON = ("csv", "config")

ALLOWED_KEYS = {
    "classify": set(_MARKET + _BARRIER + _ACCURACY + _COMMON + ("s0",)),
    "critical": set(_MARKET + _BARRIER + _ACCURACY + _COMMON),
    "price": set(_MARKET + _BARRIER + _MC + _COMMON + ("s0", "strike", "method")),
    "breach": set(_MARKET + _BARRIER + _MC + _COMMON + ("s0", "method")),
    "calibrate": set(_MARKET + _COMMON + ("strike", "lower", "upper", "theta", "digits")),
    "table1": set(_COMMON + ("theta", "digits", "nu")),
    "sweep": set(_MARKET + _BARRIER + _ACCURACY + _COMMON + ("strike",)),
}
_BOOL_KEYS = {"csv"}


def emit_csv(rows, header) -> str:
    """RFC-4180-style CSV: '.' decimals, 10 significant digits, LF."""
    ncols = len(header)
    lines = [",".join(_csv_cell(h) for h in header)]
    for row in rows:
        cells = list(row)
        if len(cells) != ncols:
            raise ValidationError(
                f"ragged row: expected {ncols} columns, got {len(cells)}"
            )
        lines.append(",".join(_csv_cell(c) for c in cells))
    return "\n".join(lines) + "\n"


def _csv_cell(value) -> str:
    text = _fmt(value)
    if any(ch in text for ch in ',"\n'):
        text = '"' + text.replace('"', '""') + '"'
    return text


def _fmt(value) -> str:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return f"{value:.10g}"


def _read_config(path: str) -> list[tuple[str, str]]:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValidationError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, value = line.split("=", 1)
            entries.append((key.strip().replace("_", "-"), value.strip()))
    return entries


def _inject_config(argv: list[str]) -> list[str]:
    """Turn config-file entries into flags placed before the user's own.

    argparse keeps the last occurrence of a repeated flag, so inserting
    the file's values immediately after the subcommand makes explicit
    flags override them.
    """
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None:
        return argv
    cmd = next((tok for tok in argv if not tok.startswith("-")), None)
    if cmd is None or cmd not in ALLOWED_KEYS:
        return argv  # let argparse produce its own diagnostic
    allowed = ALLOWED_KEYS[cmd]
    extra: list[str] = []
    for key, value in _read_config(path):
        if key == "config":
            raise ValidationError("config files cannot nest another config")
        if key not in allowed:
            raise ValidationError(f"unknown config key for {cmd}: {key!r}")
        if key in _BOOL_KEYS:
            flag = value.strip().lower()
            if flag in ("1", "true", "yes", "on"):
                extra.append(f"--{key}")
            elif flag in ("0", "false", "no", "off"):
                pass
            else:
                raise ValidationError(f"config key {key!r} wants true/false, got {value!r}")
        else:
            extra.extend([f"--{key}", value])
    at = argv.index(cmd) + 1
    return argv[:at] + extra + argv[at:]


def _add_market(p: argparse.ArgumentParser) -> None:
    p.add_argument("--sigma", type=float, required=True, help="volatility (annual)")
    p.add_argument("--r", type=float, required=True, help="risk-free rate (annual)")
    p.add_argument("--T", type=float, required=True, help="time to expiry (years)")


def _add_barriers(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lower", type=float, help="lower barrier level at t=0")
    p.add_argument("--upper", type=float, help="upper barrier level at t=0")
    p.add_argument("--lower-growth", type=float, help="exponential growth rate of the lower barrier")
    p.add_argument("--upper-growth", type=float, help="exponential growth rate of the upper barrier")
    p.add_argument("--lower-file", help="two-column t,level CSV for a tabulated lower barrier")
    p.add_argument("--upper-file", help="two-column t,level CSV for a tabulated upper barrier")


def _add_accuracy(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nu", type=float, help="distance parameter nu (wins over --pi/--digits)")
    p.add_argument("--pi", type=float, help="breach-probability budget; nu from its quantile")
    p.add_argument("--digits", type=int, help="decimal digits of price accuracy (theta = 10^-digits)")


def _add_mc(p: argparse.ArgumentParser) -> None:
    p.add_argument("--paths", type=int, default=100_000, help="Monte Carlo paths")
    p.add_argument("--steps", type=int, default=365, help="monitoring steps per year")
    p.add_argument("--seed", type=int, default=0, help="random seed (64-bit)")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--csv", action="store_true", help="emit CSV instead of text")
    p.add_argument("--config", help="key=value file; explicit flags override it")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="barrierkit",
        description="Barrier-option degeneracy: critical prices, classification, pricing.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="name the effective option type at s0")
    p.add_argument("--s0", type=float, required=True, help="initial asset price")
    _add_market(p)
    _add_barriers(p)
    _add_accuracy(p)
    _add_common(p)

    p = sub.add_parser("critical", help="critical initial prices for the barrier set")
    _add_market(p)
    _add_barriers(p)
    _add_accuracy(p)
    _add_common(p)

    p = sub.add_parser("price", help="price a knock-out call (closed form or Monte Carlo)")
    p.add_argument("--s0", type=float, required=True)
    p.add_argument("--strike", type=float, required=True)
    p.add_argument("--method", choices=("closed", "mc"), default="closed")
    _add_market(p)
    _add_barriers(p)
    _add_mc(p)
    _add_common(p)

    p = sub.add_parser("breach", help="probability of hitting a barrier before expiry")
    p.add_argument("--s0", type=float, required=True)
    p.add_argument("--method", choices=("closed", "mc", "pde"), default="closed")
    _add_market(p)
    _add_barriers(p)
    _add_mc(p)
    _add_common(p)

    p = sub.add_parser("calibrate", help="measured critical price and its implied nu")
    p.add_argument("--strike", type=float, default=100.0)
    p.add_argument("--lower", type=float, help="flat lower barrier level")
    p.add_argument("--upper", type=float, help="flat upper barrier level")
    p.add_argument("--theta", type=float, help="accuracy threshold (power of ten)")
    p.add_argument("--digits", type=int, help="theta = 10^-digits")
    _add_market(p)
    _add_common(p)

    p = sub.add_parser("table1", help="four-row calibration table (K=100, B=70, r=0.10)")
    p.add_argument("--theta", type=float, help="accuracy threshold (power of ten)")
    p.add_argument("--digits", type=int, help="theta = 10^-digits")
    p.add_argument("--nu", type=float, default=4.9, help="reference nu for the analytic column")
    _add_common(p)

    p = sub.add_parser("sweep", help="price/classification sweep over s0")
    p.add_argument("--strike", type=float, required=True)
    _add_market(p)
    _add_barriers(p)
    _add_accuracy(p)
    _add_common(p)

    return ap


def _load_knots(path: str) -> tuple[tuple[float, float], ...]:
    knots = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ValidationError(f"{path}:{lineno}: expected 't,level'")
            knots.append((float(parts[0]), float(parts[1])))
    return tuple(knots)


def _curve_from_args(args, side: str) -> BarrierCurve | None:
    level = getattr(args, side)
    growth = getattr(args, f"{side}_growth")
    file_ = getattr(args, f"{side}_file")
    if file_ is not None:
        if level is not None or growth is not None:
            raise ValidationError(f"--{side}-file excludes --{side}/--{side}-growth")
        return BarrierCurve.tabulated(_load_knots(file_))
    if level is None:
        if growth is not None:
            raise ValidationError(f"--{side}-growth needs --{side}")
        return None
    if growth is not None and growth != 0.0:
        return BarrierCurve.exponential(level, growth)
    return BarrierCurve.flat(level)


def _barriers_from_args(args, T: float) -> BarrierSet:
    barriers = BarrierSet(
        lower=_curve_from_args(args, "lower"), upper=_curve_from_args(args, "upper")
    )
    if barriers.lower is not None or barriers.upper is not None:
        barriers.check_ordering(T)
    return barriers


def _params_from_args(args) -> MarketParams:
    return MarketParams(mu=args.r, sigma=args.sigma, r=args.r, T=args.T)


def _nu_from_args(args) -> float:
    nu = getattr(args, "nu", None)
    pi = getattr(args, "pi", None)
    if nu is not None:
        if pi is not None or getattr(args, "digits", None) is not None:
            print("warning: --nu given, ignoring --pi/--digits", file=sys.stderr)
        return nu
    if pi is not None:
        return nu_for_accuracy(pi)
    raise ValidationError("need --nu or --pi to fix the accuracy distance")


def _theta_from_args(args, default: float | None = None) -> float:
    if args.theta is not None:
        if args.digits is not None:
            print("warning: --theta given, ignoring --digits", file=sys.stderr)
        return args.theta
    if args.digits is not None:
        return 10.0 ** (-args.digits)
    if default is not None:
        return default
    raise ValidationError("need --theta or --digits")


def _closed_price(params: MarketParams, strike: float, barriers: BarrierSet, s0: float):
    has_l = barriers.lower is not None
    has_u = barriers.upper is not None
    if has_l and has_u:
        if barriers.lower.shape is BarrierShape.TABULATED or barriers.upper.shape is BarrierShape.TABULATED:
            raise ValidationError("closed double-barrier form needs flat or exponential barriers")
        curvature = (barriers.lower.growth or 0.0, barriers.upper.growth or 0.0)
        return double_knockout_closed(
            params, strike, barriers.lower.level, barriers.upper.level, s0, curvature
        )
    if has_l:
        if barriers.lower.shape is not BarrierShape.FLAT:
            raise ValidationError("closed single-barrier form needs a flat barrier")
        return down_and_out_call_closed(params, strike, barriers.lower.level, s0)
    if has_u:
        if barriers.upper.shape is not BarrierShape.FLAT:
            raise ValidationError("closed single-barrier form needs a flat barrier")
        return up_and_out_call_closed(params, strike, barriers.upper.level, s0)
    return bs_vanilla(params, Payoff.CALL, strike, s0)


def _cmd_classify(args) -> int:
    params = _params_from_args(args)
    barriers = _barriers_from_args(args, params.T)
    if not barriers.any_present:
        raise ValidationError("classify needs at least one barrier")
    nu = _nu_from_args(args)
    crit = critical_prices(params, barriers, nu)
    if barriers.lower is not None and barriers.upper is not None:
        label = classify_double(
            args.s0,
            barriers.lower.value_at(0.0, params.T),
            barriers.upper.value_at(0.0, params.T),
            crit.s_ml,
            crit.s_mu,
        )
    elif barriers.lower is not None:
        label = classify_down_and_out(args.s0, barriers.lower.value_at(0.0, params.T), crit.s_ml)
    else:
        label = classify_up_and_out(args.s0, barriers.upper.value_at(0.0, params.T), crit.s_mu)
    if args.csv:
        sys.stdout.write(emit_csv([(label.value,)], ["classification"]))
    else:
        print(label.value)
    return 0


def _cmd_critical(args) -> int:
    params = _params_from_args(args)
    barriers = _barriers_from_args(args, params.T)
    if not barriers.any_present:
        raise ValidationError("critical needs at least one barrier")
    nu = _nu_from_args(args)
    crit = critical_prices(params, barriers, nu)
    rows = []
    if crit.s_ml is not None:
        rows.append(("s_ml", crit.s_ml, crit.t_at_max))
    if crit.s_mu is not None:
        rows.append(("s_mu", crit.s_mu, crit.t_at_min))
    if args.csv:
        sys.stdout.write(emit_csv(rows, ["quantity", "value", "t_at_extremum"]))
    else:
        for name, value, t_at in rows:
            print(f"{name} = {_fmt(value)}  (attained at t = {_fmt(t_at)})")
    return 0


def _cmd_price(args) -> int:
    params = _params_from_args(args)
    barriers = _barriers_from_args(args, params.T)
    if args.method == "closed":
        est = _closed_price(params, args.strike, barriers, args.s0)
    else:
        spec = OptionSpec(payoff=Payoff.CALL, strike=args.strike, barriers=barriers)
        cfg = McConfig(paths=args.paths, steps_per_year=args.steps, seed=args.seed)
        est = mc_price(params, spec, args.s0, cfg)
    if args.csv:
        sys.stdout.write(
            emit_csv([(est.value, est.std_error, est.method.value)], ["value", "std_error", "method"])
        )
    else:
        tail = f" +- {_fmt(est.std_error)} (1 se)" if est.std_error else ""
        print(f"price = {_fmt(est.value)}{tail}  [{est.method.value}]")
    return 0


def _cmd_breach(args) -> int:
    params = _params_from_args(args)
    barriers = _barriers_from_args(args, params.T)
    if not barriers.any_present:
        raise ValidationError("breach needs at least one barrier")
    rows = []
    if args.method == "closed":
        for side, curve in (("lower", barriers.lower), ("upper", barriers.upper)):
            if curve is None:
                continue
            if curve.shape is not BarrierShape.FLAT:
                raise ValidationError("closed breach form needs flat barriers")
            p = breach_prob_closed_flat(params, side, curve.level, args.s0, params.T)
            rows.append((f"p_{side}", p, 0.0))
        # single-side closed forms ignore the competing barrier, so the
        # sum is an upper bound for double-barrier sets, not P(E_l)+P(E_u)
        if len(rows) == 1:
            rows.append(("p_total", rows[0][1], 0.0))
    elif args.method == "mc":
        cfg = McConfig(paths=args.paths, steps_per_year=args.steps, seed=args.seed)
        est = breach_prob_mc(params, barriers, args.s0, cfg)
        rows.append(("p_lower", est.p_lower, est.se_lower))
        rows.append(("p_upper", est.p_upper, est.se_upper))
        rows.append(("p_total", est.p_total, math.hypot(est.se_lower, est.se_upper)))
    else:
        grid = default_grid(params, barriers, args.s0, params.T)
        p = breach_prob_pde(params, barriers, args.s0, params.T, grid)
        rows.append(("p_total", p, 0.0))
    if args.csv:
        sys.stdout.write(emit_csv(rows, ["quantity", "value", "std_error"]))
    else:
        for name, value, se in rows:
            tail = f" +- {_fmt(se)} (1 se)" if se else ""
            print(f"{name} = {_fmt(value)}{tail}")
    return 0


def _cmd_calibrate(args) -> int:
    params = _params_from_args(args)
    theta = _theta_from_args(args)
    if (args.lower is None) == (args.upper is None):
        raise ValidationError("calibrate needs exactly one of --lower/--upper")
    if args.lower is not None:
        side, level, pricer = "lower", args.lower, down_and_out_call_closed
    else:
        side, level, pricer = "upper", args.upper, up_and_out_call_closed
    s_crit = numeric_critical_price(params, args.strike, level, side, theta, pricer)
    nu = implied_nu(params, level, side, s_crit)
    if args.csv:
        sys.stdout.write(
            emit_csv([(theta, s_crit, nu)], ["theta", "numeric_critical", "implied_nu"])
        )
    else:
        print(f"numeric critical price = {_fmt(s_crit)}")
        print(f"implied nu = {_fmt(nu)}")
    return 0


_PRECISION_NOTE = (
    "note: price differences quantize at double-precision rounding "
    "(about 1e-16 of the price); accuracy targets below that floor "
    "saturate numeric_sml and implied_nu."
)


def _cmd_table1(args) -> int:
    theta = _theta_from_args(args, default=FLOOR_THETA)
    rows = reproduce_table1(reference_nu=args.nu, theta=theta)
    data = [row.as_tuple() for row in rows]
    if args.csv:
        sys.stdout.write(
            emit_csv(data, ["T", "sigma", "analytic_sml", "numeric_sml", "implied_nu"])
        )
        print(_PRECISION_NOTE, file=sys.stderr)
    else:
        print("T      sigma  analytic_sml  numeric_sml  implied_nu")
        for T, sigma, analytic, numeric, nu in data:
            print(f"{T:<6.2f} {sigma:<6.2f} {analytic:<13.6g} {numeric:<12.6g} {nu:.4g}")
        print(_PRECISION_NOTE)
    return 0


def _cmd_sweep(args) -> int:
    params = _params_from_args(args)
    barriers = _barriers_from_args(args, params.T)
    if not barriers.any_present:
        raise ValidationError("sweep needs at least one barrier")
    nu = _nu_from_args(args)
    crit = critical_prices(params, barriers, nu)
    span = math.exp(10.0 * params.sigma * math.sqrt(params.T))
    bl0 = barriers.lower.value_at(0.0, params.T) if barriers.lower is not None else None
    bu0 = barriers.upper.value_at(0.0, params.T) if barriers.upper is not None else None
    if bl0 is not None and bu0 is not None:
        lo, hi = bl0 * 1.02, bu0 * 0.98
    elif bl0 is not None:
        lo, hi = bl0 * 1.02, bl0 * span
    else:
        lo, hi = bu0 / span, bu0 * 0.98
    n_points = 33
    rows = []
    for i in range(n_points):
        s0 = lo + (hi - lo) * i / (n_points - 1)
        if bl0 is not None and bu0 is not None:
            label = classify_double(s0, bl0, bu0, crit.s_ml, crit.s_mu)
        elif bl0 is not None:
            label = classify_down_and_out(s0, bl0, crit.s_ml)
        else:
            label = classify_up_and_out(s0, bu0, crit.s_mu)
        barrier_price = _closed_price(params, args.strike, barriers, s0).value
        vanilla = bs_vanilla(params, Payoff.CALL, args.strike, s0).value
        rows.append((s0, label.value, barrier_price, vanilla, abs(barrier_price - vanilla)))
    if args.csv:
        sys.stdout.write(
            emit_csv(rows, ["s0", "classification", "barrier_price", "vanilla_price", "abs_diff"])
        )
    else:
        print("s0          classification        barrier_price  vanilla_price  abs_diff")
        for s0, label, bp, vp, diff in rows:
            print(f"{s0:<11.6g} {label:<21} {bp:<14.8g} {vp:<14.8g} {diff:.4g}")
    return 0


_HANDLERS = {
    "classify": _cmd_classify,
    "critical": _cmd_critical,
    "price": _cmd_price,
    "breach": _cmd_breach,
    "calibrate": _cmd_calibrate,
    "table1": _cmd_table1,
    "sweep": _cmd_sweep,
}


def run(argv) -> int:
    """Dispatch one command; returns the process exit code."""
    argv = list(argv)
    try:
        argv = _inject_config(argv)
        args = build_parser().parse_args(argv)
        return _HANDLERS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)


def main() -> None:
    sys.exit(run(sys.argv[1:]))
