"""Command line: ``rhxi {integrate,sweep,xicheck,zeros,plot}``.

Exit codes: 0 clean, 2 usage or precondition, 3 numeric failure,
4 self-test failure, 10 jump detected.

Settings resolve as defaults < ``RHXI_PRECISION_BITS`` < ``--config`` file < flags.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import re
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .context import PrecisionContext
from .errors import PreconditionError, RhxiError
from .quadrature import T_CAP, IntegrationOptions, closed_form_j, i_of_eps, j_of_eps
from .reporting import (
    MalformedInput,
    format_number,
    plot_sweep_svg,
    sweep_from_csv,
    sweep_to_csv,
    sweep_to_json,
)
from .sweep import SweepOptions, default_eps_grid, inject_pole, sweep
from .zeros import scan_zeros

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_SELFTEST = 4
EXIT_JUMP = 10

ENV_PRECISION = "RHXI_PRECISION_BITS"
XICHECK_EPS = ("0", "0.1", "0.3")


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = 256
    target_tol: float = 1e-10
    eps_min: float = 0.02
    eps_max: float = 0.48
    eps_steps: int = 24
    t_cap: float = T_CAP
    threshold: float = 5.0
    output_format: str = "csv"
    output_path: str | None = None

    def validate(self) -> PrecisionContext:
        if not 0 < self.eps_min < 1 or not 0 < self.eps_max < 1:
            raise PreconditionError("eps range must lie inside (0, 1)")
        if self.eps_steps < 1:
            raise PreconditionError("eps_steps must be at least 1")
        if self.eps_steps > 1 and not self.eps_min < self.eps_max:
            raise PreconditionError("eps_min must be below eps_max")
        if not 10 <= self.t_cap <= T_CAP:
            raise PreconditionError(f"t_cap must lie in [10, {T_CAP:g}]")
        if not self.threshold > 0:
            raise PreconditionError("threshold must be positive")
        if self.output_format not in ("csv", "json"):
            raise PreconditionError("format must be csv or json")
        return PrecisionContext(precision_bits=self.precision_bits, target_tol=self.target_tol)

    def grid(self):
        return default_eps_grid(self.eps_min, self.eps_max, self.eps_steps)


_FIELD_ALIASES = {
    "tol": "target_tol",
    "format": "output_format",
    "out": "output_path",
}
_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(RunConfig)}


def _coerce(name, raw):
    kind = _FIELD_TYPES[name]
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    return None if raw in (None, "") else str(raw)


def read_config_file(path) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise PreconditionError(f"{path}:{n}: expected key=value")
        key, value = (p.strip() for p in line.split("=", 1))
        key = key.replace("-", "_")
        key = _FIELD_ALIASES.get(key, key)
        if key not in _FIELD_TYPES:
            raise PreconditionError(f"{path}:{n}: unknown key {key!r}")
        try:
            out[key] = _coerce(key, value)
        except ValueError as exc:
            raise PreconditionError(f"{path}:{n}: {exc}") from exc
    return out


def resolve_config(args, environ=None) -> RunConfig:
    environ = os.environ if environ is None else environ
    values = {}
    if environ.get(ENV_PRECISION):
        try:
            values["precision_bits"] = int(environ[ENV_PRECISION])
        except ValueError as exc:
            raise PreconditionError(f"{ENV_PRECISION} must be an integer") from exc
    if getattr(args, "config", None):
        values.update(read_config_file(args.config))
    flag_map = {
        "precision_bits": "precision_bits",
        "tol": "target_tol",
        "eps_min": "eps_min",
        "eps_max": "eps_max",
        "eps_steps": "eps_steps",
        "t_cap": "t_cap",
        "threshold": "threshold",
        "format": "output_format",
        "out": "output_path",
    }
    for attr, key in flag_map.items():
        v = getattr(args, attr, None)
        if v is not None:
            values[key] = v
    return RunConfig(**values)


_INJECT = re.compile(r"^\s*(?P<c>[^@]+)@(?P<s0>.+)$")


def parse_injection(text: str):
    """``c@s0``, e.g. ``0.01@0.75+10i``."""
    match = _INJECT.match(text)
    if not match:
        raise PreconditionError(f"--inject expects c@s0, got {text!r}")
    c, s0 = match.group("c").strip(), match.group("s0").strip()
    for part in (c, s0):
        try:
            complex(part.replace("i", "j").replace(" ", ""))
        except ValueError as exc:
            raise PreconditionError(f"cannot parse {part!r} as a complex number") from exc
    return c, s0


def _integrand(injections):
    g = None
    for spec in injections or ():
        c, s0 = parse_injection(spec)
        g = inject_pole(c, s0, base=g)
    return g


def _emit(text: str, path):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_integrate(args) -> int:
    cfg = resolve_config(args)
    ctx = cfg.validate()
    if args.eps is None:
        raise PreconditionError("--eps is required")
    start = time.perf_counter()
    opts = IntegrationOptions(tol=cfg.target_tol, t_cap=cfg.t_cap, integrand=_integrand(args.inject))
    r = i_of_eps(args.eps, ctx, opts)
    lines = [
        f"eps = {args.eps!r}",
        f"I = {format_number(r.value, ctx)}",
        f"quad_err = {r.quad_err!r}",
        f"tail_err = {r.tail_err!r}",
        f"total_err = {r.total_err!r}",
        f"T_used = {r.T_used!r}",
        f"panels = {r.panels}",
    ]
    _emit("\n".join(lines) + "\n", cfg.output_path)
    print(f"wall_time = {time.perf_counter() - start:.2f} s", file=sys.stderr)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = resolve_config(args)
    ctx = cfg.validate()

    def progress(eps, value):
        shown = "failed" if value is None else ctx.mp.nstr(value, 15)
        print(f"eps = {eps:g}: {shown}", file=sys.stderr)

    opts = SweepOptions(tol=cfg.target_tol, threshold=cfg.threshold, t_cap=cfg.t_cap,
                        integrand=_integrand(args.inject), progress=progress)
    result = sweep(cfg.grid(), ctx, opts)
    if cfg.output_format == "json":
        config = {k: v for k, v in dataclasses.asdict(cfg).items() if k != "output_path"}
        config["inject"] = list(args.inject or [])
        text = sweep_to_json(result, ctx, config)
    else:
        text = sweep_to_csv(result, ctx)
    _emit(text, cfg.output_path)
    for j in result.jumps:
        print(f"jump between eps={j.eps_lo:g} and eps={j.eps_hi:g}: "
              f"delta={ctx.mp.nstr(j.delta, 12)} ({j.significance:.3g} x bound)", file=sys.stderr)
    return EXIT_JUMP if result.jumps else EXIT_OK


def cmd_xicheck(args) -> int:
    if getattr(args, "tol", None) is None:
        args.tol = 1e-12
    cfg = resolve_config(args)
    ctx = cfg.validate()
    exact = closed_form_j(ctx)
    lines = [f"closed_form = {format_number(exact, ctx)}"]
    ok = True
    opts = IntegrationOptions(tol=cfg.target_tol, t_cap=cfg.t_cap)
    for e in XICHECK_EPS:
        r = j_of_eps(e, ctx, opts)
        diff = r.value - exact
        passed = float(abs(diff)) <= r.total_err
        ok &= passed
        lines.append(
            f"eps = {e}: J = {format_number(r.value, ctx)} diff = {ctx.mp.nstr(diff, 6)} "
            f"bound = {r.total_err!r} {'ok' if passed else 'FAIL'}")
    _emit("\n".join(lines) + "\n", cfg.output_path)
    return EXIT_OK if ok else EXIT_SELFTEST


def cmd_zeros(args) -> int:
    cfg = resolve_config(args)
    ctx = cfg.validate()
    zl = scan_zeros(args.tmax, args.step, ctx)
    _emit(zl.to_csv(), cfg.output_path)
    return EXIT_OK


def cmd_plot(args) -> int:
    cfg = resolve_config(args)
    ctx = cfg.validate()
    path = Path(args.input)
    if not path.exists():
        raise MalformedInput(f"{path} does not exist")
    result = sweep_from_csv(path.read_text(), ctx)
    out = cfg.output_path or str(path.with_suffix(".svg"))
    plot_sweep_svg(result, out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _common(p):
    p.add_argument("--precision-bits", type=int, help="working precision (default 256)")
    p.add_argument("--tol", type=float, help="absolute target tolerance")
    p.add_argument("--config", help="key=value settings file")
    p.add_argument("--out", help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rhxi", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("integrate", help="I(eps) on one line")
    _common(p)
    p.add_argument("--eps", type=float)
    p.add_argument("--t-cap", type=float)
    p.add_argument("--inject", action="append", metavar="C@S0")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("sweep", help="I(eps) over a grid with jump detection")
    _common(p)
    p.add_argument("--eps-min", type=float)
    p.add_argument("--eps-max", type=float)
    p.add_argument("--eps-steps", type=int)
    p.add_argument("--t-cap", type=float)
    p.add_argument("--threshold", type=float)
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--inject", action="append", metavar="C@S0")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("xicheck", help="closed-form check of the xi line integral")
    _common(p)
    p.add_argument("--t-cap", type=float)
    p.set_defaults(func=cmd_xicheck)

    p = sub.add_parser("zeros", help="critical-line zeros as CSV")
    _common(p)
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--step", type=float, default=0.25)
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("plot", help="SVG plot of a sweep CSV")
    _common(p)
    p.add_argument("input", help="CSV written by `rhxi sweep`")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PreconditionError as exc:
        print(f"rhxi {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RhxiError as exc:
        print(f"rhxi {args.command}: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
