"""Serialization of sweep results (CSV, JSON) and the I(eps) plot (SVG).

High-precision values are written as decimal strings with
``ceil(0.302 * precision_bits) + 2`` significant digits, which round-trips at
the working precision.  Error bounds are IEEE doubles and use ``repr``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from .context import PrecisionContext
from .errors import PreconditionError
from .sweep import JumpFlag, SweepResult

__all__ = [
    "digits_for",
    "format_number",
    "sweep_to_csv",
    "sweep_from_csv",
    "sweep_to_json",
    "sweep_from_json",
    "plot_sweep_svg",
    "MalformedInput",
]

SWEEP_COLUMNS = ("eps", "i_value", "err_bound", "t_used", "failed")


class MalformedInput(PreconditionError):
    """A result file cannot be parsed."""


def digits_for(precision_bits: int) -> int:
    return math.ceil(precision_bits * 0.302) + 2


def format_number(x, ctx: PrecisionContext) -> str:
    m = ctx.mp
    return m.nstr(m.mpf(x), digits_for(ctx.precision_bits), strip_zeros=False,
                  min_fixed=-5, max_fixed=6)


def _format_float(x: float) -> str:
    return repr(float(x))


def _rows(result: SweepResult, ctx):
    for i, e in enumerate(result.eps_grid):
        failed = result.is_failed(i)
        yield {
            "eps": repr(float(e)),
            "i_value": "" if failed else format_number(result.values[i], ctx),
            "err_bound": "" if failed else _format_float(result.err_bounds[i]),
            "t_used": "" if failed or not result.t_used else _format_float(result.t_used[i]),
            "failed": "1" if failed else "0",
        }


def sweep_to_csv(result: SweepResult, ctx: PrecisionContext) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in _rows(result, ctx):
        w.writerow(row)
    return buf.getvalue()


def _parse_rows(rows, ctx):
    m = ctx.mp
    grid, values, errs, ts, failed = [], [], [], [], []
    for n, row in enumerate(rows, start=1):
        try:
            grid.append(float(row["eps"]))
            bad = row.get("failed", "0").strip() in ("1", "true", "True")
            failed.append(bad)
            if bad:
                values.append(None)
                errs.append(0.0)
                ts.append(0.0)
            else:
                values.append(m.mpf(row["i_value"]))
                errs.append(float(row["err_bound"]))
                ts.append(float(row["t_used"]) if row.get("t_used") not in (None, "") else 0.0)
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"row {n}: {exc}") from exc
    if not grid:
        raise MalformedInput("no data rows")
    return grid, values, errs, ts, failed


def sweep_from_csv(text_or_path, ctx: PrecisionContext) -> SweepResult:
    """Parse :func:`sweep_to_csv` output (the reference value is not stored in CSV)."""
    text = _read(text_or_path)
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or not set(SWEEP_COLUMNS[:3]) <= set(reader.fieldnames):
        raise MalformedInput(f"expected columns {', '.join(SWEEP_COLUMNS)}")
    grid, values, errs, ts, failed = _parse_rows(reader, ctx)
    try:
        return SweepResult(tuple(grid), tuple(values), tuple(errs), None, 0.0, tuple(ts), tuple(failed))
    except ValueError as exc:
        raise MalformedInput(str(exc)) from exc


def sweep_to_json(result: SweepResult, ctx: PrecisionContext, config: dict | None = None) -> str:
    doc = {
        "config": config or {},
        "results": list(_rows(result, ctx)),
        "reference": None if result.reference is None else {
            "value": format_number(result.reference, ctx),
            "err_bound": _format_float(result.reference_err),
        },
        "jumps": [
            {
                "eps_lo": repr(float(j.eps_lo)),
                "eps_hi": repr(float(j.eps_hi)),
                "delta": format_number(j.delta, ctx),
                "significance": _format_float(j.significance),
            }
            for j in result.jumps
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def sweep_from_json(text_or_path, ctx: PrecisionContext) -> SweepResult:
    text = _read(text_or_path)
    try:
        doc = json.loads(text)
        grid, values, errs, ts, failed = _parse_rows(doc["results"], ctx)
        ref = doc.get("reference")
        jumps = tuple(
            JumpFlag(float(j["eps_lo"]), float(j["eps_hi"]), ctx.mp.mpf(j["delta"]),
                     float(j["significance"]))
            for j in doc.get("jumps", ())
        )
        return SweepResult(
            tuple(grid), tuple(values), tuple(errs),
            None if ref is None else ctx.mp.mpf(ref["value"]),
            0.0 if ref is None else float(ref["err_bound"]),
            tuple(ts), tuple(failed), jumps,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(str(exc)) from exc


def _read(text_or_path) -> str:
    """Path objects and strings naming an existing file are read; anything
    else is taken as the document text."""
    if isinstance(text_or_path, Path):
        return text_or_path.read_text()
    text = str(text_or_path)
    if text and "\n" not in text and Path(text).is_file():
        return Path(text).read_text()
    return text


def plot_sweep_svg(result: SweepResult, out_path) -> Path:
    """I(eps) against eps with error bars, written as a standalone SVG.

    The data line carries the SVG id ``i_of_eps`` (one marker per point) and
    the error bars ``err_bars``.  Output is deterministic for fixed input.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    good = [i for i in range(len(result.eps_grid)) if not result.is_failed(i)]
    if not good:
        raise MalformedInput("no successful points to plot")
    xs = [float(result.eps_grid[i]) for i in good]
    ys = [float(result.values[i]) for i in good]
    es = [float(result.err_bounds[i]) for i in good]
    with plt.rc_context({"svg.hashsalt": "rhxi", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6, 4))
        bars = ax.errorbar(xs, ys, yerr=es, fmt="none", ecolor="0.4", capsize=2)
        for artist in bars.lines[2]:
            artist.set_gid("err_bars")
        (line,) = ax.plot(xs, ys, marker="o", markersize=4, linestyle="-", color="C0")
        line.set_gid("i_of_eps")
        if result.reference is not None:
            ax.axhline(float(result.reference), color="C3", linestyle="--", linewidth=0.8,
                       gid="reference")
        ax.set_xlabel("epsilon")
        ax.set_ylabel("I(epsilon)")
        ax.ticklabel_format(axis="y", useOffset=False)
        fig.tight_layout()
        out_path = Path(out_path)
        fig.savefig(out_path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return out_path
