"""Command line front end: CSV in, one JSON document out.

    gdcov compute|test|gauss-check|nd-check --input PATH --x-cols A:B
          --y-cols C:D --cndf-x SPEC --cndf-y SPEC [--method trace]
          [--test chi2|permutation] [--replicates B] [--seed S]
          [--realizations M] [--header] [--output json|plain]

Exit status: 0 success, 2 input error, 3 numerical failure.  Errors are
reported as ``{"error": {"kind": ..., "detail": ...}}`` on stdout.  With
``--output plain`` the same document is flattened to ``key = value`` lines.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .cndf import make_cndf, nd_check
from .errors import GdcovError, InputError, NumericalError
from .estimator import METHODS, gdcov_sq, summarize
from .gaussfield import gaussian_cov_mc
from .inference import permutation_test, quadform_test

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL = 0, 2, 3


@dataclass
class RunConfig:
    command: str
    input_path: str
    x_cols: list[int]
    y_cols: list[int]
    cndf_x: str = "euclidean"
    cndf_y: str = "euclidean"
    method: str = "trace"
    test: str = "none"
    replicates: int = 999
    seed: int = 0
    realizations: int = 10000
    has_header: bool = False
    output: str = "json"


def parse_columns(text: str) -> list[int]:
    """``A:B`` (half-open, 0-based) or a comma list ``i,j,k``."""
    text = text.strip()
    try:
        if ":" in text:
            lo, hi = (int(v) for v in text.split(":"))
            cols = list(range(lo, hi))
        else:
            cols = [int(v) for v in text.split(",")]
    except ValueError:
        raise InputError(f"bad column selection {text!r}") from None
    if not cols or min(cols) < 0 or len(set(cols)) != len(cols):
        raise InputError(f"bad column selection {text!r}")
    return cols


def _parse_cell(text: str, row: int, col: int) -> float:
    try:
        v = float(text)
    except ValueError:
        raise InputError(f"non-numeric cell {text!r} at row {row}, column {col}") from None
    if not math.isfinite(v):
        raise InputError(f"non-finite cell {text!r} at row {row}, column {col}")
    return v


def load_csv(path, x_cols, y_cols, has_header: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Read two column groups of a numeric CSV file.

    Rows are 0-based data rows (the header, if any, is not counted).
    """
    x_cols, y_cols = list(x_cols), list(y_cols)
    if set(x_cols) & set(y_cols):
        raise InputError(f"x and y column groups overlap: {sorted(set(x_cols) & set(y_cols))}")
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r]
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    if has_header and rows:
        rows = rows[1:]
    if not rows:
        raise InputError("no data rows")
    width = len(rows[0])
    wanted = x_cols + y_cols
    if max(wanted) >= width:
        raise InputError(f"column {max(wanted)} out of range for width {width}")
    data = np.empty((len(rows), len(wanted)))
    for i, r in enumerate(rows):
        if len(r) != width:
            raise InputError(f"ragged row {i}: {len(r)} fields, expected {width}")
        for j, col in enumerate(wanted):
            data[i, j] = _parse_cell(r[col], i, col)
    if data.shape[0] < 2:
        raise InputError("need at least 2 data rows")
    k = len(x_cols)
    return data[:, :k], data[:, k:]


def _fmt(v) -> str:
    if isinstance(v, bool) or v is None:
        return {True: "true", False: "false", None: "null"}[v]
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return format(v, ".17g") if math.isfinite(v) else "null"
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{_fmt(str(k))}: {_fmt(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def dumps(doc: dict) -> str:
    """JSON with every float written to 17 significant digits."""
    return _fmt(doc)


def dumps_plain(doc: dict, prefix: str = "") -> str:
    """One ``dotted.key = value`` line per leaf, values formatted as in JSON."""
    lines = []
    for k, v in doc.items():
        if isinstance(v, dict):
            lines.append(dumps_plain(v, f"{prefix}{k}."))
        else:
            lines.append(f"{prefix}{k} = {_fmt(v)}")
    return "\n".join(lines)


def _summary_doc(cfg: RunConfig, x, y, cx, cy) -> dict:
    s = summarize(x, y, cx, cy)
    vn2 = s.vn2 if cfg.method == "trace" else gdcov_sq(x, y, cx, cy, cfg.method)
    return {
        "n": s.n, "vn2": vn2, "vnx": s.vnx, "vny": s.vny, "an": s.an, "bn": s.bn,
        "rn": s.rn, "t": s.t, "method": cfg.method,
        "cndf_x": str(cx), "cndf_y": str(cy),
    }


def execute(cfg: RunConfig) -> dict:
    if cfg.method not in METHODS:
        raise InputError(f"unknown method {cfg.method!r}")
    cx, cy = make_cndf(cfg.cndf_x), make_cndf(cfg.cndf_y)
    x, y = load_csv(cfg.input_path, cfg.x_cols, cfg.y_cols, cfg.has_header)

    if cfg.command == "nd-check":
        return {
            "n": x.shape[0],
            "cndf_x": str(cx), "x": nd_check(cx, x).as_dict(),
            "cndf_y": str(cy), "y": nd_check(cy, y).as_dict(),
        }
    if cfg.command == "gauss-check":
        s = summarize(x, y, cx, cy)
        g = gaussian_cov_mc(x, y, cx, cy, cfg.realizations, cfg.seed)
        z = (g.g2_estimate - s.vn2) / g.std_error if g.std_error > 0 else 0.0
        return {
            "n": s.n, "vn2": s.vn2, "g2_estimate": g.g2_estimate,
            "std_error": g.std_error, "z_score": z, "realizations": g.realizations,
            "seed": cfg.seed, "cndf_x": str(cx), "cndf_y": str(cy),
        }

    doc = _summary_doc(cfg, x, y, cx, cy)
    doc["test"] = None
    if cfg.command == "test":
        kind = "chi2" if cfg.test == "none" else cfg.test
        if kind == "chi2":
            r = quadform_test(x, y, cx, cy)
        elif kind == "permutation":
            r = permutation_test(x, y, cx, cy, cfg.replicates, cfg.seed)
        else:
            raise InputError(f"unknown test {cfg.test!r}")
        doc["test"] = {
            "method": r.method, "statistic": r.statistic, "pvalue": r.pvalue,
            "replicates": r.replicates, "seed": r.seed, "conservative": r.conservative,
        }
    return doc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gdcov", description="Generalized distance covariance.")
    p.add_argument("command", choices=["compute", "test", "gauss-check", "nd-check"])
    p.add_argument("--input", required=True)
    p.add_argument("--x-cols", required=True)
    p.add_argument("--y-cols", required=True)
    p.add_argument("--cndf-x", default="euclidean")
    p.add_argument("--cndf-y", default="euclidean")
    p.add_argument("--method", default="trace", choices=list(METHODS))
    p.add_argument("--test", default="none", choices=["none", "chi2", "permutation"])
    p.add_argument("--replicates", type=int, default=999)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--realizations", type=int, default=10000)
    p.add_argument("--header", action="store_true")
    p.add_argument("--output", default="json", choices=["json", "plain"])
    return p


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    render = dumps
    try:
        ns = build_parser().parse_args(argv)
        render = dumps_plain if ns.output == "plain" else dumps
        cfg = RunConfig(
            command=ns.command, input_path=ns.input,
            x_cols=parse_columns(ns.x_cols), y_cols=parse_columns(ns.y_cols),
            cndf_x=ns.cndf_x, cndf_y=ns.cndf_y, method=ns.method, test=ns.test,
            replicates=ns.replicates, seed=ns.seed, realizations=ns.realizations,
            has_header=ns.header, output=ns.output,
        )
        doc = execute(cfg)
    except NumericalError as exc:
        out.write(render({"error": {"kind": exc.kind, "detail": str(exc)}}) + "\n")
        return EXIT_NUMERICAL
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        out.write(render({"error": {"kind": NumericalError.kind, "detail": str(exc)}}) + "\n")
        return EXIT_NUMERICAL
    except GdcovError as exc:
        out.write(render({"error": {"kind": exc.kind, "detail": str(exc)}}) + "\n")
        return EXIT_INPUT
    out.write(render(doc) + "\n")
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
