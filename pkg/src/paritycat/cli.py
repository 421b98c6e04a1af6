"""``paritycat`` command line.

Exit codes: 0 success, 1 usage error, 2 numerical failure (non-convergence,
indeterminate limit or failed oracle check), 3 cap exceeded.

Oracle caps: Fock basis ``binom(N + D - 1, D - 1) <= 2e6`` and RDM dimension
``<= 5000``.  Grid sweeps are capped at ``1e7`` points.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from .cats import DegenerateCatError
from .combinatorics import ParityLabel
from .limits import IndeterminateLimitError
from .oracle import JacobiConvergenceError, OracleCapError
from .sweep import COLORMAPS, RUNNERS, CapExceededError, SweepConfig, rows

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_CAP = 0, 1, 2, 3

MODES = {"grid": "grid", "angular": "angular", "infodiag": "infodiag", "limit": "limit",
         "oracle-check": "oracle"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = text.split(":")
        return float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list of numbers, got {text!r}") from None


# dest -> (flag, type, help); every key is also accepted in --config files
OPTIONS = {
    "dim": ("--dim", int, "number of levels D"),
    "particles": ("--particles", int, "number of quDits N"),
    "traced": ("--traced", int, "particles M kept in the reduced state"),
    "parity": ("--parity", str, "parity bitstring, first character is level 1 (e.g. 101)"),
    "range": ("--range", _range, "axis range lo:hi; repeat once per axis or give one for all"),
    "points": ("--points", int, "points per axis (>= 2); repeat per axis or give one for all"),
    "radius": ("--radius", float, "sphere radius R (angular, infodiag)"),
    "eta": ("--eta", float, "transmissivity in [1/2, 1) (limit --kind rstl)"),
    "seed": ("--seed", int, "generator seed (infodiag, oracle-check)"),
    "colormap": ("--colormap", str, "infodiag colormap scalar: entropy, dist or angle"),
    "ref": ("--ref", _floats, "reference point or direction for the colormap"),
    "out": ("--out", str, "output path (default stdout)"),
    "format": ("--format", str, "csv or json (newline-delimited)"),
    "workers": ("--workers", int, "worker processes; output does not depend on it"),
    "samples": ("--samples", int, "infodiag sample count"),
    "kind": ("--kind", str, "limit kind: tl or rstl"),
    "cases": ("--cases", int, "oracle-check random case count"),
    "z": ("--z", _floats, "oracle-check single case magnitudes |z_1|,...,|z_{D-1}|"),
    "chi2_samples": ("--chi2-samples", int, "infodiag: random chi^2 spectra instead of cats"),
    "chi2_dim": ("--chi2-dim", int, "dimension of the chi^2 spectra"),
    "no_limit": ("--no-limit", None, "angular: skip the exact directional-limit columns"),
}
REPEATABLE = {"range", "points"}
DEFAULTS = {"dim": 2, "particles": 6, "traced": 1, "format": "csv", "workers": 1,
            "samples": 1000, "colormap": "entropy", "kind": "tl", "cases": 50,
            "chi2_samples": 0, "chi2_dim": 5, "no_limit": False}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="paritycat", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in MODES:
        p = sub.add_parser(name)
        p.add_argument("--config", help="key=value file; command-line flags override it")
        for dest, (flag, typ, help_) in OPTIONS.items():
            if typ is None:
                p.add_argument(flag, dest=dest, action="store_const", const=True, default=None,
                               help=help_)
            elif dest in REPEATABLE:
                p.add_argument(flag, dest=dest, type=typ, action="append", help=help_)
            else:
                p.add_argument(flag, dest=dest, type=typ, help=help_)
        # test hook for the oracle harness
        p.add_argument("--corrupt", type=float, default=0.0, help=argparse.SUPPRESS)
    return parser


def read_config(path: str) -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment, keys may use dashes."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in OPTIONS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        typ = OPTIONS[key][1]
        try:
            if typ is None:
                val = value.lower() in ("1", "true", "yes", "on")
            elif key in REPEATABLE:
                val = [typ(v) for v in value.split()]
            else:
                val = typ(value)
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from None
        out[key] = val
    return out


def merge_options(args: argparse.Namespace) -> dict:
    opts = dict(DEFAULTS)
    if args.config:
        try:
            opts.update(read_config(args.config))
        except OSError as exc:
            raise UsageError(str(exc)) from None
    for key in OPTIONS:
        val = getattr(args, key)
        if val is not None:
            opts[key] = val
    return opts


def make_config(command: str, opts: dict, corrupt: float = 0.0) -> SweepConfig:
    D = opts["dim"]
    width = D - 1
    parity = opts.get("parity")
    c = ParityLabel.from_string(parity).bits if parity else 0
    if parity and len(parity) != width:
        raise ValueError(f"--parity needs {width} characters for D={D}")
    if opts.get("colormap") not in COLORMAPS:
        raise ValueError(f"--colormap must be one of {', '.join(COLORMAPS)}")
    if opts.get("format") not in ("csv", "json"):
        raise ValueError("--format must be csv or json")
    kwargs = dict(mode=MODES[command], D=D, N=opts["particles"], M=opts["traced"], c=c,
                  radius=opts.get("radius"), eta=opts.get("eta"), seed=opts.get("seed"),
                  samples=opts["samples"], colormap=opts["colormap"], ref=opts.get("ref"),
                  kind=opts["kind"], workers=opts["workers"], chi2_samples=opts["chi2_samples"],
                  chi2_dim=opts["chi2_dim"], cases=opts["cases"], z=opts.get("z"),
                  with_limit=not opts["no_limit"], corrupt=corrupt)
    if opts.get("range"):
        kwargs["ranges"] = list(opts["range"])
    if opts.get("points"):
        kwargs["points"] = list(opts["points"])
    return SweepConfig(**kwargs)


def format_value(v) -> str:
    """Shortest round-trip decimal for floats (``repr``); empty cell for ``None``."""
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def write_records(table: list[dict], fh, fmt: str = "csv"):
    if fmt == "json":
        for row in table:
            fh.write(json.dumps({k: _json_value(v) for k, v in row.items()},
                                allow_nan=False) + "\n")
        return
    if not table:
        return
    writer = csv.writer(fh, lineterminator="\n")
    header = list(table[0])
    writer.writerow(header)
    for row in table:
        writer.writerow([format_value(row.get(k)) for k in header])


def run(argv=None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    try:
        args = build_parser().parse_args(argv)
        opts = merge_options(args)
        cfg = make_config(args.command, opts, args.corrupt)
        table = rows(RUNNERS[cfg.mode](cfg))
    except UsageError as exc:
        print(f"paritycat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CapExceededError, OracleCapError, OverflowError) as exc:
        print(f"paritycat: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (IndeterminateLimitError, JacobiConvergenceError, DegenerateCatError) as exc:
        print(f"paritycat: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"paritycat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    buf = io.StringIO()
    write_records(table, buf, opts["format"])
    if opts.get("out"):
        Path(opts["out"]).write_text(buf.getvalue())
    else:
        stdout.write(buf.getvalue())

    if cfg.mode == "oracle":
        failed = [r for r in table if not r["passed"]]
        worst = max((r["max_deviation"] for r in table), default=0.0)
        print(f"oracle-check: {len(table) - len(failed)}/{len(table)} passed, "
              f"worst deviation {worst:.3e}", file=sys.stderr)
        if failed:
            return EXIT_NUMERICAL
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
