"""Command line: plot_figures <kind> --input results.csv --out fig.png."""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, EmptySelection, FigureSpec, SchemaError, render


def parse_filters(pairs) -> dict[str, tuple[str, ...]]:
    """Parse repeated --filter column=v1,v2 options."""
    out: dict[str, tuple[str, ...]] = {}
    for pair in pairs or ():
        key, sep, values = pair.partition("=")
        key = key.strip()
        if not sep or key not in ("estimator", "se_method"):
            raise ValueError(
                f"--filter expects estimator=... or se_method=..., got {pair!r}"
            )
        out[key] = tuple(v.strip() for v in values.split(",") if v.strip())
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot_figures",
        description="Render benchmark figure families from simulation result CSVs.",
    )
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument(
        "--input",
        action="append",
        required=True,
        help="result CSV (repeat the flag to overlay several designs)",
    )
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument(
        "--filter",
        action="append",
        default=[],
        metavar="COL=V1,V2",
        help="restrict rows, e.g. --filter estimator=cf,adj --filter se_method=hc3",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        filters = parse_filters(args.filter)
    except ValueError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 2
    spec = FigureSpec(
        inputs=tuple(args.input),
        kind=args.kind,
        output=args.out,
        estimators=filters.get("estimator", ()),
        se_methods=filters.get("se_method", ()),
    )
    try:
        out = render(spec)
    except (SchemaError, EmptySelection) as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except OSError as err:
        print(f"io error: {err}", file=sys.stderr)
        return 3
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
