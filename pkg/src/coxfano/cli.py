"""Command line front end: classification runs, fixture verification,
invariants of a single datum and count grids."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .bounds import count_upper_bound, toric_count_bound
from .coxring import RingData, group_to_dict, is_fano, validate
from .enumerate import (
    ClassifiedVariety,
    ClassifyOptions,
    ResourceLimitExceeded,
    classify,
    count_types,
)
from .fixtures import ALL_FIXTURES, Fixture, load_fixtures
from .invariants import compute_all, fraction_to_str
from .strata import supports

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE, EXIT_INVALID = 0, 1, 2, 3
CACHE_ENV = "COXFANO_CACHE_DIR"


@dataclass
class ResultSet:
    options: dict
    results: list[ClassifiedVariety]
    timing: dict = field(default_factory=dict)
    version: str = __version__

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "options": self.options,
            "count": len(self.results),
            "results": [c.to_dict() for c in self.results],
            "timing": self.timing,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ResultSet":
        return cls(d["options"], [ClassifiedVariety.from_dict(c) for c in d["results"]],
                   d.get("timing", {}), d["version"])

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    def content(self) -> str:
        """Serialization without timing metadata."""
        d = self.to_dict()
        d.pop("timing")
        return json.dumps(d, indent=1, sort_keys=True)


# ---------------------------------------------------------------------------
# text output

def _degree_matrix(c: ClassifiedVariety) -> list[list[str]]:
    """Rows: free part, then one row per torsion factor (residues with a bar)."""
    degs = c.data.grading.degrees
    rows = [[str(w.free[0]) for w in degs]]
    for a in range(len(c.data.group.torsion)):
        rows.append([f"{w.tors[a]}'" for w in degs])
    return rows


def format_table(rs: ResultSet) -> str:
    lines = [f"# d={rs.options['d']} mu={rs.options['mu']} torsion={rs.options['torsion']}: {len(rs.results)} classes"]
    header = ("No.", "R(X)", "Cl(X)", "grading", "d_X", "iota")
    rows = []
    for k, c in enumerate(rs.results, 1):
        grading = " / ".join(" ".join(r) for r in _degree_matrix(c))
        rows.append((str(k), "; ".join(c.data.relations()), str(c.data.group), grading,
                     fraction_to_str(c.invariants.degree).removesuffix("/1"), str(c.invariants.gorenstein_index)))
    widths = [max([len(h)] + [len(r[i]) for r in rows]) for i, h in enumerate(header)]
    fmt = lambda r: "  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip()  # noqa: E731
    lines.append(fmt(header))
    lines += [fmt(r) for r in rows]
    return "\n".join(lines) + "\n"


def _tex_poly(rel: str) -> str:
    out = rel.replace("*", " ")
    for k in range(30, 0, -1):
        out = out.replace(f"T{k}", f"T_{{{k}}}").replace(f"c{k} ", f"\\lambda_{{{k}}}")
    return out


def _tex_group(g) -> str:
    parts = ["\\mathbb{Z}"] * g.free_rank + [f"\\mathbb{{Z}}/{t}\\mathbb{{Z}}" for t in g.torsion]
    return " \\oplus ".join(parts)


def _tex_degree(x) -> str:
    return str(x.numerator) if x.denominator == 1 else f"\\frac{{{x.numerator}}}{{{x.denominator}}}"


def format_latex(rs: ResultSet) -> str:
    lines = [
        "\\begin{longtable}{cllccc}",
        "No. & $R(X)$ & $\\mathrm{Cl}(X)$ & grading & $d_X$ & $\\iota(X)$ \\\\",
        "\\hline",
        "\\endhead",
    ]
    for k, c in enumerate(rs.results, 1):
        rels = ",\\ ".join(_tex_poly(r) for r in c.data.relations())
        mat = " \\\\ ".join(" & ".join(x.replace("'", "") if i == 0 else f"\\bar{{{x[:-1]}}}" for x in row)
                            for i, row in enumerate(_degree_matrix(c)))
        lines.append(
            f"{k} & ${rels}$ & ${_tex_group(c.data.group)}$ & "
            f"$\\left[\\begin{{smallmatrix}}{mat}\\end{{smallmatrix}}\\right]$ & "
            f"${_tex_degree(c.invariants.degree)}$ & ${c.invariants.gorenstein_index}$ \\\\"
        )
    lines.append("\\end{longtable}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# cache

def cache_path(cache_dir: str | Path, options: dict) -> Path:
    key = hashlib.sha256(json.dumps(options, sort_keys=True).encode()).hexdigest()[:24]
    return Path(cache_dir) / f"classify-{__version__}-{key}.json"


def _read_cache(path: Path) -> ResultSet | None:
    try:
        with open(path) as fh:
            rs = ResultSet.from_dict(json.load(fh))
    except (OSError, ValueError, KeyError):
        return None
    return rs if rs.version == __version__ else None


# ---------------------------------------------------------------------------
# commands

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _range(s: str) -> range:
    a, sep, b = s.partition("..")
    try:
        lo = int(a)
        hi = int(b) if sep else lo
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {s!r}") from None
    if lo < 1:
        raise argparse.ArgumentTypeError("ranges start at 1")
    return range(lo, hi + 1)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_classify(args) -> int:
    opts = ClassifyOptions(args.dim, args.picard_index, torsion=args.torsion,
                           include_toric=args.include_toric, require_fano=not args.no_fano,
                           separated_only=args.separated_only, max_visits=args.max_visits)
    options = opts.to_dict()
    cache_dir = args.cache_dir or os.environ.get(CACHE_ENV)
    rs = _read_cache(cache_path(cache_dir, options)) if cache_dir else None
    if rs is None:
        start = time.time()
        try:
            results = classify(opts, jobs=args.jobs)
        except ResourceLimitExceeded as exc:
            print(f"resource limit exceeded: {exc}", file=sys.stderr)
            return EXIT_RESOURCE
        rs = ResultSet(options, results, {"elapsed_seconds": round(time.time() - start, 3), "jobs": args.jobs})
        if cache_dir:
            path = cache_path(cache_dir, options)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(rs.dumps())
    if args.format == "table":
        _emit(format_table(rs), args.out)
    elif args.format == "latex":
        _emit(format_latex(rs), args.out)
    else:
        _emit(rs.dumps(), args.out)
    return EXIT_OK


def check_fixture(f: Fixture) -> list[str]:
    """Mismatches between the fixture's expectations and recomputed values."""
    problems = list(validate(f.data).violations)
    if problems:
        return problems
    inv = compute_all(f.data)
    if f.fano is not None and is_fano(f.data) != f.fano:
        problems.append(f"fano: expected {f.fano}")
    if f.picard_index is not None and inv.picard_index != f.picard_index:
        problems.append(f"picard_index: {inv.picard_index} != {f.picard_index}")
    if f.degree is not None and inv.degree != f.degree:
        problems.append(f"degree: {fraction_to_str(inv.degree)} != {fraction_to_str(f.degree)}")
    if f.gorenstein_index is not None and inv.gorenstein_index != f.gorenstein_index:
        problems.append(f"gorenstein_index: {inv.gorenstein_index} != {f.gorenstein_index}")
    if f.class_group is not None and f.data.group != f.class_group:
        problems.append(f"class_group: {f.data.group} != {f.class_group}")
    return problems


def cmd_verify(args) -> int:
    try:
        fixtures = load_fixtures(args.fixtures) if args.fixtures else ALL_FIXTURES
    except (OSError, ValueError, KeyError) as exc:
        print(f"cannot read fixtures: {exc}", file=sys.stderr)
        return EXIT_USAGE
    failed = 0
    for f in fixtures:
        problems = check_fixture(f)
        failed += bool(problems)
        print(f"{'FAIL' if problems else 'PASS'} {f.name}" + (": " + "; ".join(problems) if problems else ""))
    print(f"{len(fixtures) - failed}/{len(fixtures)} fixtures pass")
    return EXIT_OK if not failed else EXIT_INVALID


def cmd_invariants(args) -> int:
    try:
        with open(args.input) as fh:
            raw = json.load(fh)
        data = RingData.from_dict(raw.get("data", raw))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"cannot read ring data: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = validate(data)
    if not report.ok:
        print(json.dumps({"valid": False, "violations": list(report.violations)}, indent=1))
        return EXIT_INVALID
    inv = compute_all(data)
    out = {"valid": True, "fano": is_fano(data), "relations": data.relations(),
           "class_group": group_to_dict(data.group), "class_group_str": str(data.group)}
    out.update(inv.to_dict())
    out["minimal_supports"] = [s.label(data.block_sizes) for s in supports(data)]
    print(json.dumps(out, indent=1))
    return EXIT_OK


def cmd_count(args) -> int:
    rows = []
    for d in args.dim_range:
        for mu in args.mu_range:
            opts = ClassifyOptions(d, mu, torsion=args.torsion, include_toric=args.include_toric,
                                   max_visits=args.max_visits)
            try:
                c = count_types(d, mu, opts, jobs=args.jobs)
            except ResourceLimitExceeded as exc:
                print(f"resource limit exceeded at d={d}, mu={mu}: {exc}", file=sys.stderr)
                return EXIT_RESOURCE
            rows.append((d, mu, c.non_toric, c.toric, count_upper_bound(d, mu), toric_count_bound(d, mu)))
    print("d\tmu\tcount\ttoric\tbound\ttoric_bound")
    for d, mu, n, t, b, tb in rows:
        print(f"{d}\t{mu}\t{n}\t{'-' if t is None else t}\t{b}\t{tb}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="coxfano", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="classify Fano data for given dimension and Picard index")
    c.add_argument("--dim", type=_positive, required=True)
    c.add_argument("--picard-index", type=_positive, required=True)
    c.add_argument("--torsion", choices=("any", "nontrivial", "trivial"), default="any")
    c.add_argument("--include-toric", action="store_true")
    c.add_argument("--no-fano", action="store_true")
    c.add_argument("--separated-only", action="store_true")
    c.add_argument("--format", choices=("json", "table", "latex"), default="json")
    c.add_argument("--out")
    c.add_argument("--jobs", type=_positive, default=1)
    c.add_argument("--cache-dir")
    c.add_argument("--max-visits", type=_positive, default=ClassifyOptions(1, 1).max_visits)
    c.set_defaults(func=cmd_classify)

    v = sub.add_parser("verify", help="recompute the invariants of reference data")
    v.add_argument("--fixtures", help="fixture JSON (default: the embedded set)")
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("invariants", help="invariants of one ring datum")
    i.add_argument("--input", required=True)
    i.set_defaults(func=cmd_invariants)

    n = sub.add_parser("count", help="grid of class counts")
    n.add_argument("--dim-range", type=_range, required=True)
    n.add_argument("--mu-range", type=_range, required=True)
    n.add_argument("--torsion", choices=("any", "nontrivial", "trivial"), default="nontrivial")
    n.add_argument("--include-toric", action="store_true")
    n.add_argument("--jobs", type=_positive, default=1)
    n.add_argument("--max-visits", type=_positive, default=ClassifyOptions(1, 1).max_visits)
    n.set_defaults(func=cmd_count)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
