"""Command-line front end emitting deterministic JSON/CSV artifacts.

Exit codes: 0 success, 1 configuration error, 2 resource limit (the message
reports the required stage count), 3 witness failure (which would signal a
builder bug, never a valid state).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .cantor import cantor_digits, cantor_value, orbit
from .construction import (basic_sequence_from, block_of, limit_function,
                           stage_trace, stages_covering)
from .errors import ConfigError, ResourceLimitError
from .generators import champernowne_bits
from .normality import interval_frequency, non_normality_report, star_discrepancy, witness_check
from .programs import Registry

BUILD_FORMAT = "f-table/1"
VERIFY_FORMAT = "witness-report/1"
EXPAND_FORMAT = "cantor-digits/1"
ORBIT_FORMAT = "orbit/1"
DISCREPANCY_FORMAT = "discrepancy/1"
CHAMPERNOWNE_FORMAT = "digit-prefix/1"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage problems are configuration errors, not argparse's exit(2)
        raise ConfigError(message)


@dataclass
class RunConfig:
    """Validated common options of one invocation."""

    registry_path: Path | None
    oracle_path: Path | None
    stages: int | None
    max_position: int | None
    fmt: str
    out: Path | None


def _run_config(args: argparse.Namespace) -> RunConfig:
    stages = getattr(args, "stages", None)
    if stages is not None and stages < 1:
        raise ConfigError("--stages must be >= 1")
    max_position = getattr(args, "max_pos", None)
    if max_position is not None and max_position < 0:
        raise ConfigError("--max-pos must be >= 0")
    return RunConfig(
        registry_path=Path(args.registry) if getattr(args, "registry", None) else None,
        oracle_path=Path(args.oracle) if getattr(args, "oracle", None) else None,
        stages=stages,
        max_position=max_position,
        fmt=getattr(args, "format", "json"),
        out=Path(args.out) if getattr(args, "out", None) else None,
    )


def _registry(cfg: RunConfig) -> Registry:
    if cfg.registry_path is None:
        raise ConfigError("--registry is required for this command")
    return Registry.from_file(cfg.registry_path, oracle_path=cfg.oracle_path)


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _parse_unit_fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a rational: {text!r} ({exc})") from None
    if not 0 <= value < 1:
        raise ConfigError(f"value must lie in [0, 1), got {text}")
    return value


def _check_explicit_stages(cfg: RunConfig, registry: Registry, position: int) -> None:
    if cfg.stages is None:
        return
    if 3 ** cfg.stages <= position:
        required = stages_covering(position)
        raise ResourceLimitError(
            f"positions through {position} need {required} stages, "
            f"got {cfg.stages}", required_stages=required)
    if cfg.stages > len(registry):
        raise ConfigError(
            f"{cfg.stages} stages need {cfg.stages} registry entries, "
            f"have {len(registry)}")


def _emit(cfg: RunConfig, payload: dict, csv_table: tuple[list, list]) -> None:
    if cfg.fmt == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        header, rows = csv_table
        buf = io.StringIO()
        buf.write(f"# format={payload['format']}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        text = buf.getvalue()
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        cfg.out.write_text(text)


def cmd_build(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    if cfg.stages is None:
        raise ConfigError("--stages is required for build")
    registry = _registry(cfg)
    max_position = (cfg.max_position if cfg.max_position is not None
                    else 3 ** cfg.stages - 1)
    _check_explicit_stages(cfg, registry, max_position)
    f = limit_function(registry, max_position)
    q = basic_sequence_from(f, max_position)
    exponents = q.exponents

    positions = []
    for p in range(max_position + 1):
        t = block_of(p)
        positions.append({
            "position": p,
            "value": f.values[p],
            "block": t,
            "chosen_bit": None if t is None else f.blocks[t].chosen_bit,
            "certificate": f.certificates[p],
        })
    payload = {
        "format": BUILD_FORMAT,
        "stages": cfg.stages,
        "stage_budget": f.stage_budget,
        "max_position": max_position,
        "positions": positions,
        "q_exponents": list(exponents),
        "q": list(q.bases),
    }
    if args.trace is not None:
        if cfg.fmt != "json":
            raise ConfigError("--trace is only available with --format json")
        if args.trace < 1:
            raise ConfigError("--trace must be >= 1")
        snapshots = stage_trace(registry, max_position, range(1, args.trace + 1))
        payload["trace"] = [{"stage": s.stage, "values": list(s.values)}
                            for s in snapshots]

    header = ["position", "value", "block", "chosen_bit", "certificate",
              "q_exponent"]
    rows = []
    for p in range(max_position + 1):
        t = block_of(p)
        rows.append([p, f.values[p],
                     "" if t is None else t,
                     "" if t is None else f.blocks[t].chosen_bit,
                     f.certificates[p],
                     exponents[p] if p < max_position else ""])
    _emit(cfg, payload, (header, rows))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    if cfg.stages is None:
        raise ConfigError("--stages is required for verify")
    registry = _registry(cfg)
    top = 3 ** cfg.stages - 1
    _check_explicit_stages(cfg, registry, top)
    f = limit_function(registry, top)
    witnesses = [witness_check(registry, e, f) for e in range(cfg.stages)]
    sources = []
    for root, group in sorted(registry.alias_groups().items()):
        checkpoints = [i for i in group if i < cfg.stages]
        if checkpoints:
            sources.append(non_normality_report(registry, root, f, checkpoints))
    all_passed = (all(w.passed for w in witnesses)
                  and all(r.non_normal for r in sources))

    payload = {
        "format": VERIFY_FORMAT,
        "stages": cfg.stages,
        "all_passed": all_passed,
        "witnesses": [
            {"program_index": w.program_index, "checkpoint": w.checkpoint,
             "chosen_bit": w.chosen_bit, "low_count": w.low_count,
             "fraction_low": _frac(w.fraction_low),
             "fraction_high": _frac(w.fraction_high), "passed": w.passed}
            for w in witnesses],
        "non_normality": [
            {"source_index": r.source_index, "non_normal": r.non_normal,
             "checkpoints": [
                 {"index": c.index, "checkpoint": c.checkpoint,
                  "chosen_bit": c.chosen_bit,
                  "fraction_low": _frac(c.fraction_low),
                  "deviation": _frac(c.deviation),
                  "witness_passed": c.witness_passed,
                  "orbit_fraction_low": (None if c.orbit_fraction_low is None
                                         else _frac(c.orbit_fraction_low)),
                  "orbit_agrees": c.orbit_agrees}
                 for c in r.records]}
            for r in sources],
    }

    by_index = {w.program_index: w for w in witnesses}
    header = ["program_index", "source_index", "checkpoint", "chosen_bit",
              "fraction_low", "fraction_high", "deviation", "witness_passed",
              "orbit_agrees"]
    rows = []
    for r in sources:
        for c in r.records:
            w = by_index[c.index]
            rows.append([c.index, r.source_index, c.checkpoint, c.chosen_bit,
                         _frac(c.fraction_low), _frac(w.fraction_high),
                         _frac(c.deviation), c.witness_passed,
                         "" if c.orbit_agrees is None else c.orbit_agrees])
    rows.sort(key=lambda row: row[0])
    _emit(cfg, payload, (header, rows))
    return 0 if all_passed else 3


def _constructed_bases(cfg: RunConfig, registry: Registry, length: int):
    _check_explicit_stages(cfg, registry, length)
    f = limit_function(registry, length)
    return basic_sequence_from(f, length)


def cmd_expand(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    registry = _registry(cfg)
    x = _parse_unit_fraction(args.x)
    n = args.count
    if n < 0:
        raise ConfigError("count must be >= 0")
    q = _constructed_bases(cfg, registry, n)
    digits = cantor_digits(x, q, n)
    payload = {
        "format": EXPAND_FORMAT,
        "x": _frac(x),
        "count": n,
        "q": list(q.bases),
        "q_exponents": list(q.exponents),
        "digits": list(digits.digits),
        "value": _frac(cantor_value(digits)),
    }
    header = ["index", "digit", "q"]
    rows = [[i, a, q.bases[i]] for i, a in enumerate(digits.digits)]
    _emit(cfg, payload, (header, rows))
    return 0


def cmd_orbit(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    registry = _registry(cfg)
    x = _parse_unit_fraction(args.x)
    n = args.count
    if n < 0:
        raise ConfigError("count must be >= 0")
    q = _constructed_bases(cfg, registry, n)
    points = orbit(x, q, n)
    payload = {
        "format": ORBIT_FORMAT,
        "x": _frac(x),
        "count": n,
        "q": list(q.bases),
        "points": [_frac(y) for y in points],
    }
    header = ["index", "point"]
    rows = [[i, _frac(y)] for i, y in enumerate(points)]
    _emit(cfg, payload, (header, rows))
    return 0


def cmd_discrepancy(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    registry = _registry(cfg)
    x = _parse_unit_fraction(args.x)
    n = args.count
    if n < 1:
        raise ConfigError("count must be >= 1")
    q = _constructed_bases(cfg, registry, n - 1)
    points = orbit(x, q, n - 1)
    star = star_discrepancy(points)
    frequencies = []
    for k in range(1, 5):
        for j in range(2 ** k):
            frequencies.append(interval_frequency(
                points, Fraction(j, 2 ** k), Fraction(j + 1, 2 ** k)))
    payload = {
        "format": DISCREPANCY_FORMAT,
        "x": _frac(x),
        "count": n,
        "q": list(q.bases),
        "points": [_frac(y) for y in points],
        "star_discrepancy": _frac(star),
        "star_discrepancy_decimal": float(star),
        "frequencies": [
            {"lo": _frac(r.lo), "hi": _frac(r.hi), "hits": r.hits,
             "fraction": _frac(r.fraction)}
            for r in frequencies],
    }
    header = ["record", "index", "lo", "hi", "hits", "value"]
    rows = [["point", i, "", "", "", _frac(y)] for i, y in enumerate(points)]
    rows += [["frequency", "", _frac(r.lo), _frac(r.hi), r.hits,
              _frac(r.fraction)] for r in frequencies]
    rows.append(["star_discrepancy", "", "", "", "", _frac(star)])
    _emit(cfg, payload, (header, rows))
    return 0


def cmd_champernowne(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    if args.base < 2:
        raise ConfigError("base must be >= 2")
    if args.count < 0:
        raise ConfigError("count must be >= 0")
    digits = champernowne_bits(args.base, args.count)
    payload = {
        "format": CHAMPERNOWNE_FORMAT,
        "base": args.base,
        "count": args.count,
        "digits": digits,
    }
    header = ["index", "digit"]
    rows = [[i, d] for i, d in enumerate(digits)]
    _emit(cfg, payload, (header, rows))
    return 0


def _add_common(parser: argparse.ArgumentParser, registry: bool = True) -> None:
    if registry:
        parser.add_argument("--registry", metavar="PATH",
                            help="registry config file (JSON)")
        parser.add_argument("--oracle", metavar="PATH",
                            help="oracle bit-prefix file (overrides the "
                                 "registry's own oracle)")
        parser.add_argument("--stages", type=int, metavar="S",
                            help="stage budget (build/verify: required; other "
                                 "commands: checked against the needed depth)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", metavar="PATH",
                        help="output file (default: stdout)")


def _build_parser() -> _Parser:
    parser = _Parser(prog="cantornorm",
                     description="Build power-of-two basic sequences by staged "
                                 "diagonalization against a program registry and "
                                 "verify, exactly, that no registered real "
                                 "distributes uniformly under them.")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("build", help="emit the settled position table and the "
                                     "derived base sequence")
    _add_common(p)
    p.add_argument("--max-pos", dest="max_pos", type=int, metavar="N",
                   help="largest settled position (default: 3**S - 1)")
    p.add_argument("--trace", type=int, default=None, metavar="S_MAX",
                   help="also emit stage approximations 1..S_MAX (json only)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="run witness checks for every stage index "
                                      "and non-normality reports per source")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("expand", help="Cantor digits of x under the constructed "
                                      "base sequence")
    _add_common(p)
    p.add_argument("x", help="rational in [0, 1), e.g. 5/6")
    p.add_argument("count", type=int, help="number of digits")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("orbit", help="mod-1 orbit of x under the constructed "
                                     "base sequence")
    _add_common(p)
    p.add_argument("x", help="rational in [0, 1)")
    p.add_argument("count", type=int, help="number of multiplication steps")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("discrepancy", help="orbit statistics: dyadic interval "
                                           "frequencies and star discrepancy")
    _add_common(p)
    p.add_argument("x", help="rational in [0, 1)")
    p.add_argument("count", type=int, help="number of orbit points")
    p.set_defaults(func=cmd_discrepancy)

    p = sub.add_parser("champernowne", help="digit prefix of the base-b "
                                            "concatenation of 0, 1, 2, ...")
    _add_common(p, registry=False)
    p.add_argument("base", type=int)
    p.add_argument("count", type=int)
    p.set_defaults(func=cmd_champernowne)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ResourceLimitError as exc:
        suffix = ("" if exc.required_stages is None
                  else f" (required stages: {exc.required_stages})")
        print(f"error: {exc}{suffix}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
