"""Command-line front end.

Subcommands: analyze, build-layout, evaluate, compare, transcribe,
optimize, reproduce-paper. All artifacts are written atomically (temp
file + rename) with canonical formatting, so identical inputs always
produce byte-identical outputs. Domain errors exit 1, usage errors exit
2, and both print one machine-parsable ``code<TAB>message`` line on
stderr. Option precedence is flags > --config file > defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

from . import bn_text
from .bn_text import Category, FrequencyTable, count_unit_bigrams, scan_units
from .ergonomics import (
    KEYPAD_KEYS,
    ErgonomicModel,
    default_model,
    load_model,
    rank_keys,
)
from .errors import CorpusDecodeError, KeypadError, UsageError
from .layout import (
    Layout,
    PlacementPolicy,
    Role,
    Strategy,
    build_layout,
    load_layout,
    serialize,
)
from .optimize import (
    Objective,
    consonant_instance,
    improve_local,
    restrict_bigrams,
    solve_exhaustive,
    solve_greedy,
)
from .transcribe import EvaluationReport, evaluate, transcribe

_DEFAULTS = {
    "extension_penalty": 1.0,
    "angle_weight": 1.0,
    "jam_weight": 0.0,
    "report_format": "tsv",
    "strategy": "serpentine",
    "method": "greedy",
    "max_iters": 100,
    "skip_untypable": False,
    "override_guard": False,
}

_CONFIG_KEYS = set(_DEFAULTS) | {"ergonomics", "max_units", "slots_per_key"}


@dataclass(frozen=True)
class RunConfig:
    """One validated invocation; input paths are checked at build time."""

    command: str
    corpus: tuple[Path, ...] = ()
    layouts: tuple[Path, ...] = ()
    text_in: Path | None = None
    output: Path | None = None
    out_dir: Path | None = None
    ergonomics: Path | None = None
    extension_penalty: float = 1.0
    angle_weight: float = 1.0
    strategy: str = "serpentine"
    method: str = "greedy"
    jam_weight: float = 0.0
    max_units: int | None = None
    slots_per_key: int | None = None
    max_iters: int = 100
    report_format: str = "tsv"
    skip_untypable: bool = False
    override_guard: bool = False
    layout_name: str | None = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_model_flags(p):
    p.add_argument("--ergonomics", metavar="FILE",
                   help="TSV overriding the built-in per-key measurements")
    p.add_argument("--extension-penalty", type=float, dest="extension_penalty",
                   help="cost added to every extension (lateral) key press")
    p.add_argument("--angle-weight", type=float, dest="angle_weight",
                   help="weight of the joint-angle cost term")


def _add_config_flag(p):
    p.add_argument("--config", metavar="FILE",
                   help="JSON file with defaults for any long option")


def _build_parser() -> _Parser:
    parser = _Parser(prog="bnkeypad",
                     description="Bengali multi-tap keypad analysis and layout tools")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="count unit frequencies in a corpus")
    p.add_argument("--corpus", nargs="+", required=True, metavar="FILE")
    p.add_argument("-o", "--output", metavar="FILE")
    _add_config_flag(p)

    p = sub.add_parser("build-layout", help="build a layout from corpus frequencies")
    p.add_argument("--corpus", nargs="+", required=True, metavar="FILE")
    p.add_argument("--strategy", choices=["serpentine", "sequential"])
    p.add_argument("--name", dest="layout_name")
    p.add_argument("-o", "--output", metavar="FILE")
    _add_model_flags(p)
    _add_config_flag(p)

    p = sub.add_parser("evaluate", help="typing metrics of a layout on a corpus")
    p.add_argument("--layout", required=True, metavar="FILE")
    p.add_argument("--corpus", nargs="+", required=True, metavar="FILE")
    p.add_argument("--format", dest="report_format", choices=["tsv", "json"])
    p.add_argument("--skip-untypable", action="store_true", default=None,
                   dest="skip_untypable")
    p.add_argument("-o", "--output", metavar="FILE")
    _add_model_flags(p)
    _add_config_flag(p)

    p = sub.add_parser("compare", help="metrics of several layouts side by side")
    p.add_argument("--layouts", nargs="+", required=True, metavar="FILE")
    p.add_argument("--corpus", nargs="+", required=True, metavar="FILE")
    p.add_argument("--format", dest="report_format", choices=["tsv", "json"])
    p.add_argument("--skip-untypable", action="store_true", default=None,
                   dest="skip_untypable")
    p.add_argument("-o", "--output", metavar="FILE")
    _add_model_flags(p)
    _add_config_flag(p)

    p = sub.add_parser("transcribe", help="text to multi-tap keystroke trace")
    p.add_argument("--layout", required=True, metavar="FILE")
    p.add_argument("--in", dest="text_in", required=True, metavar="FILE")
    p.add_argument("--out", dest="output", required=True, metavar="FILE")
    p.add_argument("--skip-untypable", action="store_true", default=None,
                   dest="skip_untypable")
    _add_config_flag(p)

    p = sub.add_parser("optimize", help="search consonant placements for minimum cost")
    p.add_argument("--corpus", nargs="+", required=True, metavar="FILE")
    p.add_argument("--jam-weight", type=float, dest="jam_weight")
    p.add_argument("--method", choices=["greedy", "exhaustive", "local"])
    p.add_argument("--max-units", type=int, dest="max_units")
    p.add_argument("--slots-per-key", type=int, dest="slots_per_key")
    p.add_argument("--max-iters", type=int, dest="max_iters")
    p.add_argument("--override-guard", action="store_true", default=None,
                   dest="override_guard")
    p.add_argument("-o", "--output", metavar="FILE")
    _add_model_flags(p)
    _add_config_flag(p)

    p = sub.add_parser("reproduce-paper",
                       help="build proposed + baseline layouts and report the jam reduction")
    p.add_argument("--corpus", nargs="+", required=True, metavar="FILE")
    p.add_argument("--out-dir", dest="out_dir", required=True, metavar="DIR")
    _add_model_flags(p)
    _add_config_flag(p)

    return parser


def _load_config_file(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"config file does not exist: {path}")
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise UsageError(f"config file {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError(f"config file {path}: expected a JSON object")
    unknown = sorted(set(data) - _CONFIG_KEYS)
    if unknown:
        raise UsageError(f"config file {path}: unknown key(s) {', '.join(unknown)}")
    return data


def _resolve(args: argparse.Namespace) -> RunConfig:
    cfg = _load_config_file(args.config) if getattr(args, "config", None) else {}

    def pick(name, default=None):
        value = getattr(args, name, None)
        if value is not None:
            return value
        if name in cfg:
            return cfg[name]
        return _DEFAULTS.get(name, default)

    def paths(values, allow_stdin=False) -> tuple[Path, ...]:
        out = []
        for v in values:
            if allow_stdin and v == "-":
                out.append(Path("-"))
                continue
            p = Path(v)
            if not p.is_file():
                raise UsageError(f"input path does not exist: {v}")
            out.append(p)
        if sum(1 for p in out if str(p) == "-") > 1:
            raise UsageError("standard input ('-') may be given at most once")
        return tuple(out)

    corpus = paths(getattr(args, "corpus", None) or (), allow_stdin=True)
    layouts = []
    if getattr(args, "layout", None):
        layouts = [getattr(args, "layout")]
    elif getattr(args, "layouts", None):
        layouts = list(args.layouts)
    layouts = paths(layouts)
    text_in = None
    if getattr(args, "text_in", None):
        text_in = paths([args.text_in], allow_stdin=True)[0]
    ergonomics = pick("ergonomics")
    if ergonomics is not None:
        ergonomics = paths([ergonomics])[0]
    max_units = pick("max_units")
    slots_per_key = pick("slots_per_key")

    return RunConfig(
        command=args.command,
        corpus=corpus,
        layouts=layouts,
        text_in=text_in,
        output=Path(args.output) if getattr(args, "output", None) else None,
        out_dir=Path(args.out_dir) if getattr(args, "out_dir", None) else None,
        ergonomics=ergonomics,
        extension_penalty=float(pick("extension_penalty")),
        angle_weight=float(pick("angle_weight")),
        strategy=str(pick("strategy")),
        method=str(pick("method")),
        jam_weight=float(pick("jam_weight")),
        max_units=int(max_units) if max_units is not None else None,
        slots_per_key=int(slots_per_key) if slots_per_key is not None else None,
        max_iters=int(pick("max_iters")),
        report_format=str(pick("report_format")),
        skip_untypable=bool(pick("skip_untypable")),
        override_guard=bool(pick("override_guard")),
        layout_name=getattr(args, "layout_name", None),
    )


def write_text_atomic(path: Path, text: str) -> None:
    """Write via a temp file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _emit(config: RunConfig, text: str) -> None:
    if config.output is None:
        sys.stdout.write(text)
    else:
        write_text_atomic(config.output, text)


def _model(config: RunConfig) -> ErgonomicModel:
    if config.ergonomics is not None:
        return load_model(config.ergonomics, config.extension_penalty, config.angle_weight)
    return default_model(config.extension_penalty, config.angle_weight)


def _read_source(path: Path) -> str:
    """One corpus source: a UTF-8 file, or standard input for '-'."""
    if str(path) == "-":
        raw = sys.stdin.buffer.read()
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorpusDecodeError("<stdin>", exc.start, exc.reason) from None
    return bn_text.read_corpus(path)


def _load_corpus(paths) -> list[str]:
    """Read every corpus source exactly once (stdin cannot be re-read)."""
    return [_read_source(p) for p in paths]


def _table_of(texts) -> FrequencyTable:
    table = FrequencyTable.empty()
    for text in texts:
        table = bn_text.merge(table, bn_text.count_frequencies(text))
    return table


def _units_of(texts) -> list:
    """Typable units of all corpus sources, concatenated in argument order."""
    units = []
    for text in texts:
        text_units, _skipped = scan_units(text)
        units.extend(text_units)
    return units


def _format_report_tsv(report: EvaluationReport) -> str:
    lines = [
        "metric\tvalue",
        f"kspc\t{report.kspc:.9f}",
        f"expected_cost\t{report.expected_cost:.9f}",
        f"jam_rate\t{report.jam_rate:.9f}",
        f"unit_count\t{report.unit_count}",
        f"press_count\t{report.press_count}",
    ]
    for key in KEYPAD_KEYS:
        lines.append(f"load[{key}]\t{report.per_key_load[key]:.9f}")
    return "\n".join(lines) + "\n"


def _report_dict(report: EvaluationReport) -> dict:
    return {
        "kspc": report.kspc,
        "expected_cost": report.expected_cost,
        "jam_rate": report.jam_rate,
        "unit_count": report.unit_count,
        "press_count": report.press_count,
        "per_key_load": {key: report.per_key_load[key] for key in KEYPAD_KEYS},
    }


def _cmd_analyze(config: RunConfig) -> int:
    table = _table_of(_load_corpus(config.corpus))
    sys.stderr.write(f"analyzed {table.total} units, skipped {table.skipped} scalars\n")
    _emit(config, bn_text.format_frequency_tsv(table))
    return 0


def _cmd_build_layout(config: RunConfig) -> int:
    table = _table_of(_load_corpus(config.corpus))
    model = _model(config)
    policy = PlacementPolicy(strategy=Strategy(config.strategy))
    layout = build_layout(table, model, policy, name=config.layout_name)
    _emit(config, serialize(layout))
    return 0


def _cmd_evaluate(config: RunConfig) -> int:
    layout = load_layout(config.layouts[0])
    model = _model(config)
    units = _units_of(_load_corpus(config.corpus))
    report = evaluate(units, layout, model, skip_untypable=config.skip_untypable)
    if config.report_format == "json":
        _emit(config, json.dumps(_report_dict(report), sort_keys=True, indent=2) + "\n")
    else:
        _emit(config, _format_report_tsv(report))
    return 0


def _cmd_compare(config: RunConfig) -> int:
    model = _model(config)
    units = _units_of(_load_corpus(config.corpus))
    rows = []
    for path in config.layouts:
        layout = load_layout(path)
        report = evaluate(units, layout, model, skip_untypable=config.skip_untypable)
        rows.append((layout.name or path.stem, report))
    if config.report_format == "json":
        payload = [dict(layout=name, **_report_dict(report)) for name, report in rows]
        _emit(config, json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        lines = ["layout\tkspc\texpected_cost\tjam_rate"]
        for name, report in rows:
            lines.append(f"{name}\t{report.kspc:.9f}\t{report.expected_cost:.9f}"
                         f"\t{report.jam_rate:.9f}")
        _emit(config, "\n".join(lines) + "\n")
    return 0


def _cmd_transcribe(config: RunConfig) -> int:
    layout = load_layout(config.layouts[0])
    units, dropped = scan_units(_read_source(config.text_in))
    trace = transcribe(units, layout, skip_untypable=config.skip_untypable)
    if dropped or trace.skipped_positions:
        sys.stderr.write(f"skipped {dropped} non-typable scalars, "
                         f"{len(trace.skipped_positions)} units not in the layout\n")
    lines = ["press_index\tkey\ttext_position"]
    for pos, (start, end) in trace.boundaries:
        for press_index in range(start, end):
            lines.append(f"{press_index}\t{trace.presses[press_index]}\t{pos}")
    write_text_atomic(config.output, "\n".join(lines) + "\n")
    return 0


def _cmd_optimize(config: RunConfig) -> int:
    texts = _load_corpus(config.corpus)
    table = _table_of(texts)
    model = _model(config)
    consonant_table = table.restricted([Category.CONSONANT])
    instance = consonant_instance(consonant_table, model,
                                  max_units=config.max_units,
                                  slots_per_key=config.slots_per_key)
    chosen = FrequencyTable.from_counts(dict(instance.units))
    bigrams = None
    if config.jam_weight > 0:
        bigrams = restrict_bigrams(count_unit_bigrams(_units_of(texts)),
                                   [u for u, _ in instance.units])
    objective = Objective(chosen, model, config.jam_weight, bigrams)
    sys.stderr.write(f"method={config.method} units={len(instance.units)} "
                     f"slots={len(instance.key_slots)} jam_weight={config.jam_weight:g}\n")
    if config.method == "exhaustive":
        solution, value = solve_exhaustive(instance, objective,
                                           override_guard=config.override_guard)
    elif config.method == "local":
        start, start_value = solve_greedy(instance, objective)
        sys.stderr.write(f"greedy start value={start_value!r}\n")
        solution, value = improve_local(start, objective, max_iters=config.max_iters)
    else:
        solution, value = solve_greedy(instance, objective)
    sys.stderr.write(f"objective value={value!r}\n")
    _emit(config, serialize(solution))
    return 0


def reproduce_paper(corpus_paths, model: ErgonomicModel) -> tuple[Layout, Layout, str]:
    """Build the proposed and baseline layouts and report their metrics.

    Returns (proposed serpentine layout, sequential baseline layout,
    canonical report text). The report carries the flexibility ranking,
    the reserved-key roles, per-layout metrics, and the measured key-jam
    reduction of the proposed layout over the baseline.
    """
    texts = _load_corpus(corpus_paths)
    table = _table_of(texts)
    proposed = build_layout(table, model, PlacementPolicy(Strategy.SERPENTINE),
                            name="serpentine")
    baseline = build_layout(table, model, PlacementPolicy(Strategy.SEQUENTIAL),
                            name="sequential")
    units = _units_of(texts)
    reports = [(layout, evaluate(units, layout, model))
               for layout in (proposed, baseline)]
    ranking = rank_keys(model, [str(d) for d in range(1, 10)])
    jam_proposed = reports[0][1].jam_rate
    jam_baseline = reports[1][1].jam_rate
    reduction = 100.0 * (jam_baseline - jam_proposed) / jam_baseline if jam_baseline else 0.0

    lines = [
        "reproduce-paper v1",
        f"flexibility_ranking\t{'>'.join(ranking)}",
        f"symbol_key\t{proposed.roles[Role.SYMBOL]}",
        f"vowel_key\t{proposed.roles[Role.VOWEL]}",
        f"space_key\t{proposed.roles[Role.SPACE]}",
        f"link_key\t{proposed.roles[Role.LINK]}",
        "vowel_order\t" + ",".join(
            bn_text.unit_token(u) for u in proposed.slots[proposed.roles[Role.VOWEL]]),
        "layout\tkspc\texpected_cost\tjam_rate\tunit_count\tpress_count",
    ]
    for layout, report in reports:
        lines.append(f"{layout.name}\t{report.kspc:.9f}\t{report.expected_cost:.9f}"
                     f"\t{report.jam_rate:.9f}\t{report.unit_count}\t{report.press_count}")
    lines.append(f"jam_reduction_pct\t{reduction:.9f}")
    return proposed, baseline, "\n".join(lines) + "\n"


def _cmd_reproduce_paper(config: RunConfig) -> int:
    model = _model(config)
    proposed, baseline, report_text = reproduce_paper(config.corpus, model)
    out_dir = config.out_dir
    write_text_atomic(out_dir / "proposed_layout.tsv", serialize(proposed))
    write_text_atomic(out_dir / "baseline_layout.tsv", serialize(baseline))
    write_text_atomic(out_dir / "report.tsv", report_text)
    return 0


_COMMANDS = {
    "analyze": _cmd_analyze,
    "build-layout": _cmd_build_layout,
    "evaluate": _cmd_evaluate,
    "compare": _cmd_compare,
    "transcribe": _cmd_transcribe,
    "optimize": _cmd_optimize,
    "reproduce-paper": _cmd_reproduce_paper,
}


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        config = _resolve(args)
        return _COMMANDS[config.command](config)
    except UsageError as exc:
        sys.stderr.write(f"{exc.code}\t{exc}\n")
        return 2
    except KeypadError as exc:
        sys.stderr.write(f"{exc.code}\t{exc}\n")
        return 1
    except OSError as exc:
        # reads/writes that fail after validation (permissions, disk)
        sys.stderr.write(f"E_IO\t{exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
