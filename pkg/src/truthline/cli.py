"""Command-line interface: every pipeline stage as one subcommand.

Conventions:

* data and summaries go to stdout, diagnostics to stderr;
* exit codes: 0 success, 1 usage error, 2 data/contract error, 3 remote
  scorer failure;
* options resolve as explicit flag > config file (--config, ``key = value``
  lines, ``#`` comments) > built-in default;
* every subcommand that writes files drops the resolved configuration next
  to its primary output as ``<output>.runconfig.json``, and a rerun from
  that configuration is byte-identical.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import shlex
import sys
from pathlib import Path

from . import __version__
from .annotate import run_session
from .corpus import (
    MajorityRule,
    aggregate_votes,
    corpus_stats,
    entail_ratio,
    read_aggregated,
    read_annotations,
    read_instances,
    write_aggregated,
    write_instances,
)
from .entailment import (
    ScorerBinding,
    build_scorer,
    evaluate_model,
    load_model,
    save_model,
    train_lexical,
)
from .errors import DataError, RemoteScorerError, TruthlineError
from .heuristics import ALL_CHECKS, NoiseFilterConfig, load_marker_patterns
from .metrics import histogram, support_score
from .pipeline import (
    ExternalCommandGenerator,
    LeadTruncateGenerator,
    assemble_training_set,
    correlation_report,
    evaluate,
    filter_entailment,
    generate_pseudo,
    noise_filter,
)
from .textkit import StopwordList, TokenizerConfig, default_stopwords, tokenize

FORMAT_VERSION = "1"
ENDPOINT_ENV = "TRUTHLINE_SCORER_ENDPOINT"

log = logging.getLogger("truthline")


class _Parser(argparse.ArgumentParser):
    """argparse with the documented exit code for usage errors (1, not 2)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _cast_bool(raw) -> bool:
    if isinstance(raw, bool):
        return raw
    text = str(raw).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise DataError(f"not a boolean: {raw!r}")


def parse_config_file(path) -> dict:
    """``key = value`` per line; ``#`` comments; quotes around values optional."""
    cfg = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise DataError(f"{path}:{lineno}: expected key = value")
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            value = value.strip()
            if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
                value = value[1:-1]
            cfg[key] = value
    return cfg


class _Options:
    """Resolution chain: explicit flag > config file > default."""

    def __init__(self, args):
        self.args = args
        self.config = parse_config_file(args.config) if getattr(args, "config", None) else {}
        self.resolved = {}

    def get(self, name, default=None, cast=None):
        key = name.replace("-", "_")
        attr = "in_" if key == "in" else key  # "in" is reserved
        value = getattr(self.args, attr, None)
        if value is None and key in self.config:
            raw = self.config[key]
            value = cast(raw) if cast else raw
        if value is None:
            value = default
        self.resolved[key] = str(value) if isinstance(value, Path) else value
        return value


def _tokenizer(opts: _Options) -> TokenizerConfig:
    return TokenizerConfig(
        mode=opts.get("tokenizer-mode", "unicode_word"),
        lowercase=opts.get("lowercase", False, _cast_bool),
        mask_digits=opts.get("mask-digits", False, _cast_bool),
    )


def _stopwords(opts: _Options) -> StopwordList:
    spec = opts.get("stopwords", "english")
    if spec == "none":
        return StopwordList()
    if spec in ("english", "japanese"):
        return default_stopwords(spec)
    return StopwordList.from_file(spec)


def _binding(opts: _Options, tokenizer: TokenizerConfig, stopwords: StopwordList) -> ScorerBinding:
    kind = opts.get("scorer")
    if kind is None:
        raise DataError("no scorer configured: pass --scorer lexical|remote")
    common = dict(
        threshold=opts.get("threshold", 0.5, float),
        on_failure=opts.get("on-failure", "retry_then_fail"),
        retries=opts.get("retries", 3, int),
        tokenizer=tokenizer,
        stopwords=stopwords,
    )
    if kind == "lexical":
        model_path = opts.get("model")
        if model_path is None:
            raise DataError("lexical scorer needs --model")
        return ScorerBinding(kind="lexical", model=load_model(model_path), **common)
    if kind == "remote":
        endpoint = opts.get("endpoint", os.environ.get(ENDPOINT_ENV))
        if endpoint is None:
            raise DataError(f"remote scorer needs --endpoint or ${ENDPOINT_ENV}")
        return ScorerBinding(
            kind="remote",
            endpoint=endpoint,
            timeout=opts.get("timeout", 30.0, float),
            max_in_flight=opts.get("max-in-flight", 4, int),
            **common,
        )
    raise DataError(f"unknown scorer kind {kind!r}")


def _workers(opts: _Options) -> int:
    # default is the machine's parallelism; --workers 1 forces a fully
    # sequential reference run
    return opts.get("workers", os.cpu_count() or 1, int)


def _write_json(path, payload) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _write_runconfig(primary_output, command: str, opts: _Options) -> None:
    if primary_output is None:
        return
    payload = {
        "command": command,
        "format_version": FORMAT_VERSION,
        "options": opts.resolved,
        "toolkit_version": __version__,
    }
    path = Path(str(primary_output) + ".runconfig.json")
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8")


def _read_dataset(opts: _Options, flag: str = "in"):
    path = opts.get(flag)
    if path is None:
        raise DataError(f"missing --{flag}")
    fmt = opts.get("format")
    if fmt is None:
        fmt = "tsv" if str(path).endswith(".tsv") else "jsonl"
        opts.resolved["format"] = fmt
    return read_instances(
        path, fmt, split=opts.get("split", "train"), lenient=opts.get("lenient", False, _cast_bool)
    )


def _read_outputs(path) -> list:
    """System outputs: JSONL {"id","headline"} per line."""
    pairs = []
    seen = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                pair = (str(obj["id"]), str(obj["headline"]))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise DataError(f"{path}:{lineno}: bad output record: {exc}") from exc
            if pair[0] in seen:
                raise DataError(
                    f"{path}: duplicate output id {pair[0]!r} on lines {seen[pair[0]]} and {lineno}"
                )
            seen[pair[0]] = lineno
            pairs.append(pair)
    return pairs


# --------------------------------------------------------------------------
# subcommand handlers
# --------------------------------------------------------------------------


def _cmd_stats(args) -> int:
    opts = _Options(args)
    dataset = _read_dataset(opts)
    stats = corpus_stats(dataset, _tokenizer(opts))
    report = opts.get("report")
    _write_json(report, stats.to_dict())
    _write_runconfig(report, "stats", opts)
    return 0


def _cmd_noise_filter(args) -> int:
    opts = _Options(args)
    dataset = _read_dataset(opts)
    markers_path = opts.get("markers")
    disable = opts.get("disable", [])
    if isinstance(disable, str):  # config-file form: comma-separated
        disable = [d.strip() for d in disable.split(",") if d.strip()]
    unknown = set(disable) - set(ALL_CHECKS)
    if unknown:
        raise DataError(f"unknown heuristic checks in --disable: {sorted(unknown)}")
    enabled = set(ALL_CHECKS) - set(disable)
    config = NoiseFilterConfig(
        stopwords=_stopwords(opts),
        tokenizer=_tokenizer(opts),
        byline_patterns=load_marker_patterns(markers_path) if markers_path else (),
        enabled=frozenset(enabled),
    )
    kept, removed, report = noise_filter(dataset, config)
    out_kept = opts.get("out-kept")
    out_removed = opts.get("out-removed")
    report_path = opts.get("report")
    if out_kept:
        write_instances(kept, out_kept)
    if out_removed:
        write_instances(removed, out_removed)
    if report_path:
        _write_json(report_path, report.to_json_dict())
    log.info("noise filter: kept %d / %d", report.kept_count, report.input_count)
    _write_runconfig(report_path or out_kept, "noise-filter", opts)
    if not (out_kept or out_removed or report_path):
        _write_json(None, report.to_json_dict())
    return 0


def _cmd_annotate(args) -> int:
    opts = _Options(args)
    dataset = _read_dataset(opts)
    annotator = opts.get("annotator")
    out = opts.get("out")
    if not annotator or not out:
        raise DataError("annotate needs --annotator and --out")
    run_session(dataset, annotator, out, shuffle_seed=opts.get("seed", None, int))
    _write_runconfig(out, "annotate", opts)
    return 0


def _cmd_aggregate(args) -> int:
    opts = _Options(args)
    path = opts.get("in")
    if path is None:
        raise DataError("missing --in")
    rule = MajorityRule.parse(opts.get("rule", "2of3"))
    records = read_annotations(path)
    labels = aggregate_votes(records, rule)
    out = opts.get("out")
    if out:
        write_aggregated(labels, out)
    counts = {lab: sum(1 for l in labels if l.label == lab) for lab in ("entail", "non_entail", "undecided")}
    summary = {
        "rule": str(rule),
        "n_instances": len(labels),
        "n_entail": counts["entail"],
        "n_non_entail": counts["non_entail"],
        "n_undecided": counts["undecided"],
        "entail_ratio": round(entail_ratio(labels), 4),
        "entail_ratio_excluding_undecided": (
            round(entail_ratio(labels, exclude_undecided=True), 4)
            if counts["undecided"] < len(labels)
            else None
        ),
    }
    report = opts.get("report")
    _write_json(report, summary)
    _write_runconfig(report or out, "aggregate", opts)
    return 0


def _cmd_train_scorer(args) -> int:
    opts = _Options(args)
    instances = {inst.id: inst for inst in _read_dataset(opts, "instances")}
    labels_path = opts.get("labels")
    if labels_path is None:
        raise DataError("missing --labels (aggregated.jsonl)")
    labeled = []
    for lab in read_aggregated(labels_path):
        if lab.label == "undecided":
            continue
        if lab.instance_id not in instances:
            raise DataError(f"label references unknown instance {lab.instance_id!r}")
        labeled.append((instances[lab.instance_id], lab.label))
    tokenizer = _tokenizer(opts)
    stopwords = _stopwords(opts)
    seed = opts.get("seed", 0, int)
    holdout = opts.get("holdout", 0.2, float)

    import random as _random

    order = list(range(len(labeled)))
    _random.Random(seed).shuffle(order)
    n_hold = int(len(labeled) * holdout)
    hold = [labeled[i] for i in order[:n_hold]]
    train = [labeled[i] for i in order[n_hold:]]

    model = train_lexical(
        train,
        stopwords,
        tokenizer=tokenizer,
        epochs=opts.get("epochs", 200, int),
        learning_rate=opts.get("learning-rate", 0.5, float),
        seed=seed,
        batch_size=opts.get("batch-size", 32, int),
    )
    out = opts.get("out")
    if out is None:
        raise DataError("missing --out (model artifact path)")
    save_model(model, out)
    summary = {
        "model": str(out),
        "n_train": len(train),
        "n_holdout": len(hold),
        "final_loss": model.training_meta.get("final_loss"),
        "train_eval": evaluate_model(model, train, stopwords, tokenizer=tokenizer),
    }
    if hold:
        summary["holdout_eval"] = evaluate_model(model, hold, stopwords, tokenizer=tokenizer)
    report = opts.get("report")
    _write_json(report, summary)
    _write_runconfig(out, "train-scorer", opts)
    return 0


def _cmd_score(args) -> int:
    opts = _Options(args)
    tokenizer = _tokenizer(opts)
    stopwords = _stopwords(opts)
    binding = _binding(opts, tokenizer, stopwords)
    scorer = build_scorer(binding)
    source = opts.get("source")
    headline = opts.get("headline")
    if source is not None or headline is not None:
        if source is None or headline is None:
            raise DataError("single-pair scoring needs both --source and --headline")
        sys.stdout.write(f"{scorer.score_one(source, headline):.6f}\n")
        return 0
    dataset = _read_dataset(opts)
    probs = scorer.score_many([(inst.id, inst.source, inst.headline) for inst in dataset])
    out = opts.get("out")
    lines = "".join(f"{inst.id}\t{p:.6f}\n" for inst, p in zip(dataset, probs))
    if out:
        Path(out).write_text(lines, encoding="utf-8")
        _write_runconfig(out, "score", opts)
    else:
        sys.stdout.write(lines)
    return 0


def _cmd_filter(args) -> int:
    opts = _Options(args)
    dataset = _read_dataset(opts)
    tokenizer = _tokenizer(opts)
    stopwords = _stopwords(opts)
    binding = _binding(opts, tokenizer, stopwords)
    kept, removed, report = filter_entailment(
        dataset,
        binding,
        allow_test=opts.get("allow-test", False, _cast_bool),
        batch_size=opts.get("batch-size", 64, int),
    )
    out_kept = opts.get("out-kept")
    out_removed = opts.get("out-removed")
    report_path = opts.get("report")
    if out_kept:
        write_instances(kept, out_kept)
    if out_removed:
        write_instances(removed, out_removed)
    if report_path:
        _write_json(report_path, report.to_json_dict())
    log.info("entailment filter: kept %d / %d", report.kept_count, report.input_count)
    _write_runconfig(report_path or out_kept, "filter", opts)
    if not (out_kept or out_removed or report_path):
        _write_json(None, report.to_json_dict())
    return 0


def _cmd_pseudo(args) -> int:
    opts = _Options(args)
    removed = _read_dataset(opts)
    kind = opts.get("generator", "lead_truncate")
    if kind == "lead_truncate":
        generator = LeadTruncateGenerator(
            opts.get("k", 8, int), TokenizerConfig(mode="whitespace")
        )
    elif kind == "external_command":
        command = opts.get("command")
        if not command:
            raise DataError("external_command generator needs --command")
        generator = ExternalCommandGenerator(shlex.split(command))
    else:
        raise DataError(f"unknown generator {kind!r}")
    splits = ("train", "dev") if opts.get("include-dev", False, _cast_bool) else ("train",)
    pseudo = generate_pseudo(removed, generator, splits=splits)
    out = opts.get("out")
    if out is None:
        raise DataError("missing --out")
    write_instances(pseudo, out)
    log.info("pseudo: generated %d pairs from %d removed", len(pseudo), len(removed))
    _write_runconfig(out, "pseudo", opts)
    return 0


def _cmd_assemble(args) -> int:
    opts = _Options(args)
    kept_path = opts.get("kept")
    if kept_path is None:
        raise DataError("missing --kept")
    kept = read_instances(kept_path)
    pseudo_path = opts.get("pseudo")
    pseudo = read_instances(pseudo_path) if pseudo_path else []
    mode = opts.get("mode", "filtered_plus_pseudo")
    combined = assemble_training_set(kept, pseudo, mode)
    out = opts.get("out")
    if out is None:
        raise DataError("missing --out")
    write_instances(combined, out)
    log.info("assemble: %s -> %d instances", mode, len(combined))
    _write_runconfig(out, "assemble", opts)
    return 0


def _eval_inputs(opts: _Options):
    outputs_path = opts.get("outputs")
    refs_path = opts.get("refs")
    if outputs_path is None or refs_path is None:
        raise DataError("need --outputs and --refs")
    return _read_outputs(outputs_path), read_instances(refs_path)


def _cmd_evaluate(args) -> int:
    opts = _Options(args)
    outputs, refs = _eval_inputs(opts)
    tokenizer = _tokenizer(opts)
    scorer = None
    if opts.get("scorer") is not None:
        scorer = _binding(opts, tokenizer, _stopwords(opts))
    report = evaluate(
        outputs,
        refs,
        scorer,
        tokenizer=tokenizer,
        threshold=opts.get("threshold", 0.5, float),
        min_source_chars=opts.get("min-source-chars", 10, int),
        bin_width=opts.get("bin-width", 10.0, float),
        workers=_workers(opts),
    )
    report_path = opts.get("report")
    _write_json(report_path, report.to_json_dict())
    if opts.get("table", False, _cast_bool):
        sys.stdout.write(report.format_table() + "\n")
    _write_runconfig(report_path, "evaluate", opts)
    return 0


def _cmd_correlate(args) -> int:
    opts = _Options(args)
    outputs, refs = _eval_inputs(opts)
    result, rows = correlation_report(
        outputs,
        refs,
        tokenizer=_tokenizer(opts),
        min_source_chars=opts.get("min-source-chars", 10, int),
        workers=_workers(opts),
    )
    out = opts.get("out")
    dump = "".join(f"{i}\t{r1:.6f}\t{sup:.6f}\n" for i, r1, sup in rows)
    if out:
        Path(out).write_text(dump, encoding="utf-8")
    else:
        sys.stdout.write(dump)
    report = opts.get("report")
    _write_json(report, {"pearson_r": round(result.r, 6), "n": result.n})
    _write_runconfig(report or out, "correlate", opts)
    return 0


def _cmd_histogram(args) -> int:
    opts = _Options(args)
    outputs, refs = _eval_inputs(opts)
    tokenizer = _tokenizer(opts)
    ref_by_id = {inst.id: inst for inst in refs}
    missing = [i for i, _ in outputs if i not in ref_by_id]
    if missing:
        raise DataError(f"outputs reference unknown ids: {missing[:10]}")
    min_chars = opts.get("min-source-chars", 10, int)
    values = []
    for item_id, headline in outputs:
        ref = ref_by_id[item_id]
        if len(ref.source) < min_chars:
            continue
        values.append(
            support_score(tokenize(tokenizer, ref.source), tokenize(tokenizer, headline)).value
        )
    hist = histogram(values, opts.get("bin-width", 10.0, float))
    report = opts.get("report")
    _write_json(report, hist.to_dict())
    _write_runconfig(report, "histogram", opts)
    return 0


# --------------------------------------------------------------------------
# parser assembly
# --------------------------------------------------------------------------


def _add_common(sub):
    sub.add_argument("--config", help="config file (key = value lines; flags win)")
    sub.add_argument("--tokenizer-mode", choices=["unicode_word", "whitespace", "character"])
    sub.add_argument("--lowercase", action=argparse.BooleanOptionalAction, default=None)
    sub.add_argument("--mask-digits", action=argparse.BooleanOptionalAction, default=None)
    sub.add_argument("--workers", type=int, help="worker pool size (1 = fully sequential)")


def _add_scorer_opts(sub):
    sub.add_argument("--scorer", choices=["lexical", "remote"])
    sub.add_argument("--model", help="lexical model artifact (JSON)")
    sub.add_argument("--endpoint", help=f"remote scorer URL (default ${ENDPOINT_ENV})")
    sub.add_argument("--threshold", type=float)
    sub.add_argument("--timeout", type=float)
    sub.add_argument("--max-in-flight", type=int)
    sub.add_argument("--retries", type=int)
    sub.add_argument("--on-failure", choices=["fail_run", "skip_and_log", "retry_then_fail"])
    sub.add_argument("--stopwords", help="stopword file, or english/japanese/none")


def build_parser() -> _Parser:
    parser = _Parser(prog="truthline", description=__doc__)
    parser.add_argument(
        "--version",
        action="version",
        version=f"truthline {__version__} (format {FORMAT_VERSION})",
    )
    # dest must not collide with any subcommand option (pseudo has --command)
    subs = parser.add_subparsers(dest="cmd", metavar="COMMAND")

    def add(name, handler, help_text):
        sub = subs.add_parser(name, help=help_text)
        sub.set_defaults(handler=handler)
        _add_common(sub)
        return sub

    sub = add("stats", _cmd_stats, "corpus statistics (docs, words, sentences)")
    sub.add_argument("--in", dest="in_", metavar="PATH")
    sub.add_argument("--format", choices=["jsonl", "tsv"])
    sub.add_argument("--split", choices=["train", "dev", "test"])
    sub.add_argument("--lenient", action=argparse.BooleanOptionalAction, default=None)
    sub.add_argument("--report")

    sub = add("noise-filter", _cmd_noise_filter, "apply the corpus noise heuristics")
    sub.add_argument("--in", dest="in_", metavar="PATH")
    sub.add_argument("--format", choices=["jsonl", "tsv"])
    sub.add_argument("--split", choices=["train", "dev", "test"])
    sub.add_argument("--lenient", action=argparse.BooleanOptionalAction, default=None)
    sub.add_argument("--stopwords")
    sub.add_argument("--markers", help="marker pattern file (regex per line)")
    sub.add_argument("--disable", action="append", choices=list(ALL_CHECKS))
    sub.add_argument("--out-kept")
    sub.add_argument("--out-removed")
    sub.add_argument("--report")

    sub = add("annotate", _cmd_annotate, "interactive entailment labeling session")
    sub.add_argument("--in", dest="in_", metavar="PATH")
    sub.add_argument("--format", choices=["jsonl", "tsv"])
    sub.add_argument("--annotator")
    sub.add_argument("--out", help="append-only session log (annotations.jsonl)")
    sub.add_argument("--seed", type=int, help="shuffle seed (recorded in the log header)")

    sub = add("aggregate", _cmd_aggregate, "majority-vote aggregation of annotations")
    sub.add_argument("--in", dest="in_", metavar="PATH")
    sub.add_argument("--rule", help="e.g. 2of3 or 4of5")
    sub.add_argument("--out", help="aggregated.jsonl")
    sub.add_argument("--report")

    sub = add("train-scorer", _cmd_train_scorer, "train the lexical entailment baseline")
    sub.add_argument("--instances")
    sub.add_argument("--labels", help="aggregated.jsonl with entail/non_entail labels")
    sub.add_argument("--out", help="model artifact path")
    sub.add_argument("--epochs", type=int)
    sub.add_argument("--learning-rate", type=float)
    sub.add_argument("--batch-size", type=int)
    sub.add_argument("--seed", type=int)
    sub.add_argument("--holdout", type=float, help="holdout fraction (default 0.2)")
    sub.add_argument("--stopwords")
    sub.add_argument("--report")

    sub = add("score", _cmd_score, "score one pair or a dataset")
    _add_scorer_opts(sub)
    sub.add_argument("--source")
    sub.add_argument("--headline")
    sub.add_argument("--in", dest="in_", metavar="PATH")
    sub.add_argument("--format", choices=["jsonl", "tsv"])
    sub.add_argument("--out", help="TSV id<TAB>prob")

    sub = add("filter", _cmd_filter, "remove pairs the scorer judges non-entailed")
    _add_scorer_opts(sub)
    sub.add_argument("--in", dest="in_", metavar="PATH")
    sub.add_argument("--format", choices=["jsonl", "tsv"])
    sub.add_argument("--batch-size", type=int)
    sub.add_argument("--allow-test", action=argparse.BooleanOptionalAction, default=None)
    sub.add_argument("--out-kept")
    sub.add_argument("--out-removed")
    sub.add_argument("--report")

    sub = add("pseudo", _cmd_pseudo, "generate pseudo headlines for removed instances")
    sub.add_argument("--in", dest="in_", metavar="PATH")
    sub.add_argument("--generator", choices=["lead_truncate", "external_command"])
    sub.add_argument("--k", type=int, help="token count for lead_truncate")
    sub.add_argument("--command", help="external generator command line")
    sub.add_argument("--include-dev", action=argparse.BooleanOptionalAction, default=None)
    sub.add_argument("--out")

    sub = add("assemble", _cmd_assemble, "combine kept data with pseudo pairs")
    sub.add_argument("--kept")
    sub.add_argument("--pseudo")
    sub.add_argument("--mode", choices=["filtered", "filtered_plus_pseudo"])
    sub.add_argument("--out")

    sub = add("evaluate", _cmd_evaluate, "ROUGE / support / entailment-ratio report")
    _add_scorer_opts(sub)
    sub.add_argument("--outputs", help='system outputs: JSONL {"id","headline"}')
    sub.add_argument("--refs", help="reference dataset (JSONL)")
    sub.add_argument("--min-source-chars", type=int)
    sub.add_argument("--bin-width", type=float)
    sub.add_argument("--table", action=argparse.BooleanOptionalAction, default=None)
    sub.add_argument("--report")

    sub = add("correlate", _cmd_correlate, "per-instance ROUGE-1 vs support correlation")
    sub.add_argument("--outputs")
    sub.add_argument("--refs")
    sub.add_argument("--min-source-chars", type=int)
    sub.add_argument("--out", help="scatter TSV id<TAB>rouge1_f1<TAB>support")
    sub.add_argument("--report")

    sub = add("histogram", _cmd_histogram, "support-score histogram of system outputs")
    sub.add_argument("--outputs")
    sub.add_argument("--refs")
    sub.add_argument("--min-source-chars", type=int)
    sub.add_argument("--bin-width", type=float)
    sub.add_argument("--report")

    return parser


def main(argv=None) -> int:
    # force=True rebinds the handler to the current stderr on every call
    # (matters when a harness swaps sys.stderr between invocations)
    logging.basicConfig(
        stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(message)s", force=True
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    if getattr(args, "cmd", None) is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.handler(args)
    except RemoteScorerError as exc:
        log.error("remote scorer failure: %s", exc)
        return 3
    except (TruthlineError, OSError) as exc:
        log.error("%s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
