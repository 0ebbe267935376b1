"""End-to-end orchestration: noise filtering, entailment filtering,
self-training pseudo pairs, and evaluation reports.

Every stage is deterministic: identical inputs, configuration, and scorer
responses produce byte-identical outputs and reports, whatever the worker
count. Filtering partitions its input — kept plus removed is exactly the
input, in input order (instances skipped under the skip_and_log failure
policy are the one documented exception and are listed in the report).
"""

from __future__ import annotations

import json
import math
import subprocess
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .corpus import Instance
from .entailment import ScorerBinding, build_scorer
from .errors import DataError, ScorerError
from .heuristics import NoiseFilterConfig, apply_noise_filters
from .metrics import Histogram, histogram, pearson, rouge_l, rouge_n, support_score
from .textkit import TokenizerConfig, tokenize

__all__ = [
    "FilterReport",
    "EvalReport",
    "LeadTruncateGenerator",
    "ExternalCommandGenerator",
    "PSEUDO_ID_SUFFIX",
    "noise_filter",
    "filter_entailment",
    "generate_pseudo",
    "assemble_training_set",
    "evaluate",
    "correlation_report",
]

PSEUDO_ID_SUFFIX = ".pseudo"


@dataclass(frozen=True)
class FilterReport:
    """Accounting for one filtering stage."""

    input_count: int
    kept_count: int
    removed_count: int
    kept_ratio: float
    per_reason: dict = field(default_factory=dict)
    skipped_ids: tuple = ()

    def to_json_dict(self) -> dict:
        out = {
            "input_count": self.input_count,
            "kept_count": self.kept_count,
            "removed_count": self.removed_count,
            "kept_ratio": round(self.kept_ratio, 6),
            "per_reason": {k: self.per_reason[k] for k in sorted(self.per_reason)},
        }
        if self.skipped_ids:
            out["skipped_ids"] = list(self.skipped_ids)
        return out


@dataclass(frozen=True)
class EvalReport:
    """Evaluation summary: mean F1 ROUGE, support, and optional entailment ratio.

    Means are kept at full precision here; `to_json_dict` rounds scores to
    2 decimals and ratios to 4 (two-decimal percentage points). Support
    aggregates exclude instances whose raw source text is shorter than the
    configured character minimum; `support_excluded` counts them.
    """

    n: int
    rouge1_f1: float
    rouge2_f1: float
    rougeL_f1: float
    support_mean: float
    support_histogram: Histogram
    entail_ratio: float | None = None
    support_excluded: int = 0

    def to_json_dict(self) -> dict:
        return {
            "rouge1": round(self.rouge1_f1, 2),
            "rouge2": round(self.rouge2_f1, 2),
            "rougeL": round(self.rougeL_f1, 2),
            "support_mean": round(self.support_mean, 2),
            "entail_ratio": None if self.entail_ratio is None else round(self.entail_ratio, 4),
            "n": self.n,
            "support_histogram": self.support_histogram.to_dict(),
        }

    def format_table(self) -> str:
        entail = "---" if self.entail_ratio is None else f"{100.0 * self.entail_ratio:.2f}%"
        header = f"{'R-1':>7} {'R-2':>7} {'R-L':>7} {'Sup':>7} {'Entail':>8} {'n':>7}"
        row = (
            f"{self.rouge1_f1:7.2f} {self.rouge2_f1:7.2f} {self.rougeL_f1:7.2f} "
            f"{self.support_mean:7.2f} {entail:>8} {self.n:7d}"
        )
        return header + "\n" + row


def noise_filter(dataset: Sequence[Instance], config: NoiseFilterConfig):
    """Apply the noise heuristics; returns (kept, removed, report)."""
    if not dataset:
        raise DataError("noise filter got an empty dataset")
    kept, removed = [], []
    per_reason: dict = {}
    for inst in dataset:
        verdict = apply_noise_filters(inst, config)
        if verdict.keep:
            kept.append(inst)
        else:
            removed.append(inst)
            for reason in verdict.violations:
                per_reason[reason] = per_reason.get(reason, 0) + 1
    report = FilterReport(
        input_count=len(dataset),
        kept_count=len(kept),
        removed_count=len(removed),
        kept_ratio=len(kept) / len(dataset),
        per_reason=per_reason,
    )
    return kept, removed, report


def _resolve_scorer(binding):
    if hasattr(binding, "score_many"):
        return binding
    if isinstance(binding, ScorerBinding):
        return build_scorer(binding)
    raise DataError(f"not a scorer or binding: {binding!r}")


def filter_entailment(
    dataset: Sequence[Instance],
    binding,
    *,
    threshold: float | None = None,
    on_failure: str | None = None,
    allow_test: bool = False,
    batch_size: int = 64,
):
    """Partition a dataset by entailment decision; returns (kept, removed, report).

    `binding` is a ScorerBinding or any object with score_many. The test
    split is refused without `allow_test` — evaluation data must never be
    filtered by accident. With the skip_and_log policy, instances whose
    scoring failed land in neither partition and are listed in the report.
    """
    if not dataset:
        raise DataError("entailment filter got an empty dataset")
    if not allow_test:
        n_test = sum(1 for inst in dataset if inst.split == "test")
        if n_test:
            raise DataError(
                f"refusing to filter {n_test} test-split instances; "
                "pass allow_test=True (--allow-test) to override"
            )
    threshold = threshold if threshold is not None else getattr(binding, "threshold", 0.5)
    policy = on_failure or getattr(binding, "on_failure", "retry_then_fail")
    scorer = _resolve_scorer(binding)

    kept, removed, skipped = [], [], []
    for start in range(0, len(dataset), batch_size):
        chunk = dataset[start : start + batch_size]
        items = [(inst.id, inst.source, inst.headline) for inst in chunk]
        try:
            probs = scorer.score_many(items)
        except ScorerError:
            if policy == "skip_and_log":
                skipped.extend(inst.id for inst in chunk)
                continue
            raise
        for inst, prob in zip(chunk, probs):
            (kept if prob >= threshold else removed).append(inst)

    report = FilterReport(
        input_count=len(dataset),
        kept_count=len(kept),
        removed_count=len(removed),
        kept_ratio=len(kept) / len(dataset),
        per_reason={"non_entail": len(removed)},
        skipped_ids=tuple(skipped),
    )
    return kept, removed, report


class LeadTruncateGenerator:
    """Built-in pseudo-headline generator: the first k tokens of the source.

    Deliberately trivial — a deterministic stand-in for a trained headline
    model. Anything better plugs in through ExternalCommandGenerator.
    """

    def __init__(self, k_tokens: int, tokenizer: TokenizerConfig | None = None):
        if k_tokens < 1:
            raise DataError("lead_truncate needs k >= 1")
        self.k_tokens = k_tokens
        self.tokenizer = tokenizer or TokenizerConfig(mode="whitespace")

    @property
    def tag(self) -> str:
        return f"lead_truncate(k={self.k_tokens})"

    def generate(self, instances: Sequence[Instance]) -> dict:
        return {
            inst.id: " ".join(tokenize(self.tokenizer, inst.source)[: self.k_tokens])
            for inst in instances
        }


class ExternalCommandGenerator:
    """Pseudo-headline generator backed by a child process.

    Writes JSONL {"id","source"} to the child's stdin, reads JSONL
    {"id","headline"} from its stdout. Missing, duplicate, or unknown ids
    and nonzero exits are errors naming the offending id.
    """

    def __init__(self, argv: Sequence[str], *, timeout: float | None = None):
        if not argv:
            raise DataError("external generator needs a command")
        self.argv = list(argv)
        self.timeout = timeout

    @property
    def tag(self) -> str:
        return f"external_command({' '.join(self.argv)})"

    def generate(self, instances: Sequence[Instance]) -> dict:
        payload = "".join(
            json.dumps({"id": inst.id, "source": inst.source}, ensure_ascii=False) + "\n"
            for inst in instances
        )
        try:
            proc = subprocess.run(
                self.argv,
                input=payload,
                capture_output=True,
                text=True,
                timeout=self.timeout,
            )
        except (OSError, subprocess.TimeoutExpired) as exc:
            raise DataError(f"external generator failed to run: {exc}") from exc
        if proc.returncode != 0:
            raise DataError(
                f"external generator exited {proc.returncode}: {proc.stderr.strip()[:500]}"
            )
        wanted = {inst.id for inst in instances}
        headlines: dict = {}
        for lineno, line in enumerate(proc.stdout.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                item_id, headline = obj["id"], obj["headline"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise DataError(f"external generator output line {lineno} malformed: {exc}") from exc
            if item_id not in wanted:
                raise DataError(f"external generator returned unknown id {item_id!r}")
            if item_id in headlines:
                raise DataError(f"external generator returned duplicate id {item_id!r}")
            headlines[item_id] = str(headline)
        missing = [inst.id for inst in instances if inst.id not in headlines]
        if missing:
            raise DataError(f"external generator returned no headline for id {missing[0]!r}")
        return headlines


def generate_pseudo(removed: Sequence[Instance], generator, *, splits=("train",)) -> list:
    """Build pseudo supervision pairs from filtered-out instances.

    One pair per removed instance in the configured splits (train only by
    default): same source, generated headline, origin=pseudo, id suffixed
    with ".pseudo", generator identity and source id recorded in metadata.
    """
    eligible = [inst for inst in removed if inst.split in splits]
    if not eligible:
        return []
    headlines = generator.generate(eligible)
    pseudo = []
    for inst in eligible:
        pseudo.append(
            Instance(
                id=inst.id + PSEUDO_ID_SUFFIX,
                source=inst.source,
                headline=headlines[inst.id],
                split=inst.split,
                origin="pseudo",
                metadata={**inst.metadata, "generator": generator.tag, "source_id": inst.id},
            )
        )
    return pseudo


def assemble_training_set(
    kept: Sequence[Instance], pseudo: Sequence[Instance], mode: str = "filtered_plus_pseudo"
) -> list:
    """Combine filtered data with pseudo pairs.

    mode="filtered" returns the kept set; "filtered_plus_pseudo" appends
    the pseudo pairs, restoring the original instance count when every
    removed instance produced one. Any id collision is an error.
    """
    if mode not in ("filtered", "filtered_plus_pseudo"):
        raise DataError(f"unknown assembly mode {mode!r}")
    combined = list(kept) if mode == "filtered" else list(kept) + list(pseudo)
    seen: set = set()
    for inst in combined:
        if inst.id in seen:
            raise DataError(f"id collision while assembling training set: {inst.id!r}")
        seen.add(inst.id)
    return combined


def _normalize_outputs(outputs) -> list:
    if isinstance(outputs, Mapping):
        pairs = list(outputs.items())
    else:
        pairs = [(i, h) for i, h in outputs]
    seen: set = set()
    for item_id, _ in pairs:
        if item_id in seen:
            raise DataError(f"duplicate output id {item_id!r}")
        seen.add(item_id)
    return pairs


@dataclass(frozen=True)
class _InstanceEval:
    output_id: str
    rouge1_f1: float
    rouge2_f1: float
    rougeL_f1: float
    support: float
    support_included: bool


def _evaluate_one(item, *, tokenizer: TokenizerConfig, min_source_chars: int) -> _InstanceEval:
    (output_id, generated), ref = item
    gen_tokens = tokenize(tokenizer, generated)
    ref_tokens = tokenize(tokenizer, ref.headline)
    src_tokens = tokenize(tokenizer, ref.source)
    return _InstanceEval(
        output_id=output_id,
        rouge1_f1=rouge_n(ref_tokens, gen_tokens, 1).f1,
        rouge2_f1=rouge_n(ref_tokens, gen_tokens, 2).f1,
        rougeL_f1=rouge_l(ref_tokens, gen_tokens).f1,
        support=support_score(src_tokens, gen_tokens).value,
        support_included=len(ref.source) >= min_source_chars,
    )


def _per_instance_evals(
    outputs, references, *, tokenizer, min_source_chars, workers=1
) -> tuple:
    pairs = _normalize_outputs(outputs)
    if not pairs:
        raise DataError("no outputs to evaluate")
    ref_by_id = {inst.id: inst for inst in references}
    missing = [item_id for item_id, _ in pairs if item_id not in ref_by_id]
    if missing:
        raise DataError(f"outputs reference unknown ids: {missing[:10]}")
    work = [((item_id, text), ref_by_id[item_id]) for item_id, text in pairs]

    def run(item):
        return _evaluate_one(item, tokenizer=tokenizer, min_source_chars=min_source_chars)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            evals = list(pool.map(run, work))  # map preserves input order
    else:
        evals = [run(item) for item in work]
    return pairs, ref_by_id, evals


def evaluate(
    outputs,
    references: Sequence[Instance],
    scorer=None,
    *,
    tokenizer: TokenizerConfig | None = None,
    threshold: float = 0.5,
    min_source_chars: int = 10,
    bin_width: float = 10.0,
    workers: int = 1,
) -> EvalReport:
    """Score generated headlines against their references.

    `outputs` is an id->headline mapping or (id, headline) sequence; every
    id must exist in `references`. ROUGE means cover all outputs; support
    aggregates skip instances with sources shorter than
    `min_source_chars` characters. `scorer` (optional) adds the fraction
    of outputs classified as entailed by their sources.
    """
    tokenizer = tokenizer or TokenizerConfig()
    pairs, ref_by_id, evals = _per_instance_evals(
        outputs, references, tokenizer=tokenizer, min_source_chars=min_source_chars, workers=workers
    )
    n = len(evals)
    supports = [e.support for e in evals if e.support_included]
    entail_ratio = None
    if scorer is not None:
        scorer = _resolve_scorer(scorer)
        items = [(item_id, ref_by_id[item_id].source, text) for item_id, text in pairs]
        probs = scorer.score_many(items)
        entail_ratio = sum(1 for p in probs if p >= threshold) / n
    return EvalReport(
        n=n,
        rouge1_f1=math.fsum(e.rouge1_f1 for e in evals) / n,
        rouge2_f1=math.fsum(e.rouge2_f1 for e in evals) / n,
        rougeL_f1=math.fsum(e.rougeL_f1 for e in evals) / n,
        support_mean=math.fsum(supports) / len(supports) if supports else 0.0,
        support_histogram=histogram(supports, bin_width),
        entail_ratio=entail_ratio,
        support_excluded=n - len(supports),
    )


def correlation_report(
    outputs,
    references: Sequence[Instance],
    *,
    tokenizer: TokenizerConfig | None = None,
    min_source_chars: int = 10,
    workers: int = 1,
):
    """Pearson r between per-instance ROUGE-1 F1 and support score.

    Returns (CorrelationResult, rows) where rows are (id, rouge1_f1,
    support) for the instances entering the correlation (short sources
    excluded), ready for a scatter dump. Zero variance in either series is
    an explicit error, never NaN.
    """
    tokenizer = tokenizer or TokenizerConfig()
    _, _, evals = _per_instance_evals(
        outputs, references, tokenizer=tokenizer, min_source_chars=min_source_chars, workers=workers
    )
    included = [e for e in evals if e.support_included]
    if len(included) < 2:
        raise DataError("need at least 2 instances with admissible sources")
    rows = [(e.output_id, e.rouge1_f1, e.support) for e in included]
    result = pearson([r[1] for r in rows], [r[2] for r in rows])
    return result, rows
