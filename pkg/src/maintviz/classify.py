"""Keyword-based mapping of commit messages onto maintenance activities."""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass

from .errors import DuplicateKey, InvalidLabel, MalformedRecord, SchemaMismatch
from .model import (
    CHART_LABELS,
    ActivityLabel,
    LabeledCommit,
    LabelSource,
    RawCommit,
)

# Whole-token matching on lowercase alphanumeric words; "addressing" must
# not match "add", so no substring or stemming tricks.
_TOKEN_SPLIT = re.compile(r"[^0-9a-z]+")

DEFAULT_CORRECTIVE = frozenset({
    "fix", "fixes", "fixed", "bug", "bugs", "error", "errors", "fail",
    "fails", "failed", "failure", "crash", "crashes", "issue", "defect",
    "fault", "npe", "exception", "broken", "regression",
})
DEFAULT_PERFECTIVE = frozenset({
    "refactor", "refactoring", "refactored", "cleanup", "clean",
    "restructure", "simplify", "simplified", "rename", "renamed",
    "reorganize", "polish", "style", "format", "formatting", "docs",
    "documentation", "typo", "test", "tests", "testing", "optimize",
    "optimized", "performance",
})
DEFAULT_ADAPTIVE = frozenset({
    "add", "adds", "added", "new", "feature", "features", "support",
    "supports", "implement", "implements", "implemented", "introduce",
    "introduces", "introduced", "initial", "create", "creates", "created",
    "enable", "enables", "upgrade", "update",
})

KEYWORD_TABLE_HEADER = ["label", "word"]
LABEL_OVERRIDES_HEADER = ["project", "hash", "label"]


@dataclass(frozen=True)
class KeywordTable:
    """Three pairwise-disjoint sets of lowercase word stems."""

    corrective: frozenset[str] = DEFAULT_CORRECTIVE
    perfective: frozenset[str] = DEFAULT_PERFECTIVE
    adaptive: frozenset[str] = DEFAULT_ADAPTIVE

    def __post_init__(self):
        for words in (self.corrective, self.perfective, self.adaptive):
            for word in words:
                if not word or word != word.lower() or any(ch.isspace() for ch in word):
                    raise ValueError(
                        f"keyword {word!r} must be non-empty, lowercase, without whitespace"
                    )
        overlap = (
            (self.corrective & self.perfective)
            | (self.corrective & self.adaptive)
            | (self.perfective & self.adaptive)
        )
        if overlap:
            raise ValueError(f"keyword sets must be pairwise disjoint, shared: {sorted(overlap)}")

    def words_for(self, label: ActivityLabel) -> frozenset[str]:
        return {
            ActivityLabel.CORRECTIVE: self.corrective,
            ActivityLabel.PERFECTIVE: self.perfective,
            ActivityLabel.ADAPTIVE: self.adaptive,
        }[label]


DEFAULT_TABLE = KeywordTable()


@dataclass(frozen=True)
class ClassificationResult:
    """Labeled commits plus per-label tallies and override diagnostics."""

    commits: tuple[LabeledCommit, ...]
    summary: dict[ActivityLabel, int]
    unknown_overrides: tuple[tuple[str, str], ...] = ()


def tokenize(message: str) -> list[str]:
    """Lowercase alphanumeric tokens of a commit message."""
    return [t for t in _TOKEN_SPLIT.split(message.lower()) if t]


def classify_message(message: str, table: KeywordTable = DEFAULT_TABLE) -> ActivityLabel:
    """Label one message by keyword-match counts.

    The activity with the strictly highest token-match count wins; ties among
    nonzero counts break corrective > perfective > adaptive; no match at all
    yields UNCLASSIFIED. Total and deterministic over any string.
    """
    tokens = tokenize(message)
    counts = {
        label: sum(1 for t in tokens if t in table.words_for(label))
        for label in CHART_LABELS
    }
    best = max(counts.values())
    if best == 0:
        return ActivityLabel.UNCLASSIFIED
    for label in CHART_LABELS:
        if counts[label] == best:
            return label
    raise AssertionError("unreachable")


def classify_dataset(
    commits: list[RawCommit],
    table: KeywordTable = DEFAULT_TABLE,
    overrides: dict[tuple[str, str], ActivityLabel] | None = None,
) -> ClassificationResult:
    """Label every commit, preserving input order.

    An override for (project, hash) takes precedence over the keyword result
    and is marked label_source=external. Override keys that match no input
    commit are reported, not fatal.
    """
    overrides = overrides or {}
    labeled: list[LabeledCommit] = []
    summary = {label: 0 for label in ActivityLabel}
    seen_keys: set[tuple[str, str]] = set()
    for commit in commits:
        seen_keys.add(commit.key)
        if commit.key in overrides:
            label = overrides[commit.key]
            source = LabelSource.EXTERNAL
        else:
            label = classify_message(commit.message, table)
            source = LabelSource.KEYWORD
        summary[label] += 1
        labeled.append(LabeledCommit(commit, label, source))
    unknown = tuple(sorted(k for k in overrides if k not in seen_keys))
    return ClassificationResult(tuple(labeled), summary, unknown)


def _read_csv_records(path) -> list[list[str]]:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.reader(fh))


def load_keyword_table(path) -> KeywordTable:
    """Load a keyword table from a `label,word` CSV, enforcing invariants."""
    records = _read_csv_records(path)
    if not records or records[0] != KEYWORD_TABLE_HEADER:
        raise SchemaMismatch(
            f"expected header {','.join(KEYWORD_TABLE_HEADER)!r} in {path}"
        )
    sets: dict[ActivityLabel, set[str]] = {label: set() for label in CHART_LABELS}
    owner: dict[str, ActivityLabel] = {}
    for row_no, row in enumerate(records[1:], start=2):
        if len(row) != 2:
            raise MalformedRecord(f"expected 2 fields, got {len(row)}", row=row_no)
        label_text, word = row
        label = _parse_chart_label(label_text, row_no)
        if not word or word != word.lower() or any(ch.isspace() for ch in word):
            raise MalformedRecord(
                f"keyword {word!r} must be non-empty, lowercase, without whitespace",
                row=row_no,
            )
        if word in owner and owner[word] is not label:
            raise MalformedRecord(
                f"keyword {word!r} already assigned to {owner[word].value}", row=row_no
            )
        owner[word] = label
        sets[label].add(word)
    return KeywordTable(
        corrective=frozenset(sets[ActivityLabel.CORRECTIVE]),
        perfective=frozenset(sets[ActivityLabel.PERFECTIVE]),
        adaptive=frozenset(sets[ActivityLabel.ADAPTIVE]),
    )


def load_label_overrides(path) -> dict[tuple[str, str], ActivityLabel]:
    """Load a `project,hash,label` CSV of externally supplied labels.

    Duplicate (project, hash) keys are an error; only the three chart
    activities are permitted (an override may not say "unclassified").
    """
    records = _read_csv_records(path)
    if not records or records[0] != LABEL_OVERRIDES_HEADER:
        raise SchemaMismatch(
            f"expected header {','.join(LABEL_OVERRIDES_HEADER)!r} in {path}"
        )
    overrides: dict[tuple[str, str], ActivityLabel] = {}
    first_row: dict[tuple[str, str], int] = {}
    for row_no, row in enumerate(records[1:], start=2):
        if len(row) != 3:
            raise MalformedRecord(f"expected 3 fields, got {len(row)}", row=row_no)
        project, hash_, label_text = row
        key = (project, hash_.lower())
        if key in overrides:
            raise DuplicateKey(
                f"rows {first_row[key]} and {row_no}: duplicate override for "
                f"{project}/{key[1]}"
            )
        overrides[key] = _parse_chart_label(label_text, row_no)
        first_row[key] = row_no
    return overrides


def _parse_chart_label(text: str, row_no: int) -> ActivityLabel:
    for label in CHART_LABELS:
        if text == label.value:
            return label
    raise InvalidLabel(f"row {row_no}: {text!r} is not one of "
                       f"{', '.join(l.value for l in CHART_LABELS)}")
