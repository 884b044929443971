"""Core domain model: commits, activity labels, and the dataset container."""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum

_HASH_RE = re.compile(r"[0-9a-f]{7,64}")

ISO_UTC_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


class ActivityLabel(str, Enum):
    """Maintenance activity of a single commit.

    ``UNCLASSIFIED`` is an internal fallback for messages no rule matched;
    it is never rendered as a chart series.
    """

    CORRECTIVE = "corrective"
    PERFECTIVE = "perfective"
    ADAPTIVE = "adaptive"
    UNCLASSIFIED = "unclassified"


# The three activities shown in charts, in tie-break priority order.
CHART_LABELS = (
    ActivityLabel.CORRECTIVE,
    ActivityLabel.PERFECTIVE,
    ActivityLabel.ADAPTIVE,
)


class LabelSource(str, Enum):
    """Where a commit's label came from."""

    KEYWORD = "keyword"
    EXTERNAL = "external"


@dataclass(frozen=True)
class RawCommit:
    """One VCS revision.

    The hash is normalized to lowercase on construction. At least one of
    author_name / author_email must be non-empty so the commit stays
    addressable by a developer identity filter.
    """

    project: str
    hash: str
    author_name: str
    author_email: str
    timestamp: int
    message: str

    def __post_init__(self):
        object.__setattr__(self, "hash", self.hash.lower())
        if not self.project:
            raise ValueError("project name must be non-empty")
        if not _HASH_RE.fullmatch(self.hash):
            raise ValueError(f"invalid commit hash {self.hash!r}")
        if not self.author_name and not self.author_email:
            raise ValueError(f"commit {self.hash}: author name and email are both empty")
        if self.timestamp < 0:
            raise ValueError(f"commit {self.hash}: negative timestamp {self.timestamp}")

    @property
    def key(self) -> tuple[str, str]:
        return (self.project, self.hash)


@dataclass(frozen=True)
class LabeledCommit:
    """A commit together with its maintenance-activity label.

    label_source is provenance only (the persisted CSV does not carry it),
    so it stays out of equality.
    """

    commit: RawCommit
    label: ActivityLabel
    label_source: LabelSource = field(default=LabelSource.KEYWORD, compare=False)


def _sort_key(lc: LabeledCommit) -> tuple[str, int, str]:
    c = lc.commit
    return (c.project, c.timestamp, c.hash)


@dataclass(frozen=True)
class Dataset:
    """Classified commit corpus.

    Commits are kept sorted by (project, timestamp, hash) and unique per
    (project, hash). ``created_at`` records extraction time and is excluded
    from equality, mirroring the persisted form which does not carry it.
    """

    commits: tuple[LabeledCommit, ...]
    created_at: int = field(default_factory=lambda: int(time.time()), compare=False)

    def __post_init__(self):
        ordered = tuple(sorted(self.commits, key=_sort_key))
        object.__setattr__(self, "commits", ordered)
        seen: set[tuple[str, str]] = set()
        for lc in ordered:
            if lc.commit.key in seen:
                project, hash_ = lc.commit.key
                raise ValueError(f"duplicate commit {hash_} in project {project}")
            seen.add(lc.commit.key)

    @property
    def projects(self) -> list[str]:
        return sorted({lc.commit.project for lc in self.commits})

    def __len__(self) -> int:
        return len(self.commits)


def iso_utc(timestamp: int) -> str:
    """Render epoch seconds as ISO-8601 UTC (second precision, Z suffix)."""
    return datetime.fromtimestamp(timestamp, tz=timezone.utc).strftime(ISO_UTC_FORMAT)


def parse_iso_utc(text: str) -> int:
    """Inverse of iso_utc. Raises ValueError on any other format."""
    dt = datetime.strptime(text, ISO_UTC_FORMAT).replace(tzinfo=timezone.utc)
    return int(dt.timestamp())
