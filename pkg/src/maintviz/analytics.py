"""Time-bucketed activity series, identity filtering, balance and anomaly math."""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidThreshold, UnknownProject
from .model import ActivityLabel, LabeledCommit, RawCommit

SECONDS_PER_DAY = 86400

# Default stacked-bar column width, in days.
DEFAULT_BUCKET_WIDTH_DAYS = 28
# Default page size for commit drill-down.
DEFAULT_DETAILS_LIMIT = 10
# Default minimum per-activity share for a balanced profile.
DEFAULT_BALANCE_THRESHOLD = 0.15
# Default sigma multiplier for peak/deep flags.
DEFAULT_ANOMALY_K = 2.0
# Shorter series carry too little signal to call anything an anomaly.
MIN_ANOMALY_BUCKETS = 3

MAX_BALANCE_THRESHOLD = 1 / 3


class MatchMode(str, Enum):
    """Which author field(s) a developer identity matches on."""

    NAME = "name"
    EMAIL = "email"
    BOTH = "both"


class AnomalyKind(str, Enum):
    PEAK = "peak"
    DEEP = "deep"


@dataclass(frozen=True)
class TimeRange:
    """Half-open interval [start, end) in UTC epoch seconds."""

    start: int
    end: int

    def __post_init__(self):
        if self.start >= self.end:
            raise ValueError(f"empty time range [{self.start}, {self.end})")

    def contains(self, timestamp: int) -> bool:
        return self.start <= timestamp < self.end


@dataclass(frozen=True)
class DeveloperIdentity:
    """Matcher over author name and/or email.

    Matching on both fields lets one person be tracked across several
    accounts with the same display name, or vice versa.
    """

    name: str | None = None
    email: str | None = None
    mode: MatchMode = MatchMode.BOTH

    def __post_init__(self):
        if self.mode in (MatchMode.NAME, MatchMode.BOTH) and not self.name:
            raise ValueError(f"match mode {self.mode.value!r} requires a name")
        if self.mode in (MatchMode.EMAIL, MatchMode.BOTH) and not self.email:
            raise ValueError(f"match mode {self.mode.value!r} requires an email")


@dataclass(frozen=True)
class ActivityBucket:
    """Fixed-width time window with per-activity commit counts."""

    start: int
    width_days: int
    corrective: int = 0
    perfective: int = 0
    adaptive: int = 0

    @property
    def end(self) -> int:
        return self.start + self.width_days * SECONDS_PER_DAY

    @property
    def total(self) -> int:
        return self.corrective + self.perfective + self.adaptive


@dataclass(frozen=True)
class BalanceProfile:
    """Per-activity proportions plus the balanced verdict."""

    total: int
    proportions: dict[ActivityLabel, float]
    min_share_threshold: float
    balanced: bool


@dataclass(frozen=True)
class AnomalyFlag:
    bucket_start: int
    kind: AnomalyKind
    total: int
    series_mean: float
    series_stddev: float


@dataclass(frozen=True)
class CommitPage:
    items: tuple[LabeledCommit, ...]
    total_matches: int


def _norm(text: str) -> str:
    return text.strip().lower()


def match_identity(commit: RawCommit, identity: DeveloperIdentity) -> bool:
    """Case-insensitive, whitespace-trimmed equality on the selected field(s)."""
    name_ok = identity.name is not None and _norm(commit.author_name) == _norm(identity.name)
    email_ok = identity.email is not None and _norm(commit.author_email) == _norm(identity.email)
    if identity.mode is MatchMode.NAME:
        return name_ok
    if identity.mode is MatchMode.EMAIL:
        return email_ok
    return name_ok and email_ok


def filter_commits(
    commits: list[LabeledCommit],
    project: str,
    time_range: TimeRange | None = None,
    identity: DeveloperIdentity | None = None,
    include_unclassified: bool = False,
) -> list[LabeledCommit]:
    """Scope commits to one project, optional period and developer.

    Raises UnknownProject when no commit carries the project at all, so an
    empty result always means "nothing in range", never "no such project".
    """
    project_exists = False
    kept: list[LabeledCommit] = []
    for lc in commits:
        if lc.commit.project != project:
            continue
        project_exists = True
        if time_range is not None and not time_range.contains(lc.commit.timestamp):
            continue
        if identity is not None and not match_identity(lc.commit, identity):
            continue
        if lc.label is ActivityLabel.UNCLASSIFIED and not include_unclassified:
            continue
        kept.append(lc)
    if not project_exists:
        raise UnknownProject(f"no such project: {project!r}")
    return kept


def floor_to_day(timestamp: int) -> int:
    """Midnight-UTC floor of an epoch timestamp."""
    return timestamp - (timestamp % SECONDS_PER_DAY)


def bucketize(
    commits: list[LabeledCommit],
    width_days: int = DEFAULT_BUCKET_WIDTH_DAYS,
    time_range: TimeRange | None = None,
) -> list[ActivityBucket]:
    """Group classified commits into contiguous fixed-width buckets.

    Buckets are aligned to the effective range start: the given range, or
    [midnight-UTC floor of the earliest commit, latest commit + 1) when no
    range is supplied. A commit at t lands in bucket floor((t - start)/width).
    Every bucket in the span is emitted, zeros included; the final bucket may
    extend past range end. Unclassified commits and commits outside an
    explicit range are not counted.
    """
    if width_days < 1:
        raise ValueError(f"width_days must be >= 1, got {width_days}")
    width = width_days * SECONDS_PER_DAY
    counted = [lc for lc in commits if lc.label is not ActivityLabel.UNCLASSIFIED]
    if time_range is None:
        if not counted:
            return []
        stamps = [lc.commit.timestamp for lc in counted]
        start = floor_to_day(min(stamps))
        end = max(stamps) + 1
    else:
        start, end = time_range.start, time_range.end
    n_buckets = -(-(end - start) // width)  # ceil division
    counts = [[0, 0, 0] for _ in range(n_buckets)]
    index_of = {
        ActivityLabel.CORRECTIVE: 0,
        ActivityLabel.PERFECTIVE: 1,
        ActivityLabel.ADAPTIVE: 2,
    }
    for lc in counted:
        t = lc.commit.timestamp
        if not start <= t < end:
            continue
        counts[(t - start) // width][index_of[lc.label]] += 1
    return [
        ActivityBucket(
            start=start + i * width,
            width_days=width_days,
            corrective=c,
            perfective=p,
            adaptive=a,
        )
        for i, (c, p, a) in enumerate(counts)
    ]


def balance_profile(
    commits: list[LabeledCommit],
    min_share_threshold: float = DEFAULT_BALANCE_THRESHOLD,
) -> BalanceProfile:
    """Proportions of the three activities and whether all clear the threshold.

    The threshold lives in (0, 1/3]: zero would declare a profile missing an
    entire activity "balanced", and above 1/3 no profile could ever qualify.
    An empty (or fully unclassified) commit set is never balanced.
    """
    if not 0 < min_share_threshold <= MAX_BALANCE_THRESHOLD:
        raise InvalidThreshold(
            f"threshold must be in (0, {MAX_BALANCE_THRESHOLD:.4f}], got {min_share_threshold}"
        )
    counts = {
        ActivityLabel.CORRECTIVE: 0,
        ActivityLabel.PERFECTIVE: 0,
        ActivityLabel.ADAPTIVE: 0,
    }
    for lc in commits:
        if lc.label in counts:
            counts[lc.label] += 1
    total = sum(counts.values())
    if total == 0:
        proportions = {label: 0.0 for label in counts}
        return BalanceProfile(0, proportions, min_share_threshold, balanced=False)
    proportions = {label: count / total for label, count in counts.items()}
    balanced = min(proportions.values()) >= min_share_threshold
    return BalanceProfile(total, proportions, min_share_threshold, balanced)


def detect_anomalies(
    buckets: list[ActivityBucket],
    k: float = DEFAULT_ANOMALY_K,
) -> list[AnomalyFlag]:
    """Flag buckets whose total lies outside mean +/- k * population stddev."""
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    if len(buckets) < MIN_ANOMALY_BUCKETS:
        return []
    totals = [b.total for b in buckets]
    mean = statistics.fmean(totals)
    stddev = statistics.pstdev(totals)
    if stddev == 0:
        return []
    flags = []
    for bucket, total in zip(buckets, totals):
        if total > mean + k * stddev:
            flags.append(AnomalyFlag(bucket.start, AnomalyKind.PEAK, total, mean, stddev))
        elif total < mean - k * stddev:
            flags.append(AnomalyFlag(bucket.start, AnomalyKind.DEEP, total, mean, stddev))
    return flags


def search_commits(
    commits: list[LabeledCommit],
    activity: ActivityLabel,
    bucket: TimeRange,
    query: str | None = None,
    limit: int = DEFAULT_DETAILS_LIMIT,
    offset: int = 0,
) -> CommitPage:
    """Drill down to the commits behind one activity and time frame.

    Free-text queries match case-insensitively anywhere in the message; an
    empty query is treated as absent. total_matches counts the full match
    set regardless of paging.
    """
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    if offset < 0:
        raise ValueError(f"offset must be >= 0, got {offset}")
    needle = (query or "").lower()
    matches = [
        lc
        for lc in commits
        if lc.label is activity
        and bucket.contains(lc.commit.timestamp)
        and (not needle or needle in lc.commit.message.lower())
    ]
    matches.sort(key=lambda lc: lc.commit.timestamp)
    return CommitPage(tuple(matches[offset : offset + limit]), len(matches))
