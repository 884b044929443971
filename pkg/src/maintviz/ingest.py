"""Commit extraction from Git repos and export files, plus dataset persistence."""

from __future__ import annotations

import base64
import binascii
import csv
import io
import logging
import subprocess
from pathlib import Path

from .errors import (
    EmptyRepository,
    IoFailure,
    MalformedRecord,
    NotARepository,
    SchemaMismatch,
)
from .model import (
    ActivityLabel,
    Dataset,
    LabeledCommit,
    LabelSource,
    RawCommit,
    iso_utc,
    parse_iso_utc,
)

log = logging.getLogger(__name__)

# One git record: hash, author name, author email, author epoch, raw message.
# Fields are separated by the unit separator, records by NUL (git -z).
_GIT_LOG_FORMAT = "%H%x1f%an%x1f%ae%x1f%at%x1f%B"

EXPORT_FIELD_COUNT = 6

DATASET_HEADER = [
    "project", "hash", "author_name", "author_email",
    "timestamp_utc", "message", "label",
]


def _git(repo_path: Path, *args: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        ["git", "-C", str(repo_path), *args],
        capture_output=True,
    )


def _require_repo_root(path: Path) -> None:
    """Reject paths that are not themselves a Git repository.

    git searches parent directories for .git, so an empty directory inside
    some outer repository would silently mine the wrong history; requiring
    the path to be the repository root (or a bare repo dir) closes that hole.
    """
    probe = _git(path, "rev-parse", "--git-dir")
    if probe.returncode != 0:
        raise NotARepository(f"{path} is not a git repository")
    bare = _git(path, "rev-parse", "--is-bare-repository").stdout.strip() == b"true"
    if bare:
        git_dir = _git(path, "rev-parse", "--absolute-git-dir").stdout.decode().strip()
        if Path(git_dir).resolve() != path.resolve():
            raise NotARepository(f"{path} is not a git repository")
        return
    top = _git(path, "rev-parse", "--show-toplevel")
    if top.returncode != 0 or Path(top.stdout.decode().strip()).resolve() != path.resolve():
        raise NotARepository(f"{path} is not a git repository")


def read_git_history(repo_path, project_name: str) -> list[RawCommit]:
    """Extract the first-parent lineage of the repository's HEAD.

    One RawCommit per commit, author timestamps as UTC epoch seconds,
    messages verbatim (UTF-8 with lossy replacement of invalid bytes).
    Commits with jointly empty author name and email are dropped with a
    warning; returned order is git's (newest first).
    """
    path = Path(repo_path)
    if not path.exists():
        raise IoFailure(f"path does not exist: {path}")
    if not path.is_dir():
        raise IoFailure(f"not a directory: {path}")
    _require_repo_root(path)
    if _git(path, "rev-parse", "--verify", "--quiet", "HEAD").returncode != 0:
        raise EmptyRepository(f"{path} has no commits")
    proc = _git(path, "log", "-z", "--first-parent", f"--format={_GIT_LOG_FORMAT}", "HEAD")
    if proc.returncode != 0:
        raise IoFailure(f"git log failed: {proc.stderr.decode(errors='replace').strip()}")
    commits: list[RawCommit] = []
    skipped = 0
    for record in proc.stdout.decode("utf-8", errors="replace").split("\x00"):
        if not record:
            continue
        hash_, name, email, epoch, message = record.split("\x1f", 4)
        if not name and not email:
            skipped += 1
            continue
        commits.append(RawCommit(project_name, hash_, name, email, int(epoch), message))
    if skipped:
        log.warning("%s: dropped %d commit(s) with empty author name and email", path, skipped)
    return commits


def parse_export_line(line: str, line_number: int | None = None) -> RawCommit:
    """Decode one tab-separated export record into a RawCommit."""
    fields = line.rstrip("\n").split("\t")
    if len(fields) != EXPORT_FIELD_COUNT:
        raise MalformedRecord(
            f"expected {EXPORT_FIELD_COUNT} tab-separated fields, got {len(fields)}",
            row=line_number,
        )
    project, hash_, name, email, epoch_text, message_b64 = fields
    try:
        epoch = int(epoch_text)
    except ValueError:
        raise MalformedRecord(f"timestamp {epoch_text!r} is not an integer", row=line_number)
    try:
        message = base64.b64decode(message_b64, validate=True).decode("utf-8")
    except (binascii.Error, ValueError, UnicodeDecodeError) as exc:
        raise MalformedRecord(f"bad base64 message field: {exc}", row=line_number)
    try:
        return RawCommit(project, hash_, name, email, epoch, message)
    except ValueError as exc:
        raise MalformedRecord(str(exc), row=line_number)


def serialize_export_line(commit: RawCommit) -> str:
    """Inverse of parse_export_line (no trailing newline)."""
    for name, value in (
        ("project", commit.project),
        ("author_name", commit.author_name),
        ("author_email", commit.author_email),
    ):
        if "\t" in value or "\n" in value or "\r" in value:
            raise ValueError(f"{name} {value!r} cannot be represented in the export format")
    message_b64 = base64.b64encode(commit.message.encode("utf-8")).decode("ascii")
    return "\t".join([
        commit.project, commit.hash, commit.author_name, commit.author_email,
        str(commit.timestamp), message_b64,
    ])


def read_export_file(path) -> list[RawCommit]:
    """Parse a whole export file, one commit per non-empty line."""
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            lines = fh.read().split("\n")
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}")
    commits = []
    for line_no, line in enumerate(lines, start=1):
        if not line:
            continue
        commits.append(parse_export_line(line, line_number=line_no))
    return commits


def dataset_csv_text(commits) -> str:
    """Dataset CSV (RFC-4180, CRLF rows) for a sequence of labeled commits."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(DATASET_HEADER)
    for lc in commits:
        c = lc.commit
        writer.writerow([
            c.project, c.hash, c.author_name, c.author_email,
            iso_utc(c.timestamp), c.message, lc.label.value,
        ])
    return buf.getvalue()


def save_dataset(dataset: Dataset, path) -> None:
    """Persist a dataset; output is deterministic for equal datasets."""
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(dataset_csv_text(dataset.commits))
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}")


def load_dataset(path) -> Dataset:
    """Load a dataset CSV; inverse of save_dataset."""
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            records = list(csv.reader(fh))
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}")
    if not records or records[0] != DATASET_HEADER:
        raise SchemaMismatch(f"expected header {','.join(DATASET_HEADER)!r} in {path}")
    labeled: list[LabeledCommit] = []
    for row_no, row in enumerate(records[1:], start=2):
        if len(row) != len(DATASET_HEADER):
            raise MalformedRecord(
                f"expected {len(DATASET_HEADER)} fields, got {len(row)}", row=row_no
            )
        project, hash_, name, email, iso_text, message, label_text = row
        try:
            epoch = parse_iso_utc(iso_text)
        except ValueError:
            raise MalformedRecord(f"bad timestamp_utc {iso_text!r}", row=row_no)
        try:
            label = ActivityLabel(label_text)
        except ValueError:
            raise MalformedRecord(f"bad label {label_text!r}", row=row_no)
        try:
            commit = RawCommit(project, hash_, name, email, epoch, message)
        except ValueError as exc:
            raise MalformedRecord(str(exc), row=row_no)
        labeled.append(LabeledCommit(commit, label, LabelSource.KEYWORD))
    try:
        return Dataset(tuple(labeled))
    except ValueError as exc:
        raise MalformedRecord(str(exc))
