"""Shared fixtures: in-memory corpora, fixture git repos, hypothesis strategies."""

from __future__ import annotations

import subprocess
from pathlib import Path

import hypothesis.strategies as st
import pytest
from hypothesis import settings

from maintviz.model import ActivityLabel, Dataset, LabeledCommit, LabelSource, RawCommit

settings.register_profile("default", deadline=None)
settings.load_profile("default")

HEX = "0123456789abcdef"

DAY = 86400


def lc(
    project="demo",
    hash="a0b1c2d",
    name="Alice",
    email="alice@x.org",
    ts=0,
    msg="a message",
    label=ActivityLabel.CORRECTIVE,
    source=LabelSource.KEYWORD,
) -> LabeledCommit:
    return LabeledCommit(RawCommit(project, hash, name, email, ts, msg), label, source)


def make_commits(spec: list[tuple[int, ActivityLabel]], project="demo") -> list[LabeledCommit]:
    """Commits at given (timestamp, label) points, hashes synthesized."""
    return [
        lc(project=project, hash=f"{i:07x}", ts=ts, label=label)
        for i, (ts, label) in enumerate(spec)
    ]


# --- fixture git repositories -------------------------------------------------

def _git(path: Path, *args: str, env: dict | None = None) -> str:
    proc = subprocess.run(
        ["git", "-C", str(path), *args],
        capture_output=True, text=True, check=True, env=env,
    )
    return proc.stdout.strip()


def init_repo(path: Path) -> None:
    path.mkdir(parents=True, exist_ok=True)
    subprocess.run(["git", "init", "-q", str(path)], check=True, capture_output=True)
    _git(path, "config", "user.name", "Fixture")
    _git(path, "config", "user.email", "fixture@example.org")


def add_commit(
    path: Path,
    message: str,
    name="Fixture",
    email="fixture@example.org",
    epoch=1_600_000_000,
) -> str:
    """Create an empty commit with pinned author/committer metadata; returns its hash."""
    import os

    env = dict(os.environ)
    env.update({
        "GIT_AUTHOR_NAME": name,
        "GIT_AUTHOR_EMAIL": email,
        "GIT_AUTHOR_DATE": f"{epoch} +0000",
        "GIT_COMMITTER_NAME": name,
        "GIT_COMMITTER_EMAIL": email,
        "GIT_COMMITTER_DATE": f"{epoch} +0000",
    })
    subprocess.run(
        ["git", "-C", str(path), "commit", "-q", "--allow-empty", "-m", message],
        check=True, capture_output=True, env=env,
    )
    return _git(path, "rev-parse", "HEAD")


@pytest.fixture
def repo_factory(tmp_path):
    """Create fixture repos: factory(messages) -> (path, [hashes oldest-first])."""
    counter = {"n": 0}

    def factory(messages: list[str], with_merge=False):
        counter["n"] += 1
        path = tmp_path / f"repo{counter['n']}"
        init_repo(path)
        hashes = []
        for i, message in enumerate(messages):
            hashes.append(add_commit(path, message, epoch=1_600_000_000 + i * DAY))
        if with_merge:
            # Side-branch commit reachable only through the merge's second
            # parent; must not appear in first-parent traversal.
            _git(path, "checkout", "-q", "-b", "side")
            add_commit(path, "side branch work", epoch=1_600_000_000 + 50 * DAY)
            _git(path, "checkout", "-q", "-")
            import os

            env = dict(os.environ)
            env.update({
                "GIT_AUTHOR_DATE": f"{1_600_000_000 + 51 * DAY} +0000",
                "GIT_COMMITTER_DATE": f"{1_600_000_000 + 51 * DAY} +0000",
            })
            subprocess.run(
                ["git", "-C", str(path), "merge", "-q", "--no-ff", "-m", "merge side", "side"],
                check=True, capture_output=True, env=env,
            )
            hashes.append(_git(path, "rev-parse", "HEAD"))
        return path, hashes

    return factory


def first_parent_count(path: Path) -> int:
    """Independent oracle: first-parent commit count of HEAD."""
    return int(_git(path, "rev-list", "--count", "--first-parent", "HEAD"))


# --- hypothesis strategies ----------------------------------------------------

# Fields that must survive the tab-separated export format: no control chars.
field_text = st.text(
    alphabet=st.characters(blacklist_categories=("Cs", "Cc"), max_codepoint=0x2FFF),
    max_size=24,
)
nonempty_field = field_text.filter(lambda s: bool(s))

# Messages may contain newlines and anything except NUL (git forbids NUL)
# and surrogates (not encodable).
message_text = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",), blacklist_characters="\x00"),
    max_size=120,
)

hash_text = st.text(alphabet=HEX, min_size=7, max_size=40)

timestamps = st.integers(min_value=0, max_value=4_102_444_800)

labels = st.sampled_from(list(ActivityLabel))


@st.composite
def raw_commits(draw, project=None):
    name = draw(field_text)
    email = draw(field_text) if name else draw(nonempty_field)
    return RawCommit(
        project=project if project is not None else draw(nonempty_field),
        hash=draw(hash_text),
        author_name=name,
        author_email=email,
        timestamp=draw(timestamps),
        message=draw(message_text),
    )


@st.composite
def labeled_commits(draw, project=None):
    return LabeledCommit(draw(raw_commits(project=project)), draw(labels))


@st.composite
def datasets(draw):
    commits = draw(
        st.lists(labeled_commits(), max_size=30, unique_by=lambda c: c.commit.key)
    )
    return Dataset(tuple(commits))
