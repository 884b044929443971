#!/usr/bin/env python3
"""Generate a synthetic multi-project dataset for exploring the UI and API.

The commit stream is seeded and deterministic: a few projects, a handful of
developers (one of them committing under two emails), weekday-weighted
activity over ~30 months, and one deliberate incident spike per project so
peak flags have something to find.

Usage: python scripts/make_demo_dataset.py --out demo.csv [--seed 7]
"""

import argparse
import random

from maintviz.classify import classify_dataset
from maintviz.ingest import save_dataset
from maintviz.model import Dataset, RawCommit

DAY = 86400

MESSAGES = {
    "corrective": [
        "fix crash when parsing empty config",
        "fix race in connection pool",
        "bug in pagination offset, fixes #214",
        "resolve NPE on concurrent logout",
        "fix broken retry after timeout",
        "regression: restore legacy date format",
        "handle error from upstream gateway",
    ],
    "perfective": [
        "refactor request router",
        "cleanup unused settings",
        "simplify cache invalidation",
        "rename ambiguous helper methods",
        "docs for the plugin interface",
        "optimize hot path in serializer",
        "restructure integration tests",
        "fix typo in changelog",
    ],
    "adaptive": [
        "add support for webhooks",
        "implement csv import",
        "introduce rate limiting",
        "new dashboard widgets",
        "create audit log module",
        "enable dark mode",
        "upgrade storage backend to v3",
    ],
    "neutral": [
        "bump version",
        "weekly translation sync",
        "misc chores",
    ],
}

DEVELOPERS = [
    ("Dana Hoffman", "dana@example.org"),
    ("Dana Hoffman", "dana.hoffman@corp.example"),  # same person, second account
    ("Raj Patel", "raj@example.org"),
    ("Mia Chen", "mia@example.org"),
    ("Lee Okafor", "lee@example.org"),
]

PROJECTS = {
    # (activity weights c/p/a/neutral, commits) -- one skewed project on purpose
    "orbit": ((0.30, 0.28, 0.32, 0.10), 900),
    "lantern": ((0.62, 0.10, 0.18, 0.10), 500),
    "quill": ((0.25, 0.40, 0.25, 0.10), 700),
}

START_EPOCH = 1_640_995_200  # 2022-01-01T00:00:00Z
SPAN_DAYS = 900


def synth_commits(rng: random.Random) -> list[RawCommit]:
    commits = []
    serial = 0
    for project, (weights, count) in PROJECTS.items():
        spike_day = rng.randint(200, SPAN_DAYS - 200)
        for _ in range(count):
            if rng.random() < 0.08:
                # incident burst: corrective-heavy cluster around the spike
                day = spike_day + rng.randint(0, 6)
                kind = "corrective" if rng.random() < 0.8 else "perfective"
            else:
                day = rng.randint(0, SPAN_DAYS - 1)
                kind = rng.choices(list(MESSAGES), weights=[*weights], k=1)[0]
            second = rng.randint(8 * 3600, 19 * 3600)
            name, email = rng.choice(DEVELOPERS)
            serial += 1
            commits.append(RawCommit(
                project=project,
                hash=f"{rng.getrandbits(120):030x}{serial:010x}",
                author_name=name,
                author_email=email,
                timestamp=START_EPOCH + day * DAY + second,
                message=rng.choice(MESSAGES[kind]),
            ))
    return commits


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", required=True, help="output dataset CSV")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    result = classify_dataset(synth_commits(rng))
    save_dataset(Dataset(result.commits), args.out)
    parts = ", ".join(f"{label.value} {n}" for label, n in result.summary.items())
    print(f"{sum(result.summary.values())} commits ({parts}) -> {args.out}")


if __name__ == "__main__":
    main()
