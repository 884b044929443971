"""Operator entry point tying the pipeline together: ingest, classify, stats, export, serve."""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from pathlib import Path

from . import analytics
from .classify import DEFAULT_TABLE, classify_dataset, load_keyword_table, load_label_overrides
from .errors import MaintvizError
from .ingest import (
    dataset_csv_text,
    load_dataset,
    read_export_file,
    read_git_history,
    save_dataset,
)
from .model import ActivityLabel, CHART_LABELS, Dataset, iso_utc

EXIT_OK = 0
EXIT_DATA = 1        # I/O, schema, or repository errors
EXIT_USAGE = 2       # bad flags (argparse default)
EXIT_UNBALANCED = 3  # at least one inspected project has an unbalanced profile


def _summary_line(summary: dict[ActivityLabel, int]) -> str:
    total = sum(summary.values())
    parts = ", ".join(f"{label.value} {summary[label]}" for label in ActivityLabel)
    return f"{total} commits ({parts})"


def run_pipeline(repo_path, project: str, out_path, keywords=None, labels=None) -> None:
    """read_git_history -> classify_dataset -> save_dataset."""
    table = load_keyword_table(keywords) if keywords else DEFAULT_TABLE
    overrides = load_label_overrides(labels) if labels else None
    commits = read_git_history(repo_path, project)
    result = classify_dataset(commits, table, overrides)
    for key in result.unknown_overrides:
        print(f"warning: override for unknown commit {key[0]}/{key[1]}", file=sys.stderr)
    save_dataset(Dataset(result.commits), out_path)
    print(f"{project}: {_summary_line(result.summary)} -> {out_path}")


def _run_ingest(args) -> int:
    if args.from_export:
        table = load_keyword_table(args.keywords) if args.keywords else DEFAULT_TABLE
        overrides = load_label_overrides(args.labels) if args.labels else None
        commits = read_export_file(args.from_export)
        result = classify_dataset(commits, table, overrides)
        for key in result.unknown_overrides:
            print(f"warning: override for unknown commit {key[0]}/{key[1]}", file=sys.stderr)
        save_dataset(Dataset(result.commits), args.out)
        print(f"{_summary_line(result.summary)} -> {args.out}")
    else:
        run_pipeline(args.repo, args.project, args.out, args.keywords, args.labels)
    return EXIT_OK


def _run_classify(args) -> int:
    dataset = load_dataset(args.infile)
    table = load_keyword_table(args.keywords) if args.keywords else DEFAULT_TABLE
    overrides = load_label_overrides(args.labels) if args.labels else None
    result = classify_dataset([lc.commit for lc in dataset.commits], table, overrides)
    for key in result.unknown_overrides:
        print(f"warning: override for unknown commit {key[0]}/{key[1]}", file=sys.stderr)
    save_dataset(Dataset(result.commits), args.out)
    print(f"{_summary_line(result.summary)} -> {args.out}")
    return EXIT_OK


def run_stats(dataset_path, project=None, threshold=analytics.DEFAULT_BALANCE_THRESHOLD,
              width_days=analytics.DEFAULT_BUCKET_WIDTH_DAYS) -> int:
    """Print per-project label counts, balance verdicts, and anomaly flags.

    Exit code 0 when every inspected project is balanced, 3 otherwise, so the
    verdict is scriptable as a health check.
    """
    dataset = load_dataset(dataset_path)
    projects = [project] if project else dataset.projects
    if project and project not in dataset.projects:
        raise MaintvizError(f"no such project: {project!r}")
    if not projects:
        print("no projects in dataset")
        return EXIT_OK
    all_balanced = True
    for name in projects:
        counts = Counter(lc.label for lc in dataset.commits if lc.commit.project == name)
        total = sum(counts.values())
        classified = analytics.filter_commits(dataset.commits, name)
        profile = analytics.balance_profile(classified, threshold)
        buckets = analytics.bucketize(classified, width_days)
        anomalies = analytics.detect_anomalies(buckets)
        print(f"project: {name}")
        label_parts = "  ".join(
            f"{label.value}: {counts.get(label, 0)}" for label in ActivityLabel
        )
        print(f"  commits: {total}  {label_parts}")
        fraction = counts.get(ActivityLabel.UNCLASSIFIED, 0) / total if total else 0.0
        print(f"  unclassified_fraction: {fraction:.4f}")
        verdict = "balanced" if profile.balanced else "unbalanced"
        prop_parts = "  ".join(
            f"{label.value}: {profile.proportions[label]:.3f}" for label in CHART_LABELS
        )
        print(f"  balance: {verdict}  {prop_parts}  threshold: {profile.min_share_threshold:.3f}")
        if anomalies:
            flags = "; ".join(
                f"{a.kind.value} {iso_utc(a.bucket_start)} total {a.total}" for a in anomalies
            )
            print(f"  anomalies: {flags}")
        else:
            print("  anomalies: none")
        all_balanced = all_balanced and profile.balanced
    return EXIT_OK if all_balanced else EXIT_UNBALANCED


def _run_export(args) -> int:
    dataset = load_dataset(args.infile)
    commits = dataset.commits
    if args.project:
        if args.project not in dataset.projects:
            raise MaintvizError(f"no such project: {args.project!r}")
        commits = tuple(lc for lc in commits if lc.commit.project == args.project)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(dataset_csv_text(commits))
    print(f"{len(commits)} commits -> {args.out}")
    return EXIT_OK


def _run_serve(args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig.from_env()
    config.dataset_path = Path(args.infile)
    if args.port is not None:
        config.port = args.port
    app = create_app(config=config)
    uvicorn.run(app, host="0.0.0.0", port=config.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maintviz",
        description="Mine git history, classify commits by maintenance activity, "
                    "and explore the resulting profiles.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_ingest = sub.add_parser("ingest", help="extract commits from a repo or export file")
    src = p_ingest.add_mutually_exclusive_group(required=True)
    src.add_argument("--repo", help="path to a git repository")
    src.add_argument("--from-export", dest="from_export", help="path to an export file")
    p_ingest.add_argument("--project", help="project name (required with --repo)")
    p_ingest.add_argument("--out", required=True, help="output dataset CSV")
    p_ingest.add_argument("--keywords", help="keyword table CSV (label,word)")
    p_ingest.add_argument("--labels", help="label overrides CSV (project,hash,label)")

    p_classify = sub.add_parser("classify", help="(re)label a dataset")
    p_classify.add_argument("--in", dest="infile", required=True)
    p_classify.add_argument("--out", required=True)
    p_classify.add_argument("--keywords")
    p_classify.add_argument("--labels")

    p_stats = sub.add_parser("stats", help="per-project profile report")
    p_stats.add_argument("--in", dest="infile", required=True)
    p_stats.add_argument("--project")
    p_stats.add_argument("--threshold", type=float, default=analytics.DEFAULT_BALANCE_THRESHOLD)
    p_stats.add_argument("--bucket-days", dest="bucket_days", type=int,
                         default=analytics.DEFAULT_BUCKET_WIDTH_DAYS)

    p_export = sub.add_parser("export", help="write the dataset CSV, optionally one project")
    p_export.add_argument("--in", dest="infile", required=True)
    p_export.add_argument("--project")
    p_export.add_argument("--out", required=True)

    p_serve = sub.add_parser("serve", help="serve the HTTP API and web UI")
    p_serve.add_argument("--in", dest="infile", required=True)
    p_serve.add_argument("--port", type=int, default=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.subcommand == "ingest" and args.repo and not args.project:
        parser.error("--project is required with --repo")
    if args.subcommand == "stats":
        if not 0 < args.threshold <= analytics.MAX_BALANCE_THRESHOLD:
            parser.error(f"--threshold must be in (0, 1/3], got {args.threshold}")
        if args.bucket_days < 1:
            parser.error(f"--bucket-days must be >= 1, got {args.bucket_days}")
    try:
        if args.subcommand == "ingest":
            return _run_ingest(args)
        if args.subcommand == "classify":
            return _run_classify(args)
        if args.subcommand == "stats":
            return run_stats(args.infile, args.project, args.threshold, args.bucket_days)
        if args.subcommand == "export":
            return _run_export(args)
        if args.subcommand == "serve":
            return _run_serve(args)
    except MaintvizError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    raise AssertionError("unreachable")


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
