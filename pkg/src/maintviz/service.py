"""Read-only HTTP+JSON view over an immutable dataset snapshot."""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import HTMLResponse, JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from . import analytics
from .analytics import (
    DEFAULT_ANOMALY_K,
    DEFAULT_BALANCE_THRESHOLD,
    DEFAULT_BUCKET_WIDTH_DAYS,
    DEFAULT_DETAILS_LIMIT,
    SECONDS_PER_DAY,
    DeveloperIdentity,
    MatchMode,
    TimeRange,
)
from .errors import InvalidThreshold, UnknownProject
from .ingest import dataset_csv_text, load_dataset
from .model import ActivityLabel, CHART_LABELS, Dataset, iso_utc

DEFAULT_PORT = 8080

_STATUS_BY_CODE = {
    "unknown_project": 404,
    "bad_parameter": 400,
    "internal": 500,
}


class ApiError(Exception):
    """Wire-level error; code determines the HTTP status."""

    def __init__(self, code: str, message: str):
        assert code in _STATUS_BY_CODE
        super().__init__(message)
        self.code = code
        self.message = message

    @property
    def status(self) -> int:
        return _STATUS_BY_CODE[self.code]


@dataclass
class ServiceConfig:
    dataset_path: Path | None = None
    port: int = DEFAULT_PORT
    threshold: float = DEFAULT_BALANCE_THRESHOLD
    anomaly_k: float = DEFAULT_ANOMALY_K
    static_dir: Path | None = None

    @classmethod
    def from_env(cls, env=os.environ) -> "ServiceConfig":
        dataset = env.get("MAINTVIZ_DATASET")
        static = env.get("MAINTVIZ_STATIC")
        return cls(
            dataset_path=Path(dataset) if dataset else None,
            port=int(env.get("MAINTVIZ_PORT", DEFAULT_PORT)),
            threshold=float(env.get("MAINTVIZ_THRESHOLD", DEFAULT_BALANCE_THRESHOLD)),
            anomaly_k=float(env.get("MAINTVIZ_ANOMALY_K", DEFAULT_ANOMALY_K)),
            static_dir=Path(static) if static else None,
        )


def _bucket_json(bucket: analytics.ActivityBucket) -> dict:
    return {
        "start": iso_utc(bucket.start),
        "width_days": bucket.width_days,
        "corrective": bucket.corrective,
        "perfective": bucket.perfective,
        "adaptive": bucket.adaptive,
    }


def _anomaly_json(flag: analytics.AnomalyFlag) -> dict:
    return {
        "bucket_start": iso_utc(flag.bucket_start),
        "kind": flag.kind.value,
        "total": flag.total,
        "series_mean": flag.series_mean,
        "series_stddev": flag.series_stddev,
    }


def _commit_json(lc) -> dict:
    c = lc.commit
    return {
        "hash": c.hash,
        "message": c.message,
        "author_name": c.author_name,
        "author_email": c.author_email,
        "timestamp": iso_utc(c.timestamp),
        "label": lc.label.value,
    }


def _identity_from_params(
    dev_name: str | None, dev_email: str | None, match_mode: str | None
) -> DeveloperIdentity | None:
    if dev_name is None and dev_email is None and match_mode is None:
        return None
    if match_mode is None:
        # Infer the mode from whichever identifier fields were supplied.
        match_mode = "both" if (dev_name and dev_email) else ("name" if dev_name else "email")
    try:
        mode = MatchMode(match_mode)
    except ValueError:
        raise ApiError("bad_parameter", f"match_mode must be one of name, email, both; got {match_mode!r}")
    try:
        return DeveloperIdentity(name=dev_name, email=dev_email, mode=mode)
    except ValueError as exc:
        raise ApiError("bad_parameter", str(exc))


def _range_from_params(from_: int | None, to: int | None) -> TimeRange | None:
    if from_ is None and to is None:
        return None
    if from_ is None or to is None:
        raise ApiError("bad_parameter", "from and to must be provided together")
    try:
        return TimeRange(from_, to)
    except ValueError as exc:
        raise ApiError("bad_parameter", str(exc))


def create_app(dataset: Dataset | None = None, config: ServiceConfig | None = None) -> FastAPI:
    """Build the API app around one dataset snapshot.

    Every endpoint reads app.state.dataset; POST /api/reload swaps in a
    freshly loaded snapshot atomically (plain attribute assignment), so any
    in-flight request keeps observing exactly one snapshot.
    """
    cfg = config or ServiceConfig.from_env()
    if dataset is None:
        if cfg.dataset_path is None:
            raise ValueError("either a dataset or a dataset_path is required")
        dataset = load_dataset(cfg.dataset_path)

    app = FastAPI(title="maintviz", docs_url=None, redoc_url=None)
    app.state.dataset = dataset
    app.state.config = cfg

    @app.exception_handler(ApiError)
    async def api_error_handler(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content={"code": exc.code, "message": exc.message})

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"code": "bad_parameter", "message": str(exc.errors())},
        )

    def snapshot() -> Dataset:
        return app.state.dataset

    def scoped_commits(project, time_range=None, identity=None, include_unclassified=False):
        try:
            return analytics.filter_commits(
                snapshot().commits, project, time_range, identity, include_unclassified
            )
        except UnknownProject as exc:
            raise ApiError("unknown_project", str(exc))

    @app.get("/api/projects")
    def get_projects():
        per_project: dict[str, list[int]] = {}
        for lc in snapshot().commits:
            per_project.setdefault(lc.commit.project, []).append(lc.commit.timestamp)
        return [
            {
                "name": name,
                "commit_count": len(stamps),
                "first_commit": iso_utc(min(stamps)),
                "last_commit": iso_utc(max(stamps)),
            }
            for name, stamps in sorted(per_project.items())
        ]

    @app.get("/api/activity")
    def get_activity(
        project: str,
        width_days: int = Query(DEFAULT_BUCKET_WIDTH_DAYS),
        from_: int | None = Query(None, alias="from"),
        to: int | None = Query(None),
        dev_name: str | None = Query(None),
        dev_email: str | None = Query(None),
        match_mode: str | None = Query(None),
    ):
        time_range = _range_from_params(from_, to)
        identity = _identity_from_params(dev_name, dev_email, match_mode)
        commits = scoped_commits(project, time_range, identity)
        try:
            buckets = analytics.bucketize(commits, width_days, time_range)
        except ValueError as exc:
            raise ApiError("bad_parameter", str(exc))
        anomalies = analytics.detect_anomalies(buckets, app.state.config.anomaly_k)
        return {
            "buckets": [_bucket_json(b) for b in buckets],
            "anomalies": [_anomaly_json(a) for a in anomalies],
        }

    @app.get("/api/commits")
    def get_commits(
        project: str,
        activity: str,
        bucket_start: int,
        width_days: int = Query(DEFAULT_BUCKET_WIDTH_DAYS),
        q: str | None = Query(None),
        limit: int = Query(DEFAULT_DETAILS_LIMIT),
        offset: int = Query(0),
        dev_name: str | None = Query(None),
        dev_email: str | None = Query(None),
        match_mode: str | None = Query(None),
    ):
        label = next((l for l in CHART_LABELS if l.value == activity), None)
        if label is None:
            raise ApiError("bad_parameter", f"activity must be one of "
                           f"{', '.join(l.value for l in CHART_LABELS)}; got {activity!r}")
        if width_days < 1:
            raise ApiError("bad_parameter", f"width_days must be >= 1, got {width_days}")
        identity = _identity_from_params(dev_name, dev_email, match_mode)
        commits = scoped_commits(project, None, identity)
        bucket = TimeRange(bucket_start, bucket_start + width_days * SECONDS_PER_DAY)
        try:
            page = analytics.search_commits(commits, label, bucket, q, limit, offset)
        except ValueError as exc:
            raise ApiError("bad_parameter", str(exc))
        return {
            "items": [_commit_json(lc) for lc in page.items],
            "total_matches": page.total_matches,
        }

    @app.get("/api/developers")
    def get_developers(project: str):
        commits = scoped_commits(project, include_unclassified=True)
        counts = Counter((lc.commit.author_name, lc.commit.author_email) for lc in commits)
        ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0][0], kv[0][1]))
        return [
            {"name": name, "email": email, "commit_count": count}
            for (name, email), count in ordered
        ]

    @app.get("/api/profile")
    def get_profile(
        project: str,
        threshold: float | None = Query(None),
        from_: int | None = Query(None, alias="from"),
        to: int | None = Query(None),
        dev_name: str | None = Query(None),
        dev_email: str | None = Query(None),
        match_mode: str | None = Query(None),
    ):
        time_range = _range_from_params(from_, to)
        identity = _identity_from_params(dev_name, dev_email, match_mode)
        commits = scoped_commits(project, time_range, identity)
        effective = threshold if threshold is not None else app.state.config.threshold
        try:
            profile = analytics.balance_profile(commits, effective)
        except InvalidThreshold as exc:
            raise ApiError("bad_parameter", str(exc))
        return {
            "total": profile.total,
            "proportions": {label.value: profile.proportions[label] for label in CHART_LABELS},
            "min_share_threshold": profile.min_share_threshold,
            "balanced": profile.balanced,
        }

    @app.get("/api/export")
    def get_export(project: str | None = Query(None)):
        current = snapshot()  # read once; a concurrent reload must not mix snapshots
        commits = current.commits
        if project is not None:
            if project not in current.projects:
                raise ApiError("unknown_project", f"no such project: {project!r}")
            commits = tuple(lc for lc in commits if lc.commit.project == project)
        return Response(content=dataset_csv_text(commits), media_type="text/csv")

    @app.post("/api/reload")
    def reload_dataset():
        path = app.state.config.dataset_path
        if path is None:
            raise ApiError("bad_parameter", "service was started without a dataset path")
        fresh = load_dataset(path)
        app.state.dataset = fresh
        return {"reloaded": True, "commits": len(fresh), "projects": len(fresh.projects)}

    static_dir = cfg.static_dir or Path("frontend/dist")
    if static_dir.is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse)
        def index():
            return (
                "<html><body><h1>maintviz</h1>"
                "<p>Web UI assets not found. The JSON API lives under /api/.</p>"
                "</body></html>"
            )

    return app
