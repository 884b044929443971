import pytest
from fastapi.testclient import TestClient

from maintviz import analytics
from maintviz.analytics import DeveloperIdentity, MatchMode, TimeRange
from maintviz.ingest import dataset_csv_text, load_dataset, save_dataset
from maintviz.model import ActivityLabel, Dataset, parse_iso_utc
from maintviz.service import ServiceConfig, create_app

from conftest import DAY, lc

C = ActivityLabel.CORRECTIVE
P = ActivityLabel.PERFECTIVE
A = ActivityLabel.ADAPTIVE
U = ActivityLabel.UNCLASSIFIED

BASE = 1_600_000_000 - (1_600_000_000 % DAY)  # midnight-aligned for readable buckets


def _web_commits():
    spec = [
        # (hash, name, email, day offset, label, message)
        ("0000001", "Alice", "alice@x.org", 0, C, "fix crash in router"),
        ("0000002", "Alice", "alice@x.org", 1, P, "refactor handlers"),
        ("0000003", "Bob", "bob@x.org", 2, A, "add websocket support"),
        ("0000004", "Alice", "alice@corp.com", 30, C, "fix NPE on logout"),
        ("0000005", "Bob", "bob@x.org", 31, P, "cleanup templates"),
        ("0000006", "Alice", "alice@x.org", 32, A, "implement teams page"),
        ("0000007", "Bob", "bob@x.org", 60, C, "fix session bug"),
        ("0000008", "Alice", "alice@x.org", 61, U, "weekly housekeeping"),
        ("0000009", "Bob", "bob@x.org", 62, A, "introduce api tokens"),
    ]
    return [
        lc(project="web", hash=h, name=n, email=e, ts=BASE + d * DAY, msg=m, label=label)
        for h, n, e, d, label, m in spec
    ]


def _lib_commits():
    return [
        lc(project="lib", hash=f"100000{i}", name="Carol", email="carol@x.org",
           ts=BASE + i * DAY, msg=f"fix bug {i}", label=C)
        for i in range(4)
    ]


@pytest.fixture
def snapshot():
    return Dataset(tuple(_web_commits() + _lib_commits()))


@pytest.fixture
def client(snapshot):
    app = create_app(dataset=snapshot, config=ServiceConfig())
    return TestClient(app)


class TestProjects:
    def test_sorted_with_counts_and_extent(self, client, snapshot):
        body = client.get("/api/projects").json()
        assert [p["name"] for p in body] == ["lib", "web"]
        web = body[1]
        assert web["commit_count"] == 9  # unclassified included
        assert parse_iso_utc(web["first_commit"]) == BASE
        assert parse_iso_utc(web["last_commit"]) == BASE + 62 * DAY

    def test_empty_dataset(self):
        app = create_app(dataset=Dataset(()), config=ServiceConfig())
        assert TestClient(app).get("/api/projects").json() == []


class TestActivity:
    def test_default_width_is_28_days(self, client):
        body = client.get("/api/activity", params={"project": "web"}).json()
        assert all(b["width_days"] == 28 for b in body["buckets"])

    def test_matches_engine_composition(self, client, snapshot):
        body = client.get("/api/activity", params={"project": "web", "width_days": 10}).json()
        commits = analytics.filter_commits(snapshot.commits, "web")
        expected = analytics.bucketize(commits, 10)
        got = [
            analytics.ActivityBucket(
                start=parse_iso_utc(b["start"]),
                width_days=b["width_days"],
                corrective=b["corrective"],
                perfective=b["perfective"],
                adaptive=b["adaptive"],
            )
            for b in body["buckets"]
        ]
        assert got == expected

    def test_range_and_identity_params(self, client, snapshot):
        params = {
            "project": "web",
            "width_days": 7,
            "from": BASE,
            "to": BASE + 40 * DAY,
            "dev_name": "Alice",
            "match_mode": "name",
        }
        body = client.get("/api/activity", params=params).json()
        identity = DeveloperIdentity(name="Alice", mode=MatchMode.NAME)
        commits = analytics.filter_commits(
            snapshot.commits, "web", TimeRange(BASE, BASE + 40 * DAY), identity
        )
        expected = analytics.bucketize(commits, 7, TimeRange(BASE, BASE + 40 * DAY))
        assert sum(b["corrective"] for b in body["buckets"]) == sum(b.corrective for b in expected)
        assert len(body["buckets"]) == len(expected)

    def test_unknown_project_404(self, client):
        resp = client.get("/api/activity", params={"project": "ghost"})
        assert resp.status_code == 404
        assert resp.json()["code"] == "unknown_project"

    def test_from_equal_to_is_bad_parameter(self, client):
        resp = client.get(
            "/api/activity", params={"project": "web", "from": 100, "to": 100}
        )
        assert resp.status_code == 400
        assert resp.json()["code"] == "bad_parameter"

    def test_from_without_to_is_bad_parameter(self, client):
        resp = client.get("/api/activity", params={"project": "web", "from": 100})
        assert resp.status_code == 400

    def test_zero_width_is_bad_parameter(self, client):
        resp = client.get("/api/activity", params={"project": "web", "width_days": 0})
        assert resp.status_code == 400

    def test_bad_match_mode(self, client):
        resp = client.get(
            "/api/activity",
            params={"project": "web", "dev_name": "Alice", "match_mode": "fuzzy"},
        )
        assert resp.status_code == 400

    def test_inconsistent_identity_mode(self, client):
        resp = client.get(
            "/api/activity",
            params={"project": "web", "dev_email": "a@x.org", "match_mode": "name"},
        )
        assert resp.status_code == 400

    def test_non_integer_width_is_bad_parameter(self, client):
        resp = client.get("/api/activity", params={"project": "web", "width_days": "wide"})
        assert resp.status_code == 400
        assert resp.json()["code"] == "bad_parameter"

    def test_anomalies_match_engine(self, client, snapshot):
        body = client.get("/api/activity", params={"project": "web", "width_days": 5}).json()
        commits = analytics.filter_commits(snapshot.commits, "web")
        buckets = analytics.bucketize(commits, 5)
        expected = analytics.detect_anomalies(buckets, ServiceConfig().anomaly_k)
        got = [
            analytics.AnomalyFlag(
                bucket_start=parse_iso_utc(a["bucket_start"]),
                kind=analytics.AnomalyKind(a["kind"]),
                total=a["total"],
                series_mean=a["series_mean"],
                series_stddev=a["series_stddev"],
            )
            for a in body["anomalies"]
        ]
        assert got == expected


class TestCommits:
    def test_default_limit_is_10(self, client, snapshot):
        # lib has 4 corrective commits in one bucket; add query-free page
        resp = client.get("/api/commits", params={
            "project": "lib", "activity": "corrective", "bucket_start": BASE,
            "width_days": 28,
        })
        body = resp.json()
        assert body["total_matches"] == 4
        assert len(body["items"]) == 4
        # limit default comes from the shared engine constant
        assert analytics.DEFAULT_DETAILS_LIMIT == 10

    def test_unclassified_is_bad_parameter(self, client):
        resp = client.get("/api/commits", params={
            "project": "web", "activity": "unclassified", "bucket_start": 0,
        })
        assert resp.status_code == 400

    def test_query_filters_messages(self, client):
        resp = client.get("/api/commits", params={
            "project": "web", "activity": "corrective", "bucket_start": BASE,
            "width_days": 90, "q": "npe",
        })
        body = resp.json()
        assert body["total_matches"] == 1
        assert body["items"][0]["hash"] == "0000004"

    def test_matches_brute_force(self, client, snapshot):
        resp = client.get("/api/commits", params={
            "project": "web", "activity": "adaptive", "bucket_start": BASE,
            "width_days": 90,
        })
        body = resp.json()
        rng = TimeRange(BASE, BASE + 90 * DAY)
        expected = [
            lc for lc in snapshot.commits
            if lc.commit.project == "web" and lc.label is A and rng.contains(lc.commit.timestamp)
        ]
        assert body["total_matches"] == len(expected)
        assert [i["hash"] for i in body["items"]] == [c.commit.hash for c in expected]
        item = body["items"][0]
        assert set(item) == {"hash", "message", "author_name", "author_email", "timestamp", "label"}

    def test_pagination(self, client):
        params = {
            "project": "lib", "activity": "corrective", "bucket_start": BASE,
            "width_days": 28, "limit": 3,
        }
        first = client.get("/api/commits", params=params).json()
        second = client.get("/api/commits", params={**params, "offset": 3}).json()
        assert len(first["items"]) == 3 and len(second["items"]) == 1
        assert first["total_matches"] == second["total_matches"] == 4


class TestDevelopers:
    def test_grouped_and_sorted(self, client):
        body = client.get("/api/developers", params={"project": "web"}).json()
        assert body[0] == {"name": "Alice", "email": "alice@x.org", "commit_count": 4}
        assert body[1] == {"name": "Bob", "email": "bob@x.org", "commit_count": 4}
        assert body[2] == {"name": "Alice", "email": "alice@corp.com", "commit_count": 1}

    def test_unknown_project(self, client):
        assert client.get("/api/developers", params={"project": "ghost"}).status_code == 404


class TestProfile:
    def test_balanced_project(self, client, snapshot):
        body = client.get("/api/profile", params={"project": "web"}).json()
        commits = analytics.filter_commits(snapshot.commits, "web")
        expected = analytics.balance_profile(commits, ServiceConfig().threshold)
        assert body["balanced"] is expected.balanced is True
        assert body["total"] == expected.total == 8
        for label in (C, P, A):
            assert body["proportions"][label.value] == expected.proportions[label]

    def test_single_activity_project_unbalanced(self, client):
        body = client.get("/api/profile", params={"project": "lib"}).json()
        assert body["balanced"] is False
        assert body["proportions"]["perfective"] == 0.0

    def test_threshold_out_of_domain(self, client):
        resp = client.get("/api/profile", params={"project": "web", "threshold": 0.4})
        assert resp.status_code == 400

    def test_identity_scoped_profile(self, client, snapshot):
        params = {"project": "web", "dev_email": "bob@x.org", "match_mode": "email"}
        body = client.get("/api/profile", params=params).json()
        identity = DeveloperIdentity(email="bob@x.org", mode=MatchMode.EMAIL)
        commits = analytics.filter_commits(snapshot.commits, "web", identity=identity)
        expected = analytics.balance_profile(commits, ServiceConfig().threshold)
        assert body["total"] == expected.total


class TestExport:
    def test_full_export_round_trips(self, client, snapshot, tmp_path):
        resp = client.get("/api/export")
        assert resp.headers["content-type"].startswith("text/csv")
        path = tmp_path / "exported.csv"
        path.write_bytes(resp.content)
        assert load_dataset(path) == snapshot

    def test_byte_identical_to_save_dataset(self, client, snapshot, tmp_path):
        path = tmp_path / "saved.csv"
        save_dataset(snapshot, path)
        assert client.get("/api/export").content == path.read_bytes()

    def test_project_filter(self, client, snapshot):
        resp = client.get("/api/export", params={"project": "lib"})
        expected = dataset_csv_text(
            tuple(lc for lc in snapshot.commits if lc.commit.project == "lib")
        )
        assert resp.text == expected

    def test_unknown_project(self, client):
        assert client.get("/api/export", params={"project": "ghost"}).status_code == 404


class TestReload:
    def test_swaps_snapshot(self, snapshot, tmp_path):
        path = tmp_path / "ds.csv"
        save_dataset(snapshot, path)
        app = create_app(config=ServiceConfig(dataset_path=path))
        client = TestClient(app)
        assert len(client.get("/api/projects").json()) == 2

        smaller = Dataset(tuple(_lib_commits()))
        save_dataset(smaller, path)
        body = client.post("/api/reload").json()
        assert body["reloaded"] is True and body["projects"] == 1
        assert [p["name"] for p in client.get("/api/projects").json()] == ["lib"]

    def test_reload_without_path(self, client):
        assert client.post("/api/reload").status_code == 400


class TestDeterminism:
    def test_identical_requests_identical_bodies(self, client):
        url, params = "/api/activity", {"project": "web", "width_days": 9}
        first = client.get(url, params=params)
        second = client.get(url, params=params)
        assert first.content == second.content


class TestStaticFallback:
    def test_root_serves_placeholder_without_assets(self, client):
        resp = client.get("/")
        assert resp.status_code == 200
        assert "maintviz" in resp.text


class TestServiceConfig:
    def test_from_env(self):
        env = {
            "MAINTVIZ_DATASET": "/data/ds.csv",
            "MAINTVIZ_PORT": "9001",
            "MAINTVIZ_THRESHOLD": "0.2",
            "MAINTVIZ_ANOMALY_K": "1.5",
        }
        cfg = ServiceConfig.from_env(env)
        assert str(cfg.dataset_path) == "/data/ds.csv"
        assert cfg.port == 9001
        assert cfg.threshold == 0.2
        assert cfg.anomaly_k == 1.5

    def test_defaults(self):
        cfg = ServiceConfig.from_env({})
        assert cfg.dataset_path is None
        assert cfg.port == 8080
        assert cfg.threshold == 0.15
        assert cfg.anomaly_k == 2.0
