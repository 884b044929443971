import pytest
from hypothesis import given

from maintviz.model import (
    ActivityLabel,
    Dataset,
    LabeledCommit,
    LabelSource,
    RawCommit,
    iso_utc,
    parse_iso_utc,
)

from conftest import lc, timestamps


class TestRawCommit:
    def test_hash_normalized_to_lowercase(self):
        c = RawCommit("p", "ABC1234DEF", "a", "", 0, "m")
        assert c.hash == "abc1234def"

    @pytest.mark.parametrize("bad_hash", ["", "abc123", "g" * 7, "abc 123", "x" * 65])
    def test_invalid_hash_rejected(self, bad_hash):
        with pytest.raises(ValueError):
            RawCommit("p", bad_hash, "a", "", 0, "m")

    def test_hash_length_bounds(self):
        assert RawCommit("p", "a" * 7, "x", "", 0, "").hash == "a" * 7
        assert RawCommit("p", "a" * 64, "x", "", 0, "").hash == "a" * 64

    def test_jointly_empty_authors_rejected(self):
        with pytest.raises(ValueError):
            RawCommit("p", "abc1234", "", "", 0, "m")

    def test_single_author_field_suffices(self):
        RawCommit("p", "abc1234", "Alice", "", 0, "m")
        RawCommit("p", "abc1234", "", "a@x.org", 0, "m")

    def test_negative_timestamp_rejected(self):
        with pytest.raises(ValueError):
            RawCommit("p", "abc1234", "a", "", -1, "m")

    def test_empty_project_rejected(self):
        with pytest.raises(ValueError):
            RawCommit("", "abc1234", "a", "", 0, "m")


class TestDataset:
    def test_sorted_by_project_timestamp_hash(self):
        commits = [
            lc(project="b", hash="1111111", ts=5),
            lc(project="a", hash="2222222", ts=9),
            lc(project="a", hash="1111111", ts=3),
            lc(project="a", hash="0111111", ts=3),
        ]
        ds = Dataset(tuple(commits))
        keys = [(c.commit.project, c.commit.timestamp, c.commit.hash) for c in ds.commits]
        assert keys == sorted(keys)

    def test_duplicate_project_hash_rejected(self):
        commits = (lc(hash="1111111", ts=1), lc(hash="1111111", ts=2))
        with pytest.raises(ValueError, match="duplicate"):
            Dataset(commits)

    def test_same_hash_in_different_projects_is_fine(self):
        Dataset((lc(project="a", hash="1111111"), lc(project="b", hash="1111111")))

    def test_projects_derived_sorted(self):
        ds = Dataset((lc(project="zed", hash="1111111"), lc(project="ant", hash="2222222")))
        assert ds.projects == ["ant", "zed"]

    def test_created_at_not_part_of_equality(self):
        a = Dataset((lc(),), created_at=1)
        b = Dataset((lc(),), created_at=2)
        assert a == b

    def test_label_source_not_part_of_equality(self):
        a = LabeledCommit(lc().commit, ActivityLabel.ADAPTIVE, LabelSource.KEYWORD)
        b = LabeledCommit(lc().commit, ActivityLabel.ADAPTIVE, LabelSource.EXTERNAL)
        assert a == b


class TestIsoUtc:
    def test_known_value(self):
        assert iso_utc(0) == "1970-01-01T00:00:00Z"
        assert iso_utc(1500000000) == "2017-07-14T02:40:00Z"

    @given(timestamps)
    def test_round_trip(self, ts):
        assert parse_iso_utc(iso_utc(ts)) == ts

    def test_rejects_other_formats(self):
        with pytest.raises(ValueError):
            parse_iso_utc("2017-07-14 02:40:00")
        with pytest.raises(ValueError):
            parse_iso_utc("2017-07-14T02:40:00+00:00")
