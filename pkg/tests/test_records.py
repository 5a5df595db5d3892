import pytest

from curvehunt import records as rec


def test_shipped_snapshots_load_and_roundtrip():
    for snap in ("pre", "post"):
        t = rec.load(snap)
        assert len(t) > 100
        again = rec.loads(t.dumps(), snap)
        assert [e.line() for e in again] == [e.line() for e in t]


def test_post_never_worse_than_pre():
    pre, post = rec.load("pre"), rec.load("post")
    looser = []
    for e in post:
        old = pre.lookup(e.q, e.g)
        if old is not None:
            assert e.lower >= old.lower
            if old.upper is not None and e.upper is not None and e.upper > old.upper:
                looser.append((old, e))
    # the only looser upper bound is an interval quoted in the text ([24-25]
    # for q=3, g=14) where the final table prints [24-26]
    assert [(o.q, o.g, o.upper, e.upper, o.flags) for o, e in looser] == \
        [(3, 14, 25, 26, "quoted")]


def test_classification_cases():
    t = rec.loads("2 32 27 29 new\n2 5 9 9 -\n")
    assert rec.classify(t, 2, 32, 26) == rec.BELOW
    assert rec.classify(t, 2, 32, 27) == rec.MATCHES
    assert rec.classify(t, 2, 32, 28) == rec.IMPROVES
    assert rec.classify(t, 2, 32, 30) == rec.EXCEEDS
    assert rec.classify(t, 2, 6, 10) == rec.NEW_ENTRY
    assert t.lookup(2, 32).improved


def test_bad_lines_rejected():
    with pytest.raises(rec.RecordsError):
        rec.loads("2 3 x 4\n")
    with pytest.raises(rec.RecordsError):
        rec.loads("2 3 5 4\n")
    with pytest.raises(rec.RecordsError):
        rec.loads("2 3 4 5\n2 3 4 5\n")


def test_data_directory_override(tmp_path, monkeypatch):
    (tmp_path / "records_post.txt").write_text("# test\n2 1 5 5 -\n")
    monkeypatch.setenv(rec.DATA_ENV, str(tmp_path))
    monkeypatch.setattr(rec, "_CACHE", {})
    assert len(rec.load("post")) == 1
    with pytest.raises(rec.RecordsError):
        rec.load("pre")
