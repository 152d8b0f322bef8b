import pytest

from laver_tables.storage import TableCache, decode_table, encode_table, read_table, write_table
from laver_tables.tables import laver
from laver_tables.tables.exceptions import SizeLimitExceeded, TableFormatError
from laver_tables.tables.laver import build_table

A0_BYTES = bytes.fromhex("4C415652 0100 01000000 01000000")


def test_encode_a0(tables):
    assert encode_table(tables[0]) == A0_BYTES


def test_encode_a1(tables):
    # rows (2) and (1, 2), each prefixed by its period
    words = [1, 2, 2, 1, 2]
    expected = b"LAVR\x01\x01" + b"".join(w.to_bytes(4, "little") for w in words)

    assert encode_table(tables[1]) == expected


@pytest.mark.parametrize("n", range(9))
def test_decode(n):
    table = build_table(n)
    decoded = decode_table(encode_table(table))

    assert decoded == table
    assert decoded.thresholds == table.thresholds


@pytest.mark.parametrize(
    "data",
    [
        b"XAVR\x01\x00\x01\x00\x00\x00\x01\x00\x00\x00",
        b"LAVR\x02\x00\x01\x00\x00\x00\x01\x00\x00\x00",
        b"LAVR",
        A0_BYTES[:-1],
        A0_BYTES[:-4],
        A0_BYTES + b"\x01\x00\x00\x00",
        b"LAVR\x01\x01\x01\x00\x00\x00\x02\x00\x00\x00",
    ],
    ids=["magic", "version", "header", "partial-word", "truncated-row", "trailing", "missing-row"],
)
def test_decode_rejects(data):
    with pytest.raises(TableFormatError):
        decode_table(data)


def test_decode_validates_rows():
    # A_1 with row 1 claiming 1 ⊳ 1 = 1
    words = [1, 1, 2, 1, 2]
    data = b"LAVR\x01\x01" + b"".join(w.to_bytes(4, "little") for w in words)

    with pytest.raises(TableFormatError):
        decode_table(data)


def test_write_and_read(tmp_path, a4):
    path = tmp_path / "nested" / "A4.lavr"
    write_table(a4, path)

    assert read_table(path) == a4
    assert [p.name for p in path.parent.iterdir()] == ["A4.lavr"]


def test_cache_miss_and_hit(tmp_path, a3):
    cache = TableCache(tmp_path)

    assert not cache.path(3).exists()
    assert cache.get(3) == a3
    assert cache.path(3).exists()
    assert cache.get(3) == a3


def test_cache_rebuilds_corrupt_file(tmp_path, a2):
    cache = TableCache(tmp_path)
    cache.path(2).write_bytes(b"garbage")

    assert cache.get(2) == a2
    assert read_table(cache.path(2)) == a2


def test_cache_rebuilds_mismatched_file(tmp_path, tables):
    cache = TableCache(tmp_path)
    write_table(tables[1], cache.path(2))

    assert cache.get(2) == tables[2]


def test_cache_size_cap(tmp_path):
    with pytest.raises(SizeLimitExceeded):
        TableCache(tmp_path).get(6, max_n=5)


def test_cache_clear(tmp_path):
    cache = TableCache(tmp_path)
    cache.get(1)
    cache.get(2)

    assert cache.clear() == 2
    assert not list(tmp_path.iterdir())


def test_read_builds_nothing(tmp_path, monkeypatch, a4):
    path = tmp_path / "A4.lavr"
    write_table(a4, path)
    built = []

    def spy(n):
        built.append(n)
        raise AssertionError(n)

    monkeypatch.setattr(laver, "_build", spy)
    monkeypatch.setattr(laver, "_construct_rows", spy)
    table = read_table(path)

    assert not built
    assert table == a4
    assert table.thresholds == a4.thresholds


def test_cache_hit_builds_nothing(tmp_path, monkeypatch, a3):
    cache = TableCache(tmp_path)
    write_table(a3, cache.path(3))
    monkeypatch.setattr(laver, "_build", lambda n: pytest.fail(f"A_{n} rebuilt"))

    assert cache.get(3) == a3
