import json
import os
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dpcurves.errors import (
    CacheFormatError,
    CacheVersionError,
    InternalConsistencyError,
    SurfaceMismatchError,
    ValidationError,
)
from dpcurves.genus1 import n1j
from dpcurves.gw0 import MemoTable, n0
from dpcurves.lattice import SurfaceKind, enumerate_classes, make_surface
from dpcurves.store import (
    cache_file,
    dumps_cache,
    export_table,
    load_cache,
    loads_cache,
    save_cache,
    table_text,
)

DATA = Path(__file__).parent / "data"
P2 = make_surface(SurfaceKind.P2_BLOWUP, 0)
BL2 = make_surface(SurfaceKind.P2_BLOWUP, 2)
Q = make_surface(SurfaceKind.QUADRIC)


def filled(surface, max_c1):
    memo = MemoTable()
    for beta in enumerate_classes(surface, max_c1):
        n0(surface, beta, memo)
    return memo


def test_round_trip(tmp_path):
    memo = filled(P2, 24)
    path = cache_file(tmp_path, P2)
    assert path.name == "p2x0.gwcache"
    save_cache(memo, P2, path)
    again = load_cache(path, P2)
    assert again == memo
    assert again.entries("p2x0")[(8,)] == 13525751027392


def test_exact_bytes():
    memo = MemoTable()
    for d, v in [(3, 12), (1, 1), (10, 7), (2, 1)]:
        memo.put("p2x0", (d,), v)
    # ';' (0x3b) sorts after '0' (0x30), so "10;" precedes "1;"
    assert dumps_cache(memo, P2) == b"GWCACHE 1 p2x0\n10;=7\n1;=1\n2;=1\n3;=12\n"


def test_records_sorted_by_bytes():
    memo = filled(BL2, 12)
    body = dumps_cache(memo, BL2).split(b"\n")[1:-1]
    keys = [line.split(b"=")[0] for line in body]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)


table_entries = st.dictionaries(st.integers(1, 60), st.integers(0, 10**40), max_size=25)


@settings(max_examples=60, deadline=None)
@given(table_entries, st.randoms())
def test_byte_determinism(entries, rnd):
    items = list(entries.items())
    a, b = MemoTable(), MemoTable()
    for d, v in items:
        a.put("p2x0", (d,), v)
    rnd.shuffle(items)
    for d, v in items:
        b.put("p2x0", (d,), v)
    assert dumps_cache(a, P2) == dumps_cache(b, P2)
    assert loads_cache(dumps_cache(a, P2), P2) == a


def test_empty_memo(tmp_path):
    path = tmp_path / "q.gwcache"
    save_cache(MemoTable(), Q, path)
    assert path.read_bytes() == b"GWCACHE 1 quadric\n"
    assert len(load_cache(path, Q)) == 0


@pytest.mark.parametrize("text,exc,line", [
    ("GWCACHE 2 p2x0\n", CacheVersionError, 1),
    ("GWCACHE 1 p2x0\n3;=-12\n", CacheFormatError, 2),
    ("GWCACHE 1 p2x0\n3;=12\n2;=1\n", CacheFormatError, 3),
    ("GWCACHE 1 p2x0\n2;=1\n2;=1\n", CacheFormatError, 3),
    ("GWCACHE 1 p2x0\n2;=x\n", CacheFormatError, 2),
    ("GWCACHE 1 p2x0\n2;1=1\n", CacheFormatError, 2),
    ("GWCACHE 1 p2x0\n2;1", CacheFormatError, None),
    ("GWCACHE1 p2x0\n", CacheFormatError, 1),
    ("", CacheFormatError, None),
])
def test_malformed_caches(text, exc, line):
    with pytest.raises(exc) as info:
        loads_cache(text, P2)
    if line is not None:
        assert str(info.value).startswith(f"line {line}:")


def test_version_error_names_version():
    with pytest.raises(CacheVersionError, match="version 2"):
        loads_cache("GWCACHE 2 p2x0\n", P2)


def test_surface_mismatch():
    with pytest.raises(SurfaceMismatchError):
        loads_cache("GWCACHE 1 p2x1\n", P2)
    memo = filled(BL2, 6)
    with pytest.raises(SurfaceMismatchError):
        save_cache(memo, Q, "/nonexistent/never-written")


def test_non_normal_record_rejected():
    with pytest.raises(CacheFormatError, match="normal form"):
        loads_cache("GWCACHE 1 p2x2\n1;0,1=1\n", BL2)
    raw = loads_cache("GWCACHE 1 p2x2\n1;0,1=1\n", BL2, MemoTable(normalized=False))
    assert raw.entries("p2x2") == {(1, 0, 1): 1}


def test_loaded_values_are_checked_against_memo():
    memo = filled(P2, 9)
    with pytest.raises(InternalConsistencyError):
        loads_cache("GWCACHE 1 p2x0\n3;=13\n", P2, memo)


def test_unwritable_location(tmp_path):
    with pytest.raises(OSError):
        save_cache(MemoTable(), P2, tmp_path / "missing" / "p2x0.gwcache")
    assert not (tmp_path / "missing").exists()


@pytest.mark.skipif(os.geteuid() == 0, reason="root ignores directory permissions")
def test_readonly_directory(tmp_path):
    tmp_path.chmod(0o500)
    try:
        with pytest.raises(OSError):
            save_cache(MemoTable(), P2, tmp_path / "p2x0.gwcache")
    finally:
        tmp_path.chmod(0o700)


def p2_reports(top=5):
    memo = MemoTable()
    return [n1j(P2, (d,), "generic", memo)[1] for d in range(1, top + 1)]


def test_csv_golden(tmp_path):
    golden = (DATA / "p2_genus1_d1-5.csv").read_bytes()
    assert table_text(p2_reports(), "csv").encode() == golden
    out = tmp_path / "t.csv"
    export_table(p2_reports(), "csv", out)
    assert out.read_bytes() == golden


def test_json_export(tmp_path):
    out = tmp_path / "t.json"
    export_table(p2_reports(3), "json", out)
    rows = json.loads(out.read_text())
    assert rows[2] == {"class": "3;", "delta": 8, "genus": 1, "n0": 12, "CR": 84,
                       "RT1": 108, "aut": 2, "n1j": 12}


def test_empty_tables():
    assert table_text([], "csv") == "class,delta,genus,n0,CR,RT1,aut,n1j\n"
    assert json.loads(table_text([], "json")) == []
    with pytest.raises(ValidationError):
        table_text([], "xml")
