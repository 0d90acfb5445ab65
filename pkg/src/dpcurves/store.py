"""Cache files and result tables.

Cache format (one file per surface, LF line endings)::

    GWCACHE 1 <surface-id>
    <class-string>=<decimal count>
    ...

Records are sorted by the UTF-8 bytes of the class string.
"""

import csv
import io
import json
import os
import tempfile
from pathlib import Path

from .errors import CacheFormatError, CacheVersionError, SurfaceMismatchError, ValidationError
from .genus1 import COLUMNS
from .gw0 import MemoTable
from .lattice import format_class, parse_class, weyl_normalize

MAGIC = "GWCACHE"
VERSION = 1


def _atomic_write(path, data):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def dumps_cache(memo, surface):
    records = sorted(((format_class(surface, key), value)
                      for key, value in memo.entries(surface.id).items()),
                     key=lambda r: r[0].encode("utf-8"))
    lines = [f"{MAGIC} {VERSION} {surface.id}\n"]
    lines += [f"{cls}={value}\n" for cls, value in records]
    return "".join(lines).encode("utf-8")


def save_cache(memo, surface, path):
    """Write the entries of ``memo`` that belong to ``surface``."""
    foreign = [sid for sid in memo.surface_ids() if sid != surface.id]
    if foreign and not memo.entries(surface.id):
        raise SurfaceMismatchError(
            f"memo holds entries for {', '.join(foreign)} but none for {surface.id}")
    _atomic_write(path, dumps_cache(memo, surface))


def loads_cache(data, surface, memo=None):
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    memo = memo if memo is not None else MemoTable()
    lines = data.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    else:
        raise CacheFormatError("missing final newline", len(lines))
    if not lines:
        raise CacheFormatError("empty cache file", 1)
    head = lines[0].split(" ")
    if len(head) != 3 or head[0] != MAGIC:
        raise CacheFormatError(f"bad header {lines[0]!r}", 1)
    try:
        version = int(head[1])
    except ValueError:
        raise CacheFormatError(f"bad version field {head[1]!r}", 1) from None
    if version != VERSION:
        raise CacheVersionError(f"cache format version {version} is not supported (expected {VERSION})", 1)
    if head[2] != surface.id:
        raise SurfaceMismatchError(f"cache is for surface {head[2]!r}, not {surface.id!r}")
    prev = None
    for lineno, line in enumerate(lines[1:], start=2):
        cls_text, sep, value_text = line.partition("=")
        if not sep or line != line.strip() or "\r" in line:
            raise CacheFormatError(f"malformed record {line!r}", lineno)
        try:
            beta = parse_class(surface, cls_text)
        except ValidationError as exc:
            raise CacheFormatError(str(exc), lineno) from None
        if not value_text.lstrip("-").isdigit() or not value_text.isascii():
            raise CacheFormatError(f"value {value_text!r} is not a decimal integer", lineno)
        value = int(value_text)
        if value < 0:
            raise CacheFormatError(f"negative count {value} (counts are >= 0)", lineno)
        key = cls_text.encode("utf-8")
        if prev is not None and key <= prev:
            raise CacheFormatError("records are not strictly sorted (duplicate or out of order)", lineno)
        prev = key
        if memo.normalized and weyl_normalize(surface, beta) != beta:
            raise CacheFormatError(f"class {cls_text} is not in Weyl normal form", lineno)
        memo.put(surface.id, beta.coords, value)
    return memo


def load_cache(path, surface, memo=None):
    with open(path, "rb") as fh:
        return loads_cache(fh.read(), surface, memo)


def cache_file(directory, surface):
    return Path(directory) / f"{surface.id}.gwcache"


def table_text(reports, fmt):
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for r in reports:
            writer.writerow(r.row())
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([r.as_dict() for r in reports], indent=2) + "\n"
    raise ValidationError(f"unknown table format {fmt!r}; use csv or json")


def export_table(reports, fmt, path):
    data = table_text(list(reports), fmt).encode("utf-8")
    _atomic_write(path, data)
