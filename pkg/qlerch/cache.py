"""Line-oriented coefficient cache files.

Layout: a magic line, ``key: value`` header lines, a ``---`` separator and one
decimal coefficient per line. Readers refuse files whose version, ring or
label differ from what the caller expects.
"""

from __future__ import annotations

import logging
import os
import tempfile
from fractions import Fraction
from pathlib import Path

from qlerch.appell import CoeffTable
from qlerch.ring_series import Coefficient, Ring, parse_ring

logger = logging.getLogger(__name__)

MAGIC = "# qlerch-coefficients"
FORMAT_VERSION = 1
SEPARATOR = "---"


class CacheFormatError(ValueError):
    pass


def _parse_value(text: str, ring: Ring) -> Coefficient:
    try:
        value = Fraction(text) if "/" in text else int(text)
    except ValueError as exc:
        raise CacheFormatError(f"cache_value_invalid:{text}") from exc
    return ring.element(value)


def write_table(path: Path, table: CoeffTable) -> None:
    lines = [
        MAGIC,
        f"format-version: {FORMAT_VERSION}",
        f"label: {table.label}",
        f"ring: {table.ring.descriptor}",
        f"count: {table.count}",
        SEPARATOR,
    ]
    lines.extend(str(value) for value in table.values)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, temp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write("\n".join(lines) + "\n")
        os.replace(temp_name, path)
    except BaseException:
        Path(temp_name).unlink(missing_ok=True)
        raise
    logger.info("cache_written:%s:%s", path, table.count)


def read_table(path: Path, label: str | None = None, ring: Ring | None = None) -> CoeffTable:
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != MAGIC:
        raise CacheFormatError("cache_magic_missing")
    try:
        split = lines.index(SEPARATOR)
    except ValueError as exc:
        raise CacheFormatError("cache_separator_missing") from exc
    header: dict[str, str] = {}
    for line in lines[1:split]:
        key, sep, value = line.partition(":")
        if not sep:
            raise CacheFormatError(f"cache_header_invalid:{line}")
        header[key.strip()] = value.strip()
    for key in ("format-version", "label", "ring", "count"):
        if key not in header:
            raise CacheFormatError(f"cache_header_missing:{key}")
    if header["format-version"] != str(FORMAT_VERSION):
        raise CacheFormatError(f"cache_version_mismatch:{header['format-version']}")
    try:
        stored_ring = parse_ring(header["ring"])
        count = int(header["count"])
    except ValueError as exc:
        raise CacheFormatError("cache_header_invalid") from exc
    if ring is not None and stored_ring != ring:
        raise CacheFormatError(f"cache_ring_mismatch:{stored_ring.descriptor}")
    if label is not None and header["label"] != label:
        raise CacheFormatError(f"cache_label_mismatch:{header['label']}")
    body = lines[split + 1 :]
    if len(body) != count:
        raise CacheFormatError("cache_count_mismatch")
    values = [_parse_value(text.strip(), stored_ring) for text in body]
    return CoeffTable(label=header["label"], ring=stored_ring, values=values)
