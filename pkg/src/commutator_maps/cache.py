"""On-disk cache of character tables.

One record per group, one line per record, tab-separated fields with
integers in decimal.  A record is reused only when its format version and
the digest of the group's multiplication data both match; anything else is
recomputed with a warning.
"""

from __future__ import annotations

import hashlib
import os
import warnings
from pathlib import Path

import numpy as np
from filelock import FileLock

from .character import CharacterTable, _mirror, character_table, register_table, table_for
from .groups import FiniteGroup
from .spectral import delta_epsilon, frobenius_fibers, witten_zeta

FORMAT_VERSION = "cmtable-2"
ENV_VAR = "COMMUTATOR_MAPS_CACHE"


class CacheWarning(UserWarning):
    pass


def group_digest(G: FiniteGroup) -> str:
    return hashlib.sha256(G.digest_material).hexdigest()


def _ints(xs) -> str:
    return ",".join(str(int(x)) for x in xs)


def _parse_ints(field: str) -> list[int]:
    return [int(x) for x in field.split(",")] if field else []


def encode_record(G: FiniteGroup, table: CharacterTable) -> str:
    cd = G.classes
    fields = [
        FORMAT_VERSION,
        G.descriptor,
        group_digest(G),
        str(table.group_order),
        str(table.exponent),
        str(table.prime),
        _ints(cd.reps),
        _ints(table.class_sizes),
        _ints(table.inverse_class),
        _ints(table.degrees),
        _ints(table.mult.reshape(-1)),
    ]
    body = "\t".join(fields)
    return body + "\t" + hashlib.sha256(body.encode()).hexdigest()


def decode_record(line: str, G: FiniteGroup) -> CharacterTable:
    """Parse a record; raise ValueError on any inconsistency."""
    parts = line.rstrip("\n").split("\t")
    if len(parts) != 12:
        raise ValueError(f"expected 12 fields, found {len(parts)}")
    body, check = "\t".join(parts[:-1]), parts[-1]
    if hashlib.sha256(body.encode()).hexdigest() != check:
        raise ValueError("checksum mismatch")
    version, desc, digest, order, e, ell, reps, sizes, inv, degs, mult = parts[:-1]
    if version != FORMAT_VERSION:
        raise ValueError(f"format version {version!r}, expected {FORMAT_VERSION!r}")
    if desc != G.descriptor or digest != group_digest(G):
        raise ValueError("group digest mismatch")
    if tuple(_parse_ints(reps)) != G.classes.reps:
        raise ValueError("class ordering changed")
    k, e = len(G.classes.reps), int(e)
    flat = np.array(_parse_ints(mult), dtype=np.int64)
    if flat.size != k * k * e:
        raise ValueError("multiplicity block has the wrong size")
    m = flat.reshape(k, k, e)
    return CharacterTable(
        descriptor=desc,
        group_order=int(order),
        class_sizes=tuple(_parse_ints(sizes)),
        inverse_class=tuple(_parse_ints(inv)),
        exponent=e,
        prime=int(ell),
        degrees=tuple(_parse_ints(degs)),
        mult=m,
        values=np.stack([_mirror(row, e) for row in m]),
    )


def default_cache_dir() -> Path | None:
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else None


def _record_path(cache_dir: Path, G: FiniteGroup) -> Path:
    safe = "".join(ch if ch.isalnum() else "_" for ch in G.descriptor)
    return cache_dir / f"{safe}.tsv"


def cached_table(G: FiniteGroup, cache_dir: Path | str | None) -> tuple[CharacterTable, str]:
    """Character table plus a status: disabled, hit, miss or recomputed."""
    if cache_dir is None:
        return table_for(G), "disabled"
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = _record_path(cache_dir, G)
    with FileLock(str(path) + ".lock"):
        status = "miss"
        if path.exists():
            try:
                table = decode_record(path.read_text(), G)
                register_table(G, table)
                return table, "hit"
            except (ValueError, IndexError) as exc:
                warnings.warn(f"cache record for {G.descriptor} ignored ({exc}); recomputing",
                              CacheWarning, stacklevel=2)
                status = "recomputed"
        table = character_table(G)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(encode_record(G, table) + "\n")
        tmp.replace(path)
        register_table(G, table)
        return table, status


def tables_equal(a: CharacterTable, b: CharacterTable) -> bool:
    return (a.descriptor == b.descriptor and a.group_order == b.group_order
            and a.class_sizes == b.class_sizes and a.inverse_class == b.inverse_class
            and a.exponent == b.exponent and a.prime == b.prime and a.degrees == b.degrees
            and np.array_equal(a.mult, b.mult))


def cache_roundtrip(G: FiniteGroup, cache_dir: Path | str) -> dict:
    """Write a fresh table, read it back, and compare exact and derived data."""
    fresh = character_table(G)
    path = _record_path(Path(cache_dir), G)
    Path(cache_dir).mkdir(parents=True, exist_ok=True)
    with FileLock(str(path) + ".lock"):
        path.write_text(encode_record(G, fresh) + "\n")
        loaded = decode_record(path.read_text(), G)
    same_values = np.array_equal(fresh.values, loaded.values)
    downstream = (witten_zeta(fresh, 2) == witten_zeta(loaded, 2)
                  and delta_epsilon(fresh) == delta_epsilon(loaded)
                  and frobenius_fibers(fresh).counts == frobenius_fibers(loaded).counts)
    return {"exact_equal": tables_equal(fresh, loaded), "mirror_equal": bool(same_values),
            "downstream_equal": bool(downstream)}
