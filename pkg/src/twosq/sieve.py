"""Byte-per-candidate sieve marking every integer below a limit that is a sum
of two squares and at most ``k`` distinct powers of 2.

Worker threads share one ``uint8`` array. Each claims a block of rows ``x`` of
the outer loop from a shared counter and runs a compiled kernel (GIL released)
that only ever stores the constant 0. No cell is read while building, so the
workers need no locks; a join acts as the barrier before the table is sealed.
"""

from __future__ import annotations

import itertools
import os
import struct
import threading
from dataclasses import dataclass, replace
from math import isqrt
from pathlib import Path
from typing import BinaryIO

import numpy as np
from numba import njit

MAGIC = b"S2SP"
VERSION = 1
_HEADER = struct.Struct("<4sBQQQQ")
DEFAULT_MEM_CAP_GIB = 8.0
MAX_K = 3


class SieveError(ValueError):
    pass


class MemoryCapError(SieveError):
    def __init__(self, required: int, cap: int):
        super().__init__(f"sieve needs {required} bytes, cap is {cap} bytes")
        self.required = required
        self.cap = cap


class TableFormatError(SieveError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class SieveConfig:
    limit: int
    k: int = 2
    filter_modulus: int = 0
    filter_residue: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.limit < 2:
            raise SieveError(f"limit must be >= 2, got {self.limit}")
        if self.k not in range(MAX_K + 1):
            raise SieveError(f"k must be in 0..{MAX_K}, got {self.k}")
        if self.filter_modulus < 0:
            raise SieveError("filter_modulus must be >= 0")
        if self.filter_modulus == 0 and self.filter_residue != 0:
            raise SieveError("filter_residue requires filter_modulus > 0")
        if self.filter_modulus > 0 and not 0 <= self.filter_residue < self.filter_modulus:
            raise SieveError(
                f"filter_residue must be in [0, {self.filter_modulus}), got {self.filter_residue}"
            )
        if self.workers < 1:
            raise SieveError(f"workers must be >= 1, got {self.workers}")

    @property
    def cell_count(self) -> int:
        m, r = self.filter_modulus, self.filter_residue
        if m == 0:
            return self.limit
        return max(0, -(-(self.limit - r) // m))

    def integer_at(self, index: int) -> int:
        m = self.filter_modulus
        return index if m == 0 else self.filter_residue + m * index

    def index_at_or_after(self, n: int) -> int:
        """First cell index whose integer is >= n."""
        m, r = self.filter_modulus, self.filter_residue
        if m == 0:
            return max(n, 0)
        return max(0, -(-(n - r) // m))


@dataclass
class MarkTable:
    config: SieveConfig
    cells: np.ndarray
    sealed: bool = False

    @property
    def state(self) -> str:
        return "sealed" if self.sealed else "building"

    def seal(self) -> "MarkTable":
        self.cells.flags.writeable = False
        self.sealed = True
        return self

    def integers(self, indices: np.ndarray) -> np.ndarray:
        m = self.config.filter_modulus
        idx = indices.astype(np.int64)
        return idx if m == 0 else self.config.filter_residue + m * idx

    def __eq__(self, other):
        if not isinstance(other, MarkTable):
            return NotImplemented
        a, b = self.config, other.config
        same = (a.limit, a.k, a.filter_modulus, a.filter_residue) == (
            b.limit, b.k, b.filter_modulus, b.filter_residue)
        return same and np.array_equal(self.cells, other.cells)


@njit(nogil=True, cache=True)
def _cross_out(cells, v, m, r):
    if m == 0:
        cells[v] = 0
    elif v >= r and (v - r) % m == 0:
        cells[(v - r) // m] = 0


@njit(nogil=True, cache=True)
def _mark_rows(cells, x_lo, x_hi, limit, k, m, r):
    for x in range(x_lo, x_hi):
        xx = x * x
        if xx >= limit:
            break
        for y in range(x + 1):
            v = xx + y * y
            if v >= limit:
                break
            _cross_out(cells, v, m, r)
            if k < 1:
                continue
            a = 0
            while True:
                va = v + (1 << a)
                if va >= limit:
                    break
                _cross_out(cells, va, m, r)
                if k >= 2:
                    for b in range(a):
                        vb = va + (1 << b)
                        if vb >= limit:
                            break
                        _cross_out(cells, vb, m, r)
                        if k >= 3:
                            for c in range(b):
                                vc = vb + (1 << c)
                                if vc >= limit:
                                    break
                                _cross_out(cells, vc, m, r)
                a += 1


def mem_cap_bytes(cap_gib: float | None = None) -> int:
    if cap_gib is None:
        cap_gib = float(os.environ.get("TWOSQ_MEM_CAP_GIB", DEFAULT_MEM_CAP_GIB))
    return int(cap_gib * (1 << 30))


def run_sieve(config: SieveConfig, mem_cap_gib: float | None = None) -> MarkTable:
    """Build and seal the mark table for ``config``.

    The result does not depend on ``config.workers``.
    """
    need = config.cell_count
    cap = mem_cap_bytes(mem_cap_gib)
    if need > cap:
        raise MemoryCapError(need, cap)
    try:
        cells = np.ones(need, dtype=np.uint8)
    except MemoryError as exc:
        raise MemoryCapError(need, cap) from exc
    table = MarkTable(config, cells)

    rows = isqrt(config.limit - 1) + 1
    block = max(1, rows // (config.workers * 16))
    claims = itertools.count()
    args = (config.limit, config.k, config.filter_modulus, config.filter_residue)

    def work():
        while True:
            lo = next(claims) * block
            if lo >= rows:
                return
            _mark_rows(cells, lo, min(rows, lo + block), *args)

    if config.workers == 1:
        work()
    else:
        threads = [threading.Thread(target=work) for _ in range(config.workers)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
    return table.seal()


def _require_sealed(table: MarkTable) -> None:
    if not table.sealed:
        raise SieveError("table is still building; seal it first")


def first_unmarked(table: MarkTable, start: int = 0) -> int | None:
    """Smallest tracked integer >= ``start`` left unmarked, or None."""
    _require_sealed(table)
    i = table.config.index_at_or_after(start)
    tail = table.cells[i:]
    hit = np.flatnonzero(tail)
    if not len(hit):
        return None
    return table.config.integer_at(i + int(hit[0]))


def _index_range(table: MarkTable, lo: int, hi: int) -> tuple[int, int]:
    _require_sealed(table)
    if not 0 <= lo <= hi <= table.config.limit:
        raise SieveError(f"need 0 <= lo <= hi <= {table.config.limit}, got [{lo}, {hi})")
    cfg = table.config
    return cfg.index_at_or_after(lo), cfg.index_at_or_after(hi)


def unmarked_count(table: MarkTable, lo: int, hi: int) -> int:
    """Number of tracked integers in [lo, hi) left unmarked."""
    i, j = _index_range(table, lo, hi)
    return int(np.count_nonzero(table.cells[i:j]))


def unmarked(table: MarkTable, lo: int = 0, hi: int | None = None) -> np.ndarray:
    """The unmarked tracked integers in [lo, hi) as an int64 array."""
    i, j = _index_range(table, lo, table.config.limit if hi is None else hi)
    return table.integers(np.flatnonzero(table.cells[i:j]) + i)


def write_table(table: MarkTable, fh: BinaryIO) -> None:
    _require_sealed(table)
    c = table.config
    fh.write(_HEADER.pack(MAGIC, VERSION, c.limit, c.k, c.filter_modulus, c.filter_residue))
    fh.write(table.cells.tobytes())


def read_table(fh: BinaryIO, workers: int = 1) -> MarkTable:
    head = fh.read(_HEADER.size)
    if len(head) < 4 or head[:4] != MAGIC:
        raise TableFormatError("bad magic", 0)
    if len(head) < _HEADER.size:
        raise TableFormatError(
            f"truncated header: expected {_HEADER.size} bytes, got {len(head)}", len(head))
    _, version, limit, k, m, r = _HEADER.unpack(head)
    if version != VERSION:
        raise TableFormatError(f"unsupported version {version}", 4)
    try:
        config = SieveConfig(limit, k, m, r, workers)
    except SieveError as exc:
        raise TableFormatError(f"invalid header: {exc}", 5) from exc
    payload = fh.read()
    want = config.cell_count
    if len(payload) != want:
        raise TableFormatError(
            f"payload length mismatch: expected {want} bytes, got {len(payload)}",
            _HEADER.size + min(len(payload), want))
    cells = np.frombuffer(payload, dtype=np.uint8).copy()
    bad = np.flatnonzero(cells > 1)
    if len(bad):
        raise TableFormatError(f"cell value {cells[bad[0]]} is not 0 or 1", _HEADER.size + int(bad[0]))
    return MarkTable(config, cells).seal()


def save_table(table: MarkTable, path: str | os.PathLike) -> None:
    with open(path, "wb") as fh:
        write_table(table, fh)


def load_table(path: str | os.PathLike, workers: int = 1) -> MarkTable:
    with open(Path(path), "rb") as fh:
        return read_table(fh, workers)


def with_workers(config: SieveConfig, workers: int) -> SieveConfig:
    return replace(config, workers=workers)
