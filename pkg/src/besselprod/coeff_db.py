"""Persistent table of triple-product coefficients at Bessel zeros.

For zero kind q and mode triple (m, n, p) a record holds

    c000 = int_0^1 x J0(j_m x) J0(j_n x) J0(j_p x) dx
    c110 = int_0^1 x J1(j_m x) J1(j_n x) J0(j_p x) dx
    d111 = int_0^1 J1(j_m x) J1(j_n x) J1(j_p x) dx

with j the zeros of J_q.  Only c000 is integrated; c110 and d111 follow from it.
Records are keyed by the canonical (sorted) triple; c000 and d111 are
permutation invariant and c110 is re-derived for any requested orientation.
"""

from __future__ import annotations

import csv
import io
import math
import os
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .asymptotics import ModeTriple, sig4, triple_product_approx
from .bessel_core import bessel_zeros
from .errors import ConvergenceError, IntegrityError, NotFoundError, ParseError
from .quadrature import Factor, ProductIntegralSpec, integrate, integrate_extended
from .table1 import ROWS as TABLE1_ROWS
from .three_product import TripleParams, _b45, c110_ratio, d111_ratio

HEADER = ["q", "m", "n", "p", "c000", "c110", "d111", "abs_err", "method"]
METHODS = ("quadrature", "quadrature_extended", "asymptotic")
DEFAULT_THRESHOLD = 150
DEFAULT_EXTENDED_FROM = 100
INVARIANT_REL = 1e-9


def canonical(m, n, p):
    return tuple(sorted((int(m), int(n), int(p))))


def _d111_boundary(q, m, n, p) -> float:
    """Boundary term dropped by the D_111 shortcut; zero for q = 1."""
    if q == 1:
        return 0.0
    z = bessel_zeros(q, max(m, n, p))
    return _b45(TripleParams(float(z[m - 1]), float(z[n - 1]), float(z[p - 1])), 1.0)


def derived_c110(q, m, n, p, c000):
    return c000 * c110_ratio(q, m, n, p)


def derived_d111(q, m, n, p, c000):
    return c000 * d111_ratio(q, m, n, p) + _d111_boundary(q, m, n, p)


@dataclass(frozen=True)
class CoeffRecord:
    q: int
    m: int
    n: int
    p: int
    c000: float
    c110: float
    d111: float
    abs_err: float
    method: str

    @property
    def key(self):
        return (self.q, self.m, self.n, self.p)

    def oriented(self, m, n, p) -> "CoeffRecord":
        """The same coefficients for the orientation (m, n, p)."""
        return replace(self, m=m, n=n, p=p, c110=derived_c110(self.q, m, n, p, self.c000))

    def invariant_error(self) -> float:
        """Largest relative violation of the c110 / d111 relations."""
        worst = 0.0
        for stored, expect in ((self.c110, derived_c110(self.q, self.m, self.n, self.p, self.c000)),
                               (self.d111, derived_d111(self.q, self.m, self.n, self.p, self.c000))):
            scale = max(abs(stored), abs(expect))
            if scale > 0:
                worst = max(worst, abs(stored - expect) / scale)
        return worst


def make_record(q, m, n, p, c000, abs_err, method) -> CoeffRecord:
    m, n, p = canonical(m, n, p)
    return CoeffRecord(q, m, n, p, float(c000), derived_c110(q, m, n, p, c000),
                       derived_d111(q, m, n, p, c000), float(abs_err), method)


# -- computation of single records -----------------------------------------

def asymptotic_rel_error(m, n, p) -> float:
    """Relative uncertainty assigned to approximation-based records.

    About 15% near mode 20 falling to 10% by mode 200; 100% for triangle-
    violating triples, where the true value collapses toward zero.
    """
    a, b, c = sorted((m, n, p))
    if c > a + b:
        return 1.0
    mean = (a + b + c) / 3.0
    return 0.10 + 0.05 * min(1.0, max(0.0, (200.0 - mean) / 180.0))


def _asymptotic_record(q, m, n, p):
    v = triple_product_approx(ModeTriple(m, n, p, q=q), zeros="integer" if q == 1 else "exact")
    return make_record(q, m, n, p, v, abs(v) * asymptotic_rel_error(m, n, p), "asymptotic")


def compute_record(q, m, n, p, threshold=DEFAULT_THRESHOLD, extended_from=DEFAULT_EXTENDED_FROM):
    """One record under the method policy; returns (record, fell_back)."""
    m, n, p = canonical(m, n, p)
    top = p
    if top > threshold:
        return _asymptotic_record(q, m, n, p), False
    z = bessel_zeros(q, top)
    spec = ProductIntegralSpec(1, (Factor(0, float(z[m - 1])), Factor(0, float(z[n - 1])),
                                   Factor(0, float(z[p - 1]))), (0.0, 1.0))
    ext = top > extended_from
    try:
        r = (integrate_extended if ext else integrate)(spec)
    except ConvergenceError:
        return _asymptotic_record(q, m, n, p), True
    return make_record(q, m, n, p, r.value, r.abs_err,
                       "quadrature_extended" if ext else "quadrature"), False


def _compute_chunk(args):
    q, keys, threshold, extended_from = args
    return [compute_record(q, *k, threshold=threshold, extended_from=extended_from) for k in keys]


def canonical_triples(max_mode):
    for m in range(1, max_mode + 1):
        for n in range(m, max_mode + 1):
            for p in range(n, max_mode + 1):
                yield (m, n, p)


def record_count(max_mode) -> int:
    return math.comb(max_mode + 2, 3)


def worker_count(requested=None) -> int:
    cap = os.environ.get("BPK_THREADS")
    n = requested or os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return max(1, n)


# -- database ---------------------------------------------------------------

class Database:
    """In-memory coefficient table, read-only after construction."""

    def __init__(self, records, max_mode=None, qs=None, fallbacks=()):
        recs = sorted(records, key=lambda r: r.key)
        self._records = {r.key: r for r in recs}
        if len(self._records) != len(recs):
            raise IntegrityError("duplicate canonical keys")
        self.max_mode = max_mode if max_mode is not None else max(
            (r.p for r in recs), default=0)
        self.qs = tuple(sorted(qs if qs is not None else {r.q for r in recs}))
        self.fallbacks = tuple(sorted(fallbacks))

    def __len__(self):
        return len(self._records)

    def __iter__(self):
        return iter(self._records.values())

    @property
    def records(self):
        return list(self._records.values())

    def lookup(self, q, m, n, p) -> CoeffRecord:
        key = (int(q), *canonical(m, n, p))
        if min(key[1:]) < 1 or key[3] > self.max_mode or key[0] not in self.qs:
            raise NotFoundError(key, "out_of_range")
        rec = self._records.get(key)
        if rec is None:
            raise NotFoundError(key, "not_generated")
        return rec.oriented(int(m), int(n), int(p))

    def audit(self, rel=INVARIANT_REL):
        """Keys whose stored c110/d111 disagree with the c000-derived values."""
        return [r.key for r in self if r.invariant_error() > rel]

    # CSV -------------------------------------------------------------------
    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(HEADER)
        for r in self:
            w.writerow([r.q, r.m, r.n, r.p] + [f"{v:.17g}" for v in
                                                (r.c000, r.c110, r.d111, r.abs_err)] + [r.method])
        return buf.getvalue()

    def export_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())

    @classmethod
    def from_csv_text(cls, text: str, max_mode=None) -> "Database":
        rows = csv.reader(io.StringIO(text))
        try:
            header = next(rows)
        except StopIteration:
            raise ParseError("empty file", 1) from None
        if [h.strip() for h in header] != HEADER:
            raise ParseError(f"bad header {header!r}", 1)
        recs = []
        for lineno, row in enumerate(rows, start=2):
            if not row:
                continue
            if len(row) != len(HEADER):
                raise ParseError(f"expected {len(HEADER)} fields, got {len(row)}", lineno)
            try:
                q, m, n, p = (int(v) for v in row[:4])
                vals = [float(v) for v in row[4:8]]
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            method = row[8].strip()
            if method not in METHODS:
                raise ParseError(f"unknown method {method!r}", lineno)
            if q not in (0, 1) or min(m, n, p) < 1:
                raise ParseError("bad key", lineno)
            if (m, n, p) != canonical(m, n, p):
                raise ParseError("triple is not in canonical order", lineno)
            rec = CoeffRecord(q, m, n, p, *vals, method)
            err = rec.invariant_error()
            if err > INVARIANT_REL:
                raise IntegrityError(
                    f"line {lineno}: c110/d111 inconsistent with c000 (relative {err:.2e})")
            recs.append(rec)
        return cls(recs, max_mode=max_mode)

    @classmethod
    def import_csv(cls, path, max_mode=None) -> "Database":
        with open(path, encoding="utf-8", newline="") as fh:
            return cls.from_csv_text(fh.read(), max_mode)

    # binary index ------------------------------------------------------------
    def write_index(self, path) -> None:
        write_index(self, path)


def generate(max_mode: int, q: int = 1, threshold: int = DEFAULT_THRESHOLD,
             extended_from: int = DEFAULT_EXTENDED_FROM, workers=None,
             chunk: int = 256) -> Database:
    """All canonical triples with indices up to ``max_mode``.

    Output order and content do not depend on the number of workers.
    """
    if max_mode < 1:
        raise ValueError("max_mode must be >= 1")
    if q not in (0, 1):
        raise ValueError("q must be 0 or 1")
    bessel_zeros(q, max_mode)
    keys = list(canonical_triples(max_mode))
    jobs = [(q, keys[i:i + chunk], threshold, extended_from) for i in range(0, len(keys), chunk)]
    nw = worker_count(workers)
    if nw == 1 or len(jobs) == 1:
        results = [r for job in jobs for r in _compute_chunk(job)]
    else:
        with ProcessPoolExecutor(max_workers=nw) as ex:
            results = [r for part in ex.map(_compute_chunk, jobs) for r in part]
    recs = [r for r, _ in results]
    fallbacks = [r.key for r, fb in results if fb]
    return Database(recs, max_mode=max_mode, qs=(q,), fallbacks=fallbacks)


# -- BPK1 binary index ----------------------------------------------------------
#
# header: b"BPK1", uint32 version, uint32 max_mode, uint32 q-mask, uint64 count
# record: int32 q, m, n, p; float64 c000, c110, d111, abs_err; uint8 method; 7 pad
# all little-endian, records sorted by (q, m, n, p).

_MAGIC = b"BPK1"
_HEAD = struct.Struct("<4sIIIQ")
_DTYPE = np.dtype([("q", "<i4"), ("m", "<i4"), ("n", "<i4"), ("p", "<i4"),
                   ("c000", "<f8"), ("c110", "<f8"), ("d111", "<f8"), ("abs_err", "<f8"),
                   ("method", "u1"), ("pad", "V7")])


def write_index(db: Database, path) -> None:
    arr = np.zeros(len(db), dtype=_DTYPE)
    for i, r in enumerate(db):
        arr[i] = (r.q, r.m, r.n, r.p, r.c000, r.c110, r.d111, r.abs_err,
                  METHODS.index(r.method), b"\0" * 7)
    mask = sum(1 << q for q in db.qs)
    with open(path, "wb") as fh:
        fh.write(_HEAD.pack(_MAGIC, 1, db.max_mode, mask, len(db)))
        fh.write(arr.tobytes())


def triple_rank(m, n, p, M) -> int:
    """Position of canonical (m <= n <= p <= M) in lexicographic order."""
    c = math.comb
    return (c(M + 2, 3) - c(M - m + 3, 3)) + (c(M - m + 2, 2) - c(M - n + 2, 2)) + (p - n)


class BinaryIndex:
    """Memory-mapped reader for a BPK1 file.

    When the file holds every canonical triple for its q values the record
    offset is computed directly; otherwise lookup falls back to bisection.
    """

    def __init__(self, path):
        path = Path(path)
        with open(path, "rb") as fh:
            head = fh.read(_HEAD.size)
        if len(head) < _HEAD.size:
            raise IntegrityError("truncated BPK1 header")
        magic, version, self.max_mode, mask, count = _HEAD.unpack(head)
        if magic != _MAGIC or version != 1:
            raise IntegrityError("not a BPK1 index")
        self.qs = tuple(q for q in (0, 1) if mask >> q & 1)
        self._arr = np.memmap(path, dtype=_DTYPE, mode="r", offset=_HEAD.size, shape=(count,))
        per_q = record_count(self.max_mode)
        self._dense = count == per_q * len(self.qs)
        self._keys = None

    def __len__(self):
        return len(self._arr)

    def _locate(self, key):
        q, m, n, p = key
        if self._dense:
            return self.qs.index(q) * record_count(self.max_mode) + triple_rank(m, n, p, self.max_mode)
        if self._keys is None:
            a = self._arr
            self._keys = (a["q"].astype(np.int64) << 48 | a["m"].astype(np.int64) << 32
                          | a["n"].astype(np.int64) << 16 | a["p"].astype(np.int64))
        code = q << 48 | m << 32 | n << 16 | p
        i = int(np.searchsorted(self._keys, code))
        return i if i < len(self._keys) and self._keys[i] == code else None

    def lookup(self, q, m, n, p) -> CoeffRecord:
        key = (int(q), *canonical(m, n, p))
        if min(key[1:]) < 1 or key[3] > self.max_mode or key[0] not in self.qs:
            raise NotFoundError(key, "out_of_range")
        i = self._locate(key)
        if i is None:
            raise NotFoundError(key, "not_generated")
        r = self._arr[i]
        if (int(r["q"]), int(r["m"]), int(r["n"]), int(r["p"])) != key:
            raise IntegrityError(f"index entry {i} does not hold {key}")
        rec = CoeffRecord(key[0], key[1], key[2], key[3], float(r["c000"]), float(r["c110"]),
                          float(r["d111"]), float(r["abs_err"]), METHODS[int(r["method"])])
        return rec.oriented(int(m), int(n), int(p))


# -- published table --------------------------------------------------------

@dataclass(frozen=True)
class Table1Result:
    m: int
    n: int
    p: int
    printed_lhs: float
    printed_rhs: float
    lhs: float
    lhs_err: float
    rhs: float
    method: str
    error: str = ""

    @property
    def triangle_violating(self) -> bool:
        a, b, c = sorted((self.m, self.n, self.p))
        return c > a + b

    @property
    def lhs_ok(self) -> bool:
        if self.error:
            return False
        if self.triangle_violating:
            return abs(self.lhs) <= 1e-7
        unit = 10.0 ** (math.floor(math.log10(abs(self.printed_lhs))) - 2)
        return abs(self.lhs - self.printed_lhs) <= unit * (1 + 1e-9)

    @property
    def rhs_ok(self) -> bool:
        return sig4(self.rhs) == sig4(self.printed_rhs)

    @property
    def rel_error(self) -> float:
        return abs(self.rhs - self.lhs) / abs(self.lhs) if self.lhs else math.inf


def reproduce_table1(extended_from: int = DEFAULT_EXTENDED_FROM, prefactor="table"):
    """All published rows: quadrature LHS next to the approximation RHS."""
    out = []
    top = max(max(r.mnp) for r in TABLE1_ROWS)
    z = bessel_zeros(1, top)
    for row in TABLE1_ROWS:
        spec = ProductIntegralSpec(1, tuple(Factor(0, float(z[k - 1])) for k in row.mnp),
                                   (0.0, 1.0))
        ext = max(row.mnp) > extended_from
        method = "quadrature_extended" if ext else "quadrature"
        rhs = triple_product_approx(ModeTriple(*row.mnp), prefactor=prefactor)
        try:
            r = (integrate_extended if ext else integrate)(spec)
            out.append(Table1Result(*row.mnp, row.lhs, row.rhs, r.value, r.abs_err, rhs, method))
        except ConvergenceError as exc:
            out.append(Table1Result(*row.mnp, row.lhs, row.rhs, exc.value, exc.abs_err, rhs,
                                    method, error=str(exc)))
    return out
