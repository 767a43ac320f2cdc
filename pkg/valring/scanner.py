import asyncio
import datetime as dt
import hashlib
import json
import logging
import math
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from typing import Callable

from . import __version__, crud
from .config import settings
from .db import SessionLocal, init_db
from .decompose import (
    MAX_Q,
    ScanRecord,
    ScanResult,
    curve_points,
    minimal_N,
    power_surjective,
    prime_powers,
    scan_one,
    set_mask,
)
from .errors import BadParameter, MissingScanFixture, TooLarge
from .fields import field_of_order

logger = logging.getLogger("scanner")

# Runtime status (for diagnostics)
LAST_START: dt.datetime | None = None
LAST_FINISH: dt.datetime | None = None
LAST_ERROR: str | None = None

# In-memory ring buffer for verbose scan logs
DETAIL_LOGS: deque[dict] = deque(maxlen=1000)


def _detail(msg: str):
    """Store a verbose entry {ts, msg} when settings.scan_log_detail is on; mirrored at debug level."""
    if not settings.scan_log_detail:
        return
    ts = dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds")
    DETAIL_LOGS.append({"ts": ts, "msg": msg})
    logger.debug(f"detail: {msg}")


def _calc_hash(payload) -> str:
    dumped = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(dumped.encode("utf-8")).hexdigest()


def scan_key(kind: str, params: dict) -> str:
    return _calc_hash({"kind": kind, "params": params, "version": __version__})


# ---- per-q workers (module level so they pickle) ----

def _power_row(q: int, m: int) -> dict:
    return {"q": q, "m": m, "surjective": power_surjective(q, m)}


def _curve_row(name: str, q: int) -> dict | None:
    k = field_of_order(q)
    if name == "dimC":
        excluded = set_mask("P2" if k.p != 2 else "P3", k)
    else:
        excluded = (k.artin_schreier_counts() > 0) if k.p == 2 else set_mask("P2", k)
    excluded[0] = True
    candidates = [v for v in range(k.q) if not excluded[v]]
    if not candidates:
        return None
    a = candidates[0]
    count = curve_points(name, q, a)
    return {"q": q, "curve": name, "a": k.format_element(k.element(a)), "count": count}


async def _gather(fn: Callable, jobs: list[tuple], workers: int) -> list:
    if workers <= 1:
        return [fn(*job) for job in jobs]
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [loop.run_in_executor(pool, fn, *job) for job in jobs]
        return list(await asyncio.gather(*futures))


def _run(fn: Callable, jobs: list[tuple], workers: int | None = None) -> list:
    return asyncio.run(_gather(fn, jobs, workers or settings.workers))


def _cached(kind: str, params: dict, compute: Callable[[], list[dict]], force: bool = False) -> list[dict]:
    """Rows of a scan, served from the cache when the same scan ran under this version."""
    global LAST_START, LAST_FINISH, LAST_ERROR
    init_db()
    key = scan_key(kind, params)
    session = SessionLocal()
    try:
        if not force:
            row = crud.get_cached_scan(session, key)
            if row is not None:
                logger.info(f"scanner: cache hit kind={kind} params={params}")
                return [json.loads(line) for line in row.jsonl.splitlines() if line]
        LAST_START = dt.datetime.now(dt.timezone.utc)
        logger.info(f"scanner: start kind={kind} params={params}")
        t0 = time.perf_counter()
        try:
            rows = compute()
        except Exception as exc:
            LAST_ERROR = str(exc)
            logger.exception("scanner: scan failed kind=%s", kind)
            raise
        jsonl = "\n".join(json.dumps(r, separators=(",", ":")) for r in rows)
        crud.upsert_scan(
            session, key=key, kind=kind, params=json.dumps(params, sort_keys=True), jsonl=jsonl, hash=_calc_hash(rows)
        )
        session.commit()
        LAST_FINISH = dt.datetime.now(dt.timezone.utc)
        logger.info(f"scanner: finished kind={kind} rows={len(rows)} elapsed={time.perf_counter() - t0:.1f}s")
        return rows
    finally:
        session.close()


# ---- scans ----

def _check_range(qmin: int, qmax: int) -> None:
    if qmax > MAX_Q:
        raise TooLarge(f"qmax = {qmax} exceeds {MAX_Q}")
    if qmin > qmax:
        raise BadParameter(f"empty range {qmin}..{qmax}")


def n_scan(set_name: str, qmin: int, qmax: int, *, force: bool = False, workers: int | None = None) -> ScanResult:
    """Coverage scan over prime powers in [qmin, qmax]; records N as the fixture for set_name."""
    _check_range(qmin, qmax)
    if set_name not in ("T", "Tplus") and not (set_name[:1] == "P" and set_name[1:].isdigit()):
        raise BadParameter(f"unknown set {set_name!r}")
    qs = prime_powers(qmin, qmax)

    def compute():
        records = _run(scan_one, [(set_name, q) for q in qs], workers)
        for r in records:
            _detail(f"n-scan set={set_name} q={r.q} covered={r.covered} size={r.size} ms={r.ms}")
        return [r.to_dict() for r in records]

    rows = _cached("n-scan", {"set": set_name, "qmin": qmin, "qmax": qmax}, compute, force)
    records = [ScanRecord.from_dict(r) for r in rows]
    result = ScanResult(set_name, qmin, qmax, records, minimal_N(records, qmin))
    if qmin <= 2:
        record_N(set_name, result.N, qmin, qmax)
    return result


def power_scan(qmax: int, mmax: int, *, force: bool = False, workers: int | None = None) -> list[dict]:
    _check_range(2, qmax)
    if mmax > 64:
        raise BadParameter(f"mmax = {mmax} exceeds 64")
    jobs = [(q, m) for q in prime_powers(2, qmax) for m in range(1, mmax + 1)]
    return _cached("power-scan", {"qmax": qmax, "mmax": mmax}, lambda: _run(_power_row, jobs, workers), force)


def curve_scan(name: str, qmin: int, qmax: int, *, force: bool = False, workers: int | None = None) -> list[dict]:
    if name not in ("dimC", "dim2C"):
        raise BadParameter(f"unknown curve {name!r}")
    _check_range(qmin, qmax)

    def compute():
        rows = _run(_curve_row, [(name, q) for q in prime_powers(qmin, qmax)], workers)
        return [r for r in rows if r is not None]

    return _cached("curve-scan", {"curve": name, "qmin": qmin, "qmax": qmax}, compute, force)


# ---- N fixture ----

def record_N(set_name: str, n: int, qmin: int, qmax: int) -> None:
    init_db()
    session = SessionLocal()
    try:
        crud.upsert_n_fixture(session, set_name=set_name, n=n, qmin=qmin, qmax=qmax)
        session.commit()
    finally:
        session.close()


def get_N(set_name: str, *, compute: bool = True) -> int:
    """Recorded N for set_name; scans [2, settings.scan_qmax] on demand when allowed."""
    init_db()
    session = SessionLocal()
    try:
        row = crud.get_n_fixture(session, set_name)
        if row is not None:
            return row.n
    finally:
        session.close()
    if not compute:
        raise MissingScanFixture(f"no N recorded for {set_name} under version {__version__}")
    logger.info(f"scanner: no N fixture for {set_name}, scanning up to q={settings.scan_qmax}")
    return n_scan(set_name, 2, settings.scan_qmax).N


def uniform_ell(n: int, set_name: str = "T") -> int:
    """lcm of q(q - 1) over applicable prime powers q < N."""
    from .decompose import t_applicable_q
    ell = 1
    for q in prime_powers(2, n - 1):
        if set_name == "T" and not t_applicable_q(q):
            continue
        ell = math.lcm(ell, q * (q - 1))
    return ell
