from sqlalchemy.orm import Session

from . import __version__, db


def get_cached_scan(session: Session, key: str) -> db.ScanCache | None:
    row = session.query(db.ScanCache).filter_by(key=key).one_or_none()
    if row is None or row.version != __version__:
        return None
    return row


def upsert_scan(session: Session, *, key: str, kind: str, params: str, jsonl: str, hash: str) -> db.ScanCache:
    row = session.query(db.ScanCache).filter_by(key=key).one_or_none()
    if not row:
        row = db.ScanCache(key=key, kind=kind, params=params)
        session.add(row)
    elif row.hash == hash and row.version == __version__:
        return row
    row.jsonl = jsonl
    row.hash = hash
    row.version = __version__
    return row


def get_n_fixture(session: Session, set_name: str) -> db.NFixture | None:
    row = session.query(db.NFixture).filter_by(set_name=set_name).one_or_none()
    if row is None or row.version != __version__:
        return None
    return row


def upsert_n_fixture(session: Session, *, set_name: str, n: int, qmin: int, qmax: int) -> db.NFixture:
    row = session.query(db.NFixture).filter_by(set_name=set_name).one_or_none()
    if not row:
        row = db.NFixture(set_name=set_name)
        session.add(row)
    row.n = n
    row.qmin = qmin
    row.qmax = qmax
    row.version = __version__
    return row
