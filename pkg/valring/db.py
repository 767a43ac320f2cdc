import os

from sqlalchemy import Column, DateTime, Integer, String, Text, create_engine, func
from sqlalchemy.orm import declarative_base, sessionmaker

from .config import settings

Base = declarative_base()


def _database_url(cache_dir: str) -> str:
    os.makedirs(cache_dir, exist_ok=True)
    return f"sqlite:///{os.path.join(cache_dir, 'valring.db')}"


engine = create_engine(
    _database_url(settings.cache_dir),
    connect_args={"check_same_thread": False},
    pool_pre_ping=True,
)
SessionLocal = sessionmaker(bind=engine, autoflush=False, autocommit=False)


class ScanCache(Base):
    """One scan (kind + parameters + code version) and its JSONL records."""
    __tablename__ = "scan_cache"
    key = Column(String(64), primary_key=True, index=True)
    kind = Column(String(32), index=True, nullable=False)
    params = Column(Text, nullable=False)
    jsonl = Column(Text, nullable=False)
    hash = Column(String(64), nullable=True, index=True)
    version = Column(String(32), nullable=False)
    updated_at = Column(DateTime, server_default=func.now(), onupdate=func.now())


class NFixture(Base):
    __tablename__ = "n_fixtures"
    set_name = Column(String(16), primary_key=True)
    n = Column(Integer, nullable=False)
    qmin = Column(Integer, nullable=False)
    qmax = Column(Integer, nullable=False)
    version = Column(String(32), nullable=False)
    updated_at = Column(DateTime, server_default=func.now(), onupdate=func.now())


def configure(cache_dir: str) -> None:
    """Point the session factory at another cache directory."""
    global engine
    engine = create_engine(_database_url(cache_dir), connect_args={"check_same_thread": False}, pool_pre_ping=True)
    SessionLocal.configure(bind=engine)


def init_db():
    Base.metadata.create_all(bind=engine)
