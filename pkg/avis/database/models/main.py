import datetime

from sqlalchemy import Column, Integer, String, Float, Boolean, DateTime, ForeignKey
from sqlalchemy.orm import relationship

from avis.database.main import Database


class RunStatus:
    STARTED = 'started'
    FINISHED = 'finished'
    FAILED = 'failed'


class RunRecord(Database.BASE):
    __tablename__ = 'runs'
    id = Column(Integer, primary_key=True)
    verb = Column(String(32), nullable=False, index=True)
    folder = Column(String(500), nullable=False)
    manifest_path = Column(String(500), nullable=False)
    status = Column(String(16), nullable=False, default=RunStatus.STARTED)
    exit_code = Column(Integer, nullable=True)
    created_at = Column(DateTime, nullable=False)
    finished_at = Column(DateTime, nullable=True)
    metrics = relationship('MetricsRecord', back_populates='run')
    bounds = relationship('BoundRecord', back_populates='run')

    def __init__(self, verb: str, folder: str, manifest_path: str, created_at: datetime.datetime | None = None):
        self.verb = verb
        self.folder = folder
        self.manifest_path = manifest_path
        self.status = RunStatus.STARTED
        self.created_at = created_at or datetime.datetime.now()

    def __repr__(self):
        return f'<RunRecord {self.id} {self.verb} {self.status}>'


class MetricsRecord(Database.BASE):
    __tablename__ = 'metrics'
    id = Column(Integer, primary_key=True)
    run_id = Column(Integer, ForeignKey('runs.id'), nullable=False)
    video_id = Column(String(200), nullable=False)
    task = Column(String(16), nullable=False)
    mode = Column(String(16), nullable=False)
    psnr_db = Column(Float, nullable=False)
    ssim = Column(Float, nullable=False)
    latency_steps = Column(Integer, nullable=False)
    guidance_calls = Column(Integer, nullable=False)
    guidance_encodes = Column(Integer, nullable=False)
    guidance_decodes = Column(Integer, nullable=False)
    reverse_steps = Column(Integer, nullable=False)
    wall_ms = Column(Float, nullable=False)
    run = relationship('RunRecord', back_populates='metrics')


class BoundRecord(Database.BASE):
    __tablename__ = 'bounds'
    id = Column(Integer, primary_key=True)
    run_id = Column(Integer, ForeignKey('runs.id'), nullable=False)
    seed = Column(Integer, nullable=False)
    chunk = Column(Integer, nullable=False)
    eps0 = Column(Float, nullable=False)
    delta = Column(Float, nullable=False)
    eps_final = Column(Float, nullable=False)
    Lambda_K = Column(Float, nullable=False)
    B_K = Column(Float, nullable=False)
    slack = Column(Float, nullable=False)
    satisfied = Column(Boolean, nullable=False, index=True)
    run = relationship('RunRecord', back_populates='bounds')


def register_models():
    Database.BASE.metadata.create_all(Database().engine)
