"""Run registry

Revision ID: 3c1e5a9b7d20
Revises: 
Create Date: 2026-10-18 10:12:41.318204

"""
from typing import Sequence, Union

from alembic import op
import sqlalchemy as sa

# revision identifiers, used by Alembic.
revision: str = '3c1e5a9b7d20'
down_revision: Union[str, None] = None
branch_labels: Union[str, Sequence[str], None] = None
depends_on: Union[str, Sequence[str], None] = None


def upgrade() -> None:
    op.create_table('runs',
                    sa.Column('id', sa.Integer(), nullable=False),
                    sa.Column('verb', sa.String(length=32), nullable=False),
                    sa.Column('folder', sa.String(length=500), nullable=False),
                    sa.Column('manifest_path', sa.String(length=500), nullable=False),
                    sa.Column('status', sa.String(length=16), nullable=False),
                    sa.Column('exit_code', sa.Integer(), nullable=True),
                    sa.Column('created_at', sa.DateTime(), nullable=False),
                    sa.Column('finished_at', sa.DateTime(), nullable=True),
                    sa.PrimaryKeyConstraint('id')
                    )
    op.create_index(op.f('ix_runs_verb'), 'runs', ['verb'], unique=False)
    op.create_table('metrics',
                    sa.Column('id', sa.Integer(), nullable=False),
                    sa.Column('run_id', sa.Integer(), nullable=False),
                    sa.Column('video_id', sa.String(length=200), nullable=False),
                    sa.Column('task', sa.String(length=16), nullable=False),
                    sa.Column('mode', sa.String(length=16), nullable=False),
                    sa.Column('psnr_db', sa.Float(), nullable=False),
                    sa.Column('ssim', sa.Float(), nullable=False),
                    sa.Column('latency_steps', sa.Integer(), nullable=False),
                    sa.Column('guidance_calls', sa.Integer(), nullable=False),
                    sa.Column('guidance_encodes', sa.Integer(), nullable=False),
                    sa.Column('guidance_decodes', sa.Integer(), nullable=False),
                    sa.Column('reverse_steps', sa.Integer(), nullable=False),
                    sa.Column('wall_ms', sa.Float(), nullable=False),
                    sa.ForeignKeyConstraint(['run_id'], ['runs.id'], ),
                    sa.PrimaryKeyConstraint('id')
                    )
    op.create_table('bounds',
                    sa.Column('id', sa.Integer(), nullable=False),
                    sa.Column('run_id', sa.Integer(), nullable=False),
                    sa.Column('seed', sa.Integer(), nullable=False),
                    sa.Column('chunk', sa.Integer(), nullable=False),
                    sa.Column('eps0', sa.Float(), nullable=False),
                    sa.Column('delta', sa.Float(), nullable=False),
                    sa.Column('eps_final', sa.Float(), nullable=False),
                    sa.Column('Lambda_K', sa.Float(), nullable=False),
                    sa.Column('B_K', sa.Float(), nullable=False),
                    sa.Column('slack', sa.Float(), nullable=False),
                    sa.Column('satisfied', sa.Boolean(), nullable=False),
                    sa.ForeignKeyConstraint(['run_id'], ['runs.id'], ),
                    sa.PrimaryKeyConstraint('id')
                    )
    op.create_index(op.f('ix_bounds_satisfied'), 'bounds', ['satisfied'], unique=False)


def downgrade() -> None:
    op.drop_index(op.f('ix_bounds_satisfied'), table_name='bounds')
    op.drop_table('bounds')
    op.drop_table('metrics')
    op.drop_index(op.f('ix_runs_verb'), table_name='runs')
    op.drop_table('runs')
