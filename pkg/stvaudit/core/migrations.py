"""
Run log schema migrations with versioning.
"""

import logging

from stvaudit.core.database import execute, fetchone, get_connection

logger = logging.getLogger(__name__)

MIGRATIONS = [
    # Migration 1: runs and per-election outcomes
    """
    CREATE TABLE IF NOT EXISTS runs (
        id INTEGER PRIMARY KEY AUTOINCREMENT,
        command TEXT NOT NULL,
        inputs TEXT NOT NULL DEFAULT '',
        started_at TIMESTAMP NOT NULL DEFAULT CURRENT_TIMESTAMP,
        finished_at TIMESTAMP,
        exit_code INTEGER
    );

    CREATE TABLE IF NOT EXISTS run_elections (
        id INTEGER PRIMARY KEY AUTOINCREMENT,
        run_id INTEGER NOT NULL,
        path TEXT NOT NULL,
        content_hash TEXT,
        status TEXT NOT NULL,
        voters INTEGER,
        candidates INTEGER,
        seats INTEGER,
        probes INTEGER DEFAULT 0,
        truncated INTEGER DEFAULT 0,
        certificates INTEGER DEFAULT 0,
        error TEXT,
        duration_ms INTEGER DEFAULT 0,
        FOREIGN KEY (run_id) REFERENCES runs(id)
    );
    CREATE INDEX IF NOT EXISTS idx_run_elections_run ON run_elections(run_id);
    CREATE INDEX IF NOT EXISTS idx_run_elections_hash ON run_elections(content_hash);
    """,
]


def _schema_version() -> int:
    execute(
        "CREATE TABLE IF NOT EXISTS schema_version ("
        "version INTEGER PRIMARY KEY, applied_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP)"
    )
    row = fetchone("SELECT MAX(version) AS v FROM schema_version")
    return row['v'] or 0


def run_migrations():
    """Bring the run log schema up to the latest version."""
    conn = get_connection()
    current = _schema_version()
    for version, script in enumerate(MIGRATIONS, 1):
        if version <= current:
            continue
        logger.info("Applying run log migration %d", version)
        conn.executescript(script)
        conn.execute("INSERT INTO schema_version (version) VALUES (?)", (version,))
        conn.commit()
    logger.debug("Run log schema at version %d", len(MIGRATIONS))
