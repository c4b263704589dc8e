"""
SQLite run log connection and utilities.
"""

import logging
import os
import sqlite3

from stvaudit import config

logger = logging.getLogger(__name__)

_connection: sqlite3.Connection | None = None


def get_connection() -> sqlite3.Connection:
    """Get or create the SQLite connection (singleton)."""
    global _connection
    if _connection is None:
        directory = os.path.dirname(config.DB_PATH)
        if directory:
            os.makedirs(directory, exist_ok=True)
        _connection = sqlite3.connect(config.DB_PATH, check_same_thread=False)
        _connection.row_factory = sqlite3.Row
        _connection.execute("PRAGMA foreign_keys=ON")
        logger.info("Run log connected: %s", config.DB_PATH)
    return _connection


def execute(sql: str, params: tuple = ()) -> sqlite3.Cursor:
    """Execute SQL and return cursor."""
    conn = get_connection()
    cursor = conn.execute(sql, params)
    conn.commit()
    return cursor


def fetchone(sql: str, params: tuple = ()) -> sqlite3.Row | None:
    """Execute SQL and return one row."""
    conn = get_connection()
    return conn.execute(sql, params).fetchone()


def fetchall(sql: str, params: tuple = ()) -> list[sqlite3.Row]:
    """Execute SQL and return all rows."""
    conn = get_connection()
    return conn.execute(sql, params).fetchall()


def close():
    """Close the database connection."""
    global _connection
    if _connection:
        _connection.close()
        _connection = None
        logger.info("Run log connection closed")


def start_run(command: str, inputs: list[str]) -> int:
    cursor = execute(
        "INSERT INTO runs (command, inputs, started_at) VALUES (?, ?, CURRENT_TIMESTAMP)",
        (command, '\n'.join(inputs)),
    )
    return cursor.lastrowid


def finish_run(run_id: int, exit_code: int):
    execute(
        "UPDATE runs SET finished_at = CURRENT_TIMESTAMP, exit_code = ? WHERE id = ?",
        (exit_code, run_id),
    )


def record_election(run_id: int, path: str, content_hash: str | None, status: str,
                    voters: int | None = None, candidates: int | None = None,
                    seats: int | None = None, probes: int = 0, truncated: bool = False,
                    certificates: int = 0, error: str | None = None, duration_ms: int = 0):
    """Log one election's outcome within a run."""
    execute(
        """INSERT INTO run_elections
           (run_id, path, content_hash, status, voters, candidates, seats,
            probes, truncated, certificates, error, duration_ms)
           VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)""",
        (run_id, path, content_hash, status, voters, candidates, seats,
         probes, int(truncated), certificates, error, duration_ms),
    )
