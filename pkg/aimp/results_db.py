"""
Run history for corpus evaluations.
Uses SQLite for persistence with per-problem status tracking.
"""
import json
import sqlite3
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional


class ProblemStatus(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    ERROR = "ERROR"
    UNCHECKED = "UNCHECKED"


class ResultsDatabase:
    def __init__(self, db_path: str = "./data/results.db"):
        self.db_path = str(db_path)
        Path(self.db_path).parent.mkdir(parents=True, exist_ok=True)
        self.init_db()

    def get_connection(self):
        return sqlite3.connect(self.db_path)

    def init_db(self):
        """Initialize database schema"""
        conn = self.get_connection()
        cursor = conn.cursor()

        cursor.execute("""
            CREATE TABLE IF NOT EXISTS runs (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                corpus TEXT NOT NULL,
                started_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP,
                total INTEGER NOT NULL,
                passed INTEGER NOT NULL,
                failed INTEGER NOT NULL,
                errors INTEGER NOT NULL,
                accuracy REAL NOT NULL
            )
        """)

        cursor.execute("""
            CREATE TABLE IF NOT EXISTS problem_results (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                run_id INTEGER NOT NULL,
                problem_index INTEGER NOT NULL,
                problem TEXT NOT NULL,
                expected TEXT,
                answers TEXT,
                status TEXT NOT NULL,
                error TEXT,
                created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP,
                FOREIGN KEY (run_id) REFERENCES runs(id)
            )
        """)

        conn.commit()
        conn.close()

    def record_run(self, report) -> int:
        """Store a CorpusReport and its per-problem results; returns the run id"""
        conn = self.get_connection()
        cursor = conn.cursor()

        cursor.execute("""
            INSERT INTO runs (corpus, total, passed, failed, errors, accuracy)
            VALUES (?, ?, ?, ?, ?, ?)
        """, (report.corpus, report.total, report.passed, report.failed, report.errors, report.accuracy))
        run_id = cursor.lastrowid

        cursor.executemany("""
            INSERT INTO problem_results (
                run_id, problem_index, problem, expected, answers, status, error
            ) VALUES (?, ?, ?, ?, ?, ?, ?)
        """, [
            (
                run_id,
                result.index,
                result.problem,
                json.dumps(result.expected) if result.expected is not None else None,
                json.dumps(result.answers),
                result.status.value,
                result.error,
            )
            for result in report.results
        ])

        conn.commit()
        conn.close()
        return run_id

    def get_run_results(self, run_id: int, status: Optional[ProblemStatus] = None) -> List[Dict]:
        """Get one run's problem results, optionally filtered by status"""
        conn = self.get_connection()
        conn.row_factory = sqlite3.Row
        cursor = conn.cursor()

        if status:
            cursor.execute(
                "SELECT * FROM problem_results WHERE run_id = ? AND status = ? ORDER BY problem_index",
                (run_id, status.value),
            )
        else:
            cursor.execute("SELECT * FROM problem_results WHERE run_id = ? ORDER BY problem_index", (run_id,))

        rows = [dict(row) for row in cursor.fetchall()]
        conn.close()

        for row in rows:
            row["expected"] = json.loads(row["expected"]) if row["expected"] else None
            row["answers"] = json.loads(row["answers"]) if row["answers"] else []
        return rows

    def get_metrics(self) -> Dict:
        """Totals over all recorded runs"""
        conn = self.get_connection()
        cursor = conn.cursor()

        cursor.execute("SELECT COUNT(*) FROM runs")
        total_runs = cursor.fetchone()[0]

        cursor.execute("SELECT COUNT(*) FROM problem_results")
        total_problems = cursor.fetchone()[0]

        cursor.execute("SELECT status, COUNT(*) FROM problem_results GROUP BY status")
        status_counts = {row[0]: row[1] for row in cursor.fetchall()}

        cursor.execute("SELECT accuracy FROM runs ORDER BY id DESC LIMIT 1")
        latest = cursor.fetchone()

        conn.close()

        return {
            "total_runs": total_runs,
            "total_problems": total_problems,
            "passed": status_counts.get(ProblemStatus.PASS.value, 0),
            "failed": status_counts.get(ProblemStatus.FAIL.value, 0),
            "latest_accuracy": latest[0] if latest else None,
            "status_breakdown": status_counts,
        }

    def clear_all_data(self):
        """Delete every recorded run and its problem results"""
        conn = self.get_connection()
        cursor = conn.cursor()

        cursor.execute("DELETE FROM problem_results")
        cursor.execute("DELETE FROM runs")

        conn.commit()
        conn.close()
