"""JSON Lines results cache for verification reports."""

import os
from typing import Dict, Optional, Tuple

from pydantic import ValidationError

from cyclonum.harness import TheoremRecord, VerificationReport
from cyclonum.utils import log_event

ConfigKey = Tuple[int, int, int, int]


class ResultsCache:
    """
    File-backed store of VerificationReports, one JSON object per line.

    Lines are append-only while the cache is open; a later line for the same
    (p, n, e, k) supersedes earlier ones. close() rewrites the file with one
    line per config when anything was superseded.
    """

    def __init__(self, path: str):
        self.path = path
        self._reports: Dict[ConfigKey, VerificationReport] = {}
        self._records: Dict[Tuple[int, int, int, int, str], TheoremRecord] = {}
        self._lines = 0
        self._closed = False
        self._load()

    def _load(self):
        """Read the existing file, skipping lines that fail validation."""
        if not os.path.exists(self.path):
            log_event("results_cache_created", {"path": self.path})
            return

        skipped = 0
        with open(self.path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    report = VerificationReport.model_validate_json(line)
                except ValidationError as e:
                    skipped += 1
                    log_event(
                        "results_cache_line_invalid",
                        {"path": self.path, "error": str(e).splitlines()[0]},
                        level="WARNING",
                    )
                    continue
                self._index(report)
                self._lines += 1

        log_event(
            "results_cache_loaded",
            {"path": self.path, "reports": len(self._reports), "skipped": skipped},
        )

    def _index(self, report: VerificationReport):
        key = report.key
        old = self._reports.get(key)
        if old is not None:
            for r in old.records:
                self._records.pop((*key, r.theorem_id), None)
        self._reports[key] = report
        for r in report.records:
            self._records[(*key, r.theorem_id)] = r

    def health_check(self) -> bool:
        """True if the cache file's directory is writable and the cache is open."""
        if self._closed:
            return False
        directory = os.path.dirname(os.path.abspath(self.path))
        healthy = os.access(directory, os.W_OK)
        if not healthy:
            log_event("results_cache_health_check_failed", {"path": self.path}, level="ERROR")
        return healthy

    def upsert_report(self, report: VerificationReport) -> ConfigKey:
        """
        Insert or replace the report for its (p, n, e, k).

        Returns:
            The config key
        """
        try:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(report.to_jsonl() + "\n")
        except OSError as e:
            log_event(
                "results_cache_upsert_failed",
                {"path": self.path, "key": list(report.key), "error": str(e)},
                level="ERROR",
            )
            raise
        replaced = report.key in self._reports
        self._index(report)
        self._lines += 1
        log_event(
            "report_upserted",
            {"key": list(report.key), "records": len(report.records), "replaced": replaced},
            level="DEBUG",
        )
        return report.key

    def get_report(self, p: int, n: int, e: int, k: int) -> Optional[VerificationReport]:
        return self._reports.get((p, n, e, k))

    def get_record(self, p: int, n: int, e: int, k: int, theorem_id: str) -> Optional[TheoremRecord]:
        return self._records.get((p, n, e, k, theorem_id))

    def count_reports(self) -> int:
        return len(self._reports)

    def close(self):
        """Compact superseded lines and release the cache."""
        if self._closed:
            return
        if self._lines > len(self._reports):
            tmp = self.path + ".tmp"
            with open(tmp, "w", encoding="utf-8") as fh:
                for key in sorted(self._reports):
                    fh.write(self._reports[key].to_jsonl() + "\n")
            os.replace(tmp, self.path)
            log_event(
                "results_cache_compacted",
                {"path": self.path, "lines": self._lines, "reports": len(self._reports)},
            )
            self._lines = len(self._reports)
        self._closed = True
        _caches.pop(os.path.abspath(self.path), None)
        log_event("results_cache_closed", {"path": self.path})


# One cache instance per file path
_caches: Dict[str, ResultsCache] = {}


def get_results_cache(path: str) -> ResultsCache:
    """Get or create the cache for a path."""
    key = os.path.abspath(path)
    if key not in _caches:
        _caches[key] = ResultsCache(path)
    return _caches[key]
