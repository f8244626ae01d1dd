import json
import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import List, Optional

from cubica.config import settings
from cubica.models import Report

logger = logging.getLogger(__name__)


class ReportSink(ABC):
    """Abstract report destination"""

    @abstractmethod
    def write(self, report: Report) -> None:
        """Store a finished report"""
        pass

    @abstractmethod
    def read_all(self) -> List[Report]:
        """All reports written so far, oldest first"""
        pass


class MemoryReportSink(ReportSink):
    """In-memory sink for tests and plain stdout runs"""

    def __init__(self):
        self.reports: List[Report] = []

    def write(self, report: Report) -> None:
        self.reports.append(report.finalize())

    def read_all(self) -> List[Report]:
        return list(self.reports)


class FileReportSink(ReportSink):
    """UTF-8 JSON file holding a list of report documents"""

    def __init__(self, path: Optional[str] = None, append: bool = True):
        self.path = Path(path or settings.REPORT_PATH)
        self.append = append

    def write(self, report: Report) -> None:
        previous = self.read_all() if self.append else []
        documents = [r.model_dump(mode="json", by_alias=True) for r in previous]
        documents.append(report.finalize().model_dump(mode="json", by_alias=True))
        self.path.write_text(json.dumps(documents, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        logger.info(f"Wrote report {report.suite} to {self.path}")

    def read_all(self) -> List[Report]:
        if not self.path.exists():
            return []
        try:
            documents = json.loads(self.path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            logger.error(f"Ignoring unreadable report file {self.path}: {e}")
            return []
        return [Report.model_validate(document) for document in documents]


_sink_instance: Optional[ReportSink] = None


def get_report_sink(path: Optional[str] = None) -> ReportSink:
    """Get the report sink; an explicit path always gives a file sink"""
    global _sink_instance

    if path is not None:
        return FileReportSink(path, append=False)
    if _sink_instance is None:
        if settings.REPORT_SINK.lower() == "file":
            _sink_instance = FileReportSink()
        else:
            _sink_instance = MemoryReportSink()

    return _sink_instance
