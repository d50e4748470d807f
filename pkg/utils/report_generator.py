"""
Certificate Writer
Stores check reports as a JSON Lines certificate and a CSV summary.
"""

from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional

from core.element_io import dumps
from core.structure import CheckReport
from utils.helpers import reports_frame
from utils.logger import logger


class CertificateWriter:
    def __init__(self, output_dir: Path, timestamp: Optional[str] = None):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.timestamp = timestamp or datetime.now().strftime('%Y%m%d_%H%M%S')

    def write_all(self, reports: List[CheckReport], name: str = "verify") -> Dict[str, Path]:
        if not reports:
            logger.warning("⚠️ No reports to write")
            return {}
        return {
            'certificate': self._write_certificate(reports, name),
            'summary': self._write_summary(reports, name),
        }

    def _write_certificate(self, reports: List[CheckReport], name: str) -> Path:
        """One compact JSON document per line, in run order."""
        path = self.output_dir / f"CERTIFICATE_{name.upper()}_{self.timestamp}.jsonl"
        with open(path, 'w', encoding='utf-8') as f:
            for report in reports:
                f.write(dumps(report.to_dict()) + "\n")
        logger.info(f"  ✓ Certificate: {path.name}")
        return path

    def _write_summary(self, reports: List[CheckReport], name: str) -> Path:
        df = reports_frame(reports)
        path = self.output_dir / f"SUMMARY_{name.upper()}_{self.timestamp}.csv"
        df.to_csv(path, index=False)
        logger.info(f"  ✓ Summary table: {path.name}")
        return path
