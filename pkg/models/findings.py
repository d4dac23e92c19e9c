"""
Report Models
Findings tagged with AMC objectives and the versioned report envelope
"""

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

from config import Config


@dataclass(frozen=True)
class Finding:
    """One analysis result with a content-derived stable id"""

    id: str
    kind: str
    subject: Tuple[str, ...]
    amc_tags: Tuple[str, ...]
    details: Dict[str, Any] = field(default_factory=dict, hash=False)
    severity: str = 'info'  # info, warning, error

    def __post_init__(self):
        if self.kind not in Config.FINDING_KINDS:
            raise ValueError(f"Unknown finding kind: {self.kind}")
        if not self.amc_tags:
            raise ValueError(f"Finding {self.id} carries no AMC tag")
        unknown = [t for t in self.amc_tags if t not in Config.AMC_TAGS]
        if unknown:
            raise ValueError(f"Unknown AMC tags: {', '.join(unknown)}")

    @property
    def is_error(self) -> bool:
        return self.severity == 'error'

    def to_dict(self) -> Dict:
        return {
            'id': self.id,
            'kind': self.kind,
            'subject': list(self.subject),
            'amc_tags': list(self.amc_tags),
            'severity': self.severity,
            'details': self.details
        }


@dataclass
class Report:
    """Findings plus the assumptions they rest on"""

    platform: Dict[str, Any]
    findings: List[Finding] = field(default_factory=list)
    assumptions: List[str] = field(default_factory=list)
    schema: str = Config.REPORT_SCHEMA

    def by_kind(self, kind: str) -> List[Finding]:
        return [f for f in self.findings if f.kind == kind]

    def find(self, finding_id: str):
        return next((f for f in self.findings if f.id == finding_id), None)

    @property
    def has_errors(self) -> bool:
        diagnostics = self.platform.get('diagnostics', [])
        return any(f.is_error for f in self.findings) or any(d['severity'] == 'error' for d in diagnostics)

    def to_dict(self) -> Dict:
        return {
            'schema': self.schema,
            'platform': self.platform,
            'findings': [f.to_dict() for f in self.findings],
            'assumptions': list(self.assumptions)
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + '\n'
