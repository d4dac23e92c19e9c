"""
Transaction Models
Applications, transactions (initiator-to-target paths) and access expansion rules
"""

from dataclasses import dataclass, field, replace
from typing import Dict, Tuple

from models.diagnostics import SourceSpan, NO_SPAN


@dataclass(frozen=True)
class ExpansionRule:
    """How one access of a tightly coupled unit splits into bus transactions"""

    width: int
    alignment: int
    line: int

    def to_dict(self) -> Dict:
        return {'width': self.width, 'alignment': self.alignment, 'line': self.line}


@dataclass(frozen=True)
class Transaction:
    """Footprint of one use of the platform: a path ending on a target service"""

    name: str
    path: Tuple[str, ...]
    service: str
    rate: int = 0       # transactions per second, 0 = unspecified
    payload: int = 0    # bytes per transaction, 0 = unspecified
    app: str = ''
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)

    @property
    def initiator(self) -> str:
        return self.path[0]

    @property
    def target(self) -> str:
        return self.path[-1]

    @property
    def key(self) -> str:
        """Unique reference across the platform"""
        return f"{self.app}.{self.name}"

    @property
    def demand(self) -> int:
        return self.rate * self.payload

    @property
    def is_quantified(self) -> bool:
        return self.rate > 0 and self.payload > 0

    def signature(self) -> Tuple:
        """Application-independent identity used by symmetry reduction"""
        return (self.path, self.service, self.rate, self.payload)

    def sort_key(self) -> Tuple:
        return (self.path[0], self.app, self.name)

    def to_dict(self) -> Dict:
        return {
            'name': self.name,
            'app': self.app,
            'path': list(self.path),
            'service': self.service,
            'rate': self.rate,
            'payload': self.payload
        }


@dataclass(frozen=True)
class Application:
    """A hosted application and the transactions it issues"""

    name: str
    transactions: Tuple[Transaction, ...] = ()
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)

    def canonical(self) -> 'Application':
        ordered = sorted(self.transactions, key=lambda t: t.name)
        return replace(self, transactions=tuple(ordered))

    def to_dict(self) -> Dict:
        return {
            'name': self.name,
            'transactions': [t.to_dict() for t in self.transactions]
        }
