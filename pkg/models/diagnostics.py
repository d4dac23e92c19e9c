"""
Diagnostics and Errors
Source locations, the closed diagnostic code set, and the PmlError exception
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional


DIAGNOSTIC_CODES = {
    # Syntax and references
    'E_PARSE': 'syntax error',
    'E_DUP_ID': 'duplicate identifier',
    'E_UNKNOWN_COMPONENT': 'reference to an undeclared component',
    'E_BAD_ID': 'malformed identifier',
    'E_IO': 'model file cannot be read',
    # Platform structure
    'E_NO_INITIATOR': 'platform has no initiator',
    'E_NO_TARGET': 'platform has no target',
    'E_SELF_LINK': 'link from a component to itself',
    'E_DUP_LINK': 'link declared twice',
    'E_BAD_LINK': 'link endpoint is not an atomic component',
    'E_EMPTY_COMPOSITE': 'composite without children',
    'E_NO_SERVICE': 'target lacks the required service',
    'E_CAPACITY_ROLE': 'capacity declared on an initiator',
    'E_CLASSIFICATION': 'simple device without justification',
    'E_BAD_SYMMETRY': 'malformed symmetry class',
    'E_NOT_VALIDATED': 'platform has not been validated',
    # Transactions
    'E_ROLE': 'component has the wrong role',
    'E_BAD_PATH': 'transaction path is not a valid route',
    'E_BAD_RULE': 'invalid expansion rule or payload',
    # Interference
    'E_BAD_N': 'invalid scenario size',
    'E_NOT_SYMMETRIC': 'symmetry class does not induce an automorphism',
    'E_UNVALIDATED_SYMMETRY': 'quotient requested over an invalid symmetry class',
    # Capacity
    'E_OVERFLOW': 'demand exceeds the exact integer bound',
    # Templates
    'E_BAD_SPEC': 'template specification violates its invariants',
    'E_ID_COLLISION': 'fragment identifier already used by the host',
    'E_DANGLING_BINDING': 'fragment binding does not resolve',
    'E_UNITARY_VIOLATION': 'unitary accelerator used by several applications',
    # Warnings
    'W_ABSTRACTION': 'passive accelerator internals assumed non-interfering',
    'W_UNDECLARED_ROUTE': 'declared path is not the only route',
    'W_UNSPECIFIED_DEMAND': 'transaction has no rate or payload',
    'W_UNSPECIFIED_CAPACITY': 'traversed component has no declared capacity',
    'W_UNUSED_INITIATOR': 'initiator carries no transaction',
}


class Severity(str, Enum):
    """Diagnostic severity"""

    ERROR = 'error'
    WARNING = 'warning'


@dataclass(frozen=True)
class SourceSpan:
    """1-based location in a model file"""

    file: str = '<memory>'
    line: int = 1
    column: int = 1

    def __post_init__(self):
        if self.line < 1 or self.column < 1:
            raise ValueError(f"Invalid span {self.line}:{self.column}")

    def __str__(self):
        return f"{self.file}:{self.line}:{self.column}"

    def to_dict(self) -> Dict:
        return {'file': self.file, 'line': self.line, 'column': self.column}


NO_SPAN = SourceSpan()


@dataclass(frozen=True)
class Diagnostic:
    """A located finding of the front end or of a structural check"""

    code: str
    message: str
    span: SourceSpan = NO_SPAN
    severity: Severity = Severity.ERROR

    def __post_init__(self):
        if self.code not in DIAGNOSTIC_CODES:
            raise ValueError(f"Unknown diagnostic code: {self.code}")

    @classmethod
    def error(cls, code: str, message: str, span: Optional[SourceSpan] = None) -> 'Diagnostic':
        return cls(code, message, span or NO_SPAN, Severity.ERROR)

    @classmethod
    def warning(cls, code: str, message: str, span: Optional[SourceSpan] = None) -> 'Diagnostic':
        return cls(code, message, span or NO_SPAN, Severity.WARNING)

    @property
    def is_error(self) -> bool:
        return self.severity == Severity.ERROR

    def __str__(self):
        return f"{self.span}: {self.severity.value} {self.code}: {self.message}"

    def to_dict(self) -> Dict:
        return {
            'code': self.code,
            'severity': self.severity.value,
            'message': self.message,
            'span': self.span.to_dict()
        }


def has_errors(diagnostics: List[Diagnostic]) -> bool:
    """True when at least one diagnostic is an error"""
    return any(d.is_error for d in diagnostics)


class PmlError(Exception):
    """Raised by operations whose contract names an error code"""

    def __init__(
        self,
        code: str,
        message: str,
        span: Optional[SourceSpan] = None,
        diagnostics: Optional[List[Diagnostic]] = None
    ):
        if code not in DIAGNOSTIC_CODES:
            raise ValueError(f"Unknown diagnostic code: {code}")
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message
        self.span = span or NO_SPAN
        self.diagnostics = list(diagnostics or [Diagnostic.error(code, message, span)])

    def to_dict(self) -> Dict:
        return {
            'success': False,
            'code': self.code,
            'error': self.message,
            'diagnostics': [d.to_dict() for d in self.diagnostics]
        }
