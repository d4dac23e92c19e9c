"""
Domain Models for the platform interference toolkit
"""

from models.diagnostics import (
    DIAGNOSTIC_CODES, Diagnostic, NO_SPAN, PmlError, Severity, SourceSpan, has_errors
)
from models.transaction import Application, ExpansionRule, Transaction
from models.platform import (
    AcceleratorTag, Complexity, Component, Coupling, DeviceClassification, FlatPlatform,
    Link, Origin, Platform, Role, SymmetryClass, structurally_equal
)
from models.findings import Finding, Report
from models.template import (
    Annotation, ConfigAccess, Fragment, InducedAccess, RuntimeSpec, TemplateSpec,
    TransactionTemplate
)

__all__ = [
    'DIAGNOSTIC_CODES', 'Diagnostic', 'NO_SPAN', 'PmlError', 'Severity', 'SourceSpan', 'has_errors',
    'Application', 'ExpansionRule', 'Transaction',
    'AcceleratorTag', 'Complexity', 'Component', 'Coupling', 'DeviceClassification',
    'FlatPlatform', 'Link', 'Origin', 'Platform', 'Role', 'SymmetryClass', 'structurally_equal',
    'Finding', 'Report',
    'Annotation', 'ConfigAccess', 'Fragment', 'InducedAccess', 'RuntimeSpec', 'TemplateSpec',
    'TransactionTemplate'
]
