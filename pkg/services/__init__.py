"""
Services Module
Analyses over validated platforms. AnalysisService lives in
services.analysis_service since it depends on the PML front end.
"""

from services.platform_service import ensure_valid, flatten, successors, validate_platform
from services.transaction_service import (
    Resolution, enumerate_paths, expand_access, expanded_transactions, resolve_transactions
)
from services.interference_service import (
    Classification, Orbit, Scenario, ScenarioKind, channels, classify, quotient, scenarios,
    validate_symmetry
)
from services.capacity_service import (
    CapacityEntry, CapacityReport, Demand, Verdict, check_capacity, component_demand
)
from services.template_service import (
    check_unitary, instantiate, merge, software_overlay, unitary_violations
)
from services.report_service import build_report, export_dot

__all__ = [
    'ensure_valid', 'flatten', 'successors', 'validate_platform',
    'Resolution', 'enumerate_paths', 'expand_access', 'expanded_transactions', 'resolve_transactions',
    'Classification', 'Orbit', 'Scenario', 'ScenarioKind', 'channels', 'classify', 'quotient',
    'scenarios', 'validate_symmetry',
    'CapacityEntry', 'CapacityReport', 'Demand', 'Verdict', 'check_capacity', 'component_demand',
    'check_unitary', 'instantiate', 'merge', 'software_overlay', 'unitary_violations',
    'build_report', 'export_dot'
]
