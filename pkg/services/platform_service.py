"""
Platform Service - structural validation, flattening and graph queries
"""

import logging
import re
from collections import Counter
from typing import List, Union

from models.diagnostics import Diagnostic, PmlError
from models.platform import (
    Complexity, Component, FlatPlatform, Platform, Role, iter_atoms, iter_composites
)

logger = logging.getLogger(__name__)

IDENT_RE = re.compile(r'^[A-Za-z_][A-Za-z0-9_]*$')


def validate_platform(platform: Platform) -> List[Diagnostic]:
    """
    Check every structural invariant of a platform

    Args:
        platform: parsed or programmatically built platform

    Returns:
        All violations found (empty list = valid). A valid platform is marked
        so that flatten/render accept it.
    """
    diagnostics: List[Diagnostic] = []

    if not IDENT_RE.match(platform.name or ''):
        diagnostics.append(Diagnostic.error('E_BAD_ID', f"Invalid platform name '{platform.name}'", platform.span))

    diagnostics.extend(_check_components(platform))

    atoms = dict(iter_atoms(platform.components))
    composites = dict(iter_composites(platform.components))

    roles = Counter(c.role for c in atoms.values())
    if roles[Role.INITIATOR] == 0:
        diagnostics.append(Diagnostic.error('E_NO_INITIATOR', f"Platform '{platform.name}' declares no initiator", platform.span))
    if roles[Role.TARGET] == 0:
        diagnostics.append(Diagnostic.error('E_NO_TARGET', f"Platform '{platform.name}' declares no target", platform.span))

    diagnostics.extend(_check_links(platform, atoms, composites))
    diagnostics.extend(_check_symmetries(platform, atoms, composites))
    diagnostics.extend(_check_applications(platform, atoms))

    if diagnostics:
        logger.debug(f"Platform {platform.name}: {len(diagnostics)} diagnostics")
    else:
        object.__setattr__(platform, 'validated', True)
    return diagnostics


def _check_components(platform: Platform) -> List[Diagnostic]:
    diagnostics = []
    seen = set()

    def visit(component: Component, prefix: str):
        qid = f"{prefix}{component.name}"
        span = component.span
        if not IDENT_RE.match(component.name or ''):
            diagnostics.append(Diagnostic.error('E_BAD_ID', f"Invalid component name '{component.name}'", span))
        if qid in seen:
            diagnostics.append(Diagnostic.error('E_DUP_ID', f"Component '{qid}' declared twice", span))
        seen.add(qid)

        if component.role == Role.COMPOSITE:
            if not component.children:
                diagnostics.append(Diagnostic.error('E_EMPTY_COMPOSITE', f"Composite '{qid}' has no children", span))
            if component.capacity is not None:
                diagnostics.append(Diagnostic.error('E_CAPACITY_ROLE', f"Capacity declared on composite '{qid}'", span))
            for child in component.children:
                visit(child, f"{qid}.")
            return

        if component.children:
            diagnostics.append(Diagnostic.error('E_ROLE', f"Atomic component '{qid}' has children", span))
        if component.role == Role.TARGET and not component.services:
            diagnostics.append(Diagnostic.error('E_NO_SERVICE', f"Target '{qid}' exposes no service", span))
        if component.capacity is not None:
            if component.role == Role.INITIATOR:
                diagnostics.append(Diagnostic.error('E_CAPACITY_ROLE', f"Capacity declared on initiator '{qid}'", span))
            elif component.capacity < 0:
                diagnostics.append(Diagnostic.error('E_CAPACITY_ROLE', f"Negative capacity on '{qid}'", span))
        for service in sorted(component.services):
            if not IDENT_RE.match(service):
                diagnostics.append(Diagnostic.error('E_BAD_ID', f"Invalid service name '{service}' on '{qid}'", span))
        classification = component.classification
        if classification and classification.complexity == Complexity.SIMPLE and not classification.notes.strip():
            diagnostics.append(Diagnostic.error(
                'E_CLASSIFICATION', f"Simple device '{qid}' needs a written justification", span
            ))
        rule = component.expansion
        if rule is not None:
            if component.role != Role.INITIATOR:
                diagnostics.append(Diagnostic.error('E_ROLE', f"Access rule on non-initiator '{qid}'", span))
            if min(rule.width, rule.alignment, rule.line) <= 0:
                diagnostics.append(Diagnostic.error('E_BAD_RULE', f"Access rule on '{qid}' has non-positive fields", span))

    for top in platform.components:
        visit(top, '')
    return diagnostics


def _check_links(platform: Platform, atoms, composites) -> List[Diagnostic]:
    diagnostics = []
    seen = set()
    for link in platform.links:
        for endpoint in (link.src, link.dst):
            if endpoint in composites:
                diagnostics.append(Diagnostic.error('E_BAD_LINK', f"Link endpoint '{endpoint}' is a composite", link.span))
            elif endpoint not in atoms:
                diagnostics.append(Diagnostic.error('E_UNKNOWN_COMPONENT', f"Unknown component '{endpoint}'", link.span))
        if link.src == link.dst:
            diagnostics.append(Diagnostic.error('E_SELF_LINK', f"Self-link at {link.src}", link.span))
        pair = (link.src, link.dst)
        if pair in seen:
            diagnostics.append(Diagnostic.error('E_DUP_LINK', f"Duplicate link {link.src} -> {link.dst}", link.span))
        seen.add(pair)
    return diagnostics


def _check_symmetries(platform: Platform, atoms, composites) -> List[Diagnostic]:
    diagnostics = []
    names = set()
    for symmetry in platform.symmetries:
        span = symmetry.span
        if symmetry.name in names:
            diagnostics.append(Diagnostic.error('E_DUP_ID', f"Symmetry class '{symmetry.name}' declared twice", span))
        names.add(symmetry.name)
        if len(symmetry.members) < 2:
            diagnostics.append(Diagnostic.error('E_BAD_SYMMETRY', f"Symmetry class '{symmetry.name}' needs two members", span))
        if len(set(symmetry.members)) != len(symmetry.members):
            diagnostics.append(Diagnostic.error('E_BAD_SYMMETRY', f"Symmetry class '{symmetry.name}' repeats a member", span))
        member_roles = set()
        for member in symmetry.members:
            if member in composites:
                diagnostics.append(Diagnostic.error('E_BAD_SYMMETRY', f"Symmetry member '{member}' is a composite", span))
            elif member not in atoms:
                diagnostics.append(Diagnostic.error('E_UNKNOWN_COMPONENT', f"Unknown component '{member}'", span))
            else:
                member_roles.add(atoms[member].role)
        if len(member_roles) > 1:
            diagnostics.append(Diagnostic.error(
                'E_BAD_SYMMETRY', f"Symmetry class '{symmetry.name}' mixes roles", span
            ))
    return diagnostics


def _check_applications(platform: Platform, atoms) -> List[Diagnostic]:
    diagnostics = []
    app_names = set()
    for app in platform.applications:
        if app.name in app_names:
            diagnostics.append(Diagnostic.error('E_DUP_ID', f"Application '{app.name}' declared twice", app.span))
        app_names.add(app.name)
        txn_names = set()
        for txn in app.transactions:
            if txn.name in txn_names:
                diagnostics.append(Diagnostic.error(
                    'E_DUP_ID', f"Transaction '{txn.name}' declared twice in '{app.name}'", txn.span
                ))
            txn_names.add(txn.name)
            if len(txn.path) < 2:
                diagnostics.append(Diagnostic.error(
                    'E_BAD_PATH', f"Transaction '{txn.key}' needs an initiator and a target", txn.span
                ))
            for hop in txn.path:
                if hop not in atoms:
                    diagnostics.append(Diagnostic.error('E_UNKNOWN_COMPONENT', f"Unknown component '{hop}'", txn.span))
            if txn.rate < 0 or txn.payload < 0:
                diagnostics.append(Diagnostic.error('E_BAD_RULE', f"Negative rate or payload on '{txn.key}'", txn.span))
    return diagnostics


def flatten(platform: Union[Platform, FlatPlatform]) -> FlatPlatform:
    """
    Fold composites into qualified ids

    Raises:
        PmlError: E_NOT_VALIDATED when the platform was never validated
    """
    if isinstance(platform, FlatPlatform):
        return platform
    if not platform.validated:
        raise PmlError('E_NOT_VALIDATED', f"Platform '{platform.name}' must be validated before flattening", platform.span)
    return platform.flat


def successors(platform: Union[Platform, FlatPlatform], component_id: str) -> List[str]:
    """Targets of the links leaving a component, ordered by id"""
    flat = flatten(platform)
    if component_id not in flat.by_id:
        raise PmlError('E_UNKNOWN_COMPONENT', f"Unknown component '{component_id}'")
    return sorted(flat.graph.successors(component_id))


def ensure_valid(platform: Platform) -> Platform:
    """Validate once and raise with every diagnostic on failure"""
    if platform.validated:
        return platform
    diagnostics = validate_platform(platform)
    if diagnostics:
        raise PmlError(diagnostics[0].code, diagnostics[0].message, diagnostics[0].span, diagnostics)
    return platform
