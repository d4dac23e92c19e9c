"""
Transaction Service - path enumeration, transaction checking and access expansion
"""

import logging
from dataclasses import dataclass, field, replace
from math import gcd
from typing import List, Union

import networkx as nx

from config import Config
from models.diagnostics import Diagnostic, PmlError, has_errors
from models.platform import FlatPlatform, Platform, Role
from models.transaction import ExpansionRule, Transaction
from services.platform_service import flatten

logger = logging.getLogger(__name__)


@dataclass
class Resolution:
    """Transactions that satisfy the path invariants, plus diagnostics for the rest"""

    transactions: List[Transaction] = field(default_factory=list)
    diagnostics: List[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not has_errors(self.diagnostics)

    def to_dict(self) -> dict:
        return {
            'transactions': [t.to_dict() for t in self.transactions],
            'diagnostics': [d.to_dict() for d in self.diagnostics]
        }


def enumerate_paths(platform: Union[Platform, FlatPlatform], src: str, dst: str) -> List[List[str]]:
    """
    All simple routes from an initiator to a target through transporters

    Args:
        platform: validated platform
        src: initiator id
        dst: target id

    Returns:
        Paths in lexicographic order of their component ids (empty when unreachable)
    """
    flat = flatten(platform)
    for endpoint in (src, dst):
        if endpoint not in flat.by_id:
            raise PmlError('E_UNKNOWN_COMPONENT', f"Unknown component '{endpoint}'")
    if flat.role_of(src) != Role.INITIATOR:
        raise PmlError('E_ROLE', f"'{src}' is a {flat.role_of(src).value}, not an initiator")
    if flat.role_of(dst) != Role.TARGET:
        raise PmlError('E_ROLE', f"'{dst}' is a {flat.role_of(dst).value}, not a target")

    # routes may only cross transporters
    allowed = set(flat.transporters) | {src, dst}
    routable = flat.graph.subgraph(allowed)
    paths = sorted(nx.all_simple_paths(routable, src, dst, cutoff=Config.PATH_CUTOFF))
    logger.debug(f"{len(paths)} paths from {src} to {dst}")
    return paths


def _check_path(flat: FlatPlatform, txn: Transaction) -> List[Diagnostic]:
    path = txn.path
    if len(path) < 2:
        return [Diagnostic.error('E_BAD_PATH', f"Transaction '{txn.key}' needs an initiator and a target", txn.span)]
    for hop in path:
        if hop not in flat.by_id:
            return [Diagnostic.error('E_UNKNOWN_COMPONENT', f"Unknown component '{hop}' in '{txn.key}'", txn.span)]
    if len(set(path)) != len(path):
        return [Diagnostic.error('E_BAD_PATH', f"Transaction '{txn.key}' revisits a component", txn.span)]

    last = len(path) - 1
    for i, hop in enumerate(path):
        expected = Role.INITIATOR if i == 0 else Role.TARGET if i == last else Role.TRANSPORTER
        actual = flat.role_of(hop)
        if actual != expected:
            return [Diagnostic.error(
                'E_ROLE', f"'{hop}' at position {i} of '{txn.key}' is a {actual.value}, expected {expected.value}", txn.span
            )]
        if i < last and (hop, path[i + 1]) not in flat.link_set:
            return [Diagnostic.error(
                'E_BAD_PATH', f"No link for hop {hop} -> {path[i + 1]} in '{txn.key}'", txn.span
            )]

    target = flat.by_id[txn.target]
    if txn.service not in target.services:
        return [Diagnostic.error(
            'E_NO_SERVICE', f"Target '{txn.target}' does not expose '{txn.service}' used by '{txn.key}'", txn.span
        )]
    return []


def resolve_transactions(platform: Union[Platform, FlatPlatform]) -> Resolution:
    """
    Check every declared transaction against the path invariants

    Each invalid transaction gets one error naming its first bad hop or the
    missing service. Valid transactions may still carry warnings.
    """
    flat = flatten(platform)
    resolution = Resolution()
    for txn in flat.transactions():
        errors = _check_path(flat, txn)
        if errors:
            resolution.diagnostics.extend(errors)
            continue
        resolution.transactions.append(txn)

        routes = enumerate_paths(flat, txn.initiator, txn.target)
        if len(routes) > 1:
            resolution.diagnostics.append(Diagnostic.warning(
                'W_UNDECLARED_ROUTE',
                f"'{txn.key}' declares one of {len(routes)} routes from {txn.initiator} to {txn.target}",
                txn.span
            ))
        if not txn.is_quantified:
            resolution.diagnostics.append(Diagnostic.warning(
                'W_UNSPECIFIED_DEMAND', f"'{txn.key}' has no rate or payload", txn.span
            ))

    logger.info(
        f"Resolved {len(resolution.transactions)} transactions on {flat.name} "
        f"({len(resolution.diagnostics)} diagnostics)"
    )
    return resolution


def checked_transactions(platform: Union[Platform, FlatPlatform]) -> List[Transaction]:
    """Declared transactions whose path passes every check; scenarios and demand are built on these"""
    flat = flatten(platform)
    return [t for t in flat.transactions() if not _check_path(flat, t)]


def worst_offset(rule: ExpansionRule) -> int:
    """Largest in-line offset an access aligned on rule.alignment can start at"""
    return rule.line - gcd(rule.alignment, rule.line)


def expand_access(txn: Transaction, rule: ExpansionRule) -> List[Transaction]:
    """
    Split one access into line-sized bus transactions, assuming worst misalignment

    Args:
        txn: transaction issued by the host core
        rule: access width, address alignment and line size in bytes

    Returns:
        Sub-transactions on the same path whose payloads sum to txn.payload
    """
    if min(rule.width, rule.alignment, rule.line) <= 0:
        raise PmlError('E_BAD_RULE', f"Expansion rule fields must be positive: {rule}")
    if txn.payload <= 0:
        raise PmlError('E_BAD_RULE', f"'{txn.key}' has no payload to expand", txn.span)

    first = min(txn.payload, rule.line - worst_offset(rule))
    chunks = [first]
    remaining = txn.payload - first
    while remaining > 0:
        chunk = min(rule.line, remaining)
        chunks.append(chunk)
        remaining -= chunk

    if len(chunks) == 1:
        return [txn]
    return [replace(txn, name=f"{txn.name}_{i}", payload=chunk) for i, chunk in enumerate(chunks)]


def expanded_transactions(platform: Union[Platform, FlatPlatform]) -> List[Transaction]:
    """Checked transactions with expand_access applied to those headed by an initiator carrying an access rule"""
    flat = flatten(platform)
    result = []
    for txn in checked_transactions(flat):
        head = flat.by_id.get(txn.initiator)
        if head is not None and head.expansion is not None and txn.payload > 0:
            result.extend(expand_access(txn, head.expansion))
        else:
            result.append(txn)
    return result
