"""
Capacity Service - average demand per shared component against declared capacity
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple, Union

from config import Config
from models.diagnostics import PmlError
from models.platform import FlatPlatform, Platform, Role
from services.platform_service import flatten
from services.transaction_service import checked_transactions

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    OK = 'ok'
    OVER = 'over'
    UNSPECIFIED_CAPACITY = 'unspecified_capacity'
    UNSPECIFIED_DEMAND = 'unspecified_demand'


@dataclass(frozen=True)
class Demand:
    """Sum of rate x payload over the transactions crossing one component"""

    component: str
    bytes_per_second: int = 0
    contributors: Tuple[Tuple[str, int], ...] = ()
    unspecified: Tuple[str, ...] = ()   # transactions without rate or payload

    def to_dict(self) -> Dict:
        return {
            'component': self.component,
            'bytes_per_second': self.bytes_per_second,
            'contributors': [{'transaction': name, 'bytes_per_second': bps} for name, bps in self.contributors],
            'unspecified_demand': list(self.unspecified)
        }


@dataclass(frozen=True)
class CapacityEntry:
    demand: Demand
    capacity: Optional[int]
    verdict: Verdict

    @property
    def component(self) -> str:
        return self.demand.component

    def to_dict(self) -> Dict:
        result = self.demand.to_dict()
        result['capacity'] = self.capacity
        result['verdict'] = self.verdict.value
        return result


@dataclass
class CapacityReport:
    """Average-demand check of every traversed target and transporter"""

    entries: List[CapacityEntry] = field(default_factory=list)

    def entry(self, component: str) -> Optional[CapacityEntry]:
        return next((e for e in self.entries if e.component == component), None)

    def with_verdict(self, verdict: Verdict) -> List[CapacityEntry]:
        return [e for e in self.entries if e.verdict == verdict]

    @property
    def has_errors(self) -> bool:
        return any(e.verdict == Verdict.OVER for e in self.entries)

    def to_dict(self) -> Dict:
        return {
            'check': 'average-demand',
            'entries': [e.to_dict() for e in self.entries]
        }


def component_demand(platform: Union[Platform, FlatPlatform], component_id: str) -> Demand:
    """
    Aggregate demand on one target or transporter

    Args:
        platform: validated platform
        component_id: qualified id of a target or transporter

    Returns:
        Demand with exact integer total over checked transactions; unquantified
        transactions are listed apart
    """
    flat = flatten(platform)
    if component_id not in flat.by_id:
        raise PmlError('E_UNKNOWN_COMPONENT', f"Unknown component '{component_id}'")
    if flat.role_of(component_id) == Role.INITIATOR:
        raise PmlError('E_ROLE', f"Demand is not defined for initiator '{component_id}'")

    total = 0
    contributors = []
    unspecified = []
    for txn in checked_transactions(flat):
        if component_id not in txn.path:
            continue
        if not txn.is_quantified:
            unspecified.append(txn.key)
            continue
        contributors.append((txn.key, txn.demand))
        total += txn.demand

    if total > Config.MAX_DEMAND:
        raise PmlError('E_OVERFLOW', f"Demand on '{component_id}' exceeds {Config.MAX_DEMAND} B/s")
    return Demand(component_id, total, tuple(contributors), tuple(unspecified))


def _verdict(demand: Demand, capacity: Optional[int]) -> Verdict:
    if capacity is None:
        return Verdict.UNSPECIFIED_CAPACITY
    if demand.bytes_per_second > capacity:
        return Verdict.OVER
    if demand.unspecified:
        return Verdict.UNSPECIFIED_DEMAND
    return Verdict.OK


def check_capacity(platform: Union[Platform, FlatPlatform]) -> CapacityReport:
    """One verdict per target or transporter crossed by at least one transaction, ordered by id"""
    flat = flatten(platform)
    traversed = sorted({
        hop for txn in checked_transactions(flat) for hop in txn.path
        if flat.role_of(hop) in (Role.TARGET, Role.TRANSPORTER)
    })

    report = CapacityReport()
    for component_id in traversed:
        demand = component_demand(flat, component_id)
        capacity = flat.by_id[component_id].capacity
        verdict = _verdict(demand, capacity)
        if verdict == Verdict.OVER:
            logger.warning(f"{component_id}: demand {demand.bytes_per_second} B/s over capacity {capacity} Bps")
        report.entries.append(CapacityEntry(demand, capacity, verdict))
    return report
