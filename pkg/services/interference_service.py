"""
Interference Service - scenario enumeration, classification, channels,
symmetry validation and symmetry quotient
"""

import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, product
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

from config import Config
from models.diagnostics import Diagnostic, PmlError
from models.platform import FlatPlatform, Platform, SymmetryClass
from models.transaction import Transaction
from services.platform_service import flatten
from services.transaction_service import checked_transactions

logger = logging.getLogger(__name__)


class ScenarioKind(str, Enum):
    ITF = 'itf'
    FREE = 'free'
    PARTIAL = 'partial'


@dataclass(frozen=True)
class Scenario:
    """Concurrent transactions, one per initiator, ordered by initiator"""

    transactions: Tuple[Transaction, ...]

    def __post_init__(self):
        if len(self.transactions) < 2:
            raise ValueError('A scenario needs at least two transactions')
        heads = [t.initiator for t in self.transactions]
        if len(set(heads)) != len(heads):
            raise ValueError(f"Scenario initiators must be distinct: {heads}")
        object.__setattr__(self, 'transactions', tuple(sorted(self.transactions, key=lambda t: t.sort_key())))

    @property
    def size(self) -> int:
        return len(self.transactions)

    @property
    def initiators(self) -> List[str]:
        return [t.initiator for t in self.transactions]

    @property
    def applications(self) -> List[str]:
        return sorted({t.app for t in self.transactions})

    @property
    def keys(self) -> List[str]:
        return [t.key for t in self.transactions]

    def sort_key(self) -> Tuple:
        return tuple(t.sort_key() for t in self.transactions)

    def to_dict(self) -> Dict:
        return {
            'transactions': self.keys,
            'initiators': self.initiators,
            'applications': self.applications
        }


@dataclass(frozen=True)
class Classification:
    """itf with a non-empty channel, free, or partial with the pairwise overlaps"""

    kind: ScenarioKind
    channel: Tuple[str, ...] = ()
    overlaps: Tuple[Tuple[Tuple[str, str], Tuple[str, ...]], ...] = ()

    def to_dict(self) -> Dict:
        result = {'kind': self.kind.value, 'channel': list(self.channel)}
        if self.overlaps:
            result['overlaps'] = [
                {'pair': list(pair), 'shared': list(shared)} for pair, shared in self.overlaps
            ]
        return result


@dataclass(frozen=True)
class Orbit:
    """Scenarios interchangeable under the declared symmetries"""

    representative: Scenario
    size: int
    members: Tuple[Scenario, ...] = field(default=(), compare=False, repr=False)

    def to_dict(self) -> Dict:
        return {'representative': self.representative.to_dict(), 'size': self.size}


def _exclusion(same_app_exclusion: Optional[bool]) -> bool:
    return Config.SAME_APP_EXCLUSION if same_app_exclusion is None else same_app_exclusion


def scenarios(
    platform: Union[Platform, FlatPlatform],
    n: int,
    same_app_exclusion: Optional[bool] = None,
    initiators: Optional[Iterable[str]] = None
) -> List[Scenario]:
    """
    Enumerate size-n sets of concurrent transactions from distinct initiators

    Args:
        platform: validated platform
        n: scenario size (>= 2)
        same_app_exclusion: drop scenarios with two transactions of one application
            (defaults to Config.SAME_APP_EXCLUSION)
        initiators: optional restriction of the initiators considered

    Returns:
        Scenarios ordered by initiator combination, then by transaction choice

    Raises:
        PmlError E_BAD_N when n < 2 or the count would exceed Config.MAX_SCENARIOS
    """
    if n < 2:
        raise PmlError('E_BAD_N', f"Scenario size must be at least 2, got {n}")
    flat = flatten(platform)
    exclude = _exclusion(same_app_exclusion)

    by_initiator: Dict[str, List[Transaction]] = defaultdict(list)
    for txn in checked_transactions(flat):
        by_initiator[txn.initiator].append(txn)

    if initiators is not None:
        wanted = set(initiators)
        unknown = sorted(wanted - set(flat.by_id))
        if unknown:
            raise PmlError('E_UNKNOWN_COMPONENT', f"Unknown initiators: {', '.join(unknown)}")
        by_initiator = {k: v for k, v in by_initiator.items() if k in wanted}

    heads = sorted(by_initiator)
    if n > len(heads):
        return []

    result: List[Scenario] = []
    for combo in combinations(heads, n):
        choices = [sorted(by_initiator[h], key=lambda t: t.sort_key()) for h in combo]
        for picked in product(*choices):
            if exclude and len({t.app for t in picked}) < n:
                continue
            if len(result) >= Config.MAX_SCENARIOS:
                raise PmlError(
                    'E_BAD_N',
                    f"More than {Config.MAX_SCENARIOS} scenarios of size {n} on {flat.name}; "
                    'lower n or raise ITFKIT_MAX_SCENARIOS'
                )
            result.append(Scenario(tuple(picked)))

    logger.debug(f"{len(result)} scenarios of size {n} on {flat.name}")
    return result


def classify(scenario: Scenario) -> Classification:
    """Classify a scenario by the components its transaction paths share"""
    path_sets = [frozenset(t.path) for t in scenario.transactions]
    common = frozenset.intersection(*path_sets)
    if common:
        return Classification(ScenarioKind.ITF, tuple(sorted(common)))

    overlaps = []
    for (i, a), (j, b) in combinations(enumerate(path_sets), 2):
        shared = a & b
        if shared:
            pair = (scenario.transactions[i].key, scenario.transactions[j].key)
            overlaps.append((pair, tuple(sorted(shared))))
    if not overlaps:
        return Classification(ScenarioKind.FREE)
    return Classification(ScenarioKind.PARTIAL, (), tuple(overlaps))


def channels(
    platform: Union[Platform, FlatPlatform],
    n_max: int,
    same_app_exclusion: Optional[bool] = None
) -> Dict[str, List[Scenario]]:
    """
    Map every shared component to the itf scenarios (sizes 2..n_max) it belongs to

    Components with no itf scenario are omitted; keys are ordered by id.
    """
    if n_max < 2:
        raise PmlError('E_BAD_N', f"n_max must be at least 2, got {n_max}")
    found: Dict[str, List[Scenario]] = defaultdict(list)
    for n in range(2, n_max + 1):
        for scenario in scenarios(platform, n, same_app_exclusion):
            classification = classify(scenario)
            if classification.kind != ScenarioKind.ITF:
                continue
            for component in classification.channel:
                found[component].append(scenario)
    return {component: found[component] for component in sorted(found)}


# ==================== Symmetry ====================

def _transpositions(symmetry: SymmetryClass) -> List[Dict[str, str]]:
    """Generators of the member permutation group: (m0 mi) for every other member"""
    first = symmetry.members[0]
    return [{first: other, other: first} for other in symmetry.members[1:]]


def validate_symmetry(platform: Union[Platform, FlatPlatform], symmetry: SymmetryClass) -> List[Diagnostic]:
    """
    Check that swapping any two members is a platform automorphism

    Returns:
        Empty list when the class is valid, otherwise one E_NOT_SYMMETRIC
        diagnostic naming the first failing attribute or link
    """
    flat = flatten(platform)
    span = symmetry.span
    members = list(symmetry.members)

    unknown = [m for m in members if m not in flat.by_id]
    if unknown:
        return [Diagnostic.error('E_UNKNOWN_COMPONENT', f"Unknown symmetry member '{unknown[0]}'", span)]
    if len(members) < 2 or len(set(members)) != len(members):
        return [Diagnostic.error('E_NOT_SYMMETRIC', f"Symmetry class '{symmetry.name}' needs distinct members", span)]

    for other in flat.symmetries:
        shared = set(other.members) & set(members)
        if other.name != symmetry.name and shared:
            return [Diagnostic.error(
                'E_NOT_SYMMETRIC',
                f"Symmetry class '{symmetry.name}' overlaps '{other.name}' on {', '.join(sorted(shared))}",
                span
            )]

    reference = flat.by_id[members[0]]
    for member in members[1:]:
        component = flat.by_id[member]
        for attribute in ('role', 'services', 'capacity'):
            if getattr(component, attribute) != getattr(reference, attribute):
                return [Diagnostic.error(
                    'E_NOT_SYMMETRIC',
                    f"Symmetry class '{symmetry.name}': {attribute} of {member} differs from {members[0]}",
                    span
                )]

    ordered_links = sorted(flat.link_set)
    for swap in _transpositions(symmetry):
        for src, dst in ordered_links:
            image = (swap.get(src, src), swap.get(dst, dst))
            if image not in flat.link_set:
                return [Diagnostic.error(
                    'E_NOT_SYMMETRIC',
                    f"Symmetry class '{symmetry.name}': link {src} -> {dst} has no image {image[0]} -> {image[1]}",
                    span
                )]
    logger.debug(f"Symmetry class {symmetry.name} validated ({len(members)} members)")
    return []


def _image_map(txns: Iterable[Transaction], perm: Dict[str, str]) -> Dict[str, str]:
    """
    Transaction keys mapped to the key of their counterpart under a component permutation

    Transactions with equal (path, service, rate, payload) are matched to the
    permuted signature in key order. A signature whose image class differs in
    size has no counterpart and its keys are left out.
    """
    by_signature: Dict[Tuple, List[str]] = defaultdict(list)
    for txn in sorted(txns, key=lambda t: t.key):
        by_signature[txn.signature()].append(txn.key)

    mapping: Dict[str, str] = {}
    for signature, keys in by_signature.items():
        path = signature[0]
        image = by_signature.get((tuple(perm.get(c, c) for c in path),) + signature[1:], [])
        if len(image) == len(keys):
            mapping.update(zip(keys, image))
    return mapping


def _permute(keys: FrozenSet[str], mapping: Dict[str, str]) -> Optional[FrozenSet[str]]:
    if not all(k in mapping for k in keys):
        return None
    return frozenset(mapping[k] for k in keys)


def quotient(platform: Union[Platform, FlatPlatform], scs: List[Scenario]) -> List[Orbit]:
    """
    Partition scenarios into orbits under the declared symmetry classes

    A scenario is its set of transaction keys; its orbit is every scenario of
    scs reached by mapping those transactions through the member swaps. Without
    symmetry classes each scenario is its own orbit. The representative of each
    orbit is its least member; orbit sizes sum to len(scs).
    """
    flat = flatten(platform)
    generators: List[Dict[str, str]] = []
    for symmetry in flat.symmetries:
        problems = validate_symmetry(flat, symmetry)
        if problems:
            raise PmlError(
                'E_UNVALIDATED_SYMMETRY',
                f"Symmetry class '{symmetry.name}' is not valid: {problems[0].message}",
                symmetry.span,
                problems
            )
        generators.extend(_transpositions(symmetry))

    txns = checked_transactions(flat)
    mappings = [_image_map(txns, perm) for perm in generators]

    by_keys: Dict[FrozenSet[str], Scenario] = {frozenset(s.keys): s for s in scs}
    assigned = set()
    orbits: List[Orbit] = []
    for scenario in sorted(scs, key=lambda s: s.sort_key()):
        start = frozenset(scenario.keys)
        if start in assigned:
            continue
        seen = {start}
        queue = deque([start])
        while queue:
            keys = queue.popleft()
            for mapping in mappings:
                image = _permute(keys, mapping)
                if image is not None and image not in seen:
                    seen.add(image)
                    queue.append(image)
        assigned |= seen
        members = sorted((by_keys[keys] for keys in seen if keys in by_keys), key=lambda s: s.sort_key())
        orbits.append(Orbit(scenario, len(members), tuple(members)))

    logger.info(f"{len(scs)} scenarios reduced to {len(orbits)} orbits")
    return orbits
