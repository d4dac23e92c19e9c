"""
Platform Models
Components, links, symmetry classes and the hierarchical / flattened platform
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

import networkx as nx

from models.diagnostics import SourceSpan, NO_SPAN
from models.transaction import Application, ExpansionRule, Transaction


class Role(str, Enum):
    """Role of a component in the platform graph"""

    INITIATOR = 'initiator'
    TARGET = 'target'
    TRANSPORTER = 'transporter'
    COMPOSITE = 'composite'


class Origin(str, Enum):
    """Device origin as classified for airborne hardware assurance"""

    COTS = 'cots'
    COTS_SOFT_IP = 'cots_soft_ip'
    COTS_HARD_IP = 'cots_hard_ip'
    CUSTOM = 'custom'


class Complexity(str, Enum):
    SIMPLE = 'simple'
    COMPLEX = 'complex'


class Coupling(str, Enum):
    """How an accelerator is attached and launched"""

    TIGHTLY_COUPLED = 'tightly_coupled'
    PASSIVE = 'passive'
    SEMI_ACTIVE = 'semi_active'
    ACTIVE = 'active'


@dataclass(frozen=True)
class DeviceClassification:
    """Inert classification metadata surfaced in reports"""

    origin: Origin
    complexity: Complexity
    notes: str = ''

    @property
    def is_cots(self) -> bool:
        return self.origin != Origin.CUSTOM

    @property
    def mentions_microcode(self) -> bool:
        return 'microcode' in self.notes.lower()

    def to_dict(self) -> Dict:
        return {
            'origin': self.origin.value,
            'complexity': self.complexity.value,
            'notes': self.notes
        }


@dataclass(frozen=True)
class AcceleratorTag:
    """Marks a component as (part of) a named accelerator"""

    name: str
    coupling: Coupling
    parallel: Optional[int] = None  # None = unitary

    @property
    def is_unitary(self) -> bool:
        return self.parallel is None

    def to_dict(self) -> Dict:
        return {
            'name': self.name,
            'coupling': self.coupling.value,
            'access': 'unitary' if self.is_unitary else f"parallel({self.parallel})"
        }


@dataclass(frozen=True)
class Component:
    """Atomic (initiator, target, transporter) or composite component"""

    name: str
    role: Role
    services: FrozenSet[str] = frozenset()
    capacity: Optional[int] = None  # bytes per second
    classification: Optional[DeviceClassification] = None
    children: Tuple['Component', ...] = ()
    accelerator: Optional[AcceleratorTag] = None
    expansion: Optional[ExpansionRule] = None
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)

    @property
    def is_atomic(self) -> bool:
        return self.role != Role.COMPOSITE

    def canonical(self) -> 'Component':
        children = sorted((c.canonical() for c in self.children), key=lambda c: c.name)
        return replace(self, children=tuple(children))

    def to_dict(self) -> Dict:
        result = {
            'name': self.name,
            'role': self.role.value,
            'services': sorted(self.services),
            'capacity': self.capacity
        }
        if self.classification:
            result['classification'] = self.classification.to_dict()
        if self.accelerator:
            result['accelerator'] = self.accelerator.to_dict()
        if self.expansion:
            result['expansion'] = self.expansion.to_dict()
        if self.children:
            result['children'] = [c.to_dict() for c in self.children]
        return result


@dataclass(frozen=True)
class Link:
    """Directed link between two atomic components (qualified ids)"""

    src: str
    dst: str
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)

    def to_dict(self) -> Dict:
        return {'from': self.src, 'to': self.dst}


@dataclass(frozen=True)
class SymmetryClass:
    """Declared set of interchangeable atomic components"""

    name: str
    members: Tuple[str, ...]
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)

    def to_dict(self) -> Dict:
        return {'name': self.name, 'members': list(self.members)}


def iter_atoms(components, prefix: str = '') -> Iterator[Tuple[str, Component]]:
    """Yield (qualified id, component) for every atomic component"""
    for component in components:
        qid = f"{prefix}{component.name}"
        if component.is_atomic:
            yield qid, component
        else:
            yield from iter_atoms(component.children, f"{qid}.")


def iter_composites(components, prefix: str = '') -> Iterator[Tuple[str, Component]]:
    """Yield (qualified id, component) for every composite component"""
    for component in components:
        if not component.is_atomic:
            qid = f"{prefix}{component.name}"
            yield qid, component
            yield from iter_composites(component.children, f"{qid}.")


@dataclass(frozen=True)
class Platform:
    """A hardware platform as a labeled directed graph of components"""

    name: str
    components: Tuple[Component, ...] = ()
    links: Tuple[Link, ...] = ()
    symmetries: Tuple[SymmetryClass, ...] = ()
    applications: Tuple[Application, ...] = ()
    span: SourceSpan = field(default=NO_SPAN, compare=False, repr=False)
    validated: bool = field(default=False, compare=False, repr=False)

    def atoms(self) -> List[Tuple[str, Component]]:
        return list(iter_atoms(self.components))

    @cached_property
    def flat(self) -> 'FlatPlatform':
        """Atomic view with qualified ids; callers check validation first"""
        atoms = sorted((replace(c, name=qid) for qid, c in iter_atoms(self.components)), key=lambda c: c.name)
        return FlatPlatform(
            name=self.name,
            atoms=tuple(atoms),
            links=self.links,
            symmetries=self.symmetries,
            applications=self.applications
        )

    def composite_ids(self) -> List[str]:
        return [qid for qid, _ in iter_composites(self.components)]

    def transactions(self) -> List[Transaction]:
        return [t for app in self.applications for t in app.transactions]

    def application(self, name: str) -> Optional[Application]:
        return next((a for a in self.applications if a.name == name), None)

    def canonical(self) -> 'Platform':
        """Declaration-order independent form (spans and validation mark ignored)"""
        return Platform(
            name=self.name,
            components=tuple(sorted((c.canonical() for c in self.components), key=lambda c: c.name)),
            links=tuple(sorted(self.links, key=lambda link: (link.src, link.dst))),
            symmetries=tuple(sorted(self.symmetries, key=lambda s: s.name)),
            applications=tuple(sorted((a.canonical() for a in self.applications), key=lambda a: a.name))
        )

    def to_dict(self) -> Dict:
        return {
            'name': self.name,
            'components': [c.to_dict() for c in self.components],
            'links': [link.to_dict() for link in self.links],
            'symmetries': [s.to_dict() for s in self.symmetries],
            'applications': [a.to_dict() for a in self.applications]
        }


def structurally_equal(a: Platform, b: Platform) -> bool:
    """Equality up to declaration order and source locations"""
    return a.canonical() == b.canonical()


@dataclass(frozen=True)
class FlatPlatform:
    """Atomic components with qualified ids, links, and everything needed by the calculus"""

    name: str
    atoms: Tuple[Component, ...]
    links: Tuple[Link, ...]
    symmetries: Tuple[SymmetryClass, ...] = ()
    applications: Tuple[Application, ...] = ()

    @cached_property
    def by_id(self) -> Dict[str, Component]:
        return {c.name: c for c in self.atoms}

    @cached_property
    def graph(self) -> nx.DiGraph:
        graph = nx.DiGraph(name=self.name)
        for component in self.atoms:
            graph.add_node(component.name, role=component.role)
        graph.add_edges_from((link.src, link.dst) for link in self.links)
        return graph

    @cached_property
    def link_set(self) -> FrozenSet[Tuple[str, str]]:
        return frozenset((link.src, link.dst) for link in self.links)

    def ids_with_role(self, role: Role) -> List[str]:
        return sorted(c.name for c in self.atoms if c.role == role)

    @property
    def initiators(self) -> List[str]:
        return self.ids_with_role(Role.INITIATOR)

    @property
    def targets(self) -> List[str]:
        return self.ids_with_role(Role.TARGET)

    @property
    def transporters(self) -> List[str]:
        return self.ids_with_role(Role.TRANSPORTER)

    def transactions(self) -> List[Transaction]:
        return [t for app in self.applications for t in app.transactions]

    def role_of(self, component_id: str) -> Optional[Role]:
        component = self.by_id.get(component_id)
        return component.role if component else None
