"""
Template Models
Accelerator integration specs, generated fragments and runtime overlays
"""

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from config import Config
from models.platform import AcceleratorTag, Component, Coupling, Link, SymmetryClass
from models.transaction import ExpansionRule


@dataclass(frozen=True)
class ConfigAccess:
    """One access of a controller's configuration profile"""

    service: str
    rate: int = 0
    payload: int = 0


@dataclass(frozen=True)
class TemplateSpec:
    """Where an accelerator sits in the coupling x access taxonomy and how it binds to a host"""

    name: str
    coupling: Coupling
    parallel: Optional[int] = None          # None = unitary, k >= 2 = parallel(k)
    controller: Optional[str] = None        # host initiator (command path / tightly coupled host)
    attach: Optional[str] = None            # host transporter the accelerator hangs off
    targets: Tuple[str, ...] = ()           # shared host targets used by the accelerator
    expansion: Optional[ExpansionRule] = None
    config_profile: Tuple[ConfigAccess, ...] = ()
    symmetric: bool = False
    services: Tuple[str, ...] = Config.DEFAULT_PASSIVE_SERVICES
    blocks: Tuple[str, ...] = ()
    data_service: str = Config.DEFAULT_DATA_SERVICE
    data_rate: int = 0
    data_payload: int = 0
    microcontroller: bool = False

    @property
    def is_unitary(self) -> bool:
        return self.parallel is None

    def block_names(self):
        if self.blocks:
            return list(self.blocks)
        count = self.parallel or 1
        if count == 1:
            return [self.name]
        return [f"{self.name}_{i}" for i in range(count)]

    def tag(self) -> AcceleratorTag:
        return AcceleratorTag(self.name, self.coupling, self.parallel)


@dataclass(frozen=True)
class TransactionTemplate:
    """A transaction whose route is completed against the host at merge time"""

    name: str
    head: str
    tail: str
    service: str
    placeholder: str
    via: Optional[str] = None
    rate: int = 0
    payload: int = 0


@dataclass(frozen=True)
class Annotation:
    """Attributes grafted onto an existing host component"""

    component: str
    accelerator: Optional[AcceleratorTag] = None
    expansion: Optional[ExpansionRule] = None


@dataclass(frozen=True)
class Fragment:
    """Model pieces generated for one accelerator"""

    components: Tuple[Component, ...] = ()
    links: Tuple[Link, ...] = ()
    symmetries: Tuple[SymmetryClass, ...] = ()
    transactions_to_add: Tuple[TransactionTemplate, ...] = ()
    annotations: Tuple[Annotation, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not (self.components or self.links or self.symmetries
                    or self.transactions_to_add or self.annotations)

    def placeholders(self):
        return sorted({t.placeholder for t in self.transactions_to_add})


@dataclass(frozen=True)
class InducedAccess:
    """A transaction a runtime layer adds on behalf of each client application"""

    name: str
    service: str = Config.QUEUE_SERVICE
    rate: int = 0
    payload: int = 0


@dataclass(frozen=True)
class RuntimeSpec:
    """Software layer in front of an accelerator, with its shared scheduling queue"""

    name: str
    queue_component: str
    accelerator: str
    attach: Optional[str] = None
    induced: Tuple[InducedAccess, ...] = ()

    def to_dict(self) -> Dict:
        return {
            'name': self.name,
            'queue_component': self.queue_component,
            'accelerator': self.accelerator,
            'attach': self.attach,
            'induced': [i.name for i in self.induced]
        }
