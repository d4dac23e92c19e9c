"""
Template Service
Generates model fragments for accelerator integration cases, merges them into
host platforms, checks unitary access claims and overlays runtime queues
"""

import logging
from dataclasses import replace
from typing import Callable, Dict, List, Optional

from config import Config
from models.diagnostics import Diagnostic, PmlError
from models.platform import (
    Component, Coupling, Link, Platform, Role, SymmetryClass, iter_atoms
)
from models.template import (
    Annotation, Fragment, RuntimeSpec, TemplateSpec, TransactionTemplate
)
from models.transaction import Application, ExpansionRule, Transaction
from services.platform_service import IDENT_RE, ensure_valid, flatten, validate_platform
from services.transaction_service import enumerate_paths

logger = logging.getLogger(__name__)

INITIATING = (Coupling.SEMI_ACTIVE, Coupling.ACTIVE)


def check_spec(spec: TemplateSpec) -> List[str]:
    """Return the list of invariant violations of a template spec"""
    problems = []
    if not IDENT_RE.match(spec.name or ''):
        problems.append(f"invalid accelerator name '{spec.name}'")
    if spec.parallel is not None:
        if spec.parallel < 2:
            problems.append('parallel access needs k >= 2')
        if spec.coupling not in INITIATING:
            problems.append(f"{spec.coupling.value} accelerators can only be unitary")
    if spec.symmetric and spec.parallel is None:
        problems.append('symmetric requires parallel access')
    if spec.blocks and len(spec.blocks) != (spec.parallel or 1):
        problems.append(f"{len(spec.blocks)} block names for {spec.parallel or 1} initiators")
    if spec.expansion is not None and spec.coupling != Coupling.TIGHTLY_COUPLED:
        problems.append('access expansion only applies to tightly coupled units')
    if spec.microcontroller and spec.coupling != Coupling.ACTIVE:
        problems.append('microcontroller only applies to active accelerators')

    if spec.coupling == Coupling.TIGHTLY_COUPLED:
        if not spec.controller:
            problems.append('tightly coupled units need the host core as controller')
        if spec.config_profile:
            problems.append('tightly coupled units have no configuration profile')
    else:
        if not spec.attach:
            problems.append(f"{spec.coupling.value} accelerators need an attachment transporter")
    if spec.coupling == Coupling.PASSIVE and not spec.services:
        problems.append('passive accelerators must expose a service')
    if spec.coupling == Coupling.SEMI_ACTIVE and not spec.controller:
        problems.append('semi-active accelerators need a controller')
    if spec.config_profile and not (spec.controller or spec.microcontroller):
        problems.append('a configuration profile needs a controller')
    return problems


def _config_templates(spec: TemplateSpec, head: str, target: str, via: Optional[str]) -> List[TransactionTemplate]:
    services = [access.service for access in spec.config_profile]
    templates = []
    for i, access in enumerate(spec.config_profile):
        name = f"{access.service}_{spec.name}"
        if services.count(access.service) > 1:
            name = f"{name}_{i}"
        templates.append(TransactionTemplate(
            name=name, head=head, tail=target, service=access.service, placeholder=head,
            via=via, rate=access.rate, payload=access.payload
        ))
    return templates


def _data_templates(spec: TemplateSpec, head: str) -> List[TransactionTemplate]:
    return [
        TransactionTemplate(
            name=f"{spec.data_service}_{target.replace('.', '_')}", head=head, tail=target,
            service=spec.data_service, placeholder=head, via=spec.attach,
            rate=spec.data_rate, payload=spec.data_payload
        )
        for target in spec.targets
    ]


def _config_target(spec: TemplateSpec) -> Component:
    services = {Config.CONFIG_SERVICE} | {access.service for access in spec.config_profile}
    return Component(
        name=f"{spec.name}{Config.CONFIG_TARGET_SUFFIX}",
        role=Role.TARGET,
        services=frozenset(services),
        accelerator=spec.tag()
    )


def instantiate(spec: TemplateSpec) -> Fragment:
    """
    Build the model fragment for one accelerator

    Args:
        spec: coupling case, access mode and host binding points

    Returns:
        Fragment whose transaction templates are routed against the host by merge
    """
    problems = check_spec(spec)
    if problems:
        raise PmlError('E_BAD_SPEC', f"Template '{spec.name}': {'; '.join(problems)}")
    tag = spec.tag()

    if spec.coupling == Coupling.TIGHTLY_COUPLED:
        expansion = spec.expansion or ExpansionRule(**Config.DEFAULT_EXPANSION)
        return Fragment(annotations=(Annotation(spec.controller, tag, expansion),))

    if spec.coupling == Coupling.PASSIVE:
        services = set(spec.services) | {access.service for access in spec.config_profile}
        target = Component(name=spec.name, role=Role.TARGET, services=frozenset(services), accelerator=tag)
        templates = _config_templates(spec, spec.controller, spec.name, spec.attach) if spec.controller else []
        return Fragment(
            components=(target,),
            links=(Link(spec.attach, spec.name),),
            transactions_to_add=tuple(templates)
        )

    components: List[Component] = []
    links: List[Link] = []
    templates: List[TransactionTemplate] = []
    blocks = spec.block_names() if spec.coupling == Coupling.ACTIVE else [spec.name]
    for block in blocks:
        components.append(Component(name=block, role=Role.INITIATOR, accelerator=tag))
        links.append(Link(block, spec.attach))
        templates.extend(_data_templates(spec, block))

    config_head = None
    config_via = spec.attach
    if spec.microcontroller:
        config_head = f"{spec.name}{Config.MICROCONTROLLER_SUFFIX}"
        config_via = None
    elif spec.controller and (spec.coupling == Coupling.SEMI_ACTIVE or spec.config_profile):
        config_head = spec.controller

    if config_head:
        csb = _config_target(spec)
        components.append(csb)
        links.append(Link(spec.attach, csb.name))
        if spec.microcontroller:
            # the microcontroller sits next to the configuration space, off the data interface
            components.append(Component(name=config_head, role=Role.INITIATOR, accelerator=tag))
            links.append(Link(config_head, csb.name))
        templates.extend(_config_templates(spec, config_head, csb.name, config_via))

    symmetries = ()
    if spec.symmetric:
        symmetries = (SymmetryClass(spec.name, tuple(blocks)),)

    logger.debug(f"Instantiated {spec.coupling.value} template {spec.name}: {len(components)} components")
    return Fragment(
        components=tuple(components),
        links=tuple(links),
        symmetries=symmetries,
        transactions_to_add=tuple(templates)
    )


def _replace_component(components, qid: str, change: Callable[[Component], Component], prefix: str = ''):
    updated = []
    for component in components:
        own = f"{prefix}{component.name}"
        if own == qid:
            component = change(component)
        elif not component.is_atomic and qid.startswith(f"{own}."):
            component = replace(component, children=_replace_component(component.children, qid, change, f"{own}."))
        updated.append(component)
    return tuple(updated)


def _raise_first(diagnostics: List[Diagnostic], context: str):
    first = diagnostics[0]
    raise PmlError(first.code, f"{context}: {first.message}", first.span, diagnostics)


def merge(platform: Platform, fragment: Fragment, app_bindings: Optional[Dict[str, str]] = None) -> Platform:
    """
    Graft a fragment onto a host platform

    Args:
        platform: valid host platform
        fragment: output of instantiate
        app_bindings: placeholder (head component) -> application name

    Returns:
        New validated platform; the host is unchanged
    """
    ensure_valid(platform)
    if fragment.is_empty:
        return platform
    bindings = app_bindings or {}

    host_ids = {qid for qid, _ in iter_atoms(platform.components)} | set(platform.composite_ids())
    fresh = set()
    for component in fragment.components:
        if component.name in host_ids or component.name in fresh:
            raise PmlError('E_ID_COLLISION', f"Component '{component.name}' already exists in '{platform.name}'")
        fresh.add(component.name)
    host_symmetries = {s.name for s in platform.symmetries}
    for symmetry in fragment.symmetries:
        if symmetry.name in host_symmetries:
            raise PmlError('E_ID_COLLISION', f"Symmetry class '{symmetry.name}' already exists in '{platform.name}'")

    known = host_ids | fresh
    for link in fragment.links:
        for endpoint in (link.src, link.dst):
            if endpoint not in known:
                raise PmlError('E_DANGLING_BINDING', f"Fragment link endpoint '{endpoint}' does not exist")

    atoms = dict(iter_atoms(platform.components))
    components = platform.components
    for annotation in fragment.annotations:
        host = atoms.get(annotation.component)
        if host is None or host.role != Role.INITIATOR:
            raise PmlError('E_DANGLING_BINDING', f"Annotation target '{annotation.component}' is not a host initiator")
        components = _replace_component(
            components, annotation.component,
            lambda c: replace(c, accelerator=annotation.accelerator or c.accelerator,
                              expansion=annotation.expansion or c.expansion)
        )

    skeleton = Platform(
        name=platform.name,
        components=components + fragment.components,
        links=platform.links + fragment.links,
        symmetries=platform.symmetries + fragment.symmetries,
        applications=platform.applications,
        span=platform.span
    )
    problems = validate_platform(skeleton)
    if problems:
        _raise_first(problems, 'Merged platform is invalid')

    added: Dict[str, List[Transaction]] = {}
    for template in fragment.transactions_to_add:
        app = bindings.get(template.placeholder)
        if not app:
            raise PmlError('E_DANGLING_BINDING', f"No application bound to '{template.placeholder}'")
        route = _route(skeleton, template)
        added.setdefault(app, []).append(Transaction(
            name=template.name, path=tuple(route), service=template.service,
            rate=template.rate, payload=template.payload, app=app
        ))

    applications = []
    for application in platform.applications:
        extra = added.pop(application.name, [])
        applications.append(replace(application, transactions=application.transactions + tuple(extra)))
    for app, transactions in added.items():
        applications.append(Application(app, tuple(transactions)))

    merged = replace(skeleton, applications=tuple(applications), validated=False)
    problems = validate_platform(merged)
    if problems:
        codes = {'E_DUP_ID': 'E_ID_COLLISION'}
        first = problems[0]
        raise PmlError(codes.get(first.code, first.code), f"Merged platform is invalid: {first.message}", first.span, problems)
    logger.info(f"Merged fragment into {platform.name}: +{len(fragment.components)} components")
    return merged


def _route(skeleton: Platform, template: TransactionTemplate) -> List[str]:
    try:
        routes = enumerate_paths(skeleton, template.head, template.tail)
    except PmlError as e:
        raise PmlError('E_DANGLING_BINDING', f"Cannot route '{template.name}': {e.message}")
    if template.via:
        routes = [r for r in routes if template.via in r]
    if not routes:
        raise PmlError(
            'E_DANGLING_BINDING', f"No route for '{template.name}' from {template.head} to {template.tail}"
        )
    return routes[0]


def unitary_violations(platform: Platform) -> Dict[str, List[str]]:
    """Unitary initiating accelerators used by more than one application, with those applications"""
    flat = flatten(platform)
    owners: Dict[str, set] = {}
    for component in flat.atoms:
        tag = component.accelerator
        if component.role == Role.INITIATOR and tag and tag.is_unitary and tag.coupling in INITIATING:
            owners.setdefault(tag.name, set())
    for txn in flat.transactions():
        tag = flat.by_id[txn.initiator].accelerator if txn.initiator in flat.by_id else None
        if tag and tag.name in owners and txn.app != Config.MICROCODE_APPLICATION:
            owners[tag.name].add(txn.app)

    return {name: sorted(owners[name]) for name in sorted(owners) if len(owners[name]) > 1}


def check_unitary(platform: Platform) -> List[Diagnostic]:
    """E_UNITARY_VIOLATION for every unitary accelerator shared between applications"""
    return [
        Diagnostic.error('E_UNITARY_VIOLATION', f"Unitary accelerator '{name}' is used by {', '.join(apps)}")
        for name, apps in unitary_violations(platform).items()
    ]


def accelerator_components(platform: Platform, accelerator: str) -> List[str]:
    """Ids of the atoms tagged with an accelerator name (or the atom itself when given an id)"""
    flat = flatten(platform)
    tagged = [c.name for c in flat.atoms if c.accelerator and c.accelerator.name == accelerator]
    if not tagged and accelerator in flat.by_id:
        tagged = [accelerator]
    return tagged


def software_overlay(platform: Platform, runtime: RuntimeSpec) -> Platform:
    """
    Add a runtime's shared scheduling queue and the accesses it induces

    Every application with a transaction touching the accelerator gets, from each
    of its host-side initiators, one transaction per induced access to the queue.
    """
    ensure_valid(platform)
    flat = flatten(platform)
    accelerator_ids = accelerator_components(platform, runtime.accelerator)
    if not accelerator_ids:
        raise PmlError('E_UNKNOWN_COMPONENT', f"Unknown accelerator '{runtime.accelerator}'")

    queue = runtime.queue_component
    components = platform.components
    links = platform.links
    if queue in flat.by_id:
        if flat.role_of(queue) != Role.TARGET:
            raise PmlError('E_ROLE', f"Queue '{queue}' must be a target")
        missing = {i.service for i in runtime.induced} - flat.by_id[queue].services
        if missing:
            raise PmlError('E_NO_SERVICE', f"Queue '{queue}' lacks {', '.join(sorted(missing))}")
    else:
        if not runtime.attach or runtime.attach not in flat.by_id:
            raise PmlError('E_UNKNOWN_COMPONENT', f"Unknown attachment '{runtime.attach}' for queue '{queue}'")
        if queue in set(platform.composite_ids()):
            raise PmlError('E_ID_COLLISION', f"Queue '{queue}' collides with a composite")
        services = frozenset({Config.QUEUE_SERVICE} | {i.service for i in runtime.induced})
        components = components + (Component(name=queue, role=Role.TARGET, services=services),)
        links = links + (Link(runtime.attach, queue),)

    staged = replace(platform, components=components, links=links, validated=False)
    problems = validate_platform(staged)
    if problems:
        _raise_first(problems, f"Overlay '{runtime.name}' is invalid")

    accelerator_set = set(accelerator_ids)
    applications = []
    for application in platform.applications:
        uses = any(accelerator_set & set(t.path) for t in application.transactions)
        if not uses or not runtime.induced:
            applications.append(application)
            continue
        hosts = sorted({t.initiator for t in application.transactions if t.initiator not in accelerator_set})
        if not hosts:
            logger.warning(
                f"Runtime {runtime.name}: application {application.name} has no host-side initiator, no access induced"
            )
            applications.append(application)
            continue
        induced = []
        for access in runtime.induced:
            for host in hosts:
                routes = enumerate_paths(staged, host, queue)
                if not routes:
                    raise PmlError('E_BAD_PATH', f"No route from {host} to queue '{queue}'")
                name = f"{runtime.name}_{access.name}"
                if len(hosts) > 1:
                    name = f"{name}_{host.replace('.', '_')}"
                induced.append(Transaction(
                    name=name, path=tuple(routes[0]), service=access.service,
                    rate=access.rate, payload=access.payload, app=application.name
                ))
        applications.append(replace(application, transactions=application.transactions + tuple(induced)))

    overlaid = replace(staged, applications=tuple(applications), validated=False)
    problems = validate_platform(overlaid)
    if problems:
        _raise_first(problems, f"Overlay '{runtime.name}' is invalid")
    logger.info(f"Runtime {runtime.name} overlaid on {platform.name} with queue {queue}")
    return overlaid

