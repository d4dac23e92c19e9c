"""
Report Service - findings with AMC tags, assumptions, and DOT export
"""

import hashlib
import json
import logging
from typing import Any, Dict, Iterable, List, Optional

import graphviz

from config import Config
from models.diagnostics import PmlError
from models.findings import Finding, Report
from models.platform import Complexity, Component, Coupling, FlatPlatform, Platform, Role
from services.capacity_service import Verdict, check_capacity
from services.interference_service import (
    Orbit, ScenarioKind, classify, quotient, scenarios, validate_symmetry
)
from services.platform_service import ensure_valid, flatten
from services.template_service import unitary_violations
from services.transaction_service import checked_transactions, expand_access, resolve_transactions

logger = logging.getLogger(__name__)


def finding_id(kind: str, subject: Iterable[str], details: Dict[str, Any]) -> str:
    """Content hash id, stable across regenerations of the same report"""
    payload = json.dumps([kind, list(subject), details], sort_keys=True, ensure_ascii=False)
    digest = hashlib.sha256(payload.encode('utf-8')).hexdigest()
    return f"{kind}-{digest[:Config.FINDING_ID_LENGTH]}"


def make_finding(kind: str, subject, amc_tags, details: Dict[str, Any], severity: str = 'info') -> Finding:
    subject = tuple(subject)
    return Finding(
        id=finding_id(kind, subject, details),
        kind=kind,
        subject=subject,
        amc_tags=tuple(amc_tags),
        details=details,
        severity=severity
    )


class ReportBuilder:
    """Collects findings and assumptions for one platform"""

    def __init__(self, platform: Platform, n_max: int, same_app_exclusion: bool, use_quotient: bool):
        self.platform = ensure_valid(platform)
        self.flat: FlatPlatform = flatten(platform)
        self.n_max = n_max
        self.same_app_exclusion = same_app_exclusion
        self.use_quotient = use_quotient
        self.findings: List[Finding] = []
        self.assumptions: List[str] = []
        self.diagnostics = []
        self.rejected = []

    def build(self) -> Report:
        resolution = resolve_transactions(self.flat)
        self.diagnostics.extend(resolution.diagnostics)
        self.rejected = [d for d in resolution.diagnostics if d.is_error]

        self._interference()
        self._capacity()
        self._accelerators()
        self._classification()
        self._assumptions()

        flat = self.flat
        summary = {
            'name': flat.name,
            'initiators': flat.initiators,
            'targets': flat.targets,
            'transporters': flat.transporters,
            'symmetries': [s.to_dict() for s in flat.symmetries],
            'applications': sorted(a.name for a in flat.applications),
            'transactions': len(flat.transactions()),
            'expansions': self._expansions(),
            'diagnostics': [d.to_dict() for d in self.diagnostics]
        }
        logger.info(f"Report for {flat.name}: {len(self.findings)} findings")
        return Report(platform=summary, findings=self.findings, assumptions=self.assumptions)

    # ==================== Interference ====================

    def _orbits(self, scs) -> List[Orbit]:
        if self.use_quotient and self.flat.symmetries:
            return quotient(self.flat, scs)
        return [Orbit(s, 1, (s,)) for s in scs]

    def _interference(self):
        usable = self.use_quotient
        for symmetry in self.flat.symmetries:
            problems = validate_symmetry(self.flat, symmetry)
            if problems:
                self.diagnostics.extend(problems)
                usable = False
        if self.use_quotient and not usable:
            logger.warning(f"Invalid symmetry classes on {self.flat.name}; scenarios are not quotiented")
        self.use_quotient = usable

        for n in range(2, self.n_max + 1):
            for orbit in self._orbits(scenarios(self.flat, n, self.same_app_exclusion)):
                self._scenario_finding(orbit, n)

    def _scenario_finding(self, orbit: Orbit, n: int):
        representative = orbit.representative
        classification = classify(representative)
        details = {
            'size': n,
            'initiators': representative.initiators,
            'applications': representative.applications,
            'orbit_size': orbit.size
        }
        if orbit.size > 1:
            details['orbit'] = [member.keys for member in orbit.members]

        if classification.kind == ScenarioKind.ITF:
            details['channel'] = list(classification.channel)
            self.findings.append(make_finding(
                'itf_channel', representative.keys, ['CHANNEL_ID', 'RESOURCE_ID'], details, 'warning'
            ))
        elif classification.kind == ScenarioKind.PARTIAL:
            details.update(classification.to_dict())
            self.findings.append(make_finding('partial', representative.keys, ['CHANNEL_ID'], details, 'warning'))
        elif n == 2:
            self.findings.append(make_finding('free_pair', representative.keys, ['RESOURCE_ID'], details))

    def _expansions(self) -> Dict[str, List[Dict[str, Any]]]:
        """Line transactions of every access issued by an initiator carrying an access rule, by initiator"""
        found: Dict[str, List[Dict[str, Any]]] = {}
        for txn in checked_transactions(self.flat):
            rule = self.flat.by_id[txn.initiator].expansion
            if rule is None or txn.payload <= 0:
                continue
            parts = expand_access(txn, rule)
            found.setdefault(txn.initiator, []).append({
                'transaction': txn.key,
                'payload': txn.payload,
                'line_transactions': len(parts),
                'payloads': [part.payload for part in parts]
            })
        return {initiator: found[initiator] for initiator in sorted(found)}

    # ==================== Capacity ====================

    def _capacity(self):
        severities = {
            Verdict.OVER: 'error',
            Verdict.UNSPECIFIED_CAPACITY: 'warning',
            Verdict.UNSPECIFIED_DEMAND: 'warning',
            Verdict.OK: 'info'
        }
        for entry in check_capacity(self.flat).entries:
            details = entry.to_dict()
            if entry.verdict == Verdict.UNSPECIFIED_CAPACITY:
                details['code'] = 'W_UNSPECIFIED_CAPACITY'
            self.findings.append(make_finding(
                'capacity', [entry.component], ['CAPACITY'], details, severities[entry.verdict]
            ))

    # ==================== Accelerators ====================

    def _accelerators(self):
        for component in self.flat.atoms:
            tag = component.accelerator
            if tag and tag.coupling == Coupling.PASSIVE and component.role == Role.TARGET:
                details = {
                    'code': 'W_ABSTRACTION',
                    'accelerator': tag.name,
                    'message': (
                        f"Internals of {tag.name} are abstracted as target {component.name}; "
                        'their non-interference with external transactions must be verified'
                    )
                }
                self.findings.append(make_finding(
                    'abstraction_warning', [component.name], ['RESOURCE_ID'], details, 'warning'
                ))

        for accelerator, apps in unitary_violations(self.flat).items():
            self.findings.append(make_finding(
                'unitary_violation', [accelerator], ['SOFTWARE_ID', 'USAGE_DOMAIN'],
                {'code': 'E_UNITARY_VIOLATION', 'applications': apps}, 'error'
            ))

    # ==================== Classification ====================

    def _classification(self):
        flat = self.flat
        for component in flat.atoms:
            if component.classification:
                self.findings.append(self._device_note(component))

        used = {t.initiator for t in flat.transactions()}
        for initiator in flat.initiators:
            if initiator not in used:
                self.findings.append(make_finding(
                    'classification_note', [initiator], ['USAGE_DOMAIN'],
                    {
                        'code': 'W_UNUSED_INITIATOR',
                        'message': f"{initiator} carries no transaction; provide evidence it is deactivated"
                    },
                    'warning'
                ))

        inventory = {}
        for application in sorted(flat.applications, key=lambda a: a.name):
            inventory[application.name] = sorted({t.initiator for t in application.transactions})
        if inventory:
            self.findings.append(make_finding(
                'classification_note', [flat.name], ['SOFTWARE_ID'], {'applications': inventory}
            ))

        microcode = [t for t in flat.transactions() if t.app == Config.MICROCODE_APPLICATION]
        if microcode:
            self.findings.append(make_finding(
                'classification_note', [t.key for t in microcode], ['MICROCODE'],
                {'transactions': [t.to_dict() for t in microcode]}
            ))

    def _device_note(self, component: Component) -> Finding:
        classification = component.classification
        tags = ['RESOURCE_ID']
        actions = []
        if classification.is_cots and classification.complexity == Complexity.COMPLEX:
            tags.append('USAGE_DOMAIN')
            actions.append('exercise with stressing benchmarks')
            actions.append("confirm usage within the manufacturer's specification")
        if classification.mentions_microcode:
            tags.append('MICROCODE')
            actions.append('model microcode as transactions')
        details = classification.to_dict()
        details['actions'] = actions
        return make_finding('classification_note', [component.name], tags, details)

    # ==================== Assumptions ====================

    def _assumptions(self):
        flat = self.flat
        self.assumptions.append(
            'Capacity verdicts are an average-demand check (rate x payload); bursts and timing are not modelled'
        )
        self.assumptions.append('Interference channels are identified at component granularity')
        self.assumptions.append(
            f"Scenarios of the same application are {'excluded' if self.same_app_exclusion else 'included'}"
        )
        grouping = '; symmetric scenarios are grouped into orbits' if self.use_quotient and flat.symmetries else ''
        self.assumptions.append(f"Scenario sizes 2..{self.n_max} were enumerated{grouping}")

        tags = {}
        for component in flat.atoms:
            if component.accelerator:
                tags.setdefault(component.accelerator.name, component.accelerator)
        for name in sorted(tags):
            tag = tags[name]
            if tag.is_unitary:
                text = f"Accelerator {name} is {tag.coupling.value} and unitary"
                if tag.coupling in (Coupling.SEMI_ACTIVE, Coupling.ACTIVE):
                    text += '; single-application use is checked on the model'
            else:
                text = f"Accelerator {name} is {tag.coupling.value} with parallel({tag.parallel}) initiators chosen by the modeller"
            self.assumptions.append(text)

        for component in flat.atoms:
            rule = component.expansion
            if rule:
                self.assumptions.append(
                    f"Accesses of {component.name} expand with width {rule.width} B, alignment "
                    f"{rule.alignment} B, line {rule.line} B under worst-case misalignment"
                )
        if self.rejected:
            self.assumptions.append(
                f"{len(self.rejected)} declared transaction(s) failing the path checks are left out of scenarios and demand"
            )
        if any(t.app == Config.MICROCODE_APPLICATION for t in flat.transactions()):
            self.assumptions.append(
                f"Microcode transactions are owned by the reserved application {Config.MICROCODE_APPLICATION}"
            )


def build_report(
    platform: Platform,
    n_max: Optional[int] = None,
    same_app_exclusion: Optional[bool] = None,
    use_quotient: Optional[bool] = None
) -> Report:
    """
    Build the full analysis report of a platform

    Args:
        platform: valid platform
        n_max: largest scenario size (defaults to Config.DEFAULT_SCENARIO_SIZE)
        same_app_exclusion: defaults to Config.SAME_APP_EXCLUSION
        use_quotient: group scenarios by symmetry orbits (defaults to Config.QUOTIENT_SCENARIOS)

    Returns:
        Deterministic report
    """
    builder = ReportBuilder(
        platform,
        Config.DEFAULT_SCENARIO_SIZE if n_max is None else n_max,
        Config.SAME_APP_EXCLUSION if same_app_exclusion is None else same_app_exclusion,
        Config.QUOTIENT_SCENARIOS if use_quotient is None else use_quotient
    )
    if builder.n_max < 2:
        raise PmlError('E_BAD_N', f"n_max must be at least 2, got {builder.n_max}")
    return builder.build()


def highlighted_components(finding: Optional[Finding]) -> List[str]:
    if finding is None:
        return []
    channel = finding.details.get('channel')
    return list(channel) if channel else list(finding.subject)


def export_dot(platform: Platform, highlight: Optional[Finding] = None) -> str:
    """
    DOT digraph of a platform with role shapes and composite clusters

    Args:
        platform: valid platform
        highlight: finding whose channel (or subject) components are marked

    Returns:
        DOT source text
    """
    ensure_valid(platform)
    canonical = platform.canonical()
    marked = set(highlighted_components(highlight))

    dot = graphviz.Digraph(canonical.name, graph_attr={'rankdir': Config.DOT_RANKDIR})

    def add_nodes(graph, components, prefix: str = ''):
        for component in components:
            qid = f"{prefix}{component.name}"
            if component.role == Role.COMPOSITE:
                with graph.subgraph(name=f"cluster_{qid}") as cluster:
                    cluster.attr(label=component.name)
                    add_nodes(cluster, component.children, f"{qid}.")
                continue
            attrs = {'shape': Config.DOT_SHAPES[component.role.value]}
            if qid in marked:
                attrs.update(color=Config.HIGHLIGHT_COLOR, penwidth='2')
            graph.node(qid, component.name, **attrs)

    add_nodes(dot, canonical.components)
    for link in canonical.links:
        dot.edge(link.src, link.dst)
    return dot.source
