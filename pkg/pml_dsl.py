"""PML Front End
Parses platform description files (.pml) into Platform values and renders
platforms back to canonical text
"""

import json
import logging
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from models.diagnostics import Diagnostic, PmlError, SourceSpan, has_errors
from models.platform import (
    AcceleratorTag, Complexity, Component, Coupling, DeviceClassification, Link,
    Origin, Platform, Role, SymmetryClass, iter_atoms, iter_composites
)
from models.template import Fragment
from models.transaction import Application, ExpansionRule, Transaction
from services.platform_service import validate_platform

logger = logging.getLogger(__name__)

TOKEN_SPEC = [
    ('COMMENT', r'//[^\n]*'),
    ('NEWLINE', r'\n'),
    ('SKIP', r'[ \t\r]+'),
    ('STRING', r'"(?:[^"\\\n]|\\.)*"'),
    ('NUMBER', r'\d+'),
    ('PER_SECOND', r'/s\b'),
    ('ARROW', r'->'),
    ('IDENT', r'[A-Za-z_][A-Za-z0-9_]*'),
    ('PUNCT', r'[{};:,.]'),
    ('MISMATCH', r'.'),
]
TOKEN_RE = re.compile('|'.join(f'(?P<{name}>{pattern})' for name, pattern in TOKEN_SPEC))

ROLE_KEYWORDS = {
    'initiator': Role.INITIATOR,
    'target': Role.TARGET,
    'transporter': Role.TRANSPORTER,
    'peripheral': Role.TARGET,  # peripherals are targets unless modelled otherwise
}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: SourceSpan


@dataclass
class ParseResult:
    """Outcome of parsing: a validated platform or the diagnostics that prevent it"""

    platform: Optional[Platform] = None
    diagnostics: List[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.platform is not None


class _SyntaxError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


def tokenize(text: str, file: str = '<memory>') -> List[Token]:
    """Split model text into tokens, dropping whitespace and comments"""
    tokens = []
    line, line_start = 1, 0
    for match in TOKEN_RE.finditer(text):
        kind = match.lastgroup
        value = match.group()
        span = SourceSpan(file, line, match.start() - line_start + 1)
        if kind == 'NEWLINE':
            line += 1
            line_start = match.end()
        elif kind in ('SKIP', 'COMMENT'):
            continue
        elif kind == 'MISMATCH':
            raise _SyntaxError(Diagnostic.error('E_PARSE', f"Unexpected character {value!r}", span))
        else:
            tokens.append(Token(kind, value, span))
    tokens.append(Token('EOF', '', SourceSpan(file, line, len(text) - line_start + 1)))
    return tokens


@dataclass
class _Reference:
    """A QID as written, with the composite scope it was written in"""

    text: str
    span: SourceSpan
    scope: Tuple[str, ...] = ()


class PmlParser:
    """Recursive descent parser for the PML grammar"""

    def __init__(self, text: str, file: str = '<memory>'):
        self.text = text.lstrip('﻿')
        self.file = file
        self.tokens: List[Token] = []
        self.pos = 0
        self.links: List[Tuple[_Reference, _Reference, SourceSpan]] = []
        self.symmetries: List[Tuple[str, List[_Reference], SourceSpan]] = []
        self.applications: List[Tuple[str, List[Tuple], SourceSpan]] = []

    # ==================== Token helpers ====================

    def _peek(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != 'EOF':
            self.pos += 1
        return token

    def _error(self, message: str, token: Optional[Token] = None):
        token = token or self._peek()
        found = 'end of file' if token.kind == 'EOF' else repr(token.text)
        raise _SyntaxError(Diagnostic.error('E_PARSE', f"{message}, found {found}", token.span))

    def _at(self, text: str) -> bool:
        token = self._peek()
        return token.kind in ('IDENT', 'PUNCT', 'ARROW', 'PER_SECOND') and token.text == text

    def _accept(self, text: str) -> bool:
        if self._at(text):
            self._advance()
            return True
        return False

    def _expect(self, text: str) -> Token:
        if not self._at(text):
            self._error(f"Expected '{text}'")
        return self._advance()

    def _ident(self, what: str = 'identifier') -> Token:
        if self._peek().kind != 'IDENT':
            self._error(f"Expected {what}")
        return self._advance()

    def _number(self) -> int:
        if self._peek().kind != 'NUMBER':
            self._error('Expected a number')
        return int(self._advance().text)

    def _qid(self, scope: Tuple[str, ...] = ()) -> _Reference:
        first = self._ident('component reference')
        parts = [first.text]
        while self._at('.'):
            self._advance()
            parts.append(self._ident('identifier after \'.\'').text)
        return _Reference('.'.join(parts), first.span, scope)

    def _choice(self, options, what: str) -> str:
        token = self._peek()
        if token.kind != 'IDENT' or token.text not in options:
            self._error(f"Expected {what} ({' | '.join(options)})")
        return self._advance().text

    # ==================== Grammar ====================

    def parse(self) -> ParseResult:
        try:
            self.tokens = tokenize(self.text, self.file)
            header = self._expect('platform')
            name = self._ident('platform name').text
            self._expect('{')
            components = []
            while not self._at('}'):
                if self._peek().kind == 'EOF':
                    self._error("Expected '}'")
                component = self._item(())
                if component is not None:
                    components.append(component)
            self._expect('}')
            if self._peek().kind != 'EOF':
                self._error('Expected end of file')
        except _SyntaxError as e:
            return ParseResult(None, [e.diagnostic])

        return self._build(name, components, header.span)

    def _item(self, scope: Tuple[str, ...], nested: bool = False) -> Optional[Component]:
        token = self._peek()
        if token.kind == 'IDENT' and token.text in ROLE_KEYWORDS:
            return self._atomic()
        if self._at('composite'):
            return self._composite(scope)
        if self._at('link'):
            self._link(scope)
            return None
        if not nested and self._at('symmetry'):
            self._symmetry()
            return None
        if not nested and self._at('application'):
            self._application()
            return None
        expected = 'atomic, composite or link' if nested else 'a declaration'
        self._error(f"Expected {expected}")

    def _atomic(self) -> Component:
        role_token = self._advance()
        name = self._ident('component name')
        attrs: Dict = {'services': set()}
        if self._accept('{'):
            while not self._at('}'):
                self._attr(attrs)
            self._advance()
            self._accept(';')
        else:
            self._expect(';')
        return Component(
            name=name.text,
            role=ROLE_KEYWORDS[role_token.text],
            services=frozenset(attrs['services']),
            capacity=attrs.get('capacity'),
            classification=attrs.get('class'),
            accelerator=attrs.get('accelerator'),
            expansion=attrs.get('access'),
            span=name.span
        )

    def _attr(self, attrs: Dict):
        token = self._ident('attribute')
        keyword = token.text
        if keyword != 'service' and keyword in attrs:
            self._error(f"Attribute '{keyword}' declared twice", token)
        if keyword == 'service':
            attrs['services'].add(self._ident('service name').text)
            while self._accept(','):
                attrs['services'].add(self._ident('service name').text)
        elif keyword == 'capacity':
            attrs['capacity'] = self._number()
            self._expect('Bps')
        elif keyword == 'class':
            origin = self._choice([o.value for o in Origin], 'device origin')
            complexity = self._choice([c.value for c in Complexity], 'device complexity')
            notes = ''
            if self._peek().kind == 'STRING':
                notes = self._string()
            attrs['class'] = DeviceClassification(Origin(origin), Complexity(complexity), notes)
        elif keyword == 'accelerator':
            name = self._ident('accelerator name').text
            coupling = self._choice([c.value for c in Coupling], 'coupling')
            parallel = None
            if self._accept('parallel'):
                parallel = self._number()
                if parallel < 2:
                    self._error('Parallel access needs at least 2 users', self.tokens[self.pos - 1])
            attrs['accelerator'] = AcceleratorTag(name, Coupling(coupling), parallel)
        elif keyword == 'access':
            values = {}
            for field_name in ('width', 'align', 'line'):
                self._expect(field_name)
                values[field_name] = self._number()
                self._expect('B')
            attrs['access'] = ExpansionRule(values['width'], values['align'], values['line'])
        else:
            self._error('Expected attribute (service | capacity | class | accelerator | access)', token)
        self._expect(';')

    def _string(self) -> str:
        token = self._advance()
        try:
            return json.loads(token.text)
        except ValueError:
            self._error('Malformed string literal', token)

    def _composite(self, scope: Tuple[str, ...]) -> Component:
        self._advance()
        name = self._ident('composite name')
        inner = scope + (name.text,)
        self._expect('{')
        children = []
        while not self._at('}'):
            if self._peek().kind == 'EOF':
                self._error("Expected '}'")
            child = self._item(inner, nested=True)
            if child is not None:
                children.append(child)
        self._advance()
        self._accept(';')
        return Component(name=name.text, role=Role.COMPOSITE, children=tuple(children), span=name.span)

    def _link(self, scope: Tuple[str, ...]):
        keyword = self._advance()
        src = self._qid(scope)
        self._expect('->')
        dst = self._qid(scope)
        self._expect(';')
        self.links.append((src, dst, keyword.span))

    def _symmetry(self):
        self._advance()
        name = self._ident('symmetry class name')
        self._expect('{')
        members = [self._qid()]
        while self._accept(','):
            members.append(self._qid())
        self._expect('}')
        self._accept(';')
        self.symmetries.append((name.text, members, name.span))

    def _application(self):
        self._advance()
        name = self._ident('application name')
        self._expect('{')
        transactions = []
        while not self._at('}'):
            transactions.append(self._transaction())
        self._advance()
        self._accept(';')
        self.applications.append((name.text, transactions, name.span))

    def _transaction(self) -> Tuple:
        self._expect('transaction')
        name = self._ident('transaction name')
        self._expect(':')
        path = [self._qid()]
        while self._accept('->'):
            path.append(self._qid())
        self._expect('uses')
        service = self._ident('service name').text
        rate = payload = 0
        if self._accept('rate'):
            rate = self._number()
            self._expect('/s')
        if self._accept('size'):
            payload = self._number()
            self._expect('B')
        self._expect(';')
        return name, path, service, rate, payload

    # ==================== Resolution ====================

    def _build(self, name: str, components: List[Component], span: SourceSpan) -> ParseResult:
        atoms = {qid for qid, _ in iter_atoms(components)}
        known = atoms | {qid for qid, _ in iter_composites(components)}
        diagnostics: List[Diagnostic] = []

        def resolve(ref: _Reference) -> str:
            for depth in range(len(ref.scope), -1, -1):
                candidate = '.'.join(ref.scope[:depth] + (ref.text,))
                if candidate in known:
                    return candidate
            diagnostics.append(Diagnostic.error('E_UNKNOWN_COMPONENT', f"Unknown component '{ref.text}'", ref.span))
            return ref.text

        links = tuple(Link(resolve(src), resolve(dst), link_span) for src, dst, link_span in self.links)
        symmetries = tuple(
            SymmetryClass(sym_name, tuple(resolve(m) for m in members), sym_span)
            for sym_name, members, sym_span in self.symmetries
        )
        applications = []
        for app_name, txns, app_span in self.applications:
            transactions = tuple(
                Transaction(
                    name=txn_name.text,
                    path=tuple(resolve(hop) for hop in path),
                    service=service,
                    rate=rate,
                    payload=payload,
                    app=app_name,
                    span=txn_name.span
                )
                for txn_name, path, service, rate, payload in txns
            )
            applications.append(Application(app_name, transactions, app_span))

        platform = Platform(
            name=name,
            components=tuple(components),
            links=links,
            symmetries=symmetries,
            applications=tuple(applications),
            span=span
        )
        # unresolved references were already reported with their exact span
        structural = validate_platform(platform)
        if diagnostics:
            structural = [d for d in structural if d.code != 'E_UNKNOWN_COMPONENT']
        diagnostics.extend(structural)
        if has_errors(diagnostics):
            logger.info(f"Parse of {self.file} failed with {len(diagnostics)} diagnostics")
            return ParseResult(None, diagnostics)
        return ParseResult(platform, diagnostics)


def parse(text: str, file: str = '<memory>') -> ParseResult:
    """
    Parse PML text into a validated Platform

    Args:
        text: model source
        file: path recorded in diagnostic spans

    Returns:
        ParseResult holding the platform, or the diagnostics when parsing fails
    """
    return PmlParser(text, file).parse()


def load_platform(path: str) -> Platform:
    """Read and parse a UTF-8 model file, raising PmlError with all diagnostics on failure"""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except (OSError, UnicodeDecodeError) as e:
        raise PmlError('E_IO', f"Cannot read {path}: {e}")
    result = parse(text, path)
    if not result.ok:
        first = result.diagnostics[0]
        raise PmlError(first.code, first.message, first.span, result.diagnostics)
    return result.platform


# ==================== Rendering ====================

INDENT = '  '


def render(platform: Platform) -> str:
    """
    Render a validated platform as canonical PML text

    Declarations are sorted and indentation is fixed, so structurally equal
    platforms render to identical text.
    """
    if not platform.validated:
        raise PmlError('E_NOT_VALIDATED', f"Platform '{platform.name}' must be validated before rendering", platform.span)
    canonical = platform.canonical()

    component_lines = []
    for component in canonical.components:
        component_lines.extend(render_component(component, 1))
    sections = [
        component_lines,
        [f"{INDENT}link {link.src} -> {link.dst};" for link in canonical.links],
        [f"{INDENT}symmetry {s.name} {{ {', '.join(s.members)} }}" for s in canonical.symmetries],
        _render_applications(canonical.applications),
    ]

    lines = [f"platform {canonical.name} {{"]
    first = True
    for section in sections:
        if not section:
            continue
        if not first:
            lines.append('')
        lines.extend(section)
        first = False
    lines.append('}')
    return '\n'.join(lines) + '\n'


def render_component(component: Component, depth: int) -> List[str]:
    pad = INDENT * depth
    if component.role == Role.COMPOSITE:
        lines = [f"{pad}composite {component.name} {{"]
        for child in component.children:
            lines.extend(render_component(child, depth + 1))
        lines.append(f"{pad}}}")
        return lines

    attrs = render_attrs(component)
    head = f"{pad}{component.role.value} {component.name}"
    if not attrs:
        return [f"{head};"]
    inner = INDENT * (depth + 1)
    return [f"{head} {{"] + [f"{inner}{attr}" for attr in attrs] + [f"{pad}}}"]


def render_attrs(component: Component) -> List[str]:
    attrs = []
    if component.services:
        attrs.append(f"service {', '.join(sorted(component.services))};")
    if component.capacity is not None:
        attrs.append(f"capacity {component.capacity} Bps;")
    if component.classification:
        cls = component.classification
        notes = f" {json.dumps(cls.notes, ensure_ascii=False)}" if cls.notes else ''
        attrs.append(f"class {cls.origin.value} {cls.complexity.value}{notes};")
    if component.accelerator:
        tag = component.accelerator
        parallel = f" parallel {tag.parallel}" if tag.parallel else ''
        attrs.append(f"accelerator {tag.name} {tag.coupling.value}{parallel};")
    if component.expansion:
        rule = component.expansion
        attrs.append(f"access width {rule.width} B align {rule.alignment} B line {rule.line} B;")
    return attrs


def _render_applications(applications) -> List[str]:
    lines = []
    for app in applications:
        lines.append(f"{INDENT}application {app.name} {{")
        for txn in app.transactions:
            lines.append(f"{INDENT * 2}{render_transaction(txn)}")
        lines.append(f"{INDENT}}}")
    return lines


def render_transaction(txn: Transaction) -> str:
    text = f"transaction {txn.name}: {' -> '.join(txn.path)} uses {txn.service}"
    if txn.rate:
        text += f" rate {txn.rate}/s"
    if txn.payload:
        text += f" size {txn.payload} B"
    return text + ';'


def render_fragment(fragment: Fragment, title: str = '') -> str:
    """Fragment as reviewable PML text; annotations and unrouted transactions become comments"""
    lines = [f"// itfkit fragment: {title}" if title else '// itfkit fragment']
    for component in sorted(fragment.components, key=lambda c: c.name):
        lines.extend(render_component(component, 0))
    for link in sorted(fragment.links, key=lambda link: (link.src, link.dst)):
        lines.append(f"link {link.src} -> {link.dst};")
    for symmetry in fragment.symmetries:
        lines.append(f"symmetry {symmetry.name} {{ {', '.join(symmetry.members)} }}")
    for annotation in fragment.annotations:
        probe = Component(
            name=annotation.component, role=Role.INITIATOR,
            accelerator=annotation.accelerator, expansion=annotation.expansion
        )
        lines.append(f"// annotate {annotation.component}: {' '.join(render_attrs(probe))}")
    for template in fragment.transactions_to_add:
        via = f" -> {template.via}" if template.via else ''
        lines.append(
            f"// transaction {template.name}: {template.head}{via} -> {template.tail} "
            f"uses {template.service} (application of {template.placeholder})"
        )
    return '\n'.join(lines) + '\n'
