"""
Analysis Service - loads models and runs the analyses for the CLI and the HTTP API
"""

import logging
import os
from typing import Dict, List, Optional, Sequence

from config import Config
from models.diagnostics import Diagnostic, PmlError
from models.findings import Report
from models.platform import Coupling, Platform
from models.template import ConfigAccess, TemplateSpec
from pml_dsl import load_platform, parse, render_fragment
from services.capacity_service import check_capacity
from services.interference_service import channels, classify, quotient, scenarios
from services.report_service import build_report, export_dot
from services.template_service import instantiate
from services.transaction_service import enumerate_paths, resolve_transactions

logger = logging.getLogger(__name__)

TEMPLATE_CASES = {
    'tightly': Coupling.TIGHTLY_COUPLED,
    'passive': Coupling.PASSIVE,
    'semi': Coupling.SEMI_ACTIVE,
    'active': Coupling.ACTIVE
}


class AnalysisService:
    """Entry point shared by the command line and the blueprint"""

    def __init__(self, models_dir: Optional[str] = None):
        self.models_dir = models_dir or Config.MODELS_DIR

    # ==================== Models ====================

    def list_models(self) -> List[str]:
        """Names of the bundled models"""
        if not os.path.isdir(self.models_dir):
            return []
        return sorted(
            os.path.splitext(f)[0] for f in os.listdir(self.models_dir)
            if f.endswith(Config.MODEL_EXTENSION)
        )

    def model_path(self, name: str) -> str:
        if name not in self.list_models():
            raise PmlError('E_IO', f"No bundled model named '{name}'")
        return os.path.join(self.models_dir, f"{name}{Config.MODEL_EXTENSION}")

    def model_source(self, name: str) -> str:
        with open(self.model_path(name), 'r', encoding='utf-8') as f:
            return f.read()

    def load(self, source: Optional[str] = None, model: Optional[str] = None, path: Optional[str] = None) -> Platform:
        """Parse inline text, a bundled model or a file; raises PmlError on failure"""
        if source is not None:
            result = parse(source, '<request>')
            if not result.ok:
                first = result.diagnostics[0]
                raise PmlError(first.code, first.message, first.span, result.diagnostics)
            return result.platform
        if model:
            return load_platform(self.model_path(model))
        if path:
            return load_platform(path)
        raise PmlError('E_IO', 'No model given (source, model or path)')

    # ==================== Analyses ====================

    def _rejected(self, platform: Platform) -> List[Diagnostic]:
        """Errors of the declared transactions left out of scenarios and demand"""
        rejected = [d for d in resolve_transactions(platform).diagnostics if d.is_error]
        for diagnostic in rejected:
            logger.warning(f"Transaction left out of the analysis: {diagnostic}")
        return rejected

    def validate(self, source: str, file: str = '<request>') -> Dict:
        result = parse(source, file)
        diagnostics = list(result.diagnostics)
        if result.ok:
            diagnostics.extend(resolve_transactions(result.platform).diagnostics)
        return {
            'success': True,
            'valid': result.ok and not any(d.is_error for d in diagnostics),
            'diagnostics': [d.to_dict() for d in diagnostics]
        }

    def paths(self, platform: Platform, src: str, dst: str) -> Dict:
        found = enumerate_paths(platform, src, dst)
        return {'success': True, 'from': src, 'to': dst, 'paths': found, 'count': len(found)}

    def interfere(
        self,
        platform: Platform,
        n: int = 2,
        same_app_exclusion: Optional[bool] = None,
        use_quotient: Optional[bool] = None
    ) -> Dict:
        """Scenarios of size n grouped by classification, plus the channel map up to n"""
        use_quotient = Config.QUOTIENT_SCENARIOS if use_quotient is None else use_quotient
        scs = scenarios(platform, n, same_app_exclusion)
        if use_quotient and platform.symmetries:
            groups = [(orbit.representative, orbit.size) for orbit in quotient(platform, scs)]
        else:
            groups = [(scenario, 1) for scenario in scs]

        grouped = []
        for scenario, size in groups:
            entry = scenario.to_dict()
            entry.update(classify(scenario).to_dict())
            entry['orbit_size'] = size
            grouped.append(entry)

        channel_map = channels(platform, n, same_app_exclusion)
        rejected = self._rejected(platform)
        return {
            'success': True,
            'n': n,
            'diagnostics': [d.to_dict() for d in rejected],
            'has_errors': bool(rejected),
            'scenario_count': len(scs),
            'scenarios': grouped,
            'channels': {c: [s.keys for s in found] for c, found in channel_map.items()}
        }

    def capacity(self, platform: Platform) -> Dict:
        report = check_capacity(platform)
        result = report.to_dict()
        result['success'] = True
        rejected = self._rejected(platform)
        result['diagnostics'] = [d.to_dict() for d in rejected]
        result['has_errors'] = report.has_errors or bool(rejected)
        return result

    def report(
        self,
        platform: Platform,
        n_max: Optional[int] = None,
        same_app_exclusion: Optional[bool] = None,
        use_quotient: Optional[bool] = None
    ) -> Report:
        return build_report(platform, n_max, same_app_exclusion, use_quotient)

    def dot(self, platform: Platform, highlight: Optional[str] = None) -> str:
        finding = None
        if highlight:
            finding = self.report(platform).find(highlight)
            if finding is None:
                raise PmlError('E_UNKNOWN_COMPONENT', f"No finding with id '{highlight}'")
        return export_dot(platform, finding)

    def template(
        self,
        case: str,
        name: str,
        attach: Optional[str] = None,
        parallel: Optional[int] = None,
        symmetric: bool = False,
        targets: Sequence[str] = (),
        controller: Optional[str] = None,
        config_services: Sequence[str] = (),
        microcontroller: bool = False
    ) -> str:
        """Fragment DSL text for one accelerator integration case"""
        if case not in TEMPLATE_CASES:
            raise PmlError('E_BAD_SPEC', f"Unknown template case '{case}' ({', '.join(TEMPLATE_CASES)})")
        spec = TemplateSpec(
            name=name,
            coupling=TEMPLATE_CASES[case],
            parallel=parallel,
            controller=controller,
            attach=attach,
            targets=tuple(targets),
            config_profile=tuple(ConfigAccess(service) for service in config_services),
            symmetric=symmetric,
            microcontroller=microcontroller
        )
        fragment = instantiate(spec)
        access = 'unitary' if spec.is_unitary else f"parallel({parallel})"
        logger.info(f"Generated {case} fragment for {name}")
        return render_fragment(fragment, f"{name} ({spec.coupling.value}, {access})")
