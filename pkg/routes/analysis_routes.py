"""
Analysis Routes - API endpoints for platform models and their analyses
"""

import logging

from flask import Blueprint, Response, jsonify, request

from models.diagnostics import PmlError
from services.analysis_service import AnalysisService

logger = logging.getLogger(__name__)

analysis_bp = Blueprint('analysis', __name__)
analysis_service = AnalysisService()


def _platform_from(data):
    """Model given inline ('source') or by bundled name ('model')"""
    return analysis_service.load(source=data.get('source'), model=data.get('model'))


def _error(e: Exception):
    if isinstance(e, PmlError):
        return jsonify(e.to_dict()), 400
    logger.error(f"Analysis request failed: {e}")
    return jsonify({'success': False, 'error': str(e)}), 500


@analysis_bp.route('/models', methods=['GET'])
def list_models():
    """List the bundled platform models"""
    return jsonify({'success': True, 'models': analysis_service.list_models()})


@analysis_bp.route('/models/<name>', methods=['GET'])
def get_model(name):
    """Source text of a bundled model"""
    if name not in analysis_service.list_models():
        return jsonify({'success': False, 'error': f"Model '{name}' not found"}), 404
    try:
        return jsonify({'success': True, 'name': name, 'source': analysis_service.model_source(name)})
    except Exception as e:
        return _error(e)


@analysis_bp.route('/validate', methods=['POST'])
def validate():
    """Parse and check a model, returning every diagnostic"""
    try:
        data = request.get_json(silent=True) or {}
        source = data.get('source')
        if source is None and data.get('model'):
            source = analysis_service.model_source(data['model'])
        if source is None:
            return jsonify({'success': False, 'error': 'No source provided'}), 400
        return jsonify(analysis_service.validate(source))
    except Exception as e:
        return _error(e)


@analysis_bp.route('/paths', methods=['POST'])
def paths():
    """Enumerate routes between an initiator and a target"""
    try:
        data = request.get_json(silent=True) or {}
        if not data.get('from') or not data.get('to'):
            return jsonify({'success': False, 'error': "Both 'from' and 'to' are required"}), 400
        platform = _platform_from(data)
        return jsonify(analysis_service.paths(platform, data['from'], data['to']))
    except Exception as e:
        return _error(e)


@analysis_bp.route('/interfere', methods=['POST'])
def interfere():
    """Classified scenarios and interference channels"""
    try:
        data = request.get_json(silent=True) or {}
        platform = _platform_from(data)
        result = analysis_service.interfere(
            platform,
            n=int(data.get('n', 2)),
            same_app_exclusion=not data.get('include_same_app', False),
            use_quotient=data.get('quotient', True)
        )
        return jsonify(result)
    except Exception as e:
        return _error(e)


@analysis_bp.route('/capacity', methods=['POST'])
def capacity():
    """Average-demand capacity check"""
    try:
        data = request.get_json(silent=True) or {}
        return jsonify(analysis_service.capacity(_platform_from(data)))
    except Exception as e:
        return _error(e)


@analysis_bp.route('/report', methods=['POST'])
def report():
    """Full findings report"""
    try:
        data = request.get_json(silent=True) or {}
        platform = _platform_from(data)
        result = analysis_service.report(platform, n_max=data.get('n_max'))
        return Response(result.to_json(), mimetype='application/json')
    except Exception as e:
        return _error(e)


@analysis_bp.route('/dot', methods=['POST'])
def dot():
    """DOT rendering, optionally highlighting a finding"""
    try:
        data = request.get_json(silent=True) or {}
        platform = _platform_from(data)
        source = analysis_service.dot(platform, data.get('highlight'))
        return Response(source, mimetype='text/vnd.graphviz')
    except Exception as e:
        return _error(e)


@analysis_bp.route('/template', methods=['POST'])
def template():
    """Fragment text for an accelerator integration case"""
    try:
        data = request.get_json(silent=True) or {}
        if not data.get('case') or not data.get('name'):
            return jsonify({'success': False, 'error': "Both 'case' and 'name' are required"}), 400
        fragment = analysis_service.template(
            case=data['case'],
            name=data['name'],
            attach=data.get('attach'),
            parallel=data.get('parallel'),
            symmetric=bool(data.get('symmetric', False)),
            targets=data.get('targets', []),
            controller=data.get('controller'),
            config_services=data.get('config_services', []),
            microcontroller=bool(data.get('microcontroller', False))
        )
        return jsonify({'success': True, 'fragment': fragment})
    except Exception as e:
        return _error(e)
