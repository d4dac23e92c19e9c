"""
itfkit - Flask Application
HTTP API over the platform modeling and interference analysis services
"""

import os
import logging
from flask import Flask, jsonify
from flask_cors import CORS

from config import Config
from config_production import get_config

# Setup logging
logging.basicConfig(level=Config.LOG_LEVEL)
logger = logging.getLogger(__name__)

from routes import register_blueprints
from services.analysis_service import AnalysisService


app = Flask(__name__)
app.config.from_object(get_config())

CORS(app, origins=app.config.get('CORS_ORIGINS', ['*']))

register_blueprints(app)
logger.info("Analysis routes registered")


@app.route('/api/health', methods=['GET'])
def health_check():
    """Health check endpoint with bundled model status"""
    models = AnalysisService().list_models()
    return jsonify({
        'status': 'healthy',
        'message': 'itfkit is running',
        'report_schema': Config.REPORT_SCHEMA,
        'components': {
            'bundled_models': len(models)
        }
    })


@app.errorhandler(404)
def not_found(error):
    return jsonify({
        'success': False,
        'error': 'Endpoint not found'
    }), 404


@app.errorhandler(413)
def model_too_large(error):
    return jsonify({
        'success': False,
        'error': f"Model too large. Maximum size is {Config.MAX_CONTENT_LENGTH // (1024 * 1024)}MB."
    }), 413


@app.errorhandler(500)
def internal_error(error):
    logger.error(f"Internal error: {error}")
    return jsonify({
        'success': False,
        'error': 'Internal server error'
    }), 500


# ==================== Main ====================

if __name__ == '__main__':
    print("=" * 50)
    print("itfkit - platform interference analysis API")
    print("=" * 50)
    print(f"Bundled models: {Config.MODELS_DIR}")
    print("\nAvailable endpoints:")
    print("  - /api/health")
    print("  - /api/analysis/models")
    print("  - /api/analysis/{validate,paths,interfere,capacity,report,dot,template}")
    print("=" * 50)

    debug_mode = os.getenv('FLASK_ENV') != 'production'
    app.run(debug=debug_mode, host='0.0.0.0', port=int(os.getenv('PORT', 5000)))
