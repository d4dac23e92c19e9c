"""
Routes Module - API endpoints
"""

from routes.analysis_routes import analysis_bp

__all__ = [
    'analysis_bp'
]


def register_blueprints(app):
    """Register all blueprints with the Flask app"""
    app.register_blueprint(analysis_bp, url_prefix='/api/analysis')
