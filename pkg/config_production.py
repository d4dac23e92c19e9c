"""
Environment-specific configuration for the analysis API
Override config.py settings per FLASK_ENV
"""
import os
from config import Config


class ProductionConfig(Config):
    """Production-specific configuration"""

    # Security
    DEBUG = False
    TESTING = False

    # CORS - Set your production domain
    CORS_ORIGINS = os.getenv('CORS_ORIGINS', '*').split(',')

    # Logging
    LOG_TO_STDOUT = True


class DevelopmentConfig(Config):
    """Development configuration"""
    DEBUG = True
    TESTING = False
    CORS_ORIGINS = ['http://localhost:3000', 'http://127.0.0.1:3000']


class TestingConfig(Config):
    """Testing configuration"""
    DEBUG = True
    TESTING = True
    CORS_ORIGINS = ['*']


# Load appropriate config based on environment
config = {
    'production': ProductionConfig,
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}


def get_config():
    """Get appropriate config based on FLASK_ENV"""
    env = os.getenv('FLASK_ENV', 'development')
    return config.get(env, config['default'])
