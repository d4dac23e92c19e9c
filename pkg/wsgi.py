"""
WSGI entry point for production deployments (gunicorn wsgi:app)
"""
import os

os.environ.setdefault('FLASK_ENV', 'production')

from app import app

if __name__ == '__main__':
    app.run()
