# tests/conftest.py
"""Pytest configuration and fixtures"""

import sys
import os
import pytest
from click.testing import CliRunner

# Add parent directory to path so we can import app modules
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app import app as flask_app
from config import Config
from pml_dsl import load_platform, parse

PLATFORMS_DIR = Config.MODELS_DIR
GOLDEN_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'golden')


def model_path(name):
    return os.path.join(PLATFORMS_DIR, f"{name}.pml")


def parse_ok(text):
    """Parse model text and fail the test with the diagnostics when it does not parse"""
    result = parse(text)
    assert result.ok, [str(d) for d in result.diagnostics]
    return result.platform


CHAIN_SOURCE = """
platform Chain {
  initiator C0;
  transporter BUS;
  target DDR { service load, store; }
  link C0 -> BUS;
  link BUS -> DDR;
}
"""

DIAMOND_SOURCE = """
platform Diamond {
  initiator C0;
  transporter B1;
  transporter B2;
  target DDR { service load; }
  link C0 -> B1;
  link C0 -> B2;
  link B1 -> DDR;
  link B2 -> DDR;
}
"""

# two transactions through BUS: 1000/s x 64 B and 500/s x 128 B
BUS_SOURCE = """
platform Bus {
  initiator C0;
  initiator C1;
  transporter BUS { capacity 100000 Bps; }
  target DDR { service load, store; capacity 1000000 Bps; }
  link C0 -> BUS;
  link C1 -> BUS;
  link BUS -> DDR;
  application a {
    transaction t0: C0 -> BUS -> DDR uses load rate 1000/s size 64 B;
  }
  application b {
    transaction t1: C1 -> BUS -> DDR uses store rate 500/s size 128 B;
  }
}
"""


@pytest.fixture(scope='function')
def app():
    """Create Flask app instance for testing"""
    flask_app.config['TESTING'] = True
    yield flask_app


@pytest.fixture(scope='function')
def client(app):
    """Create test client"""
    return app.test_client()


@pytest.fixture(scope='function')
def runner():
    """Create click CLI runner"""
    return CliRunner()


@pytest.fixture
def chain():
    return parse_ok(CHAIN_SOURCE)


@pytest.fixture
def diamond():
    return parse_ok(DIAMOND_SOURCE)


@pytest.fixture
def bus():
    return parse_ok(BUS_SOURCE)


@pytest.fixture
def keystone():
    return load_platform(model_path('keystone'))


@pytest.fixture
def xavier():
    return load_platform(model_path('xavier'))


@pytest.fixture
def xavier_cpu():
    return load_platform(model_path('xavier_cpu'))


@pytest.fixture
def nvdla_passive():
    return load_platform(model_path('nvdla_passive'))


@pytest.fixture
def nvdla_small():
    return load_platform(model_path('nvdla_small'))


@pytest.fixture
def nvdla_large():
    return load_platform(model_path('nvdla_large'))


@pytest.fixture
def zynq():
    return load_platform(model_path('zynq'))
