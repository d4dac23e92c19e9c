import os
from dotenv import load_dotenv

load_dotenv()

BASE_DIR = os.path.dirname(os.path.abspath(__file__))


def _env_flag(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() == 'true'


class Config:
    """Application configuration"""
    SECRET_KEY = os.getenv('SECRET_KEY', 'dev-secret-key-change-in-production')
    LOG_LEVEL = os.getenv('ITFKIT_LOG_LEVEL', 'INFO')
    MAX_CONTENT_LENGTH = int(os.getenv('MAX_CONTENT_LENGTH', 2 * 1024 * 1024))  # 2MB of model text

    # Bundled platform models
    MODELS_DIR = os.getenv('ITFKIT_MODELS_DIR', os.path.join(BASE_DIR, 'platforms'))
    MODEL_EXTENSION = '.pml'

    # Interference calculus
    DEFAULT_SCENARIO_SIZE = int(os.getenv('ITFKIT_SCENARIO_SIZE', 2))
    SAME_APP_EXCLUSION = _env_flag('ITFKIT_SAME_APP_EXCLUSION', 'true')
    QUOTIENT_SCENARIOS = _env_flag('ITFKIT_QUOTIENT', 'true')
    MAX_SCENARIOS = int(os.getenv('ITFKIT_MAX_SCENARIOS', 200000))
    PATH_CUTOFF = int(os.getenv('ITFKIT_PATH_CUTOFF')) if os.getenv('ITFKIT_PATH_CUTOFF') else None

    # Capacity analysis (exact integers, signed 64-bit bound)
    MAX_DEMAND = 2 ** 63 - 1

    # Reserved names
    MICROCODE_APPLICATION = '__microcode__'
    QUEUE_SERVICE = 'enqueue'
    CONFIG_SERVICE = 'config'
    CONFIG_TARGET_SUFFIX = '_CSB'
    MICROCONTROLLER_SUFFIX = '_MCU'

    # Templates
    DEFAULT_PASSIVE_SERVICES = ('load', 'store')
    DEFAULT_DATA_SERVICE = 'load'
    DEFAULT_EXPANSION = {
        'width': 16,
        'alignment': 16,
        'line': 64
    }

    # Report settings
    REPORT_SCHEMA = 'itfkit/1'
    AMC_TAGS = ('RESOURCE_ID', 'CHANNEL_ID', 'CAPACITY', 'SOFTWARE_ID', 'USAGE_DOMAIN', 'MICROCODE')
    FINDING_KINDS = (
        'itf_channel', 'free_pair', 'partial', 'capacity',
        'abstraction_warning', 'unitary_violation', 'classification_note'
    )
    FINDING_ID_LENGTH = 12

    # DOT export
    DOT_SHAPES = {
        'initiator': 'box',
        'target': 'ellipse',
        'transporter': 'hexagon'
    }
    HIGHLIGHT_COLOR = 'red'
    DOT_RANKDIR = 'LR'
