"""
Toolkit Configuration
Centralized defaults for the metric, the optimizer and the command line
"""
import os
from pathlib import Path

from dotenv import load_dotenv

# Base directory - module level
BASE_DIR = Path(__file__).resolve().parent.parent

load_dotenv()


def _env(name, default, cast=str):
    """Read a VTALIGN_* environment variable, falling back to default"""
    value = os.environ.get(f'VTALIGN_{name}')
    if value is None or value == '':
        return default
    return cast(value)


class Config:
    """Base configuration"""

    DEBUG = False
    TESTING = False

    # Application Settings
    APP_NAME = 'vtalign'
    APP_VERSION = '1.0.0'

    # Metric (Mattes mutual information)
    METRIC_BIN_COUNT = _env('METRIC_BIN_COUNT', 50, int)
    METRIC_SAMPLING_FRACTION = _env('METRIC_SAMPLING_FRACTION', 1.0, float)
    METRIC_MIN_VALID_FRACTION = _env('METRIC_MIN_VALID_FRACTION', 0.25, float)

    # (1+1) evolutionary optimizer
    EVO_GROWTH_FACTOR = _env('EVO_GROWTH_FACTOR', 1.05, float)
    EVO_SHRINK_FACTOR = _env('EVO_SHRINK_FACTOR', 0.98, float)
    EVO_INITIAL_RADIUS = _env('EVO_INITIAL_RADIUS', 6.25e-3, float)
    EVO_EPSILON = _env('EVO_EPSILON', 1.5e-6, float)
    EVO_MAX_ITERATIONS = _env('EVO_MAX_ITERATIONS', 300, int)

    # Registration
    TRANSFORM_KIND = _env('TRANSFORM_KIND', 'similarity')
    PYRAMID_LEVELS = _env('PYRAMID_LEVELS', 0, int)
    SEED = _env('SEED', 0, int)

    # Inspection
    FAST_THRESHOLD = _env('FAST_THRESHOLD', 20.0, float)
    FAST_CONTIGUOUS = 9
    PATCH_COUNT = _env('PATCH_COUNT', 6, int)
    PATCH_SIZE = 32
    CHECKERBOARD_TILE = _env('CHECKERBOARD_TILE', 32, int)
    HISTOGRAM_BINS = 256

    # Batch
    VISUAL_SUBDIR = _env('VISUAL_SUBDIR', 'visual')
    THERMAL_SUBDIR = _env('THERMAL_SUBDIR', 'thermal')
    IMAGE_EXTENSIONS = {'.png', '.pgm', '.pnm'}
    JOBS = _env('JOBS', os.cpu_count() or 1, int)

    # Logging
    LOG_LEVEL = _env('LOG_LEVEL', 'INFO')
    LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    LOG_TO_FILE = False
    LOG_FILE = BASE_DIR / 'logs' / 'vtalign.log'

    # Manifests
    TIMESTAMP_FORMAT = '%Y-%m-%dT%H:%M:%SZ'

    @classmethod
    def init_dirs(cls):
        """Create directories the configuration writes into"""
        if cls.LOG_TO_FILE:
            os.makedirs(Path(cls.LOG_FILE).parent, exist_ok=True)


class DevelopmentConfig(Config):
    """Development configuration"""
    DEBUG = True


class ProductionConfig(Config):
    """Production configuration"""
    DEBUG = False
    TESTING = False
    LOG_TO_FILE = True


class TestingConfig(Config):
    """Testing configuration"""
    TESTING = True
    LOG_LEVEL = 'WARNING'
    JOBS = 2


# Configuration dictionary
config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}
