"""
vtalign - calibration-free visual/thermal frame alignment
Toolkit factory and logging setup
"""
import os
import logging
from logging.handlers import RotatingFileHandler

from vtalign.config import config

__version__ = config['default'].APP_VERSION

logger = logging.getLogger('vtalign')


def create_toolkit(config_name=None):
    """
    Toolkit factory pattern

    Args:
        config_name: Configuration to use (development, production, testing)

    Returns:
        The selected configuration class, with logging configured
    """
    # Determine configuration
    if config_name is None:
        config_name = os.environ.get('VTALIGN_ENV', 'development')

    cfg = config.get(config_name, config['default'])
    cfg.init_dirs()

    # Setup logging
    setup_logging(cfg)

    logger.debug(f'{cfg.APP_NAME} v{cfg.APP_VERSION} configured ({config_name})')

    return cfg


def setup_logging(cfg, level=None):
    """Configure toolkit logging on the diagnostic stream (and file in production)"""
    logger.handlers.clear()
    logger.propagate = False

    console_handler = logging.StreamHandler()
    console_handler.setFormatter(logging.Formatter(cfg.LOG_FORMAT))
    logger.addHandler(console_handler)

    if cfg.LOG_TO_FILE:
        file_handler = RotatingFileHandler(
            str(cfg.LOG_FILE),
            maxBytes=10240000,
            backupCount=10
        )
        file_handler.setFormatter(logging.Formatter(cfg.LOG_FORMAT))
        file_handler.setLevel(logging.INFO)
        logger.addHandler(file_handler)

    logger.setLevel(level or cfg.LOG_LEVEL)
