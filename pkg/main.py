"""
Command-line entry point.
Sliding Window AUC - streaming approximate AUC with exact validation
"""
import logging
import sys

from app.cli.routes import main
import config

# Configure logging (standard error, so standard output stays CSV)
logging.basicConfig(
    level=logging.DEBUG if config.settings.debug else config.settings.log_level,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    stream=sys.stderr
)
logger = logging.getLogger(__name__)


if __name__ == "__main__":
    logger.debug(f"Starting {config.settings.app_name} {config.settings.app_version}")
    sys.exit(main())
