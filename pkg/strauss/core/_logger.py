import logging

logger = logging.getLogger("strauss")
