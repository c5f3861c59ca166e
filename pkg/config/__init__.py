from . import logging_config
from . import settings
