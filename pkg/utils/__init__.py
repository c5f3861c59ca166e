from . import exceptions
from . import utils
