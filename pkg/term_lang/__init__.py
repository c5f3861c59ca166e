from . import parser
from . import words
from . import families
