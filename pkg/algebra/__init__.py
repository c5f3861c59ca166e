from . import signature
from . import finite_algebra
from . import terms
from . import homomorphism
from . import congruence
from . import closure
from . import variety
from . import io
