from . import finite_group
from . import catalog
from . import action
from . import presentation
from . import coset_enum
from . import morphisms
from . import io
