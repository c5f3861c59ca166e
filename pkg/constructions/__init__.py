from . import action_algebra
from . import star
from . import zero
from . import automatic
from . import witness
from . import membership
