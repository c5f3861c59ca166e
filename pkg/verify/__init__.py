from . import report
from . import fragment
from . import growth
from . import scenarios
