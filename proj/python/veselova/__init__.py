from ._core import *  # noqa: F401,F403
from ._core import ConfigError, VeselovaError  # noqa: F401
