"""Solar radiation forecasting: MLP regressor and moving-average baselines."""

from solarcast._core import *  # noqa: F401,F403
from solarcast._core import __doc__  # noqa: F401
