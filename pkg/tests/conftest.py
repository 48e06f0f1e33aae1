import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rspfl.flp import CostProfile, Instance  # noqa: E402
from rspfl.metric import Metric  # noqa: E402


@pytest.fixture
def tiny_instance():
    """Three vertices, d = [[0,1,2],[1,0,1.5],[2,1.5,0]], f = (0.4, 0.8, 1.0)."""
    d = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 1.5], [2.0, 1.5, 0.0]])
    return Instance(Metric(3, d), CostProfile([0.4, 0.8, 1.0]))
