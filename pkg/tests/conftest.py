import numpy as np
import pytest

from zml._kernels import available_backends, get_backend


@pytest.fixture(params=available_backends())
def kernels(request):
    """One kernel backend per run: compiled (when built) and pure Python."""
    return get_backend(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
