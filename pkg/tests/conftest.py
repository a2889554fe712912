import pytest

from paritysi import _kernels


@pytest.fixture(params=sorted(_kernels.IMPLEMENTATIONS))
def kernel(request):
    """Run a test once per available kernel implementation."""
    previous = _kernels.use(request.param)
    yield request.param
    _kernels.use(previous)
