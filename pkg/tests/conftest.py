import logging

import numpy as np
import pytest

from auem.tensor import make_rng

log = logging.getLogger("auem.tests")


@pytest.fixture
def rng(request):
    """Philox generator seeded from the test name; the seed is logged."""
    seed = sum(ord(ch) for ch in request.node.name) * 7919 % 2**31
    log.info("seed for %s: %d", request.node.name, seed)
    return make_rng(seed)


def proj(v):
    v = np.asarray(v)
    return np.outer(v, v.conj())
