import pytest

from fefferman_lab.verify import FeffermanData, flat_projective, random_projective


@pytest.fixture(scope="session")
def fdata():
    """Cached FeffermanData keyed by (n, seed); seed None is the flat structure."""
    cache = {}

    def get(n, seed=None):
        key = (n, seed)
        if key not in cache:
            P = flat_projective(n) if seed is None else random_projective(n, seed)
            cache[key] = FeffermanData(P)
        return cache[key]
    return get
