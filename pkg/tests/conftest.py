import numpy as np
import pytest

from spheredeg.fields import Monomial, PolyField


def random_poly_field(rng, dim, dim_out=None, max_deg=3, n_terms=4):
    dim_out = dim if dim_out is None else dim_out
    comps = []
    for _ in range(dim_out):
        terms = []
        for _ in range(n_terms):
            e = rng.integers(0, max_deg + 1, size=dim)
            while e.sum() > max_deg:
                e[rng.integers(dim)] -= 1
                e = np.maximum(e, 0)
            terms.append(Monomial(tuple(int(v) for v in e), float(rng.uniform(-2, 2))))
        comps.append(terms)
    return PolyField(dim, comps)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
