import pytest
from hypothesis import HealthCheck, settings, strategies as st

from betti_tate.laurent import LaurentMatrix, LaurentPoly

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def laurent_polys(draw, max_terms=3, exp_range=3, coeff=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = draw(st.integers(-exp_range, exp_range))
        terms[e] = draw(st.fractions(-coeff, coeff, max_denominator=3))
    return LaurentPoly(terms)


@st.composite
def laurent_matrices(draw, max_rows=5, max_cols=5, **kw):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    rows = [[draw(laurent_polys(**kw)) for _ in range(c)] for _ in range(r)]
    return LaurentMatrix(rows, r, c)


@pytest.fixture
def y():
    from betti_tate.laurent import Y
    return Y
