import math

from hypothesis import strategies as st

from posgame import GameSpec


@st.composite
def game_specs(draw, min_n=2, max_n=10, min_kappa=1e-3, max_kappa=25.0):
    """Random valid competition instances with targets away from the simplex
    boundary (closed-form coefficients scale like 1/lambda_i, so boundary
    draws would need looser tolerances)."""
    n = draw(st.integers(min_n, max_n))
    weights = draw(
        st.lists(
            st.floats(0.05, 1.0, allow_nan=False, allow_infinity=False),
            min_size=n,
            max_size=n,
        )
    )
    total = math.fsum(weights)
    lambdas = tuple(w / total for w in weights)
    kappa = draw(st.floats(min_kappa, max_kappa, allow_nan=False, allow_infinity=False))
    return GameSpec(n=n, lambdas=lambdas, kappa=kappa)
