import numpy as np

from gaussbm.body2d import boundary_geometry, validate
from gaussbm.generators import (case_rng, mean_convex_body, mild_body, random_body,
                                random_function)


def test_case_streams_are_independent_of_order():
    a = case_rng(5, "suite", 3).standard_normal(4)
    case_rng(5, "suite", 2).standard_normal(100)
    np.testing.assert_array_equal(a, case_rng(5, "suite", 3).standard_normal(4))
    assert not np.allclose(a, case_rng(5, "other", 3).standard_normal(4))


def test_generated_bodies_are_valid():
    for i in range(50):
        rng = case_rng(5, "gen", i)
        assert validate(random_body(rng)).ok
        assert validate(mild_body(rng)).ok
        assert boundary_geometry(mean_convex_body(rng)).h_gamma.min() > 0.1


def test_reproducible():
    f1 = random_function(case_rng(1, "f", 0))
    f2 = random_function(case_rng(1, "f", 0))
    assert f1 == f2
