import numpy as np
import pytest

from zsdress.fields import Grid, MatrixField, constant_field, zero_field


def test_grid_basics():
    g = Grid(-1, 1, 5, 0, 2, 3)
    assert g.dx == pytest.approx(0.5) and g.dt == pytest.approx(1.0)
    X, T = g.mesh()
    assert X.shape == (3, 5) and T[2, 0] == 2
    assert Grid.from_dict(g.to_dict()) == g
    with pytest.raises(ValueError):
        Grid(0, 1, 0, 0, 1, 2)


def test_matrix_field_broadcast_and_cache():
    calls = []

    def ev(x, t):
        calls.append(x.size)
        return np.stack([x + 1j * t, x * t], axis=-1)

    f = MatrixField(ev, (2,), "pair")
    assert f(1.0, 2.0).shape == (2,)
    assert f(np.zeros((3, 4)), 1.0).shape == (3, 4, 2)
    g = Grid.square(1, 5)
    a = f.sample(g)
    b = f.sample(g)
    assert a is b and not a.flags.writeable
    assert calls[-1] == 25 and len(calls) == 3


def test_map_and_constants():
    M = np.array([[1, 2j], [3, 4]])
    f = constant_field(M)
    assert np.array_equal(f(0.3, 0.1), M)
    tr = f.map(lambda A: np.trace(A, axis1=1, axis2=2), shape=())
    assert tr(np.arange(3.0), 0.0).tolist() == [5, 5, 5]
    assert np.array_equal(zero_field(3)(1, 1), np.zeros((3, 3)))
