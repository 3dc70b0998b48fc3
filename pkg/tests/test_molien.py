import numpy as np
import pytest

from isoquot.exactnum import root_of_unity
from isoquot.groups import GroupSpec, generate
from isoquot.kernel import BoundExceeded
from isoquot.linalg import diag, identity
from isoquot.molien import RationalFunction, pmul, gorenstein_symmetry, molien_series, shephard_todd_smooth
from isoquot.reps import alpha_q_images, iota1_images, rep_classes


def z(j, M):
    return root_of_unity(j % M, M)


def cyc(M, *exps):
    return generate({"A": diag([z(e, M) for e in exps])})


def float_molien(G, t):
    """Direct numerical average of 1/det(I - t g)."""
    tot = 0
    for i in range(G.order):
        g = np.array(G.exact(i).approx())
        tot += 1 / np.linalg.det(np.eye(G.dim) - t * g)
    return (tot / G.order).real


def test_minus_identity():
    H = molien_series(generate({"A": diag([-1, -1])}))
    assert H.to_text() == "(1+t^2)/(1-t^2)^2"
    assert gorenstein_symmetry(H, 2)


def test_trivial_group():
    H = molien_series(generate({"I": identity(3)}))
    assert H.to_text() == "1/(1-t)^3"
    assert gorenstein_symmetry(H, 3)
    assert gorenstein_symmetry(RationalFunction((1,), (1, -1)), 1)
    assert shephard_todd_smooth(generate({"I": identity(2)}))


def test_scalar_cube_roots():
    H = molien_series(cyc(3, 1, 1))
    assert H.series(6) == [1, 0, 0, 4, 0, 0, 7]


def test_non_sl_is_not_symmetric():
    assert not gorenstein_symmetry(molien_series(cyc(5, 1, 1)), 2)


def test_shephard_todd_examples():
    assert shephard_todd_smooth(generate({"A": diag([z(1, 3), 1])}))
    assert not shephard_todd_smooth(generate(alpha_q_images(3, 1)))


@pytest.mark.parametrize("G", [
    generate(alpha_q_images(3, 1)),
    generate(iota1_images()),
    cyc(7, 1, 2, 4),
    rep_classes(GroupSpec("I", 5, 4, 4)).reps[0].group(),
    rep_classes(GroupSpec("II", 1, 4, 1, 1, 3)).reps[0].group(),
], ids=["Q8", "Istar", "C7", "D5star", "II"])
def test_against_float_average(G):
    H = molien_series(G)
    for t in (0.1, 0.35, -0.5):
        assert abs(H(t) - float_molien(G, t)) < 1e-9
    s = H.series(12)
    assert s[0] == 1 and all(c >= 0 for c in s)


def test_binary_icosahedral_invariants():
    # E8: invariants in degrees 12, 20, 30
    H = molien_series(generate(iota1_images()))
    den = pmul([1] + [0] * 11 + [-1], [1] + [0] * 19 + [-1])
    e8 = RationalFunction((1,) + (0,) * 29 + (1,), tuple(den))
    assert H.series(60) == e8.series(60)


def test_bound():
    with pytest.raises(BoundExceeded):
        molien_series(generate(iota1_images()), bound=100)
