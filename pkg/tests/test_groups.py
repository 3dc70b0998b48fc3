import pytest

from isoquot.exactnum import root_of_unity
from isoquot.groups import (GroupSpec, InvalidSpec, abstract_order, generate, generate_exact,
                            is_fixed_point_free, is_valid, pq_conditions_hold, sylow_shape,
                            valid_specs, validate_spec)
from isoquot.kernel import BoundExceeded
from isoquot.linalg import diag, identity
from isoquot.reps import alpha_q_images, iota1_images


def z(j, M):
    return root_of_unity(j % M, M)


def test_validate_examples():
    assert validate_spec(GroupSpec("I", 5, 4, 4)) == []
    assert GroupSpec("I", 5, 4, 4).d == 2
    assert validate_spec(GroupSpec("I", 1, 1, 1)) == []
    bad = validate_spec(GroupSpec("III", 1, 4, 1))
    assert any("n must be odd" in v for v in bad)


def test_invalid_type_i():
    # r^n != 1 mod m
    assert not is_valid(GroupSpec("I", 5, 3, 2))
    with pytest.raises(InvalidSpec):
        abstract_order(GroupSpec("I", 5, 3, 2))


def test_abstract_orders():
    assert abstract_order(GroupSpec("I", 5, 4, 4)) == 20
    assert abstract_order(GroupSpec("Tstar_v", v=1)) == 24
    assert abstract_order(GroupSpec("V", 1, 1, 1)) == 120
    assert abstract_order(GroupSpec("Istar")) == 120


def test_generate_examples():
    assert generate(alpha_q_images(3, 1)).order == 8
    assert generate(iota1_images()).order == 120
    assert generate({"I": identity(2)}).order == 1


def test_generate_matches_exact_closure():
    gens = alpha_q_images(4, 1)
    assert generate(gens).order == len(generate_exact(gens)) == 16


def test_generate_bound():
    with pytest.raises(BoundExceeded):
        generate(iota1_images(), max_order=100)


def test_fixed_point_free_examples():
    assert is_fixed_point_free(generate({"A": diag([z(1, 5), z(2, 5)])}))
    assert not is_fixed_point_free(generate({"A": diag([z(1, 3), 1])}))
    assert is_fixed_point_free(generate(alpha_q_images(3, 1)))


def test_pq_examples():
    assert pq_conditions_hold(generate(alpha_q_images(3, 1)))
    klein = generate({"A": diag([-1, 1]), "B": diag([1, -1])})
    assert klein.order == 4
    assert not pq_conditions_hold(klein)
    assert pq_conditions_hold(generate(iota1_images()))


def test_sylow_examples():
    assert sylow_shape(generate(iota1_images())) == {
        2: "generalized-quaternion", 3: "cyclic", 5: "cyclic"}
    assert sylow_shape(generate({"A": diag([z(1, 20)])})) == {2: "cyclic", 5: "cyclic"}
    from isoquot.reps import tau_images
    assert sylow_shape(generate(tau_images(1))) == {2: "generalized-quaternion", 3: "cyclic"}


def test_sylow_noncyclic_abelian():
    klein = generate({"A": diag([-1, 1]), "B": diag([1, -1])})
    assert sylow_shape(klein) == {2: "other"}


def test_valid_specs_deterministic():
    a = valid_specs(60)
    assert a == valid_specs(60)
    assert all(abstract_order(s) <= 60 for s in a)
    assert GroupSpec("I", 5, 4, 4) in a
    assert len(set(a)) == len(a)
