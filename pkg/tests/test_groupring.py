from itertools import permutations

import numpy as np
import pytest

from hcc.groupring import (
    GroupRingElement,
    GroupValidationError,
    OrderedGroup,
    augmentation,
    delta_product,
    filtration_profile,
    is_balanced,
    make_cyclic,
    make_elementary_abelian,
    make_product,
    parse_group_table,
    ring_mul,
)


class TestConstructors:
    def test_z2_squared_order(self):
        g = make_elementary_abelian(2, 2)
        assert g.size == 4
        assert g.element_names == ("0", "e1", "e2", "e1+e2")
        assert g.identity_index == 0

    def test_z2_cubed_order(self):
        g = make_elementary_abelian(2, 3)
        assert g.element_names == (
            "0", "e1", "e2", "e3", "e1+e2", "e1+e3", "e2+e3", "e1+e2+e3",
        )

    def test_z3_is_cyclic(self):
        g = make_elementary_abelian(3, 1)
        assert g.size == 3
        assert g.element_order(1) == 3

    def test_cyclic_trivial(self):
        g = make_cyclic(1)
        assert g.size == 1
        assert g.generating_set() == ()

    def test_cyclic_four_has_order_four_element(self):
        g = make_cyclic(4)
        assert g.element_order(1) == 4

    def test_product_isomorphic_to_elementary_abelian(self):
        a = make_product(make_cyclic(2), make_cyclic(2))
        b = make_elementary_abelian(2, 2)
        # exhaustive isomorphism search on the 3 non-identity elements
        found = False
        for perm in permutations(range(1, 4)):
            mapping = [0] + list(perm)
            if all(
                mapping[a.op(x, y)] == b.op(mapping[x], mapping[y])
                for x in range(4)
                for y in range(4)
            ):
                found = True
                break
        assert found

    def test_elementary_abelian_detection(self):
        assert make_elementary_abelian(2, 2).is_elementary_abelian() == (2, 2)
        assert make_elementary_abelian(3, 2).is_elementary_abelian() == (3, 2)
        assert make_cyclic(4).is_elementary_abelian() is None
        assert make_cyclic(6).is_elementary_abelian() is None
        assert make_cyclic(5).is_elementary_abelian() == (5, 1)

    def test_bad_tables_rejected(self):
        with pytest.raises(GroupValidationError):
            OrderedGroup([[0, 1], [1, 1]])  # row not a permutation
        with pytest.raises(GroupValidationError):
            OrderedGroup([[1, 0, 2], [0, 2, 1], [2, 1, 0]])  # Latin, no identity

    def test_identity_found_anywhere(self):
        g = OrderedGroup([[1, 0], [0, 1]])  # Z_2 with identity at index 1
        assert g.identity_index == 1
        # associative magma check: a Latin square with identity that is not a group
        latin = [
            [0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0],
        ]
        with pytest.raises(GroupValidationError):
            OrderedGroup(latin)


class TestTableFormat:
    def test_roundtrip(self):
        g = make_cyclic(3)
        text = "order 3\n" + "\n".join(" ".join(str(x) for x in row) for row in g.mult)
        parsed = parse_group_table(text)
        assert parsed.size == 3
        assert np.array_equal(parsed.mult, g.mult)

    def test_identity_must_be_zero(self):
        # Z_2 written with identity at index 1
        text = "order 2\n1 0\n0 1"
        with pytest.raises(GroupValidationError):
            parse_group_table(text)

    def test_header_errors(self):
        with pytest.raises(GroupValidationError):
            parse_group_table("size 2\n0 1\n1 0")
        with pytest.raises(GroupValidationError):
            parse_group_table("order 2\n0 1")


class TestRingOps:
    def test_identity_law(self):
        rng = np.random.default_rng(1)
        g = make_elementary_abelian(2, 2)
        for _ in range(5):
            v = GroupRingElement(g, 2, rng.integers(0, 2, size=4))
            e = GroupRingElement.delta(g, 2, g.identity_index)
            assert ring_mul(e, v) == v
            assert ring_mul(v, e) == v

    def test_square_in_f3_z2(self):
        g = make_cyclic(2)
        x = GroupRingElement(g, 3, [-1, 1])  # delta_g - delta_e
        sq = ring_mul(x, x)
        assert list(sq.coeffs) == [2, 1]
        assert sq == 1 * x  # a nonzero multiple of x: delta ideal is idempotent

    def test_group_law(self):
        g = make_elementary_abelian(2, 2)
        d = GroupRingElement.delta
        assert ring_mul(d(g, 2, 1), d(g, 2, 2)) == d(g, 2, 3)  # e1 * e2 = e1+e2

    def test_associativity_random(self):
        rng = np.random.default_rng(2)
        for p, g in ((2, make_elementary_abelian(2, 2)), (3, make_cyclic(4))):
            for _ in range(5):
                u, v, w = (
                    GroupRingElement(g, p, rng.integers(0, p, size=g.size)) for _ in range(3)
                )
                assert ring_mul(ring_mul(u, v), w) == ring_mul(u, ring_mul(v, w))

    def test_mismatch_errors(self):
        a = GroupRingElement.zero(make_cyclic(2), 2)
        b = GroupRingElement.zero(make_cyclic(3), 2)
        c = GroupRingElement.zero(make_cyclic(2), 3)
        with pytest.raises(ValueError):
            ring_mul(a, b)
        with pytest.raises(ValueError):
            ring_mul(a, c)


class TestAugmentation:
    def test_delta_is_one(self):
        g = make_cyclic(5)
        for h in range(5):
            assert augmentation(GroupRingElement.delta(g, 5, h)) == 1

    def test_difference_is_balanced(self):
        g = make_cyclic(5)
        v = GroupRingElement.delta(g, 5, 2) - GroupRingElement.delta(g, 5, g.identity_index)
        assert augmentation(v) == 0
        assert is_balanced(v)

    def test_multiplicative(self):
        rng = np.random.default_rng(3)
        g = make_elementary_abelian(3, 2)
        for _ in range(10):
            u = GroupRingElement(g, 3, rng.integers(0, 3, size=9))
            v = GroupRingElement(g, 3, rng.integers(0, 3, size=9))
            assert augmentation(ring_mul(u, v)) == augmentation(u) * augmentation(v) % 3

    def test_balance_examples(self):
        g = make_elementary_abelian(2, 2)
        assert is_balanced(GroupRingElement.zero(g, 2))
        assert not is_balanced(GroupRingElement.delta(g, 2, 1))
        # the identity row of the torus block: (1, 0, 1, 0)
        assert is_balanced(GroupRingElement(g, 2, [1, 0, 1, 0]))


class TestFiltration:
    def test_z2_squared(self):
        prof = filtration_profile(2, make_elementary_abelian(2, 2))
        assert prof.lambdas == (1, 2, 1)
        assert prof.nilpotent
        assert prof.delta_dims == (4, 3, 1, 0)
        assert prof.delta_dim_at(3) == 0

    def test_z4_mod2(self):
        prof = filtration_profile(2, make_cyclic(4))
        assert prof.delta_dims == (4, 3, 2, 1, 0)
        assert prof.lambdas == (1, 1, 1, 1)
        assert prof.nilpotent

    def test_z2_mod3_not_nilpotent(self):
        prof = filtration_profile(3, make_cyclic(2))
        assert prof.delta_dims == (2, 1, 1)
        assert not prof.nilpotent
        assert prof.stabilization_k == 1
        assert prof.lambda_at(0) == 1 and prof.lambda_at(5) == 0

    def test_first_two_dims(self):
        for p, g in ((2, make_cyclic(6)), (3, make_elementary_abelian(3, 2))):
            prof = filtration_profile(p, g)
            assert prof.delta_dims[0] == g.size
            assert prof.delta_dims[1] == g.size - 1
            assert all(a >= b for a, b in zip(prof.delta_dims, prof.delta_dims[1:]))

    def test_lambda_sum_when_nilpotent(self):
        prof = filtration_profile(2, make_elementary_abelian(2, 3))
        assert sum(prof.lambdas) == 8
        for k in range(len(prof.delta_dims)):
            assert prof.delta_dim_at(k) == sum(prof.lambdas[k:])

    def test_membership(self):
        g = make_elementary_abelian(2, 2)
        prof = filtration_profile(2, g)
        x = delta_product(g, 2, [1, 2])
        assert prof.contains(2, x)
        assert not prof.contains(3, x)
        assert prof.contains(0, GroupRingElement.delta(g, 2, 0))

    def test_k_max_truncation(self):
        prof = filtration_profile(2, make_cyclic(4), k_max=2)
        assert prof.delta_dims == (4, 3, 2)
        assert prof.lambdas == (1, 1)
        assert prof.nilpotent  # global fact, not window-relative

    def test_cache_returns_same_object(self):
        g = make_cyclic(9)
        assert filtration_profile(3, g) is filtration_profile(3, g)

    def test_order_permutation_leaves_dims(self):
        rng = np.random.default_rng(4)
        g = make_elementary_abelian(2, 3)
        perm = rng.permutation(8)
        inv = np.empty(8, dtype=int)
        inv[perm] = np.arange(8)
        table = perm[g.mult[inv][:, inv]]
        shuffled = OrderedGroup(table)
        assert filtration_profile(2, shuffled).delta_dims == filtration_profile(2, g).delta_dims


def test_jennings_small():
    for p, r in ((2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1)):
        from hcc.omega import omega_by_convolution

        prof = filtration_profile(p, make_elementary_abelian(p, r))
        assert prof.lambdas == omega_by_convolution(p, r).coeffs, (p, r)
