import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardyglue.fredholm import triple_index
from hardyglue.moduli import (
    Component,
    NodalConfig,
    TargetData,
    arithmetic_genus,
    core_slice_dims,
    hardy_sphere_triple,
    hardy_triple_for_line_bundle,
    is_stable_map,
    isotropy_group,
    moduli_dimension,
    riemann_roch_index,
    special_point_count,
    teichmuller_dim,
)

P2_LINE = TargetData(2, 3)


def two_spheres_one_node():
    return NodalConfig((Component(0), Component(0)), nodes=(((0, 0), (1, 0)),))


class TestNodalConfig:
    def test_disconnected_rejected(self):
        with pytest.raises(ValueError, match="connected"):
            NodalConfig((Component(0), Component(1)))

    def test_duplicate_point_id_rejected(self):
        with pytest.raises(ValueError, match="twice"):
            NodalConfig((Component(0), Component(0)),
                        nodes=(((0, 0), (1, 0)),), marks=((0, 0),))

    def test_component_index_range(self):
        with pytest.raises(ValueError, match="out of range"):
            NodalConfig((Component(0),), marks=((3, 0),))

    def test_self_node_counts_two_special_points(self):
        cfg = NodalConfig((Component(1),), nodes=(((0, 0), (0, 1)),))
        assert special_point_count(cfg, 0) == 2


class TestArithmeticGenus:
    def test_two_spheres_one_node(self):
        assert arithmetic_genus(two_spheres_one_node()) == 0

    def test_sphere_with_self_node(self):
        # Euler characteristic of the quotient: one component, one node
        cfg = NodalConfig((Component(0),), nodes=(((0, 0), (0, 1)),))
        assert arithmetic_genus(cfg) == 1

    def test_three_spheres_in_cycle(self):
        # first Betti number of the triangle dual graph
        cfg = NodalConfig(
            (Component(0), Component(0), Component(0)),
            nodes=(((0, 0), (1, 0)), ((1, 1), (2, 0)), ((2, 1), (0, 1))),
        )
        assert arithmetic_genus(cfg) == 1

    def test_smooth_genus(self):
        assert arithmetic_genus(NodalConfig((Component(4),))) == 4

    def test_nonnegative_on_connected_configs(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            n_comp = int(rng.integers(1, 5))
            comps = tuple(Component(int(rng.integers(0, 3))) for _ in range(n_comp))
            counters = [0] * n_comp
            nodes = []
            for j in range(1, n_comp):
                i = int(rng.integers(0, j))
                nodes.append(((i, counters[i]), (j, counters[j])))
                counters[i] += 1
                counters[j] += 1
            if n_comp == 1 and rng.uniform() < 0.5:
                nodes.append(((0, counters[0]), (0, counters[0] + 1)))
            assert arithmetic_genus(NodalConfig(comps, tuple(nodes))) >= 0


class TestStability:
    def test_ghost_sphere_two_special_points(self):
        cfg = NodalConfig((Component(0, ghost=True), Component(1)),
                          nodes=(((0, 0), (1, 0)),), marks=((0, 1),))
        assert special_point_count(cfg, 0) == 2
        assert not is_stable_map(cfg)

    def test_ghost_torus_no_special_points(self):
        assert not is_stable_map(NodalConfig((Component(1, ghost=True),)))

    def test_nonghost_sphere_unconstrained(self):
        assert is_stable_map(NodalConfig((Component(0, ghost=False),)))

    def test_ghost_sphere_three_points_stable(self):
        cfg = NodalConfig((Component(0, ghost=True), Component(2)),
                          nodes=(((0, 0), (1, 0)),), marks=((0, 1), (0, 2)))
        assert is_stable_map(cfg)

    def test_ghost_torus_one_point_stable(self):
        cfg = NodalConfig((Component(1, ghost=True),), marks=((0, 0),))
        assert is_stable_map(cfg)

    @given(st.integers(min_value=0, max_value=400))
    @settings(deadline=None, max_examples=60)
    def test_adding_a_mark_never_destabilizes(self, seed):
        rng = np.random.default_rng(seed)
        comps = tuple(Component(int(rng.integers(0, 3)), bool(rng.integers(0, 2)))
                      for _ in range(int(rng.integers(1, 4))))
        nodes = []
        counters = [0] * len(comps)
        for j in range(1, len(comps)):
            i = int(rng.integers(0, j))
            nodes.append(((i, counters[i]), (j, counters[j])))
            counters[i] += 1
            counters[j] += 1
        marks = []
        for _ in range(int(rng.integers(0, 4))):
            i = int(rng.integers(0, len(comps)))
            marks.append((i, counters[i]))
            counters[i] += 1
        cfg = NodalConfig(comps, tuple(nodes), tuple(marks))
        i = int(rng.integers(0, len(comps)))
        extended = NodalConfig(comps, tuple(nodes), tuple(marks) + ((i, counters[i]),))
        if is_stable_map(cfg):
            assert is_stable_map(extended)


class TestDimensionFormulas:
    def test_lines_in_plane(self):
        assert moduli_dimension(0, 0, P2_LINE) == 2

    def test_point_target_recovers_deligne_mumford(self):
        point = TargetData(0, 0)
        for g in range(2, 6):
            assert moduli_dimension(g, 0, point) == 3 * g - 3

    def test_degree_d_rational_curves(self):
        for d in range(1, 6):
            for n in range(6):
                assert moduli_dimension(0, n, TargetData(2, 3 * d)) == 3 * d - 1 + n

    def test_riemann_roch_sphere_degree_two(self):
        t = TargetData(1, 2)
        assert riemann_roch_index(t, 0, "complex") == 3
        assert riemann_roch_index(t, 0, "real") == 6

    def test_riemann_roch_torus(self):
        for m in range(5):
            assert riemann_roch_index(TargetData(m, 0), 1, "complex") == 0

    def test_riemann_roch_field_validation(self):
        with pytest.raises(ValueError):
            riemann_roch_index(TargetData(1, 0), 0, "quaternionic")

    def test_frozen_identity_moduli_rr_teichmuller(self):
        # frozen from the pre-build symbolic oracle: the offset polynomial
        # of moduli - rr_complex - teichmuller vanishes identically
        rng = np.random.default_rng(123)
        for _ in range(1000):
            g = int(rng.integers(0, 9))
            n = int(rng.integers(0, 9))
            target = TargetData(int(rng.integers(0, 7)), int(rng.integers(-15, 16)))
            assert (moduli_dimension(g, n, target)
                    == riemann_roch_index(target, g, "complex") + teichmuller_dim(g, n))

    def test_teichmuller_values(self):
        assert teichmuller_dim(2, 0) == 3
        assert teichmuller_dim(0, 3) == 0
        assert teichmuller_dim(1, 1) == 1

    def test_core_slice_examples(self):
        # the formula 3g-3+n-k gives -1 on the first example (the spec's
        # stated pair (1, 4) miscomputes the first entry)
        assert core_slice_dims(0, 3, 1, P2_LINE) == (-1, 4)
        assert core_slice_dims(1, 1, 1, TargetData(3, 0)) == (0, 0)

    def test_core_slice_reduces_at_k_zero(self):
        target = TargetData(3, 7)
        dim_core, dim_x0 = core_slice_dims(2, 4, 0, target)
        assert dim_core == teichmuller_dim(2, 4)
        assert dim_x0 == moduli_dimension(2, 4, target)

    def test_core_slice_consistency(self):
        rng = np.random.default_rng(5)
        for _ in range(300):
            g, n, k = int(rng.integers(0, 6)), int(rng.integers(0, 6)), int(rng.integers(0, 6))
            target = TargetData(int(rng.integers(0, 5)), int(rng.integers(-9, 10)))
            assert core_slice_dims(g, n, k, target)[1] + k == moduli_dimension(g, n, target)


class TestIsotropy:
    @pytest.mark.parametrize("g,n,name,dim", [
        (0, 0, "PSL(2,C)", 3),
        (0, 1, "C* x| C", 2),
        (0, 2, "C*", 1),
        (1, 0, "T^2", 1),
        (2, 0, "trivial", 0),
        (0, 3, "trivial", 0),
        (1, 1, "trivial", 0),
        (5, 2, "trivial", 0),
    ])
    def test_table(self, g, n, name, dim):
        got = isotropy_group(g, n)
        assert got.name == name and got.complex_dim == dim

    def test_consistent_with_dim_relation(self):
        # dim A - dim G = 3g - 3 + n with dim A = 3g - 3 + n + dim G
        for g in range(4):
            for n in range(4):
                got = isotropy_group(g, n)
                dim_a = 3 * g - 3 + n + got.complex_dim
                assert dim_a - got.complex_dim == teichmuller_dim(g, n)


class TestHardyTriples:
    def test_constants_only(self):
        built = hardy_triple_for_line_bundle(0, 8)
        assert triple_index(built.triple) == (1, 0, 1)
        assert built.expected_index == 1

    def test_degree_two_twist(self):
        built = hardy_triple_for_line_bundle(4, 16)
        idx = triple_index(built.triple)
        assert idx.index == 5
        assert idx.index == riemann_roch_index(TargetData(1, 4), 0, "complex")
        # brute-force basis count: polynomials of degree <= 4
        assert idx.dim_cap == len(range(0, 5))

    def test_degree_ten(self):
        built = hardy_triple_for_line_bundle(10, 32)
        assert triple_index(built.triple).index == 11

    def test_truncation_independence(self):
        values = {triple_index(hardy_triple_for_line_bundle(4, N).triple) for N in range(5, 13)}
        assert values == {(5, 0, 5)}

    def test_truncation_too_small_rejected(self):
        with pytest.raises(ValueError):
            hardy_triple_for_line_bundle(8, 8)

    def test_sphere_split_indices(self):
        for m in (1, 2, 3):
            idx = triple_index(hardy_sphere_triple(m, 16))
            assert idx == (m, 0, m)
