import random

import pytest

from helpers import brute_separating_cycle
from surfcolor.colorer import ColoringProfile, SolverParams
from surfcolor.cylinder import (
    compose_profiles,
    decide_cylinder,
    peel_sequence,
    shortest_separating_cycle,
)
from surfcolor.embedding import parse_map
from surfcolor.errors import PreconditionError
from surfcolor.instances import (
    InstanceGenerator,
    concentric_rings,
    cycle_sphere,
    projective_cycle,
)
from surfcolor.oracle import brute_colorable


def full_lists(m, colors=(1, 2, 3)):
    return {v: set(colors) for v in m.vertex_ids()}


def oracle(m, lists):
    return brute_colorable(m.vertex_ids(),
                           [m.edge_endpoints(e) for e in m.edge_ids()],
                           lists)


class TestShortestSeparatingCycle:
    def test_pentagon_between_its_faces(self):
        m = cycle_sphere(5)
        f1, f2 = m.face_ids()
        assert shortest_separating_cycle(m, f1, f2, 10) == ((0, 1, 2, 3, 4), 5)

    def test_cap_reports_absence_with_next_value(self):
        m = cycle_sphere(5)
        f1, f2 = m.face_ids()
        assert shortest_separating_cycle(m, f1, f2, 4) == (None, 5)

    def test_rings_cut_is_innermost_ring(self):
        m, inner, outer, rings = concentric_rings(4, 5, 5, 1)
        cyc, val = shortest_separating_cycle(m, inner, outer, 20)
        assert val == 5
        assert cyc == rings[0]

    def test_matches_brute_force_and_is_strategy_independent(self):
        gen = InstanceGenerator(seed=4000)
        checked = 0
        for _ in range(60):
            m = gen.random_map(max_vertices=14, surfaces=("sphere",))
            fs = m.face_ids()
            if len(fs) < 2:
                continue
            f1, f2 = fs[0], fs[-1]
            want = brute_separating_cycle(m, f1, f2)
            cyc_b, val_b = shortest_separating_cycle(m, f1, f2, m.num_edges)
            cyc_d, val_d = shortest_separating_cycle(m, f1, f2, m.num_edges,
                                                     strategy="dfs")
            assert val_b == val_d == want
            assert cyc_b == cyc_d
            assert len(cyc_b) == val_b
            checked += 1
        assert checked >= 50

    def test_input_validation(self):
        m = cycle_sphere(5)
        f1, f2 = m.face_ids()
        with pytest.raises(PreconditionError):
            shortest_separating_cycle(m, f1, f1, 5)
        with pytest.raises(PreconditionError):
            shortest_separating_cycle(m, f1, 99, 5)
        p = projective_cycle(5)
        pf = p.face_ids()
        with pytest.raises(PreconditionError):
            shortest_separating_cycle(p, pf[0], pf[-1], 5)

    def test_rejects_multi_edges(self):
        m = parse_map("""
        0: 0 2
        1: 1 3
        e0: 0 1
        e1: 2 3
        """)
        f = m.face_ids()
        with pytest.raises(PreconditionError):
            shortest_separating_cycle(m, f[0], f[-1], 3)


class TestPeelSequence:
    def test_pentagon_peels_once(self):
        m = cycle_sphere(5)
        f1, f2 = m.face_ids()
        seq = peel_sequence(m, f1, f2, (), 4)
        assert seq.cycles == ((0, 1, 2, 3, 4),)
        assert len(seq.segments) == 2
        for side in seq.segments:
            assert sorted(side.rotations) == [0, 1, 2, 3, 4]
            assert side.num_edges == 0  # ring edges belong to no segment
        assert seq.endpoints == ((), ())

    def test_concentric_rings_peel_outward(self):
        m, inner, outer, rings = concentric_rings(4, 5, 5, 1)
        seq = peel_sequence(m, inner, outer, (rings[0][0], rings[-1][3]), 4)
        assert seq.cycles == tuple(rings)
        assert len(seq.segments) == 5
        assert sorted(seq.segments[0].rotations) == sorted(rings[0])
        for i in (1, 2, 3):
            want = sorted(rings[i - 1] + rings[i])
            assert sorted(seq.segments[i].rotations) == want
            assert seq.segments[i].num_edges == 5  # the spokes only
        assert seq.endpoints == ((rings[0][0],), (rings[-1][3],))

    def test_no_short_cut_gives_single_whole_segment(self):
        m = cycle_sphere(5)
        f1, f2 = m.face_ids()
        params = SolverParams(override_cycle_bound=4)
        seq = peel_sequence(m, f1, f2, (), 4, params=params)
        assert seq.cycles == ()
        assert len(seq.segments) == 1
        assert sorted(seq.segments[0].rotations) == [0, 1, 2, 3, 4]
        assert seq.segments[0].num_edges == 5

    def test_violated_bound_raises(self):
        m, inner, outer, _ = concentric_rings(3, 5, 5, 1)
        with pytest.raises(PreconditionError):
            peel_sequence(m, inner, outer, (), 5)


class TestComposeProfiles:
    def test_projection_semantics(self):
        left = ColoringProfile(("a", "b"), frozenset({(1, 2), (1, 3), (2, 2)}))
        right = ColoringProfile(("b", "c"), frozenset({(2, 9), (3, 8)}))
        out = compose_profiles(left, right)
        assert out.boundary == ("a", "c")
        assert out.colorings == frozenset({(1, 9), (1, 8), (2, 9)})

    def test_empty_side_stays_empty(self):
        left = ColoringProfile(("a", "b"), frozenset())
        right = ColoringProfile(("b",), frozenset({(1,)}))
        assert compose_profiles(left, right).is_empty

    def test_shared_order_mismatch_raises(self):
        left = ColoringProfile(("a", "b", "c"), frozenset({(1, 2, 3)}))
        right = ColoringProfile(("c", "b", "d"), frozenset({(3, 2, 4)}))
        with pytest.raises(PreconditionError):
            compose_profiles(left, right)

    def test_matches_hand_rolled_join(self):
        rng = random.Random(5)
        for _ in range(50):
            shared = tuple("s%d" % i for i in range(rng.randrange(1, 3)))
            a = tuple("a%d" % i for i in range(rng.randrange(0, 3)))
            c = tuple("c%d" % i for i in range(rng.randrange(0, 3)))
            lrows = {tuple(rng.randrange(3) for _ in a + shared)
                     for _ in range(rng.randrange(8))}
            rrows = {tuple(rng.randrange(3) for _ in shared + c)
                     for _ in range(rng.randrange(8))}
            left = ColoringProfile(a + shared, frozenset(lrows))
            right = ColoringProfile(shared + c, frozenset(rrows))
            out = compose_profiles(left, right)
            want = set()
            for lt in lrows:
                for rt in rrows:
                    if lt[len(a):] == rt[:len(shared)]:
                        want.add(lt[:len(a)] + rt[len(shared):])
            assert out.boundary == a + c
            assert out.colorings == frozenset(want)

    def test_associative_over_a_chain(self):
        rng = random.Random(11)
        for _ in range(30):
            cols = [tuple("%s%d" % (t, i) for i in range(rng.randrange(1, 3)))
                    for t in "abcd"]
            a, b, c, d = cols
            def rand_profile(bound):
                n = rng.randrange(1, 9)
                return ColoringProfile(bound, frozenset(
                    tuple(rng.randrange(3) for _ in bound) for _ in range(n)))
            p1, p2, p3 = rand_profile(a + b), rand_profile(b + c), \
                rand_profile(c + d)
            one = compose_profiles(compose_profiles(p1, p2), p3)
            two = compose_profiles(p1, compose_profiles(p2, p3))
            assert one == two


class TestDecideCylinder:
    def test_pentagon_cases(self):
        m = cycle_sphere(5)
        f1, f2 = m.face_ids()
        assert decide_cylinder(m, (f1, f2), (), full_lists(m))
        lists = full_lists(m)
        lists[0] = {1}
        lists[1] = {1}
        assert not decide_cylinder(m, (f1, f2), (0, 1), lists)
        lists[1] = {2}
        assert decide_cylinder(m, (f1, f2), (0, 1), lists)

    def test_agrees_with_oracle_on_random_spheres(self):
        gen = InstanceGenerator(seed=2024)
        for _ in range(150):
            m, pinned, faces, lists = gen.random_instance(
                max_vertices=12, surfaces=("sphere",))
            L = {v: set(c) for v, c in lists.items()}
            got = decide_cylinder(m, tuple(faces), tuple(pinned), L)
            assert got == oracle(m, lists)

    def test_agrees_with_oracle_when_tables_are_capped(self):
        tight = SolverParams(dp_max_table=40)
        gen = InstanceGenerator(seed=99)
        for _ in range(60):
            m, pinned, faces, lists = gen.random_instance(
                max_vertices=11, surfaces=("sphere",))
            L = {v: set(c) for v, c in lists.items()}
            got = decide_cylinder(m, tuple(faces), tuple(pinned), L,
                                  params=tight)
            assert got == oracle(m, lists)

    def test_multi_ring_instances_with_boundary_pins(self):
        rng = random.Random(31)
        for _ in range(25):
            m, inner, outer, rings = concentric_rings(3, 5, 5, 2)
            lists = {v: set(rng.sample(range(1, 5), 3)) for v in m.vertex_ids()}
            pins = []
            for v in rings[0][:rng.randrange(3)]:
                lists[v] = {rng.choice(sorted(lists[v]))}
                pins.append(v)
            for v in rings[-1][:rng.randrange(3)]:
                lists[v] = {rng.choice(sorted(lists[v]))}
                pins.append(v)
            got = decide_cylinder(m, (inner, outer), tuple(pins), lists)
            assert got == oracle(m, lists)

    def test_single_designated_face_delegates(self):
        m, inner, outer, rings = concentric_rings(2, 5, 5, 2)
        lists = full_lists(m)
        lists[rings[0][0]] = {1}
        lists[rings[0][2]] = {1}
        got = decide_cylinder(m, (inner,), (rings[0][0], rings[0][2]), lists)
        assert got == oracle(m, lists)
        assert decide_cylinder(m, (), (), full_lists(m))

    def test_decision_is_level_independent(self):
        m, inner, outer, _ = concentric_rings(2, 6, 3, 2)
        lists = full_lists(m)
        assert decide_cylinder(m, (inner, outer), (), lists, length_bound=4) \
            == decide_cylinder(m, (inner, outer), (), lists, length_bound=5)

    def test_shape_validation(self):
        m = cycle_sphere(5)
        f1, f2 = m.face_ids()
        with pytest.raises(PreconditionError):
            decide_cylinder(m, (f1, f2, f2), (), full_lists(m))
        with pytest.raises(PreconditionError):
            decide_cylinder(m, (f1, f1), (), full_lists(m))
        with pytest.raises(PreconditionError):
            decide_cylinder(m, (f1, f2), (), full_lists(m), length_bound=3)
        square = cycle_sphere(4)
        sf = square.face_ids()
        with pytest.raises(PreconditionError):
            decide_cylinder(square, tuple(sf), (), full_lists(square))
        lists = full_lists(m)
        lists[0] = {1}
        with pytest.raises(PreconditionError):
            decide_cylinder(m, (), (0,), lists)
        p = projective_cycle(5)
        with pytest.raises(PreconditionError):
            decide_cylinder(p, (), (), full_lists(p))
