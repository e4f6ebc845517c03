"""End-to-end behavior of the surface decision and its entry points."""

import random

import pytest

from surfcolor.colorer import SolverParams
from surfcolor.embedding import CombinatorialMap, delete_edges
from surfcolor.errors import PreconditionError, ResourceLimitError
from surfcolor.instances import (InstanceGenerator, concentric_rings,
                                 cycle_sphere, torus_wedge)
from surfcolor.oracle import brute_colorable, check_coloring
from surfcolor.solver import (_collar_plan, decide,
                              decide_precolored_subgraph, find_coloring)
from surfcolor.topology import cycle_edge_ids, find_short_cycle
from surfcolor.cylinder import proper_cycle_colorings


def _oracle(m, lists):
    return brute_colorable(m.vertex_ids(),
                           [m.edge_endpoints(e) for e in m.edge_ids()],
                           lists)


def _merge_disjoint(a, b):
    """Disjoint union of two maps, ids of `b` shifted out of the way."""
    ov = max(a.rotations, default=-1) + 1
    od = max(a.dart_vertex, default=-1) + 1
    oe = max(a.edges, default=-1) + 1
    rot = {v: list(r) for v, r in a.rotations.items()}
    for v, r in b.rotations.items():
        rot[v + ov] = [d + od for d in r]
    edges = dict(a.edges)
    for e, (x, y) in b.edges.items():
        edges[e + oe] = (x + od, y + od)
    twisted = set(a.twisted) | {e + oe for e in b.twisted}
    return CombinatorialMap(rot, edges, twisted), ov


class TestDecideExamples:
    def test_pentagon_free(self):
        m = cycle_sphere(5)
        lists = {v: (1, 2, 3) for v in m.vertex_ids()}
        assert decide(m, (), (), lists)

    def test_single_pinned_vertex(self):
        m = cycle_sphere(6)
        f = m.face_ids()[0]
        v = m.face_vertices(f)[0]
        lists = {u: (1, 2, 3) for u in m.vertex_ids()}
        lists[v] = (2,)
        assert decide(m, (f,), (v,), lists)

    def test_adjacent_equal_pins(self):
        m = cycle_sphere(5)
        f = m.face_ids()[0]
        u, v = m.face_vertices(f)[:2]
        lists = {w: (1, 2, 3) for w in m.vertex_ids()}
        lists[u] = lists[v] = (1,)
        assert not decide(m, (f,), (u, v), lists)

    def test_torus_free(self):
        m = torus_wedge(5, 5)
        lists = {v: (1, 2, 3) for v in m.vertex_ids()}
        assert decide(m, (), (), lists)

    def test_lists_untouched(self):
        m = cycle_sphere(5)
        lists = {v: (1, 2, 3) for v in m.vertex_ids()}
        before = dict(lists)
        decide(m, (), (), lists)
        assert lists == before

    def test_girth_rejected(self):
        m = cycle_sphere(4)
        lists = {v: (1, 2, 3) for v in m.vertex_ids()}
        with pytest.raises(PreconditionError):
            decide(m, (), (), lists)

    def test_unknown_face(self):
        m = cycle_sphere(5)
        lists = {v: (1, 2, 3) for v in m.vertex_ids()}
        with pytest.raises(PreconditionError):
            decide(m, (99,), (), lists)

    def test_pin_off_faces(self):
        m, inner, outer, _rings = concentric_rings(2, 5, 5, 2)
        lists = {v: (1, 2, 3) for v in m.vertex_ids()}
        middle = next(v for v in m.vertex_ids()
                      if v not in m.face_vertices(inner)
                      and v not in m.face_vertices(outer))
        lists[middle] = (1,)
        with pytest.raises(PreconditionError):
            decide(m, (inner, outer), (middle,), lists)

    def test_missing_lists(self):
        m = cycle_sphere(5)
        with pytest.raises(PreconditionError):
            decide(m, (), (), None)

    def test_face_limit(self):
        m, inner, outer, _rings = concentric_rings(2, 5, 5, 2)
        third = next(f for f in m.face_ids() if f not in (inner, outer))
        lists = {v: (1, 2, 3) for v in m.vertex_ids()}
        with pytest.raises(ResourceLimitError):
            decide(m, (inner, outer, third), (), lists,
                   SolverParams(max_faces=2))

    def test_genus_limit(self):
        m = torus_wedge(5, 5)
        lists = {v: (1, 2, 3) for v in m.vertex_ids()}
        with pytest.raises(ResourceLimitError):
            decide(m, (), (), lists, SolverParams(max_genus=1))


class TestDecideOracle:
    def test_random_instances(self):
        gen = InstanceGenerator(seed=9100)
        for _ in range(150):
            m, pinned, faces, lists = gen.random_instance(max_vertices=12)
            assert decide(m, faces, pinned, lists) == _oracle(m, lists)

    def test_adversarial_lists(self):
        gen = InstanceGenerator(seed=9200)
        rng = random.Random(61)
        for _ in range(60):
            m = gen.random_map(max_vertices=11)
            faces, pinned = gen.pick_marks(m)
            lists = gen.adversarial_lists(m)
            for v in pinned:
                lists[v] = (rng.choice(lists[v]),)
            assert decide(m, faces, pinned, lists) == _oracle(m, lists)

    def test_many_faces_on_sphere(self):
        # three or four designated faces leave no essential cycle on the
        # sphere, so these instances run through the peeling branch
        gen = InstanceGenerator(seed=9300)
        rng = random.Random(62)
        for _ in range(80):
            m = gen.random_map(max_vertices=12, surfaces=("sphere",))
            faces, pinned = gen.pick_marks(m, max_faces=4)
            lists = gen.random_lists(m)
            for v in pinned:
                lists[v] = (rng.choice(lists[v]),)
            assert decide(m, faces, pinned, lists) == _oracle(m, lists)

    def test_shrunken_cycle_bound(self):
        # girth 5 maps have no cycle of length 4, so this bound disables
        # both the cutting and the peeling paths
        gen = InstanceGenerator(seed=9400)
        params = SolverParams(override_cycle_bound=4)
        for _ in range(40):
            m, pinned, faces, lists = gen.random_instance(max_vertices=11)
            assert decide(m, faces, pinned, lists, params) \
                == _oracle(m, lists)

    def test_tight_dp_caps(self):
        gen = InstanceGenerator(seed=9500)
        params = SolverParams(dp_max_table=40)
        for _ in range(40):
            m, pinned, faces, lists = gen.random_instance(max_vertices=10)
            assert decide(m, faces, pinned, lists, params) \
                == _oracle(m, lists)


class TestBranchStructure:
    def test_collar_plan_on_rings(self):
        m, inner, outer, rings = concentric_rings(3, 5, 5, 2)
        third = next(f for f in m.face_ids() if f not in (inner, outer))
        plan, reason = _collar_plan(m, (inner, outer, third), 5)
        assert reason is None
        assert set(plan) <= {inner, outer, third}
        for fid, (ring, interior) in plan.items():
            assert len(ring) == 5
            assert set(m.face_vertices(fid)) <= interior | set(ring)
            assert not interior & set(ring)

    def test_cut_branch_exhaustive(self):
        # branching over all proper colorings of an essential cycle and
        # forcing each one must reproduce the plain decision
        gen = InstanceGenerator(seed=9600)
        rng = random.Random(63)
        done = 0
        while done < 6:
            m, pinned, faces, lists = gen.random_instance(
                max_vertices=10, surfaces=("projective", "torus"))
            cycle = find_short_cycle(m, m.num_vertices, marked=faces,
                                     mode="essential")
            if cycle is None or set(cycle) & set(pinned):
                continue
            plain = decide(m, faces, pinned, lists)
            ring_edges = set(cycle_edge_ids(m, cycle))
            forced = False
            for colors in proper_cycle_colorings(cycle, lists):
                forced_lists = dict(lists)
                for v, c in zip(cycle, colors):
                    forced_lists[v] = (c,)
                if decide_precolored_subgraph(
                        m, (set(cycle) | set(pinned), ring_edges),
                        forced_lists):
                    forced = True
                    break
            assert forced == plain
            done += 1


class TestPrecoloredSubgraph:
    def test_equal_colored_edge(self):
        m = cycle_sphere(5)
        e = m.edge_ids()[0]
        u, v = m.edge_endpoints(e)
        lists = {w: (1, 2, 3) for w in m.vertex_ids()}
        lists[u] = lists[v] = (2,)
        assert not decide_precolored_subgraph(m, ({u, v}, {e}), lists)

    def test_pentagon_path(self):
        m = cycle_sphere(5)
        e = m.edge_ids()[0]
        u, v = m.edge_endpoints(e)
        lists = {w: (1, 2, 3) for w in m.vertex_ids()}
        lists[u], lists[v] = (1,), (2,)
        assert decide_precolored_subgraph(m, ({u, v}, {e}), lists)

    def test_isolated_forced_vertex(self):
        # a single forced vertex has no edges, so the padding machinery
        # must invent the designated face
        m = cycle_sphere(6)
        v = m.vertex_ids()[0]
        lists = {w: (1, 2, 3) for w in m.vertex_ids()}
        lists[v] = (3,)
        assert decide_precolored_subgraph(m, ({v}, set()), lists)

    def test_validations(self):
        m = cycle_sphere(5)
        lists = {w: (1, 2, 3) for w in m.vertex_ids()}
        with pytest.raises(PreconditionError):
            decide_precolored_subgraph(m, ({99}, set()), lists)
        with pytest.raises(PreconditionError):
            decide_precolored_subgraph(m, (set(), {99}), lists)
        e = m.edge_ids()[0]
        with pytest.raises(PreconditionError):
            # endpoints not in the vertex set
            decide_precolored_subgraph(m, (set(), {e}), lists)
        u = m.vertex_ids()[0]
        with pytest.raises(PreconditionError):
            # forced vertex without a singleton list
            decide_precolored_subgraph(m, ({u}, set()), lists)

    def test_random_forests(self):
        gen = InstanceGenerator(seed=9700)
        rng = random.Random(64)
        for _ in range(90):
            m = gen.random_map(max_vertices=10)
            lists = gen.random_lists(m)
            vids = m.vertex_ids()
            qv = set(rng.sample(vids, rng.randrange(0,
                                                    min(4, len(vids)) + 1)))
            qe = {e for e in m.edge_ids()
                  if set(m.edge_endpoints(e)) <= qv and rng.random() < 0.7}
            for v in qv:
                lists[v] = (rng.choice(lists[v]),)
            assert decide_precolored_subgraph(m, (qv, qe), lists) \
                == _oracle(m, lists)

    def test_satisfied_edge_removal(self):
        # an edge between two distinct forced colors says nothing; the
        # answer must survive deleting it
        gen = InstanceGenerator(seed=9800)
        rng = random.Random(65)
        done = 0
        while done < 40:
            m = gen.random_map(max_vertices=10)
            lists = gen.random_lists(m)
            eids = m.edge_ids()
            e = rng.choice(eids)
            u, v = m.edge_endpoints(e)
            cu = rng.choice(lists[u])
            cv = next(c for c in lists[v] + (0,) if c != cu)
            if cv == 0:
                continue
            lists[u], lists[v] = (cu,), (cv,)
            before = decide_precolored_subgraph(m, ({u, v}, {e}), lists)
            after = decide_precolored_subgraph(delete_edges(m, [e]),
                                               ({u, v}, set()), lists)
            assert before == after
            done += 1

    def test_components_multiply(self):
        gen = InstanceGenerator(seed=9900)
        for _ in range(25):
            a = gen.random_map(max_vertices=9)
            b = gen.random_map(max_vertices=9)
            la = gen.adversarial_lists(a)
            lb = gen.adversarial_lists(b)
            union, ov = _merge_disjoint(a, b)
            lu = dict(la)
            for v, ls in lb.items():
                lu[v + ov] = ls
            assert decide(union, (), (), lu) \
                == (decide(a, (), (), la) and decide(b, (), (), lb))


class TestFindColoring:
    def test_fully_forced(self):
        m = cycle_sphere(5)
        want = {v: c for v, c in zip(sorted(m.vertex_ids()),
                                     (1, 2, 1, 2, 3))}
        lists = {v: (want[v],) for v in m.vertex_ids()}
        qe = set(m.edge_ids())
        got = find_coloring(m, (set(m.vertex_ids()), qe), lists)
        assert got == want

    def test_roundtrip(self):
        gen = InstanceGenerator(seed=10000)
        rng = random.Random(66)
        hits = misses = 0
        for i in range(30):
            m = gen.random_map(max_vertices=10)
            lists = gen.adversarial_lists(m) if i % 3 == 0 \
                else gen.random_lists(m)
            if i % 5 == 0:
                # clash two neighbours so the miss path gets exercised
                u, v = m.edge_endpoints(rng.choice(m.edge_ids()))
                qv = {u, v}
                lists[u] = lists[v] = (lists[u][0],)
            else:
                qv = set(rng.sample(m.vertex_ids(), rng.randrange(0, 3)))
            for v in qv:
                lists[v] = (rng.choice(lists[v]),)
            coloring = find_coloring(m, (qv, set()), lists)
            assert (coloring is not None) == _oracle(m, lists)
            if coloring is None:
                misses += 1
                continue
            hits += 1
            edges = [m.edge_endpoints(e) for e in m.edge_ids()]
            assert check_coloring(edges, lists, coloring)
            for v in qv:
                assert coloring[v] == lists[v][0]
        assert hits and misses

    def test_uncolorable_returns_none(self):
        m = cycle_sphere(5)
        e = m.edge_ids()[0]
        u, v = m.edge_endpoints(e)
        lists = {w: (1, 2, 3) for w in m.vertex_ids()}
        lists[u] = lists[v] = (1,)
        assert find_coloring(m, ({u, v}, {e}), lists) is None
