import pytest

from surfcolor.choosability import (
    ChoosabilityProfile,
    _component_profile,
    _identify,
    combine_choosability,
    decide_choosable,
    enumerate_list_classes,
    profile_set,
    project_profile,
)
from surfcolor.colorer import SolverParams
from surfcolor.embedding import CombinatorialMap, induced_submap
from surfcolor.errors import PreconditionError, ResourceLimitError
from surfcolor.instances import (
    InstanceGenerator,
    cycle_sphere,
    hex_wall,
    petersen_projective,
    projective_cycle,
    torus_wedge,
)
from surfcolor.oracle import (
    brute_choosable,
    brute_profile,
    canonical_lists_with_map,
    enumerate_canonical_lists,
)


def star3():
    """A claw: center vertex 3 joined to leaves 0, 1, 2."""
    return CombinatorialMap(
        {0: [0], 1: [2], 2: [4], 3: [1, 3, 5]},
        {0: (0, 1), 1: (2, 3), 2: (4, 5)}, set())


def path4():
    """The path 0-1-2-3 on the sphere."""
    return CombinatorialMap(
        {0: [0], 1: [1, 2], 2: [3, 4], 3: [5]},
        {0: (0, 1), 1: (2, 3), 2: (4, 5)}, set())


def pentagon_wedge():
    """Two pentagons sharing vertex 0, on the sphere."""
    return CombinatorialMap(
        {0: [0, 9, 10, 19], 1: [1, 2], 2: [3, 4], 3: [5, 6], 4: [7, 8],
         5: [11, 12], 6: [13, 14], 7: [15, 16], 8: [17, 18]},
        {0: (0, 1), 1: (2, 3), 2: (4, 5), 3: (6, 7), 4: (8, 9),
         5: (10, 11), 6: (12, 13), 7: (14, 15), 8: (16, 17), 9: (18, 19)},
        set())


def star_with_path():
    """A claw plus a path 1-9-10-2 between two of its leaves: the one
    cycle has length five and the center keeps degree three."""
    return CombinatorialMap(
        {0: [0], 1: [2, 6], 2: [4, 11], 3: [1, 3, 5], 9: [7, 8],
         10: [9, 10]},
        {0: (0, 1), 1: (2, 3), 2: (4, 5), 3: (6, 7), 4: (8, 9),
         5: (10, 11)}, set())


def direct_table(m, boundary):
    """Reference table: enumerate canonical assignments over every
    vertex in id order, no peeling, and group by the canonicalized
    boundary restriction with colorings renamed to match."""
    order = sorted(m.vertex_ids())
    bnd = sorted(set(boundary))
    edges = [m.edge_endpoints(e) for e in m.edge_ids()]
    pairs = {}
    for assignment in enumerate_canonical_lists(len(order), 3):
        lists = {v: tuple(c + 1 for c in l)
                 for v, l in zip(order, assignment)}
        psis = brute_profile(order, edges, lists, bnd)
        canon, sigma = canonical_lists_with_map([lists[v] for v in bnd])
        l0 = tuple(tuple(c + 1 for c in l) for l in canon)
        moved = frozenset(tuple(sigma[c] + 1 for c in row) for row in psis)
        pairs.setdefault(l0, set()).add(moved)
    return pairs


def _swap_closure(lists, tables):
    """Close coloring sets under the renamings fixing every list, which
    are generated by swapping two colors with the same membership
    pattern across the lists."""
    pattern = {}
    for c in sorted({c for l in lists for c in l}):
        pattern.setdefault(tuple(c in l for l in lists), []).append(c)
    swaps = [(g[i], g[j]) for g in pattern.values()
             for i in range(len(g)) for j in range(i + 1, len(g))]
    out = set()
    queue = list(tables)
    while queue:
        ps = queue.pop()
        if ps in out:
            continue
        out.add(ps)
        for a, b in swaps:
            queue.append(frozenset(
                tuple(b if c == a else a if c == b else c for c in row)
                for row in ps))
    return out


def assert_matches_direct(profile, m, boundary):
    direct = direct_table(m, boundary)
    grouped = {}
    for ls, ps in profile.entries:
        grouped.setdefault(ls, set()).add(ps)
    assert set(grouped) == set(direct)
    for ls in direct:
        # stored entries are closed under list-fixing renamings; the
        # reference pairs each assignment with one arbitrary renaming,
        # so compare after closing the reference side the same way
        assert grouped[ls] == _swap_closure(ls, direct[ls])


# -- list classes --------------------------------------------------------------


def test_enumerate_list_classes_counts():
    assert enumerate_list_classes([]) == [{}]
    assert enumerate_list_classes([7]) == [{7: (1, 2, 3)}]
    assert len(enumerate_list_classes([0, 1])) == 4
    assert len(enumerate_list_classes([0, 1, 2])) == 39
    # colors start at 1 and vertices come back sorted
    for cls in enumerate_list_classes([5, 2]):
        assert list(cls) == [2, 5]
        assert all(c >= 1 for l in cls.values() for c in l)
    with pytest.raises(ResourceLimitError):
        enumerate_list_classes(range(7))
    assert len(enumerate_list_classes(range(4),
                                      SolverParams(list_class_vertex_cap=4))
               ) == 862


# -- whole-map tables ----------------------------------------------------------


def test_profile_set_pentagon_empty_boundary():
    prof = profile_set(cycle_sphere(5), ())
    assert prof.vertices == ()
    assert prof.rows() == (((), ((),)),)
    assert prof.all_extendable


def test_profile_set_star_boundary_tables():
    prof = profile_set(star3(), (0, 1, 2))
    classes = {ls for ls, _ in prof.entries}
    assert len(classes) == 39
    # the center list matters, so every class carries several tables
    by_class = {}
    for ls, ps in prof.entries:
        by_class.setdefault(ls, set()).add(ps)
    assert all(len(tables) > 1 for tables in by_class.values())
    # identical leaf lists: a center sharing all three colors blocks
    # exactly the colorings using all three, a disjoint center nothing
    same = ((1, 2, 3),) * 3
    rainbow = {(a, b, c) for a in (1, 2, 3) for b in (1, 2, 3)
               for c in (1, 2, 3) if len({a, b, c}) == 3}
    full = {(a, b, c) for a in (1, 2, 3) for b in (1, 2, 3)
            for c in (1, 2, 3)}
    assert frozenset(full) in by_class[same]
    assert frozenset(full - rainbow) in by_class[same]
    assert by_class[same] == {frozenset(full), frozenset(full - rainbow)}


def test_profile_set_matches_direct_enumeration():
    checks = [
        (star3(), (0, 1, 2)),
        (star3(), (0, 3)),
        (path4(), (0, 3)),
        (path4(), (1, 2)),
        (CombinatorialMap({0: [0], 1: [1]}, {0: (0, 1)}, set()), (0, 1)),
    ]
    for m, boundary in checks:
        assert_matches_direct(profile_set(m, boundary), m, boundary)


def test_profile_set_boundary_order_and_closure():
    a = profile_set(star3(), (2, 0, 1))
    b = profile_set(star3(), (0, 1, 2))
    assert a == b
    # representation invariant: entries are closed under renamings that
    # fix the lists, here swapping the third leaf's two private colors
    ls = ((1, 2, 3), (1, 2, 3), (1, 4, 5))
    tables = {ps for ls2, ps in b.entries if ls2 == ls}
    assert len(tables) > 1
    swapped = {frozenset(tuple({4: 5, 5: 4}.get(c, c) for c in row)
                         for row in ps) for ps in tables}
    assert swapped == tables


def test_profile_set_validations():
    with pytest.raises(PreconditionError):
        profile_set(cycle_sphere(4), ())
    with pytest.raises(PreconditionError):
        profile_set(cycle_sphere(5), (), faces=(99,))
    with pytest.raises(PreconditionError):
        profile_set(cycle_sphere(5), (0, 77))
    with pytest.raises(ResourceLimitError):
        profile_set(cycle_sphere(5), (0, 1, 2, 3),
                    params=SolverParams(choosability_vertex_cap=3))
    with pytest.raises(ResourceLimitError):
        profile_set(cycle_sphere(5), (0, 1, 2),
                    params=SolverParams(list_class_vertex_cap=2))


# -- projection ----------------------------------------------------------------


def test_project_profile_consistency():
    m = star_with_path()
    big = profile_set(m, (0, 1, 2))
    assert project_profile(big, (1, 2)) == profile_set(m, (1, 2))
    assert project_profile(big, ()) == profile_set(m, ())
    assert project_profile(big, (0, 1, 2)) == big
    with pytest.raises(PreconditionError):
        project_profile(big, (0, 9))


# -- joining tables ------------------------------------------------------------


def test_combine_wedge_of_pentagons():
    wedge = pentagon_wedge()
    sub1, _ = induced_submap(wedge, {0, 1, 2, 3, 4})
    sub2, _ = induced_submap(wedge, {0, 5, 6, 7, 8})
    c1 = profile_set(sub1, (0,))
    c2 = profile_set(sub2, (0,))
    combined, projected = combine_choosability(c1, c2)
    assert combined == profile_set(wedge, (0,))
    assert projected == profile_set(wedge, ())
    assert projected.all_extendable


def test_combine_star_with_path():
    m = star_with_path()
    g1, _ = induced_submap(m, {0, 1, 2, 3})
    g2, _ = induced_submap(m, {0, 1, 2, 9, 10})
    c1 = profile_set(g1, (0, 1, 2))
    c2 = profile_set(g2, (0, 1, 2))
    combined, projected = combine_choosability(c1, c2)
    assert combined == profile_set(m, (0, 1, 2))
    # fully shared boundary: nothing left after projection
    assert projected.vertices == ()
    assert projected.all_extendable


def test_combine_associative_over_cycle_arcs():
    m = cycle_sphere(10)
    arcs = [({0, 1, 2, 3}, (0, 3)), ({3, 4, 5, 6}, (3, 6)),
            ({6, 7, 8, 9, 0}, (6, 0))]
    profs = []
    for keep, bnd in arcs:
        sub, _ = induced_submap(m, keep)
        profs.append(profile_set(sub, bnd))
    left = combine_choosability(
        combine_choosability(profs[0], profs[1])[0], profs[2])[0]
    right = combine_choosability(
        profs[0], combine_choosability(profs[1], profs[2])[0])[0]
    assert left == right
    assert left == profile_set(m, (0, 3, 6))


def test_combine_with_free_vertex_is_identity():
    free = CombinatorialMap({0: []}, {}, set())
    c2 = profile_set(free, (0,))
    wedge = pentagon_wedge()
    c1 = profile_set(wedge, (0,))
    combined, projected = combine_choosability(c1, c2)
    assert combined == c1
    assert projected.vertices == ()


def test_combine_validations():
    stray = ChoosabilityProfile(
        (0,), frozenset({(((1, 2, 3), (1, 2, 3)), frozenset())}))
    ok = profile_set(cycle_sphere(5), (0,))
    with pytest.raises(PreconditionError):
        combine_choosability(stray, ok)
    a = profile_set(path4(), (0, 3))
    b = profile_set(path4(), (1, 2))
    with pytest.raises(ResourceLimitError):
        combine_choosability(a, b, SolverParams(list_class_vertex_cap=3))


# -- gluing copies of a vertex -------------------------------------------------


def test_identify_path_ends_into_cycle():
    path = CombinatorialMap(
        {0: [0], 1: [1, 2], 2: [3, 4], 3: [5, 6], 4: [7, 8], 5: [9]},
        {0: (0, 1), 1: (2, 3), 2: (4, 5), 3: (6, 7), 4: (8, 9)}, set())
    pp = profile_set(path, (0, 5))
    glued = _identify(pp, {0: 7, 5: 7})
    assert glued.vertices == (7,)
    # end classes with different lists admit no glued assignment
    assert len({ls for ls, _ in pp.entries}) == 4
    assert len({ls for ls, _ in glued.entries}) == 1
    direct = profile_set(cycle_sphere(5), (0,))
    assert glued.entries == direct.entries
    # an injective image relabels without losing anything
    renamed = _identify(pp, {0: 0, 5: 5})
    assert renamed == pp


# -- cutting positive genus ----------------------------------------------------


def test_component_profile_projective_digon():
    m = projective_cycle(2)
    assert m.euler_genus() == 1 and not m.is_simple()
    closed = _component_profile(m, frozenset(), SolverParams())
    assert closed.rows() == (((), ((),)),)
    # the two endpoints of a doubled edge just need distinct colors, so
    # every color of a tracked endpoint works whatever list the other got
    tracked = _component_profile(m, frozenset({0}), SolverParams())
    assert tracked.rows() == ((((1, 2, 3),),
                               ((1,), (2,), (3,))),)


# -- the decision procedure ----------------------------------------------------


def test_decide_choosable_examples():
    assert decide_choosable(cycle_sphere(5))
    assert decide_choosable(hex_wall(3, 3))
    assert decide_choosable(torus_wedge(5, 5))
    assert decide_choosable(petersen_projective())
    assert decide_choosable(projective_cycle(5))
    assert decide_choosable(CombinatorialMap({0: []}, {}, set()))
    with pytest.raises(PreconditionError):
        decide_choosable(cycle_sphere(4))


def test_decide_choosable_matches_oracle():
    gen = InstanceGenerator(seed=4100)
    for _ in range(40):
        m = gen.random_map(max_vertices=8)
        edges = [m.edge_endpoints(e) for e in m.edge_ids()]
        want = brute_choosable(m.vertex_ids(), edges)
        assert decide_choosable(m) == want
