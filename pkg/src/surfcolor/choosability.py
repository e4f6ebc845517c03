"""Choosability from 3-lists, via boundary behavior tables.

A region's behavior toward the rest of the graph is summarised by a
table: for every way of assigning 3-color lists to the boundary (up to
renaming colors) and every way of filling lists into the interior, the
set of boundary colorings that extend inward.  Tables of neighbouring
regions combine by a relational join over shared boundary vertices, and
a graph is 3-choosable exactly when its table with empty boundary never
contains an empty coloring set.

Tables are exact but exponential in the boundary, so everything here is
sized for small examples; the caps in `SolverParams` guard the blowup.
Whole-graph questions lean on two structural shortcuts first: vertices
with at most two neighbours never constrain choosability and are peeled
away, and a connected 3-regular graph of girth at least five is always
3-choosable (its blocks are neither cliques nor odd cycles, so it is
degree-choosable by the Erdos-Rubin-Taylor characterization).
"""

from dataclasses import dataclass
from itertools import product

from .colorer import SolverParams
from .embedding import induced_submap, require_girth
from .errors import EmbeddingError, PreconditionError, ResourceLimitError
from .oracle import (
    brute_profile,
    canonical_lists_with_map,
    enumerate_canonical_lists,
    peel_low_degree,
)
from .topology import (
    cut_along,
    cycle_edge_ids,
    find_short_cycle,
    split_components,
)


@dataclass(frozen=True)
class ChoosabilityProfile:
    """Boundary behavior table of a graph region.

    vertices  sorted tuple of boundary vertex ids
    entries   frozenset of (lists, colorings): `lists` is a canonical
              tuple of sorted 3-tuples aligned with `vertices`, and
              `colorings` a frozenset of color tuples in the same order,
              the boundary colorings that extend for one choice of
              interior lists
    """

    vertices: tuple
    entries: frozenset

    def rows(self):
        """Entries as nested sorted tuples, for deterministic output."""
        return tuple(sorted((ls, tuple(sorted(ps)))
                            for ls, ps in self.entries))

    @property
    def all_extendable(self):
        """No interior list choice ever strands every boundary coloring."""
        return all(ps for _, ps in self.entries)


def _canon(lists):
    """Canonical form of a tuple of lists plus the renaming, 1-based."""
    canon, sigma = canonical_lists_with_map(lists)
    return (tuple(tuple(c + 1 for c in l) for l in canon),
            {c: n + 1 for c, n in sigma.items()})


def _stab_generators(lists):
    """Transpositions generating the color permutations fixing every
    list: colors lying in exactly the same lists are interchangeable."""
    pattern = {}
    for c in sorted({c for l in lists for c in l}):
        pattern.setdefault(tuple(c in l for l in lists), []).append(c)
    gens = []
    for group in pattern.values():
        gens.extend(zip(group, group[1:]))
    return gens


def _entry_set(pairs):
    """Close (lists, colorings) pairs under the list-fixing renamings.

    The table of any region is closed under renaming colors within a
    fixed boundary list assignment, so lookups done through one chosen
    canonical renaming stay well defined.
    """
    by_lists = {}
    for ls, ps in pairs:
        by_lists.setdefault(ls, set()).add(frozenset(ps))
    out = set()
    for ls, collection in by_lists.items():
        gens = _stab_generators(ls)
        closed = set()
        queue = list(collection)
        while queue:
            ps = queue.pop()
            if ps in closed:
                continue
            closed.add(ps)
            for a, b in gens:
                swapped = frozenset(
                    tuple(b if c == a else a if c == b else c for c in row)
                    for row in ps)
                if swapped not in closed:
                    queue.append(swapped)
        out.update((ls, ps) for ps in closed)
    return frozenset(out)


def enumerate_list_classes(vertices, params=None):
    """Every assignment of 3-color lists to the vertices, one per class
    under renaming colors, as dicts with colors from 1 to 3n."""
    params = params or SolverParams()
    order = sorted(set(vertices))
    if len(order) > params.list_class_vertex_cap:
        raise ResourceLimitError(
            "%d vertices exceed the list-class cap %d"
            % (len(order), params.list_class_vertex_cap))
    out = []
    for assignment in enumerate_canonical_lists(len(order), 3):
        out.append({v: tuple(c + 1 for c in l)
                    for v, l in zip(order, assignment)})
    return out


def _brute_pairs(vertices, edges, boundary, params):
    """Raw table pairs of a graph by enumerating canonical assignments.

    Interior vertices with at most two neighbours are peeled first;
    what remains is enumerated boundary-first, so the boundary lists of
    each full assignment are themselves canonical and group the output.
    """
    kernel = peel_low_degree(vertices, edges, 3, keep=boundary)
    inner = sorted(kernel - set(boundary))
    order = list(boundary) + inner
    if len(boundary) > params.list_class_vertex_cap:
        raise ResourceLimitError(
            "%d boundary vertices exceed the list-class cap %d"
            % (len(boundary), params.list_class_vertex_cap))
    if len(order) > params.choosability_vertex_cap:
        raise ResourceLimitError(
            "%d vertices after peeling exceed the choosability cap %d"
            % (len(order), params.choosability_vertex_cap))
    kedges = [e for e in edges if e[0] in kernel and e[1] in kernel]
    k = len(boundary)
    pairs = []
    for assignment in enumerate_canonical_lists(len(order), 3):
        lists = {v: tuple(c + 1 for c in l)
                 for v, l in zip(order, assignment)}
        psis = brute_profile(sorted(kernel), kedges, lists, boundary)
        l0 = tuple(tuple(c + 1 for c in l) for l in assignment[:k])
        pairs.append((l0, frozenset(psis)))
    return pairs


def profile_set(m, boundary, faces=(), params=None):
    """The boundary behavior table of a whole map.

    For each canonical 3-list class on `boundary` and each list choice
    for the other vertices, the table holds the set of boundary
    colorings that extend to a proper coloring of the map.  `faces` are
    accepted for interface symmetry with the surface solver and only
    validated; the table itself is a function of the abstract graph.
    """
    params = params or SolverParams()
    try:
        require_girth(m, 5)
    except EmbeddingError as exc:
        raise PreconditionError("girth check failed: %s" % exc)
    known = set(m.face_ids())
    bad = [f for f in faces if f not in known]
    if bad:
        raise PreconditionError("unknown faces %s" % bad)
    order = sorted(set(boundary))
    missing = [v for v in order if v not in m.rotations]
    if missing:
        raise PreconditionError("unknown boundary vertices %s" % missing)
    edges = [m.edge_endpoints(e) for e in m.edge_ids()]
    pairs = _brute_pairs(m.vertex_ids(), edges, order, params)
    return ChoosabilityProfile(tuple(order), _entry_set(pairs))


def project_profile(profile, keep, params=None):
    """Forget the boundary vertices outside `keep`.

    A projected coloring survives when some extension of it was in the
    original set, which for raw sets is plain tuple restriction.
    """
    keep = set(keep)
    stray = keep - set(profile.vertices)
    if stray:
        raise PreconditionError(
            "projection keeps unknown vertices %s" % sorted(stray))
    order = sorted(keep)
    pos = [profile.vertices.index(v) for v in order]
    pairs = []
    for ls, ps in profile.entries:
        sub = tuple(ls[i] for i in pos)
        c_sub, sigma = _canon(sub)
        pairs.append((c_sub, frozenset(
            tuple(sigma[row[i]] for i in pos) for row in ps)))
    return ChoosabilityProfile(tuple(order), _entry_set(pairs))


def _lookup(profile, lists):
    """Coloring sets of `profile` for a (possibly non-canonical) list
    tuple, translated back into that tuple's own colors."""
    c_ls, sigma = _canon(lists)
    inv = {n: c for c, n in sigma.items()}
    out = []
    for ls, ps in profile.entries:
        if ls == c_ls:
            out.append(frozenset(tuple(inv[c] for c in row) for row in ps))
    return out


def combine_choosability(c1, c2, params=None):
    """Join two behavior tables over their shared boundary vertices.

    Returns the table over the union of the two boundaries and its
    projection onto the symmetric difference: a joined entry pairs any
    interior choice of the first region with any of the second, and a
    union coloring survives when both restrictions do.
    """
    params = params or SolverParams()
    for prof in (c1, c2):
        for ls, _ps in prof.entries:
            if len(ls) != len(prof.vertices):
                raise PreconditionError(
                    "profile entry arity %d does not match its %d boundary "
                    "vertices" % (len(ls), len(prof.vertices)))
    union = sorted(set(c1.vertices) | set(c2.vertices))
    if len(union) > params.list_class_vertex_cap:
        raise ResourceLimitError(
            "%d joined boundary vertices exceed the list-class cap %d"
            % (len(union), params.list_class_vertex_cap))
    idx = {v: i for i, v in enumerate(union)}
    pos1 = [idx[v] for v in c1.vertices]
    pos2 = [idx[v] for v in c2.vertices]
    pairs = []
    for assignment in enumerate_canonical_lists(len(union), 3):
        l0 = tuple(tuple(c + 1 for c in l) for l in assignment)
        sets1 = _lookup(c1, tuple(l0[i] for i in pos1))
        sets2 = _lookup(c2, tuple(l0[i] for i in pos2))
        if not sets1 or not sets2:
            continue
        rows = list(product(*l0))
        for p1 in sets1:
            for p2 in sets2:
                pairs.append((l0, frozenset(
                    r for r in rows
                    if tuple(r[i] for i in pos1) in p1
                    and tuple(r[i] for i in pos2) in p2)))
    combined = ChoosabilityProfile(tuple(union), _entry_set(pairs))
    outer = (set(c1.vertices) ^ set(c2.vertices))
    return combined, project_profile(combined, outer, params)


def _identify(profile, image):
    """Glue boundary vertices that map to the same target.

    Entries whose lists disagree inside a glued group correspond to no
    assignment of the glued graph and are dropped; colorings survive
    when constant on every group.
    """
    targets = sorted(set(image.values()))
    groups = {t: [] for t in targets}
    for i, v in enumerate(profile.vertices):
        groups[image[v]].append(i)
    pairs = []
    for ls, ps in profile.entries:
        glued = []
        for t in targets:
            seen = {ls[i] for i in groups[t]}
            if len(seen) > 1:
                glued = None
                break
            glued.append(seen.pop())
        if glued is None:
            continue
        c_g, sigma = _canon(tuple(glued))
        rows = set()
        for row in ps:
            if all(len({row[i] for i in groups[t]}) == 1 for t in targets):
                rows.add(tuple(sigma[row[groups[t][0]]] for t in targets))
        pairs.append((c_g, frozenset(rows)))
    return ChoosabilityProfile(tuple(targets), _entry_set(pairs))


def _essential_cut_edges(m):
    """Edges of a cycle whose cut strictly lowers every piece's genus.

    Simple maps use the shortest essential cycle.  Doubled edges (which
    only synthetic sub-girth maps have) are tried pairwise instead,
    keeping a pair exactly when the resulting surgery makes progress,
    which is all the recursion needs.
    """
    g = m.euler_genus()
    if m.is_simple():
        cycle = find_short_cycle(m, m.num_vertices, mode="essential")
        if cycle is None:
            raise EmbeddingError("positive genus map has no essential cycle")
        return cycle_edge_ids(m, cycle)
    by_ends = {}
    for e in sorted(m.edges):
        u, v = m.edge_endpoints(e)
        if u != v:
            by_ends.setdefault(frozenset((u, v)), []).append(e)
    for _ends, group in sorted(by_ends.items(), key=lambda kv: kv[1]):
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                eids = (group[i], group[j])
                cut = cut_along(m, eids)
                if all(p.euler_genus() < g
                       for p in split_components(cut.map)):
                    return eids
    raise EmbeddingError("no essential cycle found in a non-simple map")


def _component_profile(m, boundary, params):
    """Behavior table of one connected map, cutting while genus remains.

    Positive genus is removed by cutting along a short essential cycle;
    a piece's table is computed recursively with the ring copies added
    to its boundary, copies of one vertex are glued back together, and
    a separating cut joins the two sides over the shared ring before
    the ring scaffolding is projected away.
    """
    if m.euler_genus() == 0:
        edges = [m.edge_endpoints(e) for e in m.edge_ids()]
        pairs = _brute_pairs(m.vertex_ids(), edges, sorted(boundary), params)
        return ChoosabilityProfile(tuple(sorted(boundary)),
                                   _entry_set(pairs))
    eids = _essential_cut_edges(m)
    cut = cut_along(m, eids)
    origin = cut.vertex_image
    ring = {v for e in eids for v in m.edge_endpoints(e)}
    glued = []
    for piece in split_components(cut.map):
        sub = frozenset(v for v in piece.rotations
                        if origin[v] in boundary or origin[v] in ring)
        prof = _component_profile(piece, sub, params)
        glued.append(_identify(prof, {v: origin[v] for v in prof.vertices}))
    if len(glued) == 1:
        whole = glued[0]
    elif len(glued) == 2:
        whole = combine_choosability(glued[0], glued[1], params)[0]
    else:
        raise EmbeddingError(
            "cutting one cycle left %d pieces" % len(glued))
    return project_profile(whole, boundary, params)


def decide_choosable(m, params=None):
    """Is the map properly colorable from every assignment of 3-lists?

    Planar components are choosable outright; elsewhere the graph is
    peeled to its min-degree-3 kernel, 3-regular kernels are choosable
    by the degree-choosability characterization, and any kernel beyond
    those shortcuts small enough for the caps goes through the cutting
    and table machinery.
    """
    params = params or SolverParams()
    try:
        require_girth(m, 5)
    except EmbeddingError as exc:
        raise PreconditionError("girth check failed: %s" % exc)
    for comp in split_components(m):
        if comp.euler_genus() == 0:
            continue
        edges = [comp.edge_endpoints(e) for e in comp.edge_ids()]
        kernel = peel_low_degree(comp.vertex_ids(), edges, 3)
        if not kernel:
            continue
        kmap, _kept = induced_submap(comp, kernel)
        for piece in split_components(kmap):
            if piece.euler_genus() == 0:
                continue
            degs = [len({u for u, _ in nb if u in piece.rotations})
                    for nb in piece.adjacency().values()]
            if max(degs) <= 3:
                # 3-regular with girth >= 5: no block is a clique or an
                # odd cycle, so 3-lists (= degree lists) always color it
                continue
            if piece.num_vertices > params.choosability_vertex_cap:
                raise ResourceLimitError(
                    "kernel with %d vertices exceeds the choosability "
                    "cap %d" % (piece.num_vertices,
                                params.choosability_vertex_cap))
            table = _component_profile(piece, frozenset(), params)
            if not table.all_extendable:
                return False
    return True
