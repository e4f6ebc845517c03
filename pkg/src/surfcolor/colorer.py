"""Distance truncation, tree decompositions, and list-coloring DP.

The decision procedure in this module handles instances whose short
cycles are all trivial (they bound disks avoiding the designated
faces): on such instances only the part of the graph near the
precolored vertices matters, so the graph is truncated to a radius
that depends on the genus and the number of designated faces, and the
truncated part is list-colored exactly by dynamic programming over a
tree decomposition.
"""

import math
from dataclasses import dataclass, field

from .embedding import POS, insert_chord_in_face, induced_submap, require_girth
from .errors import EmbeddingError, PreconditionError, ResourceLimitError
from . import oracle
from .topology import split_components

#: Width guarantee of tree_decomposition: at most
#: WIDTH_BUDGET_FACTOR * (genus + 1) * (bfs radius + 1) - 1.
WIDTH_BUDGET_FACTOR = 4


@dataclass
class SolverParams:
    """Tunable constants; the defaults reproduce the published formulas.

    log_base None means the natural logarithm.  The two override fields
    replace the corresponding derived quantity outright when set, which
    is how tests exercise code paths that the full-size constants would
    push beyond any desk-scale graph.
    """

    log_base: float = None
    override_edgewidth_constant: float = None
    override_radius: int = None
    override_cycle_bound: int = None
    treewidth_budget_constant: int = WIDTH_BUDGET_FACTOR
    dp_max_width: int = 16
    dp_max_table: int = 500_000
    oracle_fallback: bool = True
    max_genus: int = 4
    max_faces: int = 10
    brute_force_vertex_cap: int = 20
    list_class_vertex_cap: int = 6
    choosability_vertex_cap: int = 8

    def _log(self, x):
        if self.log_base is None:
            return math.log(x)
        return math.log(x, self.log_base)

    def edgewidth_constant(self, genus, num_faces):
        """How long a cycle must be before it may be non-trivial."""
        if self.override_edgewidth_constant is not None:
            return self.override_edgewidth_constant
        k = 2 * genus + num_faces - 1
        if k <= 0:
            return 0.0
        return 400.0 * k * (10.0 + self._log(2 * genus + num_faces))

    def truncation_radius(self, genus, num_faces, pinned_count):
        if self.override_radius is not None:
            return self.override_radius
        c = self.edgewidth_constant(genus, num_faces)
        r = 200.0 * (c + 5.0 + self._log(1.0 + pinned_count / (c + 1.0)))
        return math.ceil(r)

    def cycle_length_bound(self, genus, num_faces):
        """Length limit for the short-cycle search of the surface solver."""
        if self.override_cycle_bound is not None:
            return self.override_cycle_bound
        return math.ceil(100.0 * self.edgewidth_constant(genus, num_faces))


def truncation_radius(genus, num_faces, pinned_count, params=None):
    """Distance below which vertices are kept around the pinned set."""
    if genus < 0 or num_faces < 0:
        raise PreconditionError("genus and face count must be nonnegative")
    return (params or SolverParams()).truncation_radius(genus, num_faces,
                                                        pinned_count)


def restrict_to_near(m, pinned, radius):
    """Induced submap on vertices at distance < radius from `pinned`.

    Returns (submap, kept vertex frozenset).  Distance is strict, so
    radius 1 keeps exactly the pinned vertices and radius 0 nothing.
    """
    if radius < 0:
        raise PreconditionError("radius must be nonnegative")
    missing = set(pinned) - set(m.rotations)
    if missing:
        raise PreconditionError("unknown vertices %s" % sorted(missing))
    adj = m.adjacency()
    dist = {v: 0 for v in pinned}
    frontier = sorted(dist)
    while frontier:
        nxt = []
        for v in frontier:
            for u, _ in adj[v]:
                if u not in dist:
                    dist[u] = dist[v] + 1
                    nxt.append(u)
        frontier = nxt
    kept = frozenset(v for v, d in dist.items() if d < radius)
    sub, _ = induced_submap(m, kept)
    return sub, kept


# -- tree decompositions ------------------------------------------------------


@dataclass
class TreeDecomposition:
    """Rooted tree of bags.

    bags    bag id -> frozenset of vertices
    parent  bag id -> parent bag id (root maps to None)
    root    bag id
    width   max bag size - 1
    meta    construction facts: genus, bfs_radius, width_budget
    """

    bags: dict
    parent: dict
    root: int
    meta: dict = field(default_factory=dict)

    @property
    def width(self):
        return max(len(b) for b in self.bags.values()) - 1

    def children(self):
        out = {b: [] for b in self.bags}
        for b, p in self.parent.items():
            if p is not None:
                out[p].append(b)
        return out


def validate_decomposition(m, td):
    """Violations of the three decomposition axioms (empty list = valid)."""
    out = []
    holding = {v: [] for v in m.rotations}
    for b, bag in td.bags.items():
        for v in bag:
            if v in holding:
                holding[v].append(b)
    for v, where in holding.items():
        if not where:
            out.append("vertex %s in no bag" % (v,))
    for e in m.edges:
        u, w = m.edge_endpoints(e)
        if not any(u in bag and w in bag for bag in td.bags.values()):
            out.append("edge %s (%s-%s) not covered" % (e, u, w))
    kids = td.children()
    for v, where in holding.items():
        if len(where) <= 1:
            continue
        inside = set(where)
        stack = [where[0]]
        seen = {where[0]}
        while stack:
            b = stack.pop()
            for nb in kids[b] + ([td.parent[b]] if td.parent[b] is not None else []):
                if nb in inside and nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if seen != inside:
            out.append("bags holding %s are disconnected" % (v,))
    return out


def _bfs_tree(m, root):
    adj = m.adjacency()
    depth = {root: 0}
    parent = {root: None}
    tree_edges = set()
    frontier = [root]
    while frontier:
        nxt = []
        for v in frontier:
            for u, e in adj[v]:
                if u not in depth:
                    depth[u] = depth[v] + 1
                    parent[u] = v
                    tree_edges.add(e)
                    nxt.append(u)
        frontier = nxt
    return depth, parent, tree_edges


def _triangulate(m, depth_hint):
    """Chord every face down to length <= 3, fanning from the corner
    nearest the BFS root so bags built from root paths stay small."""
    cur = m
    while True:
        target = None
        for fid in cur.face_ids():
            if cur.face_length(fid) >= 4:
                target = fid
                break
        if target is None:
            return cur
        walk = cur.face_walk(target)
        order = min(range(len(walk)),
                    key=lambda p: (depth_hint.get(cur.dart_vertex[walk[p]],
                                                  len(depth_hint)),
                                   cur.dart_vertex[walk[p]], p))
        cur, _ = insert_chord_in_face(cur, target,
                                      order, (order + 2) % len(walk))


def _edge_sides(m, e):
    d, _ = m.edges[e]
    return (m.face_of_flag((d, POS)), m.face_of_flag((d, -POS)))


def _connect_traces(m, td):
    """Repair axiom three: make every vertex's bag set a subtree."""
    depth = {}
    stack = [(td.root, 0)]
    while stack:
        b, dep = stack.pop()
        depth[b] = dep
        stack.extend((c, dep + 1) for c in td.children()[b])

    def path(a, b):
        out = set()
        while depth[a] > depth[b]:
            out.add(a)
            a = td.parent[a]
        while depth[b] > depth[a]:
            out.add(b)
            b = td.parent[b]
        while a != b:
            out.add(a)
            out.add(b)
            a, b = td.parent[a], td.parent[b]
        out.add(a)
        return out

    bags = {b: set(bag) for b, bag in td.bags.items()}
    for v in m.rotations:
        where = [b for b, bag in bags.items() if v in bag]
        ref = where[0]
        for other in where[1:]:
            for b in path(ref, other):
                bags[b].add(v)
    td.bags = {b: frozenset(bag) for b, bag in bags.items()}


def tree_decomposition(m, root):
    """A valid tree decomposition with width at most
    WIDTH_BUDGET_FACTOR * (genus+1) * (bfs radius + 1) - 1.

    Built by triangulating every face, layering the graph by BFS from
    `root`, spanning the faces by a dual tree, and bagging each face's
    corner-to-root paths together with the paths of the spanning
    leftover edges (there are exactly `genus` of those).  Validity is
    checked, repaired if a trace is disconnected, and checked again;
    the budget is enforced, not just reported.
    """
    if root not in m.rotations:
        raise PreconditionError("unknown root vertex %s" % (root,))
    if len(m.components()) != 1:
        raise PreconditionError("tree decomposition needs a connected map")
    genus = m.euler_genus()

    if m.num_edges == 0:
        td = TreeDecomposition({0: frozenset(m.rotations)}, {0: None}, 0,
                               {"genus": 0, "bfs_radius": 0,
                                "width_budget": WIDTH_BUDGET_FACTOR - 1})
        return td

    depth0, _, _ = _bfs_tree(m, root)
    radius = max(depth0.values())
    tri = _triangulate(m, depth0)
    if tri.euler_genus() != genus:
        raise PreconditionError("triangulation changed the surface")

    # chords only shorten distances, so the input radius upper-bounds
    # the path lengths the bags are built from
    depth, parent, tree_edges = _bfs_tree(tri, root)

    # span the faces by the dual of the non-tree edges
    dual = {f: [] for f in tri.face_ids()}
    spare = []
    for e in tri.edges:
        if e in tree_edges:
            continue
        f1, f2 = _edge_sides(tri, e)
        dual[f1].append((f2, e))
        dual[f2].append((f1, e))
        spare.append(e)
    bag_root = tri.face_ids()[0]
    bag_parent = {bag_root: None}
    cotree = set()
    frontier = [bag_root]
    while frontier:
        nxt = []
        for f in frontier:
            for g, e in sorted(dual[f]):
                if g not in bag_parent and e not in cotree:
                    bag_parent[g] = f
                    cotree.add(e)
                    nxt.append(g)
        frontier = nxt
    leftovers = [e for e in spare if e not in cotree]
    if len(leftovers) != genus:
        raise PreconditionError(
            "tree-cotree leftover count %d does not match genus %d"
            % (len(leftovers), genus))

    def root_path(v):
        out = []
        while v is not None:
            out.append(v)
            v = parent[v]
        return out

    common = set()
    for e in leftovers:
        for v in tri.edge_endpoints(e):
            common.update(root_path(v))
    bags = {}
    for f in tri.face_ids():
        bag = set(common)
        for v in tri.face_vertices(f):
            bag.update(root_path(v))
        bags[f] = frozenset(bag)

    budget = WIDTH_BUDGET_FACTOR * (genus + 1) * (radius + 1) - 1
    td = TreeDecomposition(bags, bag_parent, bag_root,
                           {"genus": genus, "bfs_radius": radius,
                            "width_budget": budget})
    if validate_decomposition(m, td):
        _connect_traces(m, td)
    problems = validate_decomposition(m, td)
    if problems:
        raise PreconditionError("invalid decomposition: %s" % problems[:3])
    if td.width > budget:
        raise ResourceLimitError(
            "decomposition width %d exceeds budget %d" % (td.width, budget))
    return td


# -- profiles and dynamic programming ----------------------------------------


@dataclass(frozen=True)
class ColoringProfile:
    """The boundary colorings extendable to some region.

    boundary is an ordered vertex tuple; colorings are tuples in that
    order.  Over an empty boundary the profile is {()} exactly when the
    region is colorable.
    """

    boundary: tuple
    colorings: frozenset

    def __post_init__(self):
        for t in self.colorings:
            if len(t) != len(self.boundary):
                raise PreconditionError("tuple arity differs from boundary")

    @property
    def is_empty(self):
        return not self.colorings

    def project(self, sub):
        sub = tuple(sub)
        pos = {v: i for i, v in enumerate(self.boundary)}
        missing = [v for v in sub if v not in pos]
        if missing:
            raise PreconditionError("projection outside boundary: %s" % missing)
        idx = [pos[v] for v in sub]
        return ColoringProfile(
            sub, frozenset(tuple(t[i] for i in idx) for t in self.colorings))

    def join(self, other):
        """Natural join: tuples over the union boundary agreeing on the
        shared vertices.  Purely relational; no graph edges are
        rechecked here."""
        shared = [v for v in self.boundary if v in set(other.boundary)]
        mine = {v: i for i, v in enumerate(self.boundary)}
        theirs = {v: i for i, v in enumerate(other.boundary)}
        extra = [v for v in other.boundary if v not in mine]
        out_boundary = self.boundary + tuple(extra)
        buckets = {}
        for t in other.colorings:
            key = tuple(t[theirs[v]] for v in shared)
            buckets.setdefault(key, []).append(tuple(t[theirs[v]] for v in extra))
        got = set()
        for t in self.colorings:
            key = tuple(t[mine[v]] for v in shared)
            for tail in buckets.get(key, ()):
                got.add(t + tail)
        return ColoringProfile(out_boundary, frozenset(got))

    def as_sorted_list(self):
        return sorted(self.colorings)


def _nice_nodes(td, boundary_set):
    """Flatten the decomposition into post-ordered leaf / introduce /
    forget / join nodes whose bags all contain the boundary."""
    aug = {b: frozenset(bag | boundary_set) for b, bag in td.bags.items()}
    kids = td.children()
    nodes = []

    def chain(lo_idx, lo_bag, hi_bag):
        cur_bag, cur = lo_bag, lo_idx
        for v in sorted(lo_bag - hi_bag):
            cur_bag = cur_bag - {v}
            nodes.append(("forget", v, cur_bag, (cur,)))
            cur = len(nodes) - 1
        for v in sorted(hi_bag - cur_bag):
            cur_bag = cur_bag | {v}
            nodes.append(("introduce", v, cur_bag, (cur,)))
            cur = len(nodes) - 1
        return cur

    done = {}
    order = []
    stack = [(td.root, False)]
    while stack:
        b, expanded = stack.pop()
        if expanded:
            order.append(b)
            continue
        stack.append((b, True))
        stack.extend((c, False) for c in kids[b])
    for b in order:
        nodes.append(("leaf", None, frozenset(), ()))
        cur = chain(len(nodes) - 1, frozenset(), aug[b])
        for c in kids[b]:
            lifted = chain(done[c], aug[c], aug[b])
            nodes.append(("join", None, aug[b], (cur, lifted)))
            cur = len(nodes) - 1
        done[b] = cur
    return nodes, done[td.root]


def dp_list_color(m, td, lists, boundary=(), params=None):
    """Exact profile of the boundary colorings extendable to all of `m`.

    Works over the given decomposition with the boundary pinned into
    every bag.  Lists must be nonempty with at most three colors.
    Raises ResourceLimitError when the pinned width or any table
    outgrows the configured caps (callers may fall back to the oracle).
    """
    boundary = tuple(boundary)
    if len(set(boundary)) != len(boundary):
        raise PreconditionError("boundary repeats a vertex")
    missing = set(boundary) - set(m.rotations)
    if missing:
        raise PreconditionError("boundary vertices %s missing" % sorted(missing))
    for v in m.rotations:
        colors = lists.get(v)
        if not colors:
            raise PreconditionError("vertex %s needs a nonempty list" % (v,))
        if len(colors) > 3:
            raise PreconditionError("vertex %s has more than 3 colors" % (v,))

    params = params or SolverParams()
    bset = frozenset(boundary)
    eff_width = max(len(bag | bset) for bag in td.bags.values()) - 1
    if eff_width > params.dp_max_width:
        raise ResourceLimitError("pinned width %d exceeds cap %d"
                                 % (eff_width, params.dp_max_width))

    neighbours = {v: set() for v in m.rotations}
    for e in m.edges:
        u, w = m.edge_endpoints(e)
        neighbours[u].add(w)
        neighbours[w].add(u)
        if u == w:
            neighbours[u].add(u)

    nodes, root_idx = _nice_nodes(td, bset)
    tables = [None] * len(nodes)
    for i, (kind, v, bag, children) in enumerate(nodes):
        order = tuple(sorted(bag))
        if kind == "leaf":
            tables[i] = {()}
        elif kind == "introduce":
            (ci,) = children
            at = order.index(v)
            adj_pos = [j for j, u in enumerate(order)
                       if u != v and u in neighbours[v]]
            self_loop = v in neighbours[v]
            table = set()
            for t in tables[ci]:
                if self_loop:
                    continue
                grown = t[:at] + (None,) + t[at:]
                for c in sorted(lists[v]):
                    if all(grown[j] != c for j in adj_pos):
                        table.add(grown[:at] + (c,) + grown[at + 1:])
            tables[i] = table
        elif kind == "forget":
            (ci,) = children
            prev_order = tuple(sorted(nodes[ci][2]))
            at = prev_order.index(v)
            tables[i] = {t[:at] + t[at + 1:] for t in tables[ci]}
        else:
            a, b = children
            tables[i] = tables[a] & tables[b]
        if len(tables[i]) > params.dp_max_table:
            raise ResourceLimitError("DP table grew past %d entries"
                                     % params.dp_max_table)
        for c in children:
            tables[c] = None

    root_order = tuple(sorted(nodes[root_idx][2]))
    pos = {v: i for i, v in enumerate(root_order)}
    idx = [pos[v] for v in boundary]
    final = frozenset(tuple(t[i] for i in idx) for t in tables[root_idx])
    return ColoringProfile(boundary, final)


# -- the truncated decision procedure ----------------------------------------


def require_solver_lists(m, lists, pinned):
    """Entry-point list shape: singletons exactly on `pinned`, triples
    elsewhere."""
    pinned = set(pinned)
    missing = pinned - set(m.rotations)
    if missing:
        raise PreconditionError("pinned vertices %s missing" % sorted(missing))
    for v in m.rotations:
        colors = lists.get(v)
        if not colors:
            raise PreconditionError("vertex %s needs a list" % (v,))
        want = 1 if v in pinned else 3
        if len(colors) != want:
            raise PreconditionError(
                "vertex %s has %d colors, needs %d" % (v, len(colors), want))


def _colorable_whole(m, lists, params):
    """DP colorability of one connected map, oracle fallback on overflow."""
    if m.num_vertices == 0:
        return True
    root = min(m.rotations)
    try:
        td = tree_decomposition(m, root)
        return not dp_list_color(m, td, lists, params=params).is_empty
    except ResourceLimitError:
        if not params.oracle_fallback:
            raise
        if m.num_vertices > params.brute_force_vertex_cap:
            raise
        edges = [m.edge_endpoints(e) for e in m.edges]
        return oracle.brute_colorable(list(m.rotations), edges, lists)


def decide_large_ew(m, faces, pinned, lists, params=None):
    """List-colorability when every short cycle is trivial.

    `faces` are the designated faces, `pinned` the singleton-list
    vertices (each must lie on a designated face).  Components without
    pinned vertices are colorable outright when planar and are solved
    whole otherwise; components with pinned vertices are truncated to
    the radius set by the genus, face count, and pinned count, and each
    truncated part is solved by DP.  The precondition that all short
    cycles are trivial is what makes the truncation exact; it is the
    caller's responsibility (at desk scale the radius always exceeds
    the diameter, making this unconditional).
    """
    params = params or SolverParams()
    faces = tuple(faces)
    pinned = frozenset(pinned)
    known = set(m.face_ids())
    bad = [f for f in faces if f not in known]
    if bad:
        raise PreconditionError("unknown faces %s" % bad)
    try:
        require_girth(m, 5)
    except EmbeddingError as exc:
        raise PreconditionError("girth check failed: %s" % exc)
    require_solver_lists(m, lists, pinned)
    on_faces = set()
    for f in faces:
        on_faces.update(m.face_vertices(f))
    stray = pinned - on_faces
    if stray:
        raise PreconditionError(
            "pinned vertices %s not on any designated face" % sorted(stray))

    face_home = {f: set(m.face_vertices(f)) for f in faces}
    for piece in split_components(m):
        here = set(piece.rotations)
        mine = pinned & here
        genus = piece.euler_genus()
        if not mine:
            if genus == 0:
                continue  # triples on a planar girth-5 graph always color
            if not _colorable_whole(piece, lists, params):
                return False
            continue
        s = sum(1 for f in faces if face_home[f] <= here)
        radius = params.truncation_radius(genus, s, len(mine))
        near, _ = restrict_to_near(piece, mine, radius)
        for part in split_components(near):
            if not _colorable_whole(part, lists, params):
                return False
    return True
