"""Deciding list colorability of maps on arbitrary surfaces.

The decision reduces a surface instance to sphere instances with at
most two special faces.  A short cycle that neither bounds a plain disk
nor wraps a single designated face is branched on: each proper coloring
of the cycle is tried and the map is cut open along it, which strictly
shrinks either the genus or the number of special faces of every piece.
When no such cycle exists, every short cycle wraps at most one
designated face; a ring is then peeled around each face, the enclosed
collar is summarized by the ring colorings it accepts, the remaining
core is summarized the same way, and the answer is whether some
assignment on the rings is accepted everywhere at once.

A precolored subgraph that is not anchored to faces is handled by
slitting the map open along a padded spanning forest of the subgraph,
which turns the precolored vertices into the boundary of fresh faces.
"""

from .colorer import (ColoringProfile, SolverParams, decide_large_ew,
                      dp_list_color, require_solver_lists,
                      tree_decomposition)
from .cylinder import (covering_faces, decide_cylinder, locate_face,
                       proper_cycle_colorings)
from .embedding import add_pendant_path, delete_edges, induced_submap, \
    require_girth
from .errors import EmbeddingError, PreconditionError, ResourceLimitError
from .topology import (classify_cycle, cut_along, cycle_edge_ids,
                       face_translation, find_short_cycle, split_components)


# -- branching on a short essential cycle -------------------------------------


class _CutPiece:
    """One piece left by cutting an essential cycle, queried once per
    ring coloring.

    Queries recurse into the surface decision with the ring pinned,
    lazily and memoised: an extendable instance usually succeeds within
    the first few ring colorings, so nothing is precomputed.
    """

    def __init__(self, piece, faces, pins, ring_of, images, lists, params):
        self.piece = piece
        self.faces = faces
        self.pins = pins
        self.params = params
        self.ring_cols = tuple(sorted(ring_of))
        self.ring_orig = tuple(ring_of[v] for v in self.ring_cols)
        self.lists = {v: set(lists[images[v]]) for v in piece.rotations}
        self.memo = {}

    def __call__(self, chosen):
        key = tuple(chosen[ov] for ov in self.ring_orig)
        if key not in self.memo:
            sub = dict(self.lists)
            for v, c in zip(self.ring_cols, key):
                sub[v] = {c}
            self.memo[key] = _decide_component(
                self.piece, self.faces, self.pins, sub, self.params)
        return self.memo[key]


def _branch_cut(comp, faces, pins, lists, params, cycle):
    """Try every proper coloring of the cycle, cut, recurse."""
    g, s = comp.euler_genus(), len(faces)
    cut = cut_along(comp, cycle_edge_ids(comp, cycle))
    new_face = {of: nf for nf, of in cut.face_image.items()}
    ring = set(cycle)

    checkers = []
    for piece in split_components(cut.map):
        tr = face_translation(cut.map, piece)
        faces_p = [tr[new_face[f]] for f in faces if new_face[f] in tr]
        faces_p += [tr[c] for c in cut.cap_faces if c in tr]
        pins_p = set()
        ring_of = {}
        for v in piece.rotations:
            ov = cut.vertex_image[v]
            if ov in ring:
                ring_of[v] = ov
                pins_p.add(v)
            elif ov in pins:
                pins_p.add(v)
        # every recursion step must lose genus or special faces
        if (piece.euler_genus(), len(faces_p)) >= (g, s):
            raise EmbeddingError(
                "cutting an essential cycle failed to shrink the surface")
        checkers.append(_CutPiece(piece, tuple(faces_p), frozenset(pins_p),
                                  ring_of, cut.vertex_image, lists, params))

    for ring_colors in proper_cycle_colorings(cycle, lists):
        chosen = dict(zip(cycle, ring_colors))
        if all(checker(chosen) for checker in checkers):
            return True
    return False


# -- peeling collars around the designated faces ------------------------------


def _side_interior(comp, cycle, fid):
    """Vertices strictly inside the cycle, on the side of face `fid`."""
    cut = cut_along(comp, cycle_edge_ids(comp, cycle))
    nf = next(new for new, old in cut.face_image.items() if old == fid)
    anchor = cut.map.face_vertices(nf)[0]
    for verts in cut.map.components():
        if anchor in verts:
            inside = {cut.vertex_image[v] for v in verts}
            return frozenset(inside - set(cycle))
    raise EmbeddingError("face lost its component after cutting")


def _collar_plan(comp, faces, bound):
    """Rings to peel toward the designated faces, or (None, reason).

    Vertices are visited in increasing id order; each one not yet
    swallowed contributes its shortest cycle that fails to bound a
    plain disk, which in this branch must wrap exactly one designated
    face.  A later ring may swallow an earlier one around the same
    face; rings that cross, or collars of two faces sharing territory,
    abandon the plan.
    """
    collars = {}
    dead = set()
    for v in sorted(comp.rotations):
        if v in dead:
            continue
        cycle = find_short_cycle(comp, bound, marked=faces,
                                 mode="not_contractible", through_vertex=v)
        if cycle is None:
            continue
        kind, fid = classify_cycle(comp, cycle, marked=faces)
        if kind != "surrounds":
            return None, "peeling met a cycle that wraps no single face"
        interior = _side_interior(comp, cycle, fid)
        prev = collars.get(fid)
        if prev is None:
            collars[fid] = (cycle, interior)
        else:
            oring, ointer = prev
            if interior >= ointer and set(oring) <= interior | set(cycle):
                collars[fid] = (cycle, interior)
            elif not (ointer >= interior
                      and set(cycle) <= ointer | set(oring)):
                return None, "two rings around one face cross"
        dead |= collars[fid][1]

    items = sorted(collars.items())
    for i, (f1, (r1, i1)) in enumerate(items):
        for f2, (r2, i2) in items[i + 1:]:
            if i1 & (i2 | set(r2)) or i2 & (i1 | set(r1)):
                return None, "collars of two faces overlap"
    for fid, (_ring, inter) in items:
        for f in faces:
            if f != fid and inter & set(comp.face_vertices(f)):
                return None, "a designated face fell inside a foreign collar"
    return collars, None


def _collar_profile(comp, fid, ring, interior, lists, params):
    """Ring colorings that extend across the collar cut off around
    `fid`, plus the collar-internal edge ids.

    Returns None when the cut does not isolate exactly the expected
    region; the caller then decides the whole component at once.
    """
    ring_edges = set(cycle_edge_ids(comp, ring))
    cut = cut_along(comp, sorted(ring_edges))
    nf = next(new for new, old in cut.face_image.items() if old == fid)
    anchor = cut.map.face_vertices(nf)[0]
    piece = None
    for cand in split_components(cut.map):
        if anchor in cand.rotations:
            piece = cand
            break
    tr = face_translation(cut.map, piece)
    caps = [tr[c] for c in cut.cap_faces if c in tr]
    copies = {}
    for v in piece.rotations:
        ov = cut.vertex_image[v]
        if ov in set(ring):
            if ov in copies:
                return None
            copies[ov] = v
    got = {cut.vertex_image[v] for v in piece.rotations}
    if got != set(interior) | set(ring) or len(caps) != 1 \
            or len(copies) != len(ring) or nf not in tr:
        return None

    collar_edges = {cut.edge_image[e] for e in piece.edges} - ring_edges
    sub = {v: set(lists[cut.vertex_image[v]]) for v in piece.rotations}
    boundary = tuple(copies[ov] for ov in ring)
    try:
        td = tree_decomposition(piece, min(piece.rotations))
        prof = dp_list_color(piece, td, sub, boundary=boundary, params=params)
        rows = prof.colorings
    except ResourceLimitError:
        pins = frozenset(copies.values()) | frozenset(
            v for v in piece.rotations if len(sub[v]) == 1)
        rows = set()
        for ring_colors in proper_cycle_colorings(ring, lists):
            pinned_sub = dict(sub)
            for ov, c in zip(ring, ring_colors):
                pinned_sub[copies[ov]] = {c}
            if decide_cylinder(piece, (tr[nf], caps[0]), pins,
                               pinned_sub, params):
                rows.add(ring_colors)
    return ColoringProfile(tuple(ring), frozenset(rows)), \
        frozenset(collar_edges)


def _map_profile(m, columns, lists, params):
    """Exact profile of a whole map over `columns`, one dynamic program
    per component; planar components free of both columns and forced
    colors are always colorable and contribute nothing."""
    chain = ColoringProfile((), frozenset({()}))
    for piece in split_components(m):
        here = set(piece.rotations)
        cols = tuple(v for v in columns if v in here)
        sub = {v: set(lists[v]) for v in here}
        if not cols and piece.euler_genus() == 0 \
                and all(len(c) == 3 for c in sub.values()):
            continue
        td = tree_decomposition(piece, min(here))
        chain = chain.join(dp_list_color(piece, td, sub,
                                         boundary=cols, params=params))
        if chain.is_empty:
            break
    return chain


def _branch_peel(comp, faces, pins, lists, params, bound):
    """No short essential cycle: peel a collar around each designated
    face, then match collar and core profiles on the rings."""
    plan, _reason = _collar_plan(comp, faces, bound)
    if not plan:
        # nothing to peel, or the peeled regions interleave: decide the
        # component in one piece instead
        return decide_large_ew(comp, faces, pins, lists, params)

    profiles = []
    collar_edges = set()
    for fid in sorted(plan):
        ring, interior = plan[fid]
        got = _collar_profile(comp, fid, ring, interior, lists, params)
        if got is None:
            return decide_large_ew(comp, faces, pins, lists, params)
        prof, inside = got
        if not prof.colorings:
            return False
        profiles.append(prof)
        collar_edges |= inside

    dead = set()
    ringset = set()
    for ring, interior in plan.values():
        dead |= interior
        ringset |= set(ring)
    alive = sorted(set(comp.rotations) - dead)
    core = induced_submap(comp, alive)[0]
    drop = [e for e in core.edges if e in collar_edges]
    if drop:
        core = delete_edges(core, drop)
    core_lists = {v: set(lists[v]) for v in core.rotations}

    try:
        chain = _map_profile(core, tuple(sorted(ringset)), core_lists, params)
    except ResourceLimitError:
        chain = None
    if chain is not None:
        for prof in profiles:
            chain = chain.join(prof)
            if chain.is_empty:
                return False
        return not chain.is_empty

    # the rings are too wide to pin into the dynamic program all at
    # once; try each ring assignment the collars accept against the
    # core directly instead
    combined = profiles[0]
    for prof in profiles[1:]:
        combined = combined.join(prof)
    cols = combined.boundary
    forced = frozenset(cols) | frozenset(
        v for v in core.rotations if len(core_lists[v]) == 1)
    cover = covering_faces(core, forced, ())
    for row in combined.colorings:
        pinned_lists = dict(core_lists)
        for v, c in zip(cols, row):
            pinned_lists[v] = {c}
        if decide_large_ew(core, cover, forced, pinned_lists, params):
            return True
    return False


# -- the decision --------------------------------------------------------------


def _decide_component(comp, faces, pins, lists, params):
    """Decide one connected component, faces and pins already local."""
    for e in comp.edges:
        u, w = comp.edge_endpoints(e)
        if u != w and u in pins and w in pins and lists[u] == lists[w]:
            return False
    g = comp.euler_genus()
    if g == 0 and len(faces) <= 2:
        return decide_cylinder(comp, faces, pins, lists, params)
    bound = min(params.cycle_length_bound(g, len(faces)),
                comp.num_vertices)
    cycle = find_short_cycle(comp, bound, marked=faces, mode="essential")
    if cycle is not None:
        return _branch_cut(comp, faces, pins, lists, params, cycle)
    return _branch_peel(comp, faces, pins, lists, params, bound)


def decide(m, faces=(), pinned=(), lists=None, params=None):
    """Does the forced coloring on `pinned` extend over the whole map?

    `faces` are the designated face ids; every pinned vertex must lie
    on one of them, lists hold one color there and three elsewhere, and
    the girth must be at least 5.  Genus and face counts beyond the
    limits in `params` raise ResourceLimitError.
    """
    params = params or SolverParams()
    if lists is None:
        raise PreconditionError("color lists are required")
    faces = tuple(dict.fromkeys(faces))
    known = set(m.face_ids())
    bad = [f for f in faces if f not in known]
    if bad:
        raise PreconditionError("unknown faces %s" % bad)
    try:
        require_girth(m, 5)
    except EmbeddingError as exc:
        raise PreconditionError("girth check failed: %s" % exc)
    pinned = frozenset(pinned)
    require_solver_lists(m, lists, pinned)
    on_faces = set()
    for f in faces:
        on_faces.update(m.face_vertices(f))
    stray = pinned - on_faces
    if stray:
        raise PreconditionError(
            "pinned vertices %s not on a designated face" % sorted(stray))
    if len(faces) > params.max_faces:
        raise ResourceLimitError(
            "%d designated faces exceed the limit %d"
            % (len(faces), params.max_faces))

    pieces = split_components(m)
    for piece in pieces:
        g = piece.euler_genus()
        if g > params.max_genus:
            raise ResourceLimitError(
                "component genus %d exceeds the limit %d"
                % (g, params.max_genus))
    for piece in pieces:
        here = set(piece.rotations)
        faces_here = [pf for pf in (locate_face(m, piece, f) for f in faces)
                      if pf is not None]
        sub = {v: set(lists[v]) for v in here}
        if not _decide_component(piece, tuple(faces_here), pinned & here,
                                 sub, params):
            return False
    return True


# -- precolored subgraphs ------------------------------------------------------


def _forest_edges(m, vertices, edge_ids):
    """A spanning forest of the subgraph, as a sorted edge id list."""
    parent = {v: v for v in vertices}

    def root(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    keep = []
    for e in sorted(edge_ids):
        ru, rw = (root(u) for u in m.edge_endpoints(e))
        if ru != rw:
            parent[ru] = rw
            keep.append(e)
    return keep


def _pad_forest(m, vertices, forest, lists):
    """Grow every precolored component to at least three edges by
    hanging a fresh forced path off its least vertex.

    Pendant paths close no cycles, so the girth is untouched; the fresh
    colors are private tokens that never collide with a real palette.
    Returns (padded map, padded lists, new edge ids, padded vertex set).
    """
    comp = {v: v for v in vertices}

    def root(v):
        while comp[v] != v:
            comp[v] = comp[comp[v]]
            v = comp[v]
        return v

    sizes = {}
    for e in forest:
        u, w = m.edge_endpoints(e)
        comp[root(u)] = root(w)
    for e in forest:
        u, _ = m.edge_endpoints(e)
        sizes[root(u)] = sizes.get(root(u), 0) + 1

    out = m
    lists2 = dict(lists)
    extra = []
    padded = set(vertices)
    tick = 0
    for r in sorted({root(v) for v in vertices}):
        need = 3 - sizes.get(r, 0)
        if need <= 0:
            continue
        at = min(v for v in vertices if root(v) == r)
        out, fresh, eids = add_pendant_path(out, at, need)
        last = next(iter(lists2[at]))
        for nv in fresh:
            color = ("pendant", tick)
            tick += 1
            if color == last:
                color = ("pendant", tick)
                tick += 1
            lists2[nv] = {color}
            last = color
        extra += eids
        padded.update(fresh)
    return out, lists2, extra, padded


def decide_precolored_subgraph(m, subgraph, lists, params=None):
    """Does the forced coloring of a subgraph extend to the whole map?

    `subgraph` is a pair (vertex ids, edge ids) with every edge joining
    two of the vertices; lists hold one color exactly on the subgraph.
    The map is slit open along a padded spanning forest of the
    subgraph, turning the forced vertices into face boundaries, and the
    face-anchored decision finishes the job.
    """
    params = params or SolverParams()
    if lists is None:
        raise PreconditionError("color lists are required")
    verts, edges = subgraph
    verts, edges = set(verts), set(edges)
    missing = verts - set(m.rotations)
    if missing:
        raise PreconditionError("unknown vertices %s" % sorted(missing))
    alien = edges - set(m.edges)
    if alien:
        raise PreconditionError("unknown edges %s" % sorted(alien))
    for e in sorted(edges):
        u, w = m.edge_endpoints(e)
        if u == w:
            raise PreconditionError("subgraph edge %d is a loop" % e)
        if u not in verts or w not in verts:
            raise PreconditionError(
                "subgraph edge %d leaves the vertex set" % e)
    try:
        require_girth(m, 5)
    except EmbeddingError as exc:
        raise PreconditionError("girth check failed: %s" % exc)
    require_solver_lists(m, lists, verts)

    # any map edge between equal forced colors is already hopeless
    for e in m.edges:
        u, w = m.edge_endpoints(e)
        if u != w and u in verts and w in verts and lists[u] == lists[w]:
            return False

    for piece in split_components(m):
        here = set(piece.rotations)
        sub = {v: set(lists[v]) for v in here}
        local = verts & here
        if not local:
            if not decide(piece, (), (), sub, params):
                return False
            continue
        # any piece edge between two forced vertices may serve in the
        # forest: its colors are already known to differ
        internal = {e for e in piece.edges
                    if set(piece.edge_endpoints(e)) <= local}
        forest = _forest_edges(piece, local, internal)
        grown, sub2, extra, padded = _pad_forest(piece, local, forest, sub)
        cut = cut_along(grown, forest + extra)
        pins = frozenset(v for v, ov in cut.vertex_image.items()
                         if ov in padded)
        cut_lists = {v: set(sub2[ov])
                     for v, ov in cut.vertex_image.items()}
        if not decide(cut.map, cut.cap_faces, pins, cut_lists, params):
            return False
    return True


def find_coloring(m, subgraph, lists, params=None):
    """A full list coloring extending the forced subgraph, or None.

    Colors are committed one vertex at a time in a deterministic order
    (least id among vertices touching the colored region first),
    re-deciding after each choice, so a yes instance always ends in a
    concrete proper coloring.
    """
    params = params or SolverParams()
    verts, edges = subgraph
    verts, edges = set(verts), set(edges)
    work = {}
    for v in m.rotations:
        if v not in lists:
            raise PreconditionError("vertex %d has no color list" % v)
        work[v] = set(lists[v])
    if not decide_precolored_subgraph(m, (verts, edges), work, params):
        return None

    adjacency = {v: sorted(u for u, _ in nb)
                 for v, nb in m.adjacency().items()}
    colored = set(verts)
    todo = set(m.rotations) - colored
    while todo:
        touching = sorted(v for v in todo
                          if any(u in colored for u in adjacency[v]))
        v = touching[0] if touching else min(todo)
        committed = False
        for c in sorted(work[v]):
            work[v] = {c}
            if decide_precolored_subgraph(m, (colored | {v}, edges),
                                          work, params):
                committed = True
                break
        if not committed:
            raise EmbeddingError(
                "decision says yes but no color can be committed")
        colored.add(v)
        todo.remove(v)

    out = {v: next(iter(work[v])) for v in m.rotations}
    for e in m.edges:
        u, w = m.edge_endpoints(e)
        if u != w and out[u] == out[w]:
            raise EmbeddingError("committed coloring is not proper")
    for v, c in out.items():
        if c not in lists[v]:
            raise EmbeddingError("committed color fell outside its list")
    return out
