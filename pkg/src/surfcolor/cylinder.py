"""Colorability on a sphere with at most two designated faces.

The decision works outward from the first designated face: a maximum
flow between the two faces in the face-adjacency (dual) graph, with
every edge usable once, finds the shortest cycle separating them.  As
long as that cut is no longer than the current level, the cycle
nearest the first face is peeled off: the graph is cut along it, the
near side becomes a segment, and the search continues on the far side
from the scar the ring left behind.  Each segment's boundary colorings
are classified exactly (recursively, one level up), and the per-segment
profiles are chained together by relational join; the instance is
colorable exactly when the chain is nonempty.

Ring edges belong to no segment: their properness is enforced while
enumerating the boundary colorings, so nothing is checked twice.
"""

from dataclasses import dataclass, field

from .colorer import (
    ColoringProfile,
    SolverParams,
    decide_large_ew,
    dp_list_color,
    require_solver_lists,
    tree_decomposition,
)
from .embedding import (
    POS,
    CombinatorialMap,
    delete_edges,
    induced_submap,
    require_girth,
)
from .errors import EmbeddingError, PreconditionError, ResourceLimitError
from .topology import cut_along, cycle_edge_ids, face_translation, split_components


# -- dual max-flow and the nearest separating cycle ---------------------------


def _dual_arcs(m):
    """face id -> sorted [(other face, edge)] across each non-bridge edge."""
    arcs = {f: [] for f in m.face_ids()}
    for e in sorted(m.edges):
        d, _ = m.edges[e]
        fa = m.face_of_flag((d, POS))
        fb = m.face_of_flag((d, -POS))
        if fa == fb:
            continue  # a bridge never helps a flow between distinct faces
        arcs[fa].append((fb, e))
        arcs[fb].append((fa, e))
    for f in arcs:
        arcs[f].sort()
    return arcs


def _augment(arcs, used, src, dst, strategy):
    """One augmenting path in the residual graph, or None."""
    parent = {src: None}
    if strategy == "bfs":
        frontier = [src]
        while frontier and dst not in parent:
            nxt = []
            for f in frontier:
                for g, e in arcs[f]:
                    if g in parent or used.get(e) == (f, g):
                        continue
                    parent[g] = (f, e)
                    nxt.append(g)
            frontier = nxt
    elif strategy == "dfs":
        stack = [src]
        while stack and dst not in parent:
            f = stack.pop()
            for g, e in reversed(arcs[f]):
                if g in parent or used.get(e) == (f, g):
                    continue
                parent[g] = (f, e)
                stack.append(g)
    else:
        raise PreconditionError("unknown flow strategy %r" % (strategy,))
    if dst not in parent:
        return None
    path = []
    g = dst
    while parent[g] is not None:
        f, e = parent[g]
        path.append((f, g, e))
        g = f
    return path


def shortest_separating_cycle(m, f1, f2, cap, strategy="bfs"):
    """Shortest cycle separating face f1 from face f2, by max-flow.

    Returns (cycle, value): the separating cycle nearest to f1 as a
    canonical vertex tuple together with the cut value, or (None,
    value) with value = cap + 1 when every separating cycle is longer
    than `cap`.  Requires a connected sphere map and a simple graph
    (the cycle is reported by its vertices).
    """
    faces = set(m.face_ids())
    if f1 not in faces or f2 not in faces:
        raise PreconditionError("unknown face")
    if f1 == f2:
        raise PreconditionError("the two faces must differ")
    if m.euler_genus() != 0:
        raise PreconditionError("separating cuts need a sphere embedding")
    if len(m.components()) != 1:
        raise PreconditionError("map must be connected")
    if not m.is_simple():
        raise PreconditionError("cycle extraction needs a simple graph")

    arcs = _dual_arcs(m)
    used = {}  # edge -> (from_face, to_face) it is currently crossed as
    value = 0
    while True:
        if value > cap:
            return (None, value)
        path = _augment(arcs, used, f1, f2, strategy)
        if path is None:
            break
        for f, g, e in path:
            if used.get(e) == (g, f):
                del used[e]  # cancel the opposite crossing
            else:
                used[e] = (f, g)
        value += 1

    # faces still reachable from f1 delimit the nearest cut
    reach = {f1}
    stack = [f1]
    while stack:
        f = stack.pop()
        for g, e in arcs[f]:
            if g not in reach and used.get(e) != (f, g):
                reach.add(g)
                stack.append(g)
    if f2 in reach:
        raise EmbeddingError("flow terminated without a saturated cut")

    cut_edges = []
    for e in m.edges:
        d, _ = m.edges[e]
        fa = m.face_of_flag((d, POS))
        fb = m.face_of_flag((d, -POS))
        if (fa in reach) != (fb in reach):
            cut_edges.append(e)
    if len(cut_edges) != value:
        raise EmbeddingError("cut size %d does not match flow %d"
                             % (len(cut_edges), value))

    nbr = {}
    for e in cut_edges:
        u, w = m.edge_endpoints(e)
        nbr.setdefault(u, []).append(w)
        nbr.setdefault(w, []).append(u)
    for v, others in nbr.items():
        if len(others) != 2 or len(set(others)) != 2:
            raise EmbeddingError("separating cut is not a simple cycle")
    start = min(nbr)
    cycle = [start, min(nbr[start])]
    while True:
        a, b = nbr[cycle[-1]]
        nxt = a if a != cycle[-2] else b
        if nxt == start:
            break
        cycle.append(nxt)
    if len(cycle) != len(nbr) or len(cycle) != value:
        raise EmbeddingError("separating cut is not a single simple cycle")
    return (tuple(cycle), value)


# -- peeling ------------------------------------------------------------------


@dataclass(frozen=True)
class _Part:
    """One piece of a segment, in its own ids.

    left_face / right_face are ids in `map` for the boundary faces that
    ended up in this piece, or None when a face merged away or lies in
    a different piece.
    """

    map: object
    to_orig: dict
    left_face: object
    right_face: object


@dataclass(frozen=True)
class _Segment:
    parts: tuple
    left_cycle: tuple   # ring on the near side, original names, or None
    right_cycle: tuple


@dataclass(frozen=True)
class SeparatingCycleSequence:
    """Nearest separating cycles between two faces, with the parts between.

    cycles     the peeled cycles, nearest-first, as original vertex tuples
    segments   maps of the parts between consecutive cycles (cycle
               vertices included, cycle edges not), in original names
    endpoints  (pinned vertices on the first face, on the second face)
    """

    cycles: tuple
    segments: tuple
    endpoints: tuple
    records: tuple = field(repr=False, default=())


def _surviving_face(before, after, fid, gone_darts):
    """Track face `fid` of `before` into `after` (same dart ids), where
    `after` lost `gone_darts`.  None when every flag of the face died."""
    for g in sorted(before.face_flags(fid)):
        if g[0] not in gone_darts:
            return after.face_of_flag(g)
    return None


def _scar_face(before, after, ring_edges, gone_darts):
    """The face of `after` that absorbed the deleted ring edges.

    All faces of `before` adjacent to a deleted edge must merge into
    one face of `after`; returns None in the degenerate case where no
    flag survived or the pool disagrees.
    """
    pool_faces = set()
    for e in ring_edges:
        d, _ = before.edges[e]
        pool_faces.add(before.face_of_flag((d, POS)))
        pool_faces.add(before.face_of_flag((d, -POS)))
    landed = set()
    for f in pool_faces:
        for g in before.face_flags(f):
            if g[0] not in gone_darts:
                landed.add(after.face_of_flag(g))
    if len(landed) == 1:
        return landed.pop()
    return None


def locate_face(whole, piece, fid):
    """Locate a face of `whole` inside a component piece, or None."""
    if fid is None:
        return None
    tr = face_translation(whole, piece)
    if fid in tr:
        return tr[fid]
    if whole.face_length(fid) == 0:
        anchor = whole.face_vertices(fid)[0]
        if anchor in piece.rotations:
            for pf in piece.face_ids():
                if piece.face_length(pf) == 0 \
                        and piece.face_vertices(pf)[0] == anchor:
                    return pf
    return None


def _canon_cycle(cycle):
    """Rotate to the least vertex and fix the direction."""
    n = len(cycle)
    i = cycle.index(min(cycle))
    fwd = tuple(cycle[(i + k) % n] for k in range(n))
    rev = tuple(cycle[(i - k) % n] for k in range(n))
    return fwd if fwd[1] <= rev[1] else rev


def _peel(m, f1, f2, level):
    """Cut off nearest separating cycles of length `level` until none
    is left.  Returns (cycles, segment records); the records reference
    per-piece ids with original-name translations."""
    cur = m
    to_v = {v: v for v in m.rotations}
    src_fid, far_fid = f1, f2
    prev_ring = None
    pending = []  # stray parts split off since the last ring
    cycles = []
    records = []

    while True:
        if src_fid is None or far_fid is None or src_fid == far_fid:
            break
        cycle_cur, flow = shortest_separating_cycle(cur, src_fid, far_fid, level)
        if cycle_cur is None:
            break
        if flow != len(cycle_cur):
            raise EmbeddingError("cut length drifted from flow value")
        ring = _canon_cycle(tuple(to_v[x] for x in cycle_cur))
        eids = cycle_edge_ids(cur, cycle_cur)
        cut = cut_along(cur, eids)
        comps = cut.map.components()
        if len(comps) != 2:
            raise EmbeddingError("separating cycle did not split the map")
        new_of_old = {old: new for new, old in cut.face_image.items()}
        near = far = None
        for comp in comps:
            piece, _ = induced_submap(cut.map, comp)
            tr = face_translation(cut.map, piece)
            if new_of_old[src_fid] in tr:
                near, near_tr = piece, tr
            if new_of_old[far_fid] in tr:
                far, far_tr = piece, tr
        if near is None or far is None or near is far:
            raise EmbeddingError("lost track of the designated faces")

        ring_set = set(eids)
        trans = {v: to_v[ov] for v, ov in cut.vertex_image.items()}
        near_copies = sorted(e for e in near.edges
                             if cut.edge_image[e] in ring_set)
        near_gone = {d for e in near_copies for d in near.edges[e]}
        seg = delete_edges(near, near_copies)
        records.append(_Segment(
            parts=tuple([_Part(
                map=seg,
                to_orig={v: trans[v] for v in seg.rotations},
                left_face=_surviving_face(near, seg,
                                          near_tr[new_of_old[src_fid]],
                                          near_gone),
                right_face=_scar_face(near, seg, near_copies, near_gone),
            )] + pending),
            left_cycle=prev_ring,
            right_cycle=ring))
        cycles.append(ring)
        pending = []

        far_copies = sorted(e for e in far.edges
                            if cut.edge_image[e] in ring_set)
        far_gone = {d for e in far_copies for d in far.edges[e]}
        far2 = delete_edges(far, far_copies)
        scar = _scar_face(far, far2, far_copies, far_gone)
        kept_f2 = _surviving_face(far, far2, far_tr[new_of_old[far_fid]],
                                  far_gone)
        to_far2 = {v: trans[v] for v in far2.rotations}

        main = None
        strays = []
        for comp_vs in far2.components():
            piece, _ = induced_submap(far2, comp_vs)
            lf = locate_face(far2, piece, scar)
            rf = locate_face(far2, piece, kept_f2)
            part = _Part(map=piece,
                         to_orig={v: to_far2[v] for v in piece.rotations},
                         left_face=lf, right_face=rf)
            if lf is not None and rf is not None and lf != rf:
                main = part
            else:
                strays.append(part)
        if main is None:
            # the far side degenerated: everything left is one last segment
            records.append(_Segment(parts=tuple(strays + pending),
                                    left_cycle=ring, right_cycle=None))
            return cycles, records
        pending.extend(strays)
        cur = main.map
        to_v = main.to_orig
        src_fid, far_fid = main.left_face, main.right_face
        prev_ring = ring

    records.append(_Segment(
        parts=tuple([_Part(map=cur, to_orig=dict(to_v),
                           left_face=src_fid, right_face=far_fid)] + pending),
        left_cycle=prev_ring,
        right_cycle=None))
    return cycles, records


def _merge_parts(parts):
    """Disjoint union of a segment's parts as one map in original
    vertex names, with darts and edges renumbered."""
    rot = {}
    edges = {}
    twisted = set()
    next_dart = 0
    next_edge = 0
    for part in parts:
        dmap = {}
        for v in sorted(part.map.rotations):
            named = part.to_orig[v]
            out = []
            for d in part.map.rotations[v]:
                dmap[d] = next_dart
                out.append(next_dart)
                next_dart += 1
            rot[named] = out
        for e in sorted(part.map.edges):
            d, d2 = part.map.edges[e]
            edges[next_edge] = (dmap[d], dmap[d2])
            if e in part.map.twisted:
                twisted.add(next_edge)
            next_edge += 1
    return CombinatorialMap(rot, edges, twisted)


def peel_sequence(m, f1, f2, pinned, length_bound, params=None):
    """The nearest-cycle peeling between two faces, for inspection.

    Requires that no cycle of length <= length_bound separates f1 from
    f2 (on the sphere that is exactly the triviality precondition, so
    it can be and is checked outright).  The peeled cycles all have one
    length: the smallest separating cut value, which must exceed the
    bound.
    """
    params = params or SolverParams()
    pinned = frozenset(pinned)
    d_max = params.cycle_length_bound(0, 2)
    cycle, flow = shortest_separating_cycle(m, f1, f2, min(d_max, m.num_edges))
    if cycle is not None and flow <= length_bound:
        raise PreconditionError(
            "a separating cycle of length %d spoils the bound %d"
            % (flow, length_bound))
    if cycle is None:
        cycles = []
        records = [_Segment(
            parts=(_Part(m, {v: v for v in m.rotations}, f1, f2),),
            left_cycle=None, right_cycle=None)]
    else:
        cycles, records = _peel(m, f1, f2, flow)
    segments = tuple(_merge_parts(r.parts) for r in records)
    endpoints = (tuple(sorted(pinned & set(m.face_vertices(f1)))),
                 tuple(sorted(pinned & set(m.face_vertices(f2)))))
    return SeparatingCycleSequence(tuple(cycles), segments, endpoints,
                                   tuple(records))


# -- profiles -----------------------------------------------------------------


def compose_profiles(left, right):
    """Join two profiles over their shared boundary and project it away.

    The shared vertices must appear in the same relative order on both
    sides.  The result ranges over the symmetric difference: tuples
    (a, c) such that some b makes (a, b) and (b, c) appear.
    """
    lset, rset = set(left.boundary), set(right.boundary)
    shared = [v for v in left.boundary if v in rset]
    if shared != [v for v in right.boundary if v in lset]:
        raise PreconditionError("shared boundary order differs")
    joined = left.join(right)
    keep = [v for v in joined.boundary if v not in set(shared)]
    return joined.project(keep)


def proper_cycle_colorings(cycle, lists):
    """Proper list colorings of a cycle's own edges, as tuples along it.

    Chords are deliberately not consulted here; they belong to the
    segments on either side and are enforced there.
    """
    n = len(cycle)
    out = []

    def grow(prefix):
        i = len(prefix)
        if i == n:
            if prefix[-1] != prefix[0]:
                out.append(tuple(prefix))
            return
        for c in sorted(lists[cycle[i]]):
            if c != prefix[-1] and (i != n - 1 or c != prefix[0]):
                prefix.append(c)
                grow(prefix)
                prefix.pop()

    for c in sorted(lists[cycle[0]]):
        grow([c])
    return out


# -- the decision -------------------------------------------------------------


def covering_faces(piece, pins, known):
    """A face set of `piece` putting every pinned vertex on some face."""
    faces = []
    for f in known:
        if f is not None and f not in faces:
            faces.append(f)
    covered = set()
    for f in faces:
        covered.update(piece.face_vertices(f))
    incident = None
    for v in sorted(pins):
        if v in covered:
            continue
        if incident is None:
            incident = piece.faces_of_vertex()
        f = incident[v][0]
        faces.append(f)
        covered.update(piece.face_vertices(f))
    return tuple(faces)


def _decide_piece(piece, faces, pins, lists, params, level):
    """Decide one connected piece given boundary faces, falling back to
    the truncation decision whenever the two-face structure
    degenerates."""
    faces = tuple(dict.fromkeys(f for f in faces if f is not None))
    if len(faces) == 2:
        return _cylinder_component(piece, faces[0], faces[1],
                                   pins, lists, params, level)
    cover = covering_faces(piece, pins, faces)
    return decide_large_ew(piece, cover, pins, lists, params)


class _PieceChecker:
    """Extendability test for one connected piece of a segment, asked
    once per boundary coloring.

    Where the piece fits the dynamic program, its whole boundary
    profile is computed once up front and each query is a lookup;
    otherwise every query decides the pinned piece from scratch (with a
    memo, since distinct colorings can restrict identically here).
    """

    def __init__(self, seg, piece, part, columns, lists, params, level):
        here = sorted(piece.rotations)
        self.bnd = tuple(v for v in here if part.to_orig[v] in columns)
        self.bnd_orig = tuple(part.to_orig[v] for v in self.bnd)
        self.faces = (locate_face(seg, piece, part.left_face),
                      locate_face(seg, piece, part.right_face))
        self.lists = {v: set(lists[part.to_orig[v]]) for v in here}
        self.piece = piece
        self.params = params
        self.level = level
        self.memo = {}
        self.table = None
        try:
            td = tree_decomposition(piece, here[0])
            prof = dp_list_color(piece, td, self.lists,
                                 boundary=self.bnd, params=params)
            self.table = prof.colorings
        except ResourceLimitError:
            pass

    def __call__(self, colors):
        key = tuple(colors[ov] for ov in self.bnd_orig)
        if self.table is not None:
            return key in self.table
        if key not in self.memo:
            pinned_lists = dict(self.lists)
            for v, c in zip(self.bnd, key):
                pinned_lists[v] = {c}
            self.memo[key] = _decide_piece(
                self.piece, self.faces, frozenset(self.bnd),
                pinned_lists, self.params, self.level)
        return self.memo[key]


def _segment_checkers(record, columns, lists, params, level):
    checkers = []
    for part in record.parts:
        for piece in split_components(part.map):
            checkers.append(_PieceChecker(part.map, piece, part,
                                          columns, lists, params, level))
    return checkers


def _segment_profile(record, q_left, q_right, lists, params, level):
    """All extendable colorings of a segment's two boundaries.

    Each boundary is either a peeled ring (columns in cycle order,
    proper colorings enumerated with the ring edges enforced here) or
    an endpoint set of pinned vertices (columns sorted, the single
    forced coloring).
    """
    if record.left_cycle is not None:
        left_cols = record.left_cycle
        left_opts = proper_cycle_colorings(left_cols, lists)
    else:
        left_cols = q_left
        left_opts = [tuple(next(iter(lists[v])) for v in left_cols)]
    if record.right_cycle is not None:
        right_cols = record.right_cycle
        right_opts = proper_cycle_colorings(right_cols, lists)
    else:
        right_cols = q_right
        right_opts = [tuple(next(iter(lists[v])) for v in right_cols)]
    if record.left_cycle is None and any(len(lists[v]) != 1 for v in left_cols):
        raise PreconditionError("endpoint boundary is not fully forced")
    if record.right_cycle is None and any(len(lists[v]) != 1 for v in right_cols):
        raise PreconditionError("endpoint boundary is not fully forced")

    overlap = set(left_cols) & set(right_cols)
    columns = tuple(left_cols) + tuple(v for v in right_cols
                                       if v not in set(left_cols))
    checkers = _segment_checkers(record, set(columns), lists, params, level)
    rows = set()
    for lt in left_opts:
        lmap = dict(zip(left_cols, lt))
        for rt in right_opts:
            rmap = dict(zip(right_cols, rt))
            if any(lmap[v] != rmap[v] for v in overlap):
                continue
            colors = dict(lmap)
            colors.update(rmap)
            if all(check(colors) for check in checkers):
                rows.add(tuple(colors[v] for v in columns))
    return ColoringProfile(columns, frozenset(rows))


def _cylinder_component(m, f1, f2, pinned, lists, params, level):
    for e in m.edges:
        u, w = m.edge_endpoints(e)
        if u != w and u in pinned and w in pinned and lists[u] == lists[w]:
            return False
    d_max = params.cycle_length_bound(0, 2)
    on_faces = set(m.face_vertices(f1)) | set(m.face_vertices(f2))
    if level >= d_max or not set(pinned) <= on_faces:
        # beyond the level cap, or pins drifted off the designated
        # faces: decide by truncation instead
        return decide_large_ew(m, covering_faces(m, pinned, (f1, f2)),
                               pinned, lists, params)

    cycle, flow = shortest_separating_cycle(m, f1, f2, min(d_max, m.num_edges))
    if cycle is not None and flow <= level:
        raise PreconditionError(
            "separating cycle of length %d at triviality level %d"
            % (flow, level))
    if cycle is None:
        return decide_large_ew(m, (f1, f2), pinned, lists, params)

    cycles, records = _peel(m, f1, f2, flow)
    for ring in cycles:
        if len(ring) != flow:
            raise EmbeddingError("peeled ring length drifted")
    q_left = tuple(sorted(set(pinned) & set(m.face_vertices(f1))))
    q_right = tuple(sorted(set(pinned) & set(m.face_vertices(f2))))

    profiles = []
    for i, rec in enumerate(records):
        profiles.append(_segment_profile(
            rec,
            q_left if i == 0 else (),
            q_right if i == len(records) - 1 else (),
            lists, params, flow))

    later_cols = [set() for _ in profiles]
    acc = set()
    for i in range(len(profiles) - 1, -1, -1):
        later_cols[i] = set(acc)
        acc |= set(profiles[i].boundary)
    chain = profiles[0]
    for i in range(1, len(profiles)):
        chain = chain.join(profiles[i])
        keep = [v for v in chain.boundary if v in later_cols[i]]
        chain = chain.project(keep)
        if chain.is_empty:
            return False
    return not chain.is_empty


def decide_cylinder(m, faces, pinned, lists, params=None, length_bound=4):
    """List-colorability of a sphere map with the precolored vertices
    on at most two designated faces.

    `length_bound` is the triviality level: every cycle no longer than
    it must not separate the two faces (with the default 4 and girth at
    least 5 there is nothing to check).  Raises when the input breaks
    that promise or the shape preconditions.
    """
    params = params or SolverParams()
    faces = tuple(faces)
    if len(faces) > 2:
        raise PreconditionError("at most two designated faces")
    if len(set(faces)) != len(faces):
        raise PreconditionError("designated faces repeat")
    if length_bound < 4:
        raise PreconditionError("triviality level below 4 is meaningless")
    known = set(m.face_ids())
    bad = [f for f in faces if f not in known]
    if bad:
        raise PreconditionError("unknown faces %s" % bad)
    if m.euler_genus() != 0:
        raise PreconditionError("this decision runs on sphere maps only")
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

    for piece in split_components(m):
        here = set(piece.rotations)
        faces_here = tuple(locate_face(m, piece, f) for f in faces)
        pins_here = pinned & here
        sub_lists = {v: set(lists[v]) for v in here}
        if not _decide_piece(piece, faces_here, pins_here,
                             sub_lists, params, length_bound):
            return False
    return True
