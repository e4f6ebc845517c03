"""Combinatorial maps: graphs embedded in surfaces via rotation systems.

A map stores, for every vertex, the cyclic order of its outgoing darts,
a pairing of darts into edges, and a set of "twisted" edges.  Twisted
edges reverse local orientation when crossed, which lets the same data
structure describe non-orientable surfaces.

Derived structure (faces, genus, duals, radial graphs, cutting) is
computed on *flags*.  A flag is a pair ``(dart, side)`` with ``side`` in
``{+1, -1}``; three fixed-point-free involutions act on flags:

    across_flag   cross the edge to the twin dart, adjusting side
    corner_flag   step to the neighbouring dart around the vertex
    flip_flag     switch side of the same dart

Vertices are orbits of <corner, flip>, edges are orbits of
<across, flip> (always of size 4), and faces are orbits of
<across, corner>.  Composing ``corner(across(f))`` walks along a
directed face boundary; each face consists of two such walks, one per
direction, swapped by ``across``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EmbeddingError, MapFormatError

POS = 1
NEG = -1


@dataclass
class _Face:
    flags: frozenset
    walk: tuple          # darts along one directed boundary walk
    anchor_vertex: int   # only set for the empty face of an isolated vertex

    @property
    def length(self):
        return len(self.walk)


class CombinatorialMap:
    """A graph with a rotation system and edge signs.

    rotations: {vertex id: iterable of dart ids in cyclic order}
    edges:     {edge id: (dart, dart)} -- the two darts of each edge
    twisted:   edge ids whose crossing reverses local orientation
    """

    def __init__(self, rotations, edges, twisted=(), validate=True):
        rot = {}
        for v, darts in rotations.items():
            darts = tuple(int(d) for d in darts)
            if darts:
                k = darts.index(min(darts))
                darts = darts[k:] + darts[:k]
            rot[int(v)] = darts
        self.rotations = rot
        self.edges = {}
        for e, pair in edges.items():
            a, b = pair
            self.edges[int(e)] = (int(a), int(b)) if a <= b else (int(b), int(a))
        self.twisted = frozenset(int(e) for e in twisted)

        self.dart_vertex = {}
        for v, darts in rot.items():
            for d in darts:
                if d in self.dart_vertex:
                    raise EmbeddingError("dart %d appears twice in rotations" % d)
                self.dart_vertex[d] = v
        self.twin = {}
        self.dart_edge = {}
        for e, (a, b) in self.edges.items():
            if a == b:
                raise EmbeddingError("edge %d pairs dart %d with itself" % (e, a))
            for d in (a, b):
                if d in self.dart_edge:
                    raise EmbeddingError("dart %d belongs to two edges" % d)
                self.dart_edge[d] = e
            self.twin[a] = b
            self.twin[b] = a

        self._succ = {}
        self._pred = {}
        for darts in rot.values():
            n = len(darts)
            for i, d in enumerate(darts):
                self._succ[d] = darts[(i + 1) % n]
                self._pred[d] = darts[(i - 1) % n]

        if validate:
            self._validate()
        self._face_data = None
        self._face_of_flag = None

    def _validate(self):
        for d in self.dart_vertex:
            if d not in self.dart_edge:
                raise EmbeddingError("dart %d is in a rotation but no edge" % d)
        for d in self.dart_edge:
            if d not in self.dart_vertex:
                raise EmbeddingError("dart %d is in an edge but no rotation" % d)
        bad = self.twisted - set(self.edges)
        if bad:
            raise EmbeddingError("twisted ids %s are not edges" % sorted(bad))

    # -- basic accessors -------------------------------------------------

    def vertex_ids(self):
        return sorted(self.rotations)

    def edge_ids(self):
        return sorted(self.edges)

    @property
    def num_vertices(self):
        return len(self.rotations)

    @property
    def num_edges(self):
        return len(self.edges)

    def degree(self, v):
        return len(self.rotations[v])

    def edge_endpoints(self, e):
        a, b = self.edges[e]
        return (self.dart_vertex[a], self.dart_vertex[b])

    def is_loop(self, e):
        u, v = self.edge_endpoints(e)
        return u == v

    def adjacency(self):
        """vertex -> list of (neighbour, edge id); loops contribute twice."""
        adj = {v: [] for v in self.rotations}
        for e in self.edges:
            u, v = self.edge_endpoints(e)
            adj[u].append((v, e))
            adj[v].append((u, e))
        return adj

    def is_simple(self):
        seen = set()
        for e in self.edges:
            u, v = self.edge_endpoints(e)
            if u == v:
                return False
            key = (u, v) if u < v else (v, u)
            if key in seen:
                return False
            seen.add(key)
        return True

    def copy(self):
        return CombinatorialMap(self.rotations, self.edges, self.twisted,
                                validate=False)

    def __eq__(self, other):
        if not isinstance(other, CombinatorialMap):
            return NotImplemented
        return (self.rotations == other.rotations
                and self.edges == other.edges
                and self.twisted == other.twisted)

    def __repr__(self):
        return "CombinatorialMap(V=%d, E=%d, F=%d, genus=%d)" % (
            self.num_vertices, self.num_edges, self.num_faces,
            self.euler_genus())

    # -- flags -----------------------------------------------------------

    def flags(self):
        return [(d, s) for d in sorted(self.dart_vertex) for s in (POS, NEG)]

    def flip_flag(self, flag):
        d, s = flag
        return (d, -s)

    def corner_flag(self, flag):
        d, s = flag
        if s == POS:
            return (self._succ[d], NEG)
        return (self._pred[d], POS)

    def across_flag(self, flag):
        d, s = flag
        t = self.twin[d]
        if self.dart_edge[d] in self.twisted:
            return (t, s)
        return (t, -s)

    def face_step(self, flag):
        """Next flag along the directed face walk through `flag`."""
        return self.corner_flag(self.across_flag(flag))

    # -- faces -----------------------------------------------------------

    def _compute_faces(self):
        if self._face_data is not None:
            return
        visited = set()
        raw = []
        for start in self.flags():
            if start in visited:
                continue
            orbit = []
            f = start
            while True:
                orbit.append(f)
                visited.add(f)
                f = self.face_step(f)
                if f == start:
                    break
            partner = [self.across_flag(g) for g in orbit]
            pset = set(partner)
            if pset & set(orbit):
                raise EmbeddingError("face walk pairs with itself; "
                                     "flag system is inconsistent")
            visited |= pset
            allflags = frozenset(orbit) | frozenset(pset)
            start2 = min(allflags)
            walk = []
            f = start2
            while True:
                walk.append(f[0])
                f = self.face_step(f)
                if f == start2:
                    break
            raw.append(_Face(allflags, tuple(walk), -1))
        raw.sort(key=lambda fc: min(fc.flags))
        for v in self.vertex_ids():
            if not self.rotations[v]:
                raw.append(_Face(frozenset(), (), v))
        self._face_data = raw
        self._face_of_flag = {}
        for i, fc in enumerate(raw):
            for g in fc.flags:
                self._face_of_flag[g] = i

    @property
    def num_faces(self):
        self._compute_faces()
        return len(self._face_data)

    def face_ids(self):
        self._compute_faces()
        return list(range(len(self._face_data)))

    def face_walk(self, fid):
        self._compute_faces()
        return self._face_data[fid].walk

    def face_walk_flags(self, fid):
        """The directed boundary walk as flags (disambiguates darts that a
        walk visits twice, once per side)."""
        self._compute_faces()
        fc = self._face_data[fid]
        if not fc.walk:
            return ()
        out = []
        f = min(fc.flags)
        while True:
            out.append(f)
            f = self.face_step(f)
            if f == out[0]:
                break
        return tuple(out)

    def corner_after(self, flag):
        """The dart whose corner (between it and its rotation successor)
        contains `flag`."""
        d, s = flag
        return d if s == POS else self._pred[d]

    def face_length(self, fid):
        return len(self.face_walk(fid))

    def face_flags(self, fid):
        self._compute_faces()
        return self._face_data[fid].flags

    def face_of_flag(self, flag):
        self._compute_faces()
        return self._face_of_flag[flag]

    def face_vertices(self, fid):
        """Vertices along the face walk (with multiplicity removed)."""
        self._compute_faces()
        fc = self._face_data[fid]
        if not fc.walk:
            return (fc.anchor_vertex,)
        seen = []
        for d in fc.walk:
            v = self.dart_vertex[d]
            if v not in seen:
                seen.append(v)
        return tuple(seen)

    def faces_of_vertex(self):
        """vertex -> sorted list of face ids incident to it."""
        self._compute_faces()
        out = {v: set() for v in self.rotations}
        for i, fc in enumerate(self._face_data):
            for v in self.face_vertices(i):
                out[v].add(i)
        return {v: sorted(s) for v, s in out.items()}

    # -- components, genus, orientability --------------------------------

    def components(self):
        """Connected components as sorted tuples of vertex ids."""
        parent = {v: v for v in self.rotations}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            u, v = self.edge_endpoints(e)
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
        groups = {}
        for v in self.rotations:
            groups.setdefault(find(v), []).append(v)
        return sorted(tuple(sorted(g)) for g in groups.values())

    def _component_counts(self):
        comps = self.components()
        idx = {}
        for i, comp in enumerate(comps):
            for v in comp:
                idx[v] = i
        counts = [[len(c), 0, 0] for c in comps]
        for e in self.edges:
            u, _ = self.edge_endpoints(e)
            counts[idx[u]][1] += 1
        self._compute_faces()
        for fc in self._face_data:
            if fc.walk:
                v = self.dart_vertex[fc.walk[0]]
            else:
                v = fc.anchor_vertex
            counts[idx[v]][2] += 1
        return comps, counts

    def euler_genus(self):
        """Sum over components of 2 - (V - E + F)."""
        total = 0
        for nv, ne, nf in self._component_counts()[1]:
            total += 2 - (nv - ne + nf)
        return total

    def is_orientable(self):
        """True when the flag graph is bipartite under the three involutions."""
        color = {}
        for start in self.flags():
            if start in color:
                continue
            color[start] = 0
            stack = [start]
            while stack:
                f = stack.pop()
                for g in (self.flip_flag(f), self.corner_flag(f),
                          self.across_flag(f)):
                    if g not in color:
                        color[g] = color[f] ^ 1
                        stack.append(g)
                    elif color[g] == color[f]:
                        return False
        return True

    # -- girth -----------------------------------------------------------

    def girth(self, cap=None):
        """Length of a shortest cycle, or math.inf for a forest.

        `cap`: stop early and return `cap` if a cycle of length <= cap
        is known to exist (used only as a performance hint).
        """
        for e in self.edges:
            if self.is_loop(e):
                return 1
        if not self.is_simple():
            return 2
        adj = {v: sorted({u for u, _ in nbrs})
               for v, nbrs in self.adjacency().items()}
        best = math.inf
        for root in self.vertex_ids():
            dist = {root: 0}
            parent = {root: None}
            frontier = [root]
            while frontier:
                nxt = []
                for x in frontier:
                    if 2 * dist[x] + 1 >= best:
                        continue
                    for y in adj[x]:
                        if y not in dist:
                            dist[y] = dist[x] + 1
                            parent[y] = x
                            nxt.append(y)
                        elif parent[x] != y:
                            best = min(best, dist[x] + dist[y] + 1)
                frontier = nxt
            if cap is not None and best <= cap:
                return best
        return best


def require_girth(m, min_girth=5):
    """Raise EmbeddingError when the underlying graph has a cycle shorter
    than `min_girth`.  Runs in O(sum of squared degrees) for min_girth 5.
    """
    for e in m.edges:
        if m.is_loop(e):
            raise EmbeddingError("loop edge %d (girth 1)" % e)
    if not m.is_simple():
        raise EmbeddingError("parallel edges (girth 2)")
    if min_girth <= 2:
        return
    adj = {v: sorted({u for u, _ in nbrs})
           for v, nbrs in m.adjacency().items()}
    if min_girth > 5:
        g = m.girth(cap=min_girth - 1)
        if g < min_girth:
            raise EmbeddingError("girth %d < %d" % (g, min_girth))
        return
    for v in adj:
        nset = set(adj[v])
        via = {}
        for u in adj[v]:
            for w in adj[u]:
                if w == v:
                    continue
                if w in nset and min_girth >= 4:
                    raise EmbeddingError(
                        "triangle through vertices %d, %d, %d" % (v, u, w))
                if min_girth >= 5:
                    if w in via:
                        raise EmbeddingError(
                            "4-cycle through vertices %d and %d" % (v, w))
                    via[w] = u


# -- reconstruction from a flag system ------------------------------------


@dataclass
class FlagImages:
    """Where each input flag landed in a reconstructed map."""
    vertex: dict
    dart: dict
    edge: dict
    flag: dict  # input flag -> (dart, side) flag of the new map


def _orbit(flag, *moves):
    seen = {flag}
    stack = [flag]
    while stack:
        f = stack.pop()
        for mv in moves:
            g = mv(f)
            if g not in seen:
                seen.add(g)
                stack.append(g)
    return seen


def map_from_involutions(flags, across, corner, flip):
    """Build a CombinatorialMap from an abstract flag system.

    `flags` is an iterable of hashable, orderable values; the three
    arguments are dicts (or callables) giving fixed-point-free
    involutions with across and flip commuting and <across, flip>
    orbits of size 4.  Returns (map, FlagImages).
    """
    flags = sorted(flags)
    fset = set(flags)

    def fn(table):
        return table.__getitem__ if hasattr(table, "__getitem__") else table

    across, corner, flip = fn(across), fn(corner), fn(flip)
    for mv, name in ((across, "across"), (corner, "corner"), (flip, "flip")):
        for f in flags:
            g = mv(f)
            if g not in fset or g == f or mv(g) != f:
                raise EmbeddingError(
                    "%s is not a fixed-point-free involution on the flags"
                    % name)
    for f in flags:
        if across(flip(f)) != flip(across(f)):
            raise EmbeddingError("across and flip do not commute")

    # darts: flip-orbits
    dart_of = {}
    dart_reps = []
    for f in flags:
        if f in dart_of:
            continue
        did = len(dart_reps)
        dart_reps.append(f)
        dart_of[f] = did
        dart_of[flip(f)] = did

    # edges: <across, flip>-orbits
    edge_of = {}
    edge_darts = []
    for f in flags:
        if f in edge_of:
            continue
        orb = _orbit(f, across, flip)
        if len(orb) != 4:
            raise EmbeddingError("edge orbit of size %d (expected 4)"
                                 % len(orb))
        eid = len(edge_darts)
        edge_darts.append(tuple(sorted({dart_of[g] for g in orb})))
        for g in orb:
            edge_of[g] = eid

    # vertices: <corner, flip>-orbits; the rotation comes from repeatedly
    # applying flip(corner(.)) starting at the orbit's least flag, which
    # also fixes a local orientation ("chosen side") at each vertex.
    vertex_of = {}
    rotations = {}
    chosen = set()
    flag_side = {}
    n_vert = 0
    for f in flags:
        if f in vertex_of:
            continue
        orb = _orbit(f, corner, flip)
        vid = n_vert
        n_vert += 1
        start = min(orb)
        rot = []
        g = start
        while True:
            rot.append(dart_of[g])
            chosen.add(g)
            flag_side[g] = POS
            flag_side[flip(g)] = NEG
            g = flip(corner(g))
            if g == start:
                break
        if 2 * len(rot) != len(orb):
            raise EmbeddingError("vertex orbit of size %d with rotation of "
                                 "length %d" % (len(orb), len(rot)))
        for g in orb:
            vertex_of[g] = vid
        rotations[vid] = rot

    probe = {}
    for g in flags:
        if g in chosen:
            probe.setdefault(edge_of[g], g)
    twisted = set()
    for eid, _ in enumerate(edge_darts):
        f = probe[eid]
        h = across(f)
        inside = h in chosen
        # crossing an untwisted edge leaves the chosen side of one endpoint
        # and arrives on the unchosen side of the other
        if inside:
            twisted.add(eid)
        mate = h if inside else flip(h)
        if (across(mate) in chosen) != inside:
            raise EmbeddingError("inconsistent edge sign at edge %d" % eid)

    edges = {eid: pair for eid, pair in enumerate(edge_darts)}
    m = CombinatorialMap(rotations, edges, twisted, validate=True)
    images = FlagImages(
        vertex=dict(vertex_of),
        dart=dict(dart_of),
        edge=dict(edge_of),
        flag={f: (dart_of[f], flag_side[f]) for f in flags},
    )
    return m, images


# -- radial and dual graphs ------------------------------------------------


@dataclass
class RadialGraph:
    map: CombinatorialMap
    vertex_origin: dict   # radial vid -> ("vertex", vid) or ("face", fid)
    face_to_edge: dict    # radial fid -> primal edge id


def radial_graph(m):
    """The vertex-face incidence map: one radial vertex per primal vertex
    and per primal face, one radial edge per primal corner, and one
    quadrangular radial face per primal edge.
    """
    if any(not r for r in m.rotations.values()):
        raise EmbeddingError("radial graph needs a map without isolated "
                             "vertices")
    base = m.flags()
    flags = [(d, s, end) for (d, s) in base for end in (0, 1)]

    def across(f):
        d, s, end = f
        return (d, s, 1 - end)

    def corner(f):
        d, s, end = f
        if end == 0:
            nd, ns = m.flip_flag((d, s))
        else:
            nd, ns = m.across_flag((d, s))
        return (nd, ns, end)

    def flip(f):
        d, s, end = f
        nd, ns = m.corner_flag((d, s))
        return (nd, ns, end)

    rad, images = map_from_involutions(flags, across, corner, flip)

    origin = {}
    for (d, s, end), vid in images.vertex.items():
        if end == 0:
            origin[vid] = ("vertex", m.dart_vertex[d])
        else:
            origin[vid] = ("face", m.face_of_flag((d, s)))
    face_to_edge = {}
    for (d, s, end), flag in images.flag.items():
        face_to_edge[rad.face_of_flag(flag)] = m.dart_edge[d]
    return RadialGraph(rad, origin, face_to_edge)


@dataclass
class DualGraph:
    map: CombinatorialMap
    vertex_of_face: dict  # primal fid -> dual vid
    face_of_vertex: dict  # primal vid -> dual fid
    edge_map: dict        # primal eid -> dual eid


def dual_graph(m):
    """Swap the roles of vertices and faces (across and flip exchange)."""
    if any(not r for r in m.rotations.values()):
        raise EmbeddingError("dual graph needs a map without isolated "
                             "vertices")
    flags = m.flags()
    dual, images = map_from_involutions(
        flags, m.flip_flag, m.corner_flag, m.across_flag)
    vertex_of_face = {}
    face_of_vertex = {}
    edge_map = {}
    for f in flags:
        vertex_of_face[m.face_of_flag(f)] = images.vertex[f]
        face_of_vertex[m.dart_vertex[f[0]]] = dual.face_of_flag(images.flag[f])
        edge_map[m.dart_edge[f[0]]] = images.edge[f]
    return DualGraph(dual, vertex_of_face, face_of_vertex, edge_map)


# -- building maps from face walks ----------------------------------------


def map_from_face_walks(walks):
    """Build an orientable map from closed vertex walks, one per face.

    Each consecutive pair (with wraparound) is a directed edge traversal;
    every undirected edge must be traversed exactly twice, once in each
    direction.  Loops are not supported here.
    """
    darts = []           # (walk index, position, u, v)
    occurrences = {}
    for wi, walk in enumerate(walks):
        if len(walk) < 1:
            raise MapFormatError("empty face walk")
        for i, u in enumerate(walk):
            v = walk[(i + 1) % len(walk)]
            if u == v:
                raise MapFormatError("loop traversal at vertex %s" % u)
            did = len(darts)
            darts.append((wi, i, u, v))
            occurrences.setdefault(frozenset((u, v)), []).append(did)

    twin = {}
    for key, occ in occurrences.items():
        if len(occ) != 2:
            raise MapFormatError(
                "edge %s traversed %d times (expected 2)"
                % (sorted(key), len(occ)))
        a, b = occ
        if darts[a][2] != darts[b][3] or darts[a][3] != darts[b][2]:
            raise MapFormatError(
                "edge %s traversed twice in the same direction"
                % sorted(key))
        twin[a] = b
        twin[b] = a

    def face_next(d):
        wi, i, _, _ = darts[d]
        walk = walks[wi]
        j = (i + 1) % len(walk)
        base = sum(len(w) for w in walks[:wi])
        return base + j

    # rotation: next dart at the tail vertex is face_next(twin(dart))
    by_vertex = {}
    for did, (_, _, u, _) in enumerate(darts):
        by_vertex.setdefault(u, []).append(did)
    rotations = {}
    for u, ds in by_vertex.items():
        remaining = set(ds)
        start = min(ds)
        cycle = []
        d = start
        while True:
            cycle.append(d)
            remaining.discard(d)
            d = face_next(twin[d])
            if d == start:
                break
        if remaining:
            raise MapFormatError(
                "walks do not give a single rotation at vertex %s" % u)
        rotations[u] = cycle
    edges = {}
    for did in sorted(twin):
        if did < twin[did]:
            edges[len(edges)] = (did, twin[did])
    return CombinatorialMap(rotations, edges)


# -- local edits -----------------------------------------------------------


def _fresh_ids(m, count_darts, count_edges, count_vertices=0):
    d0 = max(m.dart_vertex, default=-1) + 1
    e0 = max(m.edges, default=-1) + 1
    v0 = max(m.rotations, default=-1) + 1
    return (list(range(d0, d0 + count_darts)),
            list(range(e0, e0 + count_edges)),
            list(range(v0, v0 + count_vertices)))


def _insert_after(rotation, inserts):
    """inserts: list of (anchor dart, new dart).  New darts land right
    after their anchor, in the order listed."""
    by_anchor = {}
    for anchor, new in inserts:
        by_anchor.setdefault(anchor, []).append(new)
    out = []
    for d in rotation:
        out.append(d)
        out.extend(by_anchor.get(d, ()))
    return out


def insert_chord_in_face(m, fid, i, j):
    """Add an edge inside face `fid` joining the corners at positions i
    and j of its flag walk.  Returns (new map, new edge id).  The edge
    sign is chosen so the face splits in two.
    """
    walk = m.face_walk_flags(fid)
    if not walk:
        raise EmbeddingError("cannot insert a chord in an empty face")
    fi, fj = walk[i % len(walk)], walk[j % len(walk)]
    ai, aj = m.corner_after(fi), m.corner_after(fj)
    if (i - j) % len(walk) == 0:
        raise EmbeddingError("chord endpoints must be distinct walk corners")
    u, w = m.dart_vertex[ai], m.dart_vertex[aj]
    (x, y), (eid,), _ = _fresh_ids(m, 2, 1)
    rot = dict(m.rotations)
    if u == w:
        rot[u] = _insert_after(rot[u], [(ai, x), (aj, y)])
    else:
        rot[u] = _insert_after(rot[u], [(ai, x)])
        rot[w] = _insert_after(rot[w], [(aj, y)])
    edges = dict(m.edges)
    edges[eid] = (x, y)
    before = m.num_faces
    for twist in (False, True):
        tw = set(m.twisted) | ({eid} if twist else set())
        cand = CombinatorialMap(rot, edges, tw)
        if cand.num_faces == before + 1:
            return cand, eid
    raise EmbeddingError("chord failed to split face %d" % fid)


def insert_path_in_face(m, fid, i, j, length):
    """Add a path of `length` edges inside face `fid` joining the corners
    at positions i and j of its flag walk, creating length-1 fresh
    vertices.  Returns (new map, new vertex ids, new edge ids).
    """
    if length < 1:
        raise EmbeddingError("path length must be at least 1")
    if length == 1:
        m2, eid = insert_chord_in_face(m, fid, i, j)
        return m2, [], [eid]
    walk = m.face_walk_flags(fid)
    if not walk:
        raise EmbeddingError("cannot insert a path in an empty face")
    fi, fj = walk[i % len(walk)], walk[j % len(walk)]
    ai, aj = m.corner_after(fi), m.corner_after(fj)
    u, w = m.dart_vertex[ai], m.dart_vertex[aj]
    ds, es, vs = _fresh_ids(m, 2 * length, length, length - 1)
    rot = dict(m.rotations)
    if u == w:
        rot[u] = _insert_after(rot[u], [(ai, ds[0]), (aj, ds[-1])])
    else:
        rot[u] = _insert_after(rot[u], [(ai, ds[0])])
        rot[w] = _insert_after(rot[w], [(aj, ds[-1])])
    for k, v in enumerate(vs):
        rot[v] = [ds[2 * k + 1], ds[2 * k + 2]]
    edges = dict(m.edges)
    for k, e in enumerate(es):
        edges[e] = (ds[2 * k], ds[2 * k + 1])
    before = m.num_faces
    for twist in (False, True):
        tw = set(m.twisted) | ({es[-1]} if twist else set())
        cand = CombinatorialMap(rot, edges, tw)
        if cand.num_faces == before + 1:
            return cand, vs, es
    raise EmbeddingError("path failed to split face %d" % fid)


def add_pendant_path(m, v, length, corner=None):
    """Attach a path of `length` fresh vertices at vertex `v`, drawn inside
    the corner containing the flag `corner` (any corner when omitted, the
    only option when v is isolated).  Faces are preserved.  Returns
    (new map, new vertex ids, new edge ids).
    """
    if length < 1:
        raise EmbeddingError("pendant path needs length >= 1")
    ds, es, vs = _fresh_ids(m, 2 * length, length, length)
    rot = dict(m.rotations)
    cur = rot[v]
    if not cur:
        rot[v] = [ds[0]]
    else:
        if corner is None:
            anchor = cur[0]
        else:
            anchor = m.corner_after(corner)
            if m.dart_vertex[anchor] != v:
                raise EmbeddingError("corner flag is not at vertex %d" % v)
        rot[v] = _insert_after(cur, [(anchor, ds[0])])
    for k, nv in enumerate(vs):
        chain = [ds[2 * k + 1]]
        if k + 1 < length:
            chain.append(ds[2 * k + 2])
        rot[nv] = chain
    edges = dict(m.edges)
    for k, e in enumerate(es):
        edges[e] = (ds[2 * k], ds[2 * k + 1])
    out = CombinatorialMap(rot, edges, m.twisted)
    if out.num_faces != m.num_faces:
        raise EmbeddingError("pendant path changed the face count")
    return out, vs, es


def subdivide_edge(m, e):
    """Replace edge `e` by a path of two edges through a fresh vertex.
    Returns (new map, new vertex, (edge towards dart a, edge towards b)).
    """
    a, b = m.edges[e]
    ds, es, vs = _fresh_ids(m, 2, 2, 1)
    (c, d), (e1, e2), (w,) = ds, es, vs
    rot = dict(m.rotations)
    rot[w] = [c, d]
    edges = dict(m.edges)
    del edges[e]
    edges[e1] = (a, c)
    edges[e2] = (d, b)
    twisted = set(m.twisted) - {e}
    if e in m.twisted:
        twisted.add(e1)
    out = CombinatorialMap(rot, edges, twisted)
    if out.num_faces != m.num_faces:
        raise EmbeddingError("subdividing edge %d changed the face count" % e)
    return out, w, (e1, e2)


def delete_edges(m, eids):
    """Drop the given edges, keeping all vertices (ids are preserved, so
    flags of surviving darts can be used to locate merged faces)."""
    eids = set(eids)
    missing = eids - set(m.edges)
    if missing:
        raise EmbeddingError("cannot delete missing edges %s"
                             % sorted(missing))
    dead = {d for e in eids for d in m.edges[e]}
    rot = {v: [d for d in darts if d not in dead]
           for v, darts in m.rotations.items()}
    edges = {e: p for e, p in m.edges.items() if e not in eids}
    return CombinatorialMap(rot, edges, m.twisted - eids, validate=False)


def induced_submap(m, vertices):
    """Keep only the given vertices and the edges among them (ids are
    preserved).  Returns (new map, kept edge ids)."""
    vset = set(vertices)
    missing = vset - set(m.rotations)
    if missing:
        raise EmbeddingError("unknown vertices %s" % sorted(missing))
    kept = {e for e in m.edges
            if set(m.edge_endpoints(e)) <= vset}
    dead = {d for e in m.edges if e not in kept for d in m.edges[e]}
    rot = {v: [d for d in m.rotations[v] if d not in dead]
           for v in sorted(vset)}
    edges = {e: m.edges[e] for e in kept}
    return CombinatorialMap(rot, edges, m.twisted & kept, validate=False), kept


# -- text formats ----------------------------------------------------------


def parse_map(text):
    """Parse the rotation-system format.

    Vertex lines: ``<vid>: d1 d2 ...``  (cyclic order of darts)
    Edge lines:   ``e<eid>: d d'``  with a ``-`` suffix on the id for
    twisted edges, e.g. ``e3-: 7 2``.  ``#`` starts a comment.
    """
    rotations = {}
    edges = {}
    twisted = set()
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise MapFormatError("line %d: missing ':'" % ln)
        head, _, tail = line.partition(":")
        head = head.strip()
        parts = tail.split()
        try:
            values = [int(p) for p in parts]
        except ValueError:
            raise MapFormatError("line %d: non-integer dart id" % ln)
        if head.startswith("e"):
            name = head[1:]
            twist = name.endswith("-")
            if twist:
                name = name[:-1]
            try:
                eid = int(name)
            except ValueError:
                raise MapFormatError("line %d: bad edge id %r" % (ln, head))
            if eid in edges:
                raise MapFormatError("line %d: duplicate edge %d" % (ln, eid))
            if len(values) != 2:
                raise MapFormatError("line %d: edge needs exactly 2 darts"
                                     % ln)
            edges[eid] = tuple(values)
            if twist:
                twisted.add(eid)
        else:
            try:
                vid = int(head)
            except ValueError:
                raise MapFormatError("line %d: bad vertex id %r" % (ln, head))
            if vid in rotations:
                raise MapFormatError("line %d: duplicate vertex %d"
                                     % (ln, vid))
            rotations[vid] = values
    try:
        return CombinatorialMap(rotations, edges, twisted)
    except EmbeddingError as exc:
        raise MapFormatError(str(exc))


def serialize_map(m):
    lines = []
    for v in m.vertex_ids():
        lines.append("%d: %s" % (v, " ".join(str(d) for d in m.rotations[v])))
    for e in m.edge_ids():
        a, b = m.edges[e]
        mark = "-" if e in m.twisted else ""
        lines.append("e%d%s: %d %d" % (e, mark, a, b))
    return "\n".join(lines) + "\n"


def parse_lists(text):
    """Parse ``<vid>: c1 c2 ...`` lines into {vertex: tuple of colors}."""
    out = {}
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, tail = line.partition(":")
        if not sep:
            raise MapFormatError("line %d: missing ':'" % ln)
        try:
            v = int(head.strip())
            colors = tuple(int(c) for c in tail.split())
        except ValueError:
            raise MapFormatError("line %d: non-integer value" % ln)
        if v in out:
            raise MapFormatError("line %d: duplicate vertex %d" % (ln, v))
        if not colors:
            raise MapFormatError("line %d: empty list" % ln)
        if len(set(colors)) != len(colors):
            raise MapFormatError("line %d: repeated color" % ln)
        out[v] = colors
    return out


def serialize_lists(lists):
    lines = []
    for v in sorted(lists):
        lines.append("%d: %s" % (v, " ".join(str(c) for c in lists[v])))
    return "\n".join(lines) + "\n"
