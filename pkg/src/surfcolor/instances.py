"""Construction of test maps: fixed reference surfaces, parametric
families, and a seeded random instance generator.

All generated maps keep girth at least five unless stated otherwise,
since that is the graph class the solvers accept.
"""

import random

from .embedding import (
    CombinatorialMap,
    EmbeddingError,
    add_pendant_path,
    insert_path_in_face,
    map_from_face_walks,
    subdivide_edge,
)
from .oracle import brute_colorable


# -- fixed maps ---------------------------------------------------------------


def cycle_sphere(n):
    """C_n with its two-face spherical embedding."""
    rot = {i: (2 * i, 2 * ((i - 1) % n) + 1) for i in range(n)}
    edges = {i: (2 * i, 2 * i + 1) for i in range(n)}
    return CombinatorialMap(rot, edges)


def projective_cycle(n):
    """C_n embedded so the cycle is one-sided: a single face of length
    2n on the projective plane."""
    m = CombinatorialMap({0: (0, 1)}, {0: (0, 1)}, twisted={0})
    for _ in range(n - 1):
        m, _, _ = subdivide_edge(m, sorted(m.edge_ids())[0])
    return m


def torus_wedge(len_a=5, len_b=5):
    """Two cycles sharing one vertex, embedded with a single face on the
    torus (the loops interleave around the shared vertex)."""
    m = CombinatorialMap({0: (0, 2, 1, 3)}, {0: (0, 1), 1: (2, 3)})
    for eid, target in ((0, len_a), (1, len_b)):
        e = eid
        for _ in range(target - 1):
            m, _, (e, _) = subdivide_edge(m, e)
    return m


def dodecahedron():
    """The regular dodecahedron: 20 vertices, 30 edges, 12 pentagons."""
    top = [(0, 1, 2, 3, 4)]
    upper = [((i + 1) % 5, i, 5 + i, 10 + (i + 1) % 5, 5 + (i + 1) % 5)
             for i in range(5)]
    lower = [(5 + i, 10 + i, 15 + i, 15 + (i + 1) % 5, 10 + (i + 1) % 5)
             for i in range(5)]
    bottom = [(19, 18, 17, 16, 15)]
    return map_from_face_walks(top + upper + lower + bottom)


# -- quotients by a half-turn -------------------------------------------------


def _rotation_reversing_involutions(m):
    """All fixed-point-free dart involutions that reverse every rotation
    and commute with edge twins (candidate half-turn symmetries)."""
    darts = sorted(m.dart_vertex)
    succ = {}
    pred = {}
    for v, rot in m.rotations.items():
        for i, d in enumerate(rot):
            succ[d] = rot[(i + 1) % len(rot)]
            pred[d] = rot[(i - 1) % len(rot)]
    out = []
    d0 = darts[0]
    for target in darts:
        alpha = {d0: target}
        queue = [d0]
        ok = True
        while queue and ok:
            d = queue.pop()
            for nxt, img in ((succ[d], pred[alpha[d]]),
                             (m.twin[d], m.twin[alpha[d]])):
                if nxt in alpha:
                    if alpha[nxt] != img:
                        ok = False
                        break
                else:
                    alpha[nxt] = img
                    queue.append(nxt)
        if not ok or len(alpha) != len(darts):
            continue
        if any(alpha[alpha[d]] != d or alpha[d] == d for d in darts):
            continue
        if any(m.dart_vertex[alpha[d]] == m.dart_vertex[d] for d in darts):
            continue  # a fixed vertex
        if any(m.dart_edge[alpha[d]] == m.dart_edge[d] for d in darts):
            continue  # a fixed edge
        if alpha not in out:
            out.append(alpha)
    return out


def quotient_map(m, alpha):
    """The quotient of an orientable, untwisted map by a half-turn.

    `alpha` pairs darts under a fixed-point-free symmetry that reverses
    rotations, commutes with twins, and fixes no vertex or edge.  One
    vertex per pair is kept with its rotation; a quotient edge is
    twisted exactly when it joined a kept vertex to a discarded one.
    """
    if m.twisted:
        raise EmbeddingError("quotient of a twisted map is not supported")
    reps = set()
    dropped = set()
    for v in m.vertex_ids():
        if v in reps or v in dropped:
            continue
        if not m.rotations[v]:
            raise EmbeddingError("quotient with an isolated vertex")
        w = m.dart_vertex[alpha[m.rotations[v][0]]]
        if w == v:
            raise EmbeddingError("symmetry fixes vertex %d" % v)
        reps.add(v)
        dropped.add(w)

    def qtwin(d):
        e = m.twin[d]
        if m.dart_vertex[e] in reps:
            return e, False
        return alpha[e], True

    rotations = {v: tuple(m.rotations[v]) for v in reps}
    edges = {}
    twisted = set()
    seen = {}
    nedge = 0
    for v in sorted(reps):
        for d in rotations[v]:
            if d in seen:
                continue
            e, flip = qtwin(d)
            if e == d:
                raise EmbeddingError("symmetry folds an edge onto itself")
            back, flip2 = qtwin(e)
            if back != d or flip2 != flip:
                raise EmbeddingError("inconsistent dart pairing in quotient")
            eid = nedge
            nedge += 1
            edges[eid] = (d, e)
            if flip:
                twisted.add(eid)
            seen[d] = seen[e] = eid
    return CombinatorialMap(rotations, edges, twisted)


_PETERSEN = None


def petersen_projective():
    """The Petersen graph embedded in the projective plane, obtained as
    the quotient of the dodecahedron by its central symmetry."""
    global _PETERSEN
    if _PETERSEN is None:
        dod = dodecahedron()
        cands = _rotation_reversing_involutions(dod)
        if not cands:
            raise EmbeddingError("no half-turn symmetry found")
        q = quotient_map(dod, cands[0])
        assert q.num_vertices == 10
        assert q.num_edges == 15
        assert q.num_faces == 6
        assert q.euler_genus() == 1
        assert not q.is_orientable()
        assert q.girth() == 5
        _PETERSEN = q
    return _PETERSEN


# -- concentric rings ---------------------------------------------------------


def concentric_rings(num_rings, ring_len, num_spokes, spoke_len=1):
    """Nested cycles in the sphere joined by evenly spaced spoke paths.

    Returns (map, inner face id, outer face id, rings) where rings lists
    each cycle's vertices in order.  With spoke_len >= 2 and ring_len >= 5
    the result keeps girth at least five.
    """
    if num_rings < 2 or num_spokes < 1 or ring_len % num_spokes:
        raise ValueError("spokes must divide the ring length")
    step = ring_len // num_spokes
    rings = [tuple(i * ring_len + j for j in range(ring_len))
             for i in range(num_rings)]
    nxt = num_rings * ring_len
    spoke = {}
    for i in range(num_rings - 1):
        for t in range(num_spokes):
            j = t * step
            inner = [rings[i][j]]
            for _ in range(spoke_len - 1):
                inner.append(nxt)
                nxt += 1
            inner.append(rings[i + 1][j])
            spoke[(i, t)] = inner

    def ring_seg(i, a, steps):
        return [rings[i][(a + k) % ring_len] for k in range(steps + 1)]

    walks = [tuple(reversed(rings[0]))]
    for i in range(num_rings - 1):
        for t in range(num_spokes):
            lo = ring_seg(i, t * step, step)
            hi = ring_seg(i + 1, t * step, step)
            up = spoke[(i, (t + 1) % num_spokes)]
            down = spoke[(i, t)]
            walk = lo[:-1] + up + list(reversed(hi))[1:] + \
                list(reversed(down))[1:-1]
            walks.append(tuple(walk))
    walks.append(rings[-1])
    m = map_from_face_walks(walks)

    def find_face(cycle):
        want = set(cycle)
        for f in m.face_ids():
            if set(m.face_vertices(f)) == want and m.face_length(f) == len(cycle):
                return f
        raise EmbeddingError("ring face not found")

    return m, find_face(rings[0]), find_face(rings[-1]), rings


# -- planar hexagonal wall ----------------------------------------------------


def hex_wall(cols, rows):
    """A brick-wall patch of the hexagonal lattice: planar, and girth 6
    once the patch is wide enough to close a hexagon."""
    if cols < 2 or rows < 2:
        raise ValueError("wall needs at least 2x2 vertices")

    def vid(x, y):
        return y * cols + x

    neighbors = {}
    for y in range(rows):
        for x in range(cols):
            nb = []
            if x + 1 < cols:
                nb.append(vid(x + 1, y))  # east
            if (x + y) % 2 == 0 and y + 1 < rows:
                nb.append(vid(x, y + 1))  # north
            if x > 0:
                nb.append(vid(x - 1, y))  # west
            if (x + y) % 2 == 1 and y > 0:
                nb.append(vid(x, y - 1))  # south
            neighbors[vid(x, y)] = nb

    darts = {}
    rotations = {}
    edges = {}
    nd = 0
    ne = 0
    for v in sorted(neighbors):
        rot = []
        for u in neighbors[v]:
            darts[(v, u)] = nd
            rot.append(nd)
            nd += 1
        rotations[v] = rot
    for (v, u), d in sorted(darts.items(), key=lambda kv: kv[1]):
        if v < u:
            edges[ne] = (d, darts[(u, v)])
            ne += 1
    m = CombinatorialMap(rotations, edges)
    if m.euler_genus() != 0:
        raise EmbeddingError("hex wall failed to embed in the sphere")
    return m


def add_pentagon_gadgets(m, count, rng):
    """Attach `count` pentagons: each inserts a path of length four
    beside an existing edge, keeping girth at least five."""
    for _ in range(count):
        fid = rng.choice([f for f in m.face_ids() if m.face_length(f) >= 4])
        ln = m.face_length(fid)
        i = rng.randrange(ln)
        m, _, _ = insert_path_in_face(m, fid, i, (i + 1) % ln, 4)
    return m


# -- random growth keeping girth at least five --------------------------------


def _graph_distance(m, u, w, cap=5):
    if u == w:
        return 0
    adj = m.adjacency()
    dist = {u: 0}
    frontier = [u]
    while frontier:
        nf = []
        for x in frontier:
            for y, _ in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    if y == w:
                        return dist[y]
                    if dist[y] < cap:
                        nf.append(y)
        frontier = nf
    return cap  # at least this far apart


def grow_map(m, steps, rng, max_vertices=None):
    """Apply `steps` random girth-safe operations: edge subdivisions,
    pendant paths, and paths inserted across faces."""
    for _ in range(steps):
        room = (max_vertices - m.num_vertices
                if max_vertices is not None else 4)
        if room <= 0:
            break
        op = rng.randrange(3)
        if op == 0 and m.num_edges:
            e = rng.choice(m.edge_ids())
            m, _, _ = subdivide_edge(m, e)
        elif op == 1:
            v = rng.choice(m.vertex_ids())
            m, _, _ = add_pendant_path(m, v, rng.randrange(1, min(3, room + 1)))
        else:
            fid = rng.choice(m.face_ids())
            ln = m.face_length(fid)
            if ln < 2:
                continue
            i, j = rng.randrange(ln), rng.randrange(ln)
            if i == j:
                continue
            walk = m.face_walk_flags(fid)
            u = m.dart_vertex[m.corner_after(walk[i])]
            w = m.dart_vertex[m.corner_after(walk[j])]
            need = max(1, 5 - _graph_distance(m, u, w))
            if need - 1 > room:
                continue
            m, _, _ = insert_path_in_face(m, fid, i, j, need)
    return m


# -- the seeded generator -----------------------------------------------------


class InstanceGenerator:
    """Reproducible source of solver inputs.

    Draws a base surface, grows it with girth-safe operations, and picks
    color lists, marked faces, and precolored vertices on those faces.
    """

    def __init__(self, seed=0):
        self.rng = random.Random(seed)

    def base_map(self, surfaces=("sphere", "projective", "torus")):
        kind = self.rng.choice(list(surfaces))
        if kind == "sphere":
            return cycle_sphere(self.rng.randrange(5, 9))
        if kind == "projective":
            return projective_cycle(self.rng.randrange(5, 8))
        if kind == "torus":
            return torus_wedge(self.rng.randrange(5, 7),
                               self.rng.randrange(5, 7))
        raise ValueError("unknown surface %r" % (kind,))

    def random_map(self, max_vertices=12,
                   surfaces=("sphere", "projective", "torus")):
        m = self.base_map(surfaces)
        room = max_vertices - m.num_vertices
        if room > 0:
            m = grow_map(m, self.rng.randrange(room + 1), self.rng,
                         max_vertices=max_vertices)
        return m

    def random_lists(self, m, palette=6, size=3):
        colors = range(1, palette + 1)
        return {v: tuple(sorted(self.rng.sample(colors, size)))
                for v in m.vertex_ids()}

    def pick_marks(self, m, max_faces=2):
        nf = self.rng.randrange(min(max_faces, m.num_faces) + 1)
        faces = self.rng.sample(m.face_ids(), nf)
        pool = sorted({v for f in faces for v in m.face_vertices(f)})
        take = self.rng.randrange(len(pool) + 1) if pool else 0
        pinned = sorted(self.rng.sample(pool, take))
        return faces, pinned

    def random_instance(self, max_vertices=12, palette=6,
                        surfaces=("sphere", "projective", "torus")):
        """Returns (map, pinned vertices, marked faces, lists) with the
        pinned vertices holding single-color lists."""
        m = self.random_map(max_vertices, surfaces)
        faces, pinned = self.pick_marks(m)
        lists = self.random_lists(m, palette)
        for v in pinned:
            lists[v] = (self.rng.choice(lists[v]),)
        return m, pinned, faces, lists

    def adversarial_lists(self, m, size=3):
        """Lists engineered to starve the coloring: a tiny shared palette
        or neighbor-copied lists."""
        mode = self.rng.randrange(3)
        vs = m.vertex_ids()
        if mode == 0:
            return {v: (1, 2, 3) for v in vs}
        if mode == 1:
            return {v: tuple(sorted(self.rng.sample(range(1, 5), size)))
                    for v in vs}
        adj = m.adjacency()
        lists = {}
        for v in vs:  # copy colors already given to neighbors when possible
            seen = sorted({c for u, _ in adj[v] if u in lists
                           for c in lists[u]})
            self.rng.shuffle(seen)
            pick = seen[:size]
            extra = 1
            while len(pick) < size:
                if extra not in pick:
                    pick.append(extra)
                extra += 1
            lists[v] = tuple(sorted(pick))
        return lists


def sanity_check_instance(m, pinned, faces, lists):
    """Cheap structural checks used by the test suite."""
    face_vertices = {v for f in faces for v in m.face_vertices(f)}
    assert set(pinned) <= face_vertices
    for v in pinned:
        assert len(lists[v]) == 1
    assert set(lists) == set(m.vertex_ids())
    return brute_colorable(m.vertex_ids(),
                           [m.edge_endpoints(e) for e in m.edge_ids()],
                           lists)
