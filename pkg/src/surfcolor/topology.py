"""Surface surgery along subgraphs and classification of cycles.

Cutting a map along a set of edges slits the surface open along every
edge in the set and closes each resulting boundary circle with a new
disk face (a "cap").  Each cut edge reappears once per side, and a
vertex met by k cut edges reappears k times, once per gap between
consecutive cut darts in its rotation.  Everything away from the cut
is untouched: the old faces survive verbatim and the caps are exactly
the new faces.

The construction works on flags.  Every flag of the input map is kept
with a tag 0, and every flag on a cut dart gets a tagged-1 shadow that
becomes the cap side of the doubled edge:

  * flip exchanges tag 0 and tag 1 on cut darts (the doubled edge has
    its shadow as the other side) and acts as usual elsewhere;
  * across keeps the tag (each side of a cut edge is doubled into its
    own edge);
  * corner keeps tag-0 flags paired as before, while a tagged shadow
    is paired with the shadow of the neighbouring cut dart at the same
    vertex (the next one in rotation order on the positive side, the
    previous one on the negative side; a vertex with a single cut dart
    pairs its two shadows with each other).

Face walks therefore never mix tags, which is what makes the cap faces
recognisable: they are precisely the all-shadow walks.
"""

from dataclasses import dataclass

from .embedding import (
    NEG,
    POS,
    CombinatorialMap,
    induced_submap,
    map_from_involutions,
)
from .errors import PreconditionError, SurgeryError


@dataclass(frozen=True)
class CutMap:
    """A map cut open along edges, with translations back to the input.

    map          the cut-open map (fresh vertex/dart/edge/face ids)
    vertex_image new vertex id -> vertex id of the input map
    edge_image   new edge id -> edge id of the input map
    dart_image   new dart id -> dart id of the input map
    face_image   new face id -> face id of the input map (surviving faces)
    cap_faces    face ids of the caps, one per boundary circle of the slit
    """

    map: CombinatorialMap
    vertex_image: dict
    edge_image: dict
    dart_image: dict
    face_image: dict
    cap_faces: tuple


def cut_along(m, edge_ids):
    """Cut `m` open along the given edges and cap the boundary circles.

    Copies of a cut edge keep no memory of which side they were; use
    `edge_image` to recognise them.  Vertices with no incident edges
    cannot be carried through the flag construction, so maps with
    isolated vertices are rejected; cut within a single component.
    """
    eids = set(edge_ids)
    missing = eids - set(m.edges)
    if missing:
        raise SurgeryError("cannot cut along unknown edges %s" % sorted(missing))
    if not eids:
        raise SurgeryError("empty edge set")
    if any(not rot for rot in m.rotations.values()):
        raise SurgeryError("cut_along does not support isolated vertices")

    cut_darts = {d for e in eids for d in m.edges[e]}
    next_cut = {}
    prev_cut = {}
    for rot in m.rotations.values():
        local = [d for d in rot if d in cut_darts]
        for i, d in enumerate(local):
            next_cut[d] = local[(i + 1) % len(local)]
            prev_cut[d] = local[(i - 1) % len(local)]

    flags = [(0, d, s) for d in sorted(m.dart_vertex) for s in (POS, NEG)]
    flags += [(1, d, s) for d in sorted(cut_darts) for s in (POS, NEG)]

    def across(f):
        t, d, s = f
        d2, s2 = m.across_flag((d, s))
        return (t, d2, s2)

    def corner(f):
        t, d, s = f
        if t == 0:
            d2, s2 = m.corner_flag((d, s))
            return (0, d2, s2)
        if s == POS:
            return (1, next_cut[d], NEG)
        return (1, prev_cut[d], POS)

    def flip(f):
        t, d, s = f
        if d in cut_darts:
            return (1 - t, d, s)
        return (0, d, -s)

    cut, images = map_from_involutions(flags, across, corner, flip)

    vertex_image = {}
    for (t, d, s), vid in images.vertex.items():
        vertex_image[vid] = m.dart_vertex[d]
    edge_image = {}
    for (t, d, s), eid in images.edge.items():
        edge_image[eid] = m.dart_edge[d]
    dart_image = {}
    for (t, d, s), did in images.dart.items():
        dart_image[did] = d

    back = {new: old for old, new in images.flag.items()}
    face_image = {}
    caps = []
    for fid in cut.face_ids():
        tagged = {back[g] for g in cut.face_flags(fid)}
        tags = {t for t, _, _ in tagged}
        if tags == {1}:
            caps.append(fid)
            continue
        if tags != {0}:
            raise SurgeryError("cut produced a face mixing old and cap flags")
        olds = {m.face_of_flag((d, s)) for _, d, s in tagged}
        if len(olds) != 1:
            raise SurgeryError("cut glued distinct faces together")
        face_image[fid] = olds.pop()

    if sorted(face_image.values()) != sorted(m.face_ids()):
        raise SurgeryError("cut did not preserve the non-cap faces")
    if sum(cut.face_length(c) for c in caps) != len(cut_darts):
        raise SurgeryError("cap walks do not account for every cut dart side")

    return CutMap(cut, vertex_image, edge_image, dart_image,
                  face_image, tuple(sorted(caps)))


def split_components(m):
    """The connected components of `m` as separate maps.

    Vertex, dart and edge ids are preserved; face ids are recomputed
    per piece (match them through the least flag of the walk if
    needed).
    """
    return [induced_submap(m, comp)[0] for comp in m.components()]


def face_translation(whole, piece):
    """face id of `whole` -> face id of `piece` for faces lying in the piece.

    Both maps must share dart ids on the piece (as produced by
    `split_components`), so a surviving face is recognised by the least
    flag of its walk.
    """
    anchors = {}
    for fid in whole.face_ids():
        fl = whole.face_flags(fid)
        if fl:
            anchors[min(fl)] = fid
    out = {}
    for fid in piece.face_ids():
        fl = piece.face_flags(fid)
        if not fl:
            continue
        key = min(fl)
        if key in anchors:
            out[anchors[key]] = fid
    return out


def relabel_to_original(piece, cut):
    """Rename a piece of a cut map back to the ids of the uncut map.

    Only meaningful when the cut separates, so that within the piece
    every vertex, dart and edge image is taken at most once; a repeated
    image raises.  The result is a map whose shared vertices and edges
    carry the same ids and endpoints as the input of `cut_along`.
    """
    vmap = {v: cut.vertex_image[v] for v in piece.vertex_ids()}
    if len(set(vmap.values())) != len(vmap):
        raise SurgeryError("piece repeats a vertex image; the cut does not separate here")
    dmap = {d: cut.dart_image[d] for d in piece.dart_vertex}
    if len(set(dmap.values())) != len(dmap):
        raise SurgeryError("piece repeats a dart image")
    emap = {e: cut.edge_image[e] for e in piece.edges}
    if len(set(emap.values())) != len(emap):
        raise SurgeryError("piece repeats an edge image")

    rotations = {vmap[v]: [dmap[d] for d in rot]
                 for v, rot in piece.rotations.items()}
    edges = {emap[e]: tuple(dmap[d] for d in pair)
             for e, pair in piece.edges.items()}
    twisted = {emap[e] for e in piece.twisted}
    return CombinatorialMap(rotations, edges, twisted)


# -- cycles -----------------------------------------------------------------


def cycle_edge_ids(m, cycle):
    """Edge ids traversed by a simple cycle given as a vertex tuple."""
    if len(cycle) < 3:
        raise PreconditionError("a simple cycle needs at least 3 vertices")
    if len(set(cycle)) != len(cycle):
        raise PreconditionError("cycle repeats a vertex")
    adj = {}
    for e in m.edges:
        u, v = m.edge_endpoints(e)
        if u == v:
            continue
        adj[frozenset((u, v))] = e
    out = []
    for i, u in enumerate(cycle):
        v = cycle[(i + 1) % len(cycle)]
        e = adj.get(frozenset((u, v)))
        if e is None:
            raise PreconditionError("no edge between %s and %s" % (u, v))
        out.append(e)
    if len(set(out)) != len(out):
        raise PreconditionError("cycle repeats an edge")
    return tuple(out)


def classify_cycle(m, cycle, marked=()):
    """Sort a simple cycle into contractible / surrounds / essential.

    `marked` is a set of face ids of `m`.  Returns a pair (kind, face):

      ("contractible", None)  some side of the cycle is an unmarked disk;
      ("surrounds", b)        not contractible, but some side is a disk
                              whose only marked face is b (smallest such
                              b when both sides qualify);
      ("essential", None)     everything else.

    Works by incidence counting instead of surgery: if the faces along
    the cycle stay mutually reachable without stepping over its edges,
    no side exists at all (this covers one-sided cycles) and the cycle
    is essential.  Otherwise each side's Euler genus comes out of its
    own vertex, edge and face counts, with the cycle and one cap added.
    """
    eids = set(cycle_edge_ids(m, cycle))
    ring = set(cycle)

    parent = {f: f for f in m.face_ids()}

    def root(f):
        while parent[f] != f:
            parent[f] = parent[parent[f]]
            f = parent[f]
        return f

    side_of_edge = {}
    for e in m.edges:
        if e in eids:
            continue
        a, _ = m.edges[e]
        fa, fb = m.face_of_flag((a, POS)), m.face_of_flag((a, NEG))
        side_of_edge[e] = fa
        parent[root(fa)] = root(fb)

    touching = set()
    for e in eids:
        a, _ = m.edges[e]
        touching.add(root(m.face_of_flag((a, POS))))
        touching.add(root(m.face_of_flag((a, NEG))))
    if len(touching) == 1:
        return ("essential", None)

    counts = {r: [len(cycle), len(eids), 1] for r in touching}
    marks = {r: set() for r in touching}
    for f in m.face_ids():
        r = root(f)
        if r in counts:
            counts[r][2] += 1
            if f in marked:
                marks[r].add(f)
    for e, f in side_of_edge.items():
        r = root(f)
        if r in counts:
            counts[r][1] += 1
    for v, rot in m.rotations.items():
        if v in ring or not rot:
            continue
        r = root(m.face_of_flag((rot[0], POS)))
        if r in counts:
            counts[r][0] += 1

    surrounded = []
    for r, (nv, ne, nf) in counts.items():
        if 2 - (nv - ne + nf) != 0:
            continue
        if not marks[r]:
            return ("contractible", None)
        if len(marks[r]) == 1:
            surrounded.append(min(marks[r]))
    if surrounded:
        return ("surrounds", min(surrounded))
    return ("essential", None)


def classify_cycle_by_cutting(m, cycle, marked=()):
    """Reference implementation of `classify_cycle` that really cuts.

    Slower, kept for cross-checking: a disk side shows up after cutting
    as a component of Euler genus 0 whose single cap has the same
    length as the cycle.  A one-sided cycle fails that length test (its
    lone cap is the double cover of the cycle, twice as long).
    """
    eids = cycle_edge_ids(m, cycle)
    cut = cut_along(m, eids)
    cm = cut.map

    comp_of = {}
    for i, comp in enumerate(cm.components()):
        for v in comp:
            comp_of[v] = i
    n = len(set(comp_of.values()))
    counts = [[0, 0, 0] for _ in range(n)]
    caps = [[] for _ in range(n)]
    marks = [set() for _ in range(n)]
    for v in comp_of:
        counts[comp_of[v]][0] += 1
    for e in cm.edges:
        u, _ = cm.edge_endpoints(e)
        counts[comp_of[u]][1] += 1
    for fid in cm.face_ids():
        i = comp_of[cm.face_vertices(fid)[0]]
        counts[i][2] += 1
        if fid in cut.cap_faces:
            caps[i].append(fid)
        elif cut.face_image[fid] in marked:
            marks[i].add(cut.face_image[fid])

    surrounded = []
    for i, (nv, ne, nf) in enumerate(counts):
        genus = 2 - (nv - ne + nf)
        disk_side = (genus == 0 and len(caps[i]) == 1
                     and cm.face_length(caps[i][0]) == len(cycle))
        if not disk_side:
            continue
        if not marks[i]:
            return ("contractible", None)
        if len(marks[i]) == 1:
            surrounded.append(min(marks[i]))
    if surrounded:
        return ("surrounds", min(surrounded))
    return ("essential", None)


def enumerate_short_cycles(m, bound, through_vertex=None):
    """All simple cycles of length at most `bound`, shortest first.

    Cycles are vertex tuples starting at their least vertex, direction
    chosen to make the tuple lexicographically least; ties between
    cycles of one length break on that tuple.  Requires a simple map
    (cycles through loops or parallel edges would not be determined by
    their vertices).
    """
    if not m.is_simple():
        raise PreconditionError("cycle enumeration needs a simple map")
    if through_vertex is not None and through_vertex not in m.rotations:
        raise PreconditionError("unknown vertex %s" % (through_vertex,))
    bound = min(bound, m.num_vertices)
    neighbours = {v: sorted(u for u, _ in nbrs)
                  for v, nbrs in m.adjacency().items()}

    found = set()
    for root in sorted(m.rotations):
        # Every cycle is collected from its least vertex only.
        path = [root]
        on_path = {root}

        def extend():
            v = path[-1]
            for u in neighbours[v]:
                if u == root and len(path) >= 3:
                    a, b = path[1], path[-1]
                    tup = tuple(path) if a <= b else (root,) + tuple(path[:0:-1])
                    found.add(tup)
                elif u > root and u not in on_path and len(path) < bound:
                    path.append(u)
                    on_path.add(u)
                    extend()
                    path.pop()
                    on_path.remove(u)

        extend()

    cycles = sorted(found, key=lambda c: (len(c), c))
    if through_vertex is not None:
        cycles = [c for c in cycles if through_vertex in c]
    return cycles


def find_short_cycle(m, bound, marked=(), mode="essential", through_vertex=None):
    """Shortest cycle of length <= bound in the requested class, or None.

    mode "essential" keeps only essential cycles; mode
    "not_contractible" also accepts surrounding ones.  Ties follow the
    ordering of `enumerate_short_cycles`; classification runs lazily in
    that order, so the first hit is returned without classifying the
    rest.
    """
    if mode not in ("essential", "not_contractible"):
        raise PreconditionError("unknown cycle search mode %r" % (mode,))
    for cycle in enumerate_short_cycles(m, bound, through_vertex):
        kind, _ = classify_cycle(m, cycle, marked)
        if kind == "essential" or (mode == "not_contractible" and kind == "surrounds"):
            return cycle
    return None
