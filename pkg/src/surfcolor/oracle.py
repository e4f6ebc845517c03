"""Exhaustive reference implementations used to cross-check the solvers.

Everything here works on bare vertex/edge data, independent of any
surface structure, and scales only to small instances.  The solvers are
tested against these functions; nothing in here may import from the
rest of the package.
"""

from itertools import combinations, permutations


class OracleLimitError(Exception):
    """An exhaustive search exceeded its node budget."""


def check_coloring(edges, lists, coloring):
    """True when every listed vertex has a color from its list and no
    edge joins two equal colors."""
    for v, allowed in lists.items():
        if v not in coloring or coloring[v] not in allowed:
            return False
    for u, w in edges:
        if u == w or coloring.get(u) == coloring.get(w):
            return False
    return True


def _build_adj(vertices, edges):
    adj = {v: set() for v in vertices}
    for u, w in edges:
        if u == w:
            return None  # a loop admits no proper coloring
        adj[u].add(w)
        adj[w].add(u)
    return adj


def _extend(adj, domains, colored):
    """Backtracking search, most constrained vertex first."""
    pick = None
    for v in domains:
        if v in colored:
            continue
        avail = [c for c in domains[v]
                 if all(colored.get(u) != c for u in adj[v])]
        if pick is None or len(avail) < len(pick[1]):
            pick = (v, avail)
            if not avail:
                return False
    if pick is None:
        return True
    v, avail = pick
    for c in avail:
        colored[v] = c
        if _extend(adj, domains, colored):
            del colored[v]
            return True
        del colored[v]
    return False


def brute_colorable(vertices, edges, lists, pins=None):
    """Decide by exhaustion whether the graph has a proper coloring
    choosing each vertex's color from its list.  `pins` optionally fixes
    some vertices first (a pinned color need not come from the list).
    """
    vs = sorted(vertices)
    for v in vs:
        if v not in lists:
            raise ValueError("vertex %r has no list" % (v,))
    adj = _build_adj(vs, edges)
    if adj is None:
        return False
    if any(not lists[v] for v in vs if not (pins and v in pins)):
        return False
    colored = dict(pins) if pins else {}
    for v in colored:
        if any(colored.get(u) == colored[v] for u in adj[v]):
            return False
    domains = {v: tuple(lists[v]) for v in vs if v not in colored}
    return _extend(adj, domains, colored)


def brute_profile(vertices, edges, lists, boundary):
    """All tuples of boundary colors (in the order given) that extend to
    a proper coloring of the whole graph from the lists."""
    boundary = list(boundary)
    vset = set(vertices)
    for b in boundary:
        if b not in vset:
            raise ValueError("boundary vertex %r not in graph" % (b,))
    out = set()

    def rec(k, pins):
        if k == len(boundary):
            if brute_colorable(vertices, edges, lists, pins=pins):
                out.add(tuple(pins[b] for b in boundary))
            return
        v = boundary[k]
        if v in pins:  # repeated boundary vertex
            rec(k + 1, pins)
            return
        for c in lists[v]:
            pins[v] = c
            rec(k + 1, pins)
            del pins[v]

    rec(0, {})
    return out


def is_edge_critical(vertices, edges, precolored, lists):
    """True when for every edge outside the precolored set there is a
    precoloring that extends to the graph without that edge but not to
    the whole graph.  Vacuously true when no such edge exists."""
    es = [tuple(e) for e in edges]
    pset = set(precolored)
    outside = [e for e in es if not (e[0] in pset and e[1] in pset)]
    porder = sorted(pset)

    def precolorings(k, phi):
        if k == len(porder):
            yield dict(phi)
            return
        v = porder[k]
        for c in lists[v]:
            phi[v] = c
            yield from precolorings(k + 1, phi)
            del phi[v]

    for e in outside:
        thinner = [f for f in es if f is not e]
        for phi in precolorings(0, {}):
            if (brute_colorable(vertices, thinner, lists, pins=phi)
                    and not brute_colorable(vertices, es, lists, pins=phi)):
                break
        else:
            return False
    return True


# -- list assignments up to renaming the colors ------------------------------
#
# Choosability questions are invariant under bijections of the color
# universe, so exhaustive searches only walk assignments in a canonical
# form: the lexicographically least relabeling, comparing the sequence
# of sorted per-vertex lists in vertex order.


def canonical_lists(assignment):
    """The least relabeling of a sequence of color lists.

    Takes the lists in vertex order and returns a tuple of sorted tuples
    whose colors are renamed by a bijection chosen to make the whole
    sequence lexicographically least.
    """
    return _canonical_scan(assignment)[0]


def canonical_lists_with_map(assignment):
    """Like `canonical_lists`, also returning one renaming that achieves
    the canonical form, as a dict over the colors that appear."""
    return _canonical_scan(assignment)


def _canonical_scan(assignment):
    seq = [tuple(sorted(l)) for l in assignment]
    out = []
    alive = [{}]  # partial color bijections achieving the least prefix
    for k, lst in enumerate(seq):
        best = None
        cands = []
        for sigma in alive:
            used = set(sigma.values())
            mapped = [sigma[c] for c in lst if c in sigma]
            fresh = [c for c in lst if c not in sigma]
            free = []
            t = 0
            while len(free) < len(fresh):
                if t not in used:
                    free.append(t)
                t += 1
            image = tuple(sorted(mapped + free))
            if best is None or image < best:
                best = image
                cands = []
            if image == best:
                cands.append((sigma, fresh, free))
        out.append(best)
        nxt = []
        for sigma, fresh, free in cands:
            for perm in permutations(free):
                s2 = dict(sigma)
                s2.update(zip(fresh, perm))
                nxt.append(s2)
        # bijections that agree on every color still to come are
        # interchangeable; keep one of each kind
        rest = set()
        for later in seq[k + 1:]:
            rest.update(later)
        seen = set()
        alive = []
        for s in nxt:
            key = tuple(sorted((c, s[c]) for c in s if c in rest))
            if key not in seen:
                seen.add(key)
                alive.append(s)
    return tuple(out), dict(alive[0]) if alive else {}


def _list_extensions(prefix, size):
    """Sorted candidate lists for the next vertex: any colors already in
    use plus a run of consecutive new ones."""
    used = sorted({c for l in prefix for c in l})
    top = used[-1] + 1 if used else 0
    for nnew in range(size + 1):
        new = tuple(range(top, top + nnew))
        for old in combinations(used, size - nnew):
            yield tuple(sorted(old + new))


def enumerate_canonical_lists(n, size, cap=None):
    """Yield every canonical assignment of `size`-color lists to n
    vertices, each exactly once up to renaming colors."""
    count = 0

    def rec(prefix):
        nonlocal count
        if len(prefix) == n:
            count += 1
            if cap is not None and count > cap:
                raise OracleLimitError("more than %d assignments" % cap)
            yield tuple(prefix)
            return
        for cand in _list_extensions(prefix, size):
            ext = prefix + [cand]
            if canonical_lists(ext) == tuple(ext):
                yield from rec(ext)

    yield from rec([])


def peel_low_degree(vertices, edges, size=3, keep=()):
    """Vertices left after repeatedly deleting any vertex outside `keep`
    with fewer than `size` distinct neighbours.

    Such a vertex always has a spare color whatever lists its neighbours
    got, so deleting it changes neither colorability from any fixed
    assignment nor `size`-choosability.
    """
    alive = set(vertices)
    keep = set(keep)
    nbrs = {v: set() for v in alive}
    for u, v in edges:
        if u != v:
            nbrs[u].add(v)
            nbrs[v].add(u)
    changed = True
    while changed:
        changed = False
        for v in sorted(alive - keep):
            if len(nbrs[v] & alive) < size:
                alive.discard(v)
                changed = True
    return alive


def find_uncolorable_lists(vertices, edges, size=3, cap=None, peel=True):
    """Search all assignments of `size`-color lists (up to renaming) for
    one admitting no proper coloring.  Returns such an assignment as a
    dict, or None when the graph is colorable from every assignment.

    With `peel` the search runs on the low-degree-peeled kernel and any
    witness is completed with fresh disjoint lists: a coloring of the
    graph restricts to the kernel, and a kernel coloring always extends
    outward, so the kernel is uncolorable from some assignment exactly
    when the graph is.
    """
    if peel:
        kernel = peel_low_degree(vertices, edges, size)
        if kernel != set(vertices):
            inner = [e for e in edges
                     if e[0] in kernel and e[1] in kernel]
            bad = find_uncolorable_lists(kernel, inner, size, cap, peel=False)
            if bad is None:
                return None
            top = max((c for l in bad.values() for c in l), default=-1) + 1
            for v in sorted(set(vertices) - kernel):
                bad[v] = tuple(range(top, top + size))
                top += size
            return bad
    vs = sorted(vertices)
    es = [tuple(e) for e in edges]
    nodes = 0

    def witness(prefix):
        lists = {}
        top = max((c for l in prefix for c in l), default=-1) + 1
        for i, v in enumerate(vs):
            if i < len(prefix):
                lists[v] = tuple(prefix[i])
            else:
                lists[v] = tuple(range(top, top + size))
                top += size
        return lists

    def rec(prefix):
        nonlocal nodes
        nodes += 1
        if cap is not None and nodes > cap:
            raise OracleLimitError("more than %d search nodes" % cap)
        head = set(vs[:len(prefix)])
        sub_edges = [e for e in es if e[0] in head and e[1] in head]
        sub_lists = {vs[i]: prefix[i] for i in range(len(prefix))}
        if not brute_colorable(sorted(head), sub_edges, sub_lists):
            # no extension can fix an uncolorable prefix
            return witness(prefix)
        if len(prefix) == len(vs):
            return None
        for cand in _list_extensions(prefix, size):
            ext = prefix + [cand]
            if canonical_lists(ext) == tuple(ext):
                bad = rec(ext)
                if bad is not None:
                    return bad
        return None

    return rec([])


def brute_choosable(vertices, edges, size=3, cap=None, peel=True):
    """Decide by double exhaustion whether the graph can be properly
    colored from every assignment of `size`-color lists."""
    return find_uncolorable_lists(vertices, edges, size, cap=cap,
                                  peel=peel) is None
