"""Shared brute-force reference helpers for the test suite."""

from surfcolor.topology import cut_along, cycle_edge_ids, enumerate_short_cycles


def brute_separating_cycle(m, f1, f2):
    """Length of the shortest cycle separating faces f1 and f2, by
    trying every simple cycle; None when no cycle separates them."""
    best = None
    for cyc in enumerate_short_cycles(m, m.num_vertices):
        if best is not None and len(cyc) >= best:
            continue
        eids = cycle_edge_ids(m, cyc)
        cut = cut_along(m, eids)
        new_of_old = {old: new for new, old in cut.face_image.items()}
        comp_of = {}
        for i, comp in enumerate(cut.map.components()):
            for v in comp:
                comp_of[v] = i
        c1 = comp_of[cut.map.face_vertices(new_of_old[f1])[0]]
        c2 = comp_of[cut.map.face_vertices(new_of_old[f2])[0]]
        if c1 != c2:
            best = len(cyc)
    return best
