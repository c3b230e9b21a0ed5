"""Compiled enumeration of square gluings and flip-neighbour lookup.

Generation glues sides of squares in a fixed order (the first unassigned
side is made boundary, glued to a later side, or glued to side 0 of a fresh
square).  A finished gluing is kept only if its dart 0 gives the least
breadth-first transcript among the admissible roots, so each isomorphism
class comes out exactly once and nothing has to be stored for dedup.
"""

import numpy as np
from numba import njit

from ._kernels import canonical_transcript, is_valid_quad, match_pattern, orbit_labels, substitute

# scalar slots of the resumable search state
LEVEL, CLASSES, HIST, DONE, FREE = 0, 1, 2, 3, 4
N_SCALARS = 5


@njit(cache=True)
def square_involutions(n_faces):
    n = 8 * n_faces
    alpha = np.empty((3, n), np.int32)
    for d in range(n):
        alpha[0, d] = d ^ 1
        r = d % 8
        if r % 2 == 1:
            alpha[1, d] = d - r + (r + 1) % 8
        else:
            alpha[1, d] = d - r + (r + 7) % 8
        alpha[2, d] = -1
    return alpha


@njit(cache=True)
def _corner(d):
    return 4 * (d // 8) + ((d % 8) // 2 + d % 2) % 4


@njit(cache=True)
def _find(parent, x):
    while parent[x] != x:
        x = parent[x]
    return x


@njit(cache=True)
def _union(parent, size, hist, sc, a, b):
    a = _find(parent, a)
    b = _find(parent, b)
    h = sc[HIST]
    if a == b:
        hist[h, 0] = -1
    else:
        if size[a] < size[b]:
            a, b = b, a
        parent[b] = a
        size[a] += size[b]
        hist[h, 0] = a
        hist[h, 1] = b
        sc[CLASSES] -= 1
    sc[HIST] = h + 1


@njit(cache=True)
def _undo(parent, size, hist, sc):
    h = sc[HIST] - 1
    sc[HIST] = h
    a = hist[h, 0]
    if a >= 0:
        b = hist[h, 1]
        parent[b] = b
        size[a] -= size[b]
        sc[CLASSES] += 1


@njit(cache=True)
def _merges(parent, x0, y0, x1, y1):
    """How many corner classes gluing x0~y0, x1~y1 would merge."""
    a = _find(parent, _corner(x0))
    b = _find(parent, _corner(y0))
    c = _find(parent, _corner(x1))
    d = _find(parent, _corner(y1))
    if a == b:
        return 0 if c == d else 1
    # after merging a and b, is c ~ d?
    if c == b:
        c = a
    if d == b:
        d = a
    return 1 if c == d else 2


@njit(cache=True)
def new_state(n_faces):
    n = 8 * n_faces
    alpha = square_involutions(n_faces)
    parent = np.arange(4 * n_faces).astype(np.int32)
    size = np.ones(4 * n_faces, np.int32)
    hist = np.empty((2 * n + 2, 2), np.int32)
    levels = n + 2
    cur = np.zeros(levels, np.int32)
    opt = np.zeros(levels, np.int32)
    kk = np.zeros(levels, np.int32)
    nbl = np.zeros(levels, np.int32)
    entering = np.zeros(levels, np.int8)
    beaten = np.zeros((levels, (n + 63) // 64), np.uint64)
    sc = np.zeros(N_SCALARS, np.int64)
    sc[CLASSES] = 4 * n_faces
    return alpha, parent, size, hist, cur, opt, kk, nbl, entering, beaten, sc


@njit(cache=True)
def _side_darts(o, n_faces, cur):
    """Darts (x0, x1, y0, y1) glued by option o at side ``cur``; y* = -1 for boundary."""
    x0 = 2 * cur
    x1 = 2 * cur + 1
    if o == 0:
        return x0, x1, -1, -1
    if o == 1 + 8 * n_faces:
        return x0, x1, -2, -2
    j = (o - 1) // 2
    tw = (o - 1) % 2
    if tw == 0:
        return x0, x1, 2 * j + 1, 2 * j
    return x0, x1, 2 * j, 2 * j + 1


@njit(cache=True)
def _boundary_ok(alpha, n, want_b, lengths):
    """Boundary component count and (optionally) sorted polygon lengths."""
    if want_b < 0 and lengths.shape[0] == 0:
        return True
    seen = np.zeros(n, np.uint8)
    found = np.empty(n, np.int32)
    nc = 0
    for d0 in range(n):
        if alpha[2, d0] != d0 or seen[d0]:
            continue
        d = d0
        cnt = 0
        while True:
            seen[d] = 1
            seen[alpha[0, d]] = 1
            cnt += 1
            x = alpha[1, alpha[0, d]]
            while alpha[2, x] != x:
                x = alpha[1, alpha[2, x]]
            d = x
            if seen[d]:
                break
        found[nc] = cnt
        nc += 1
    if want_b >= 0 and nc != want_b:
        return False
    if lengths.shape[0] > 0:
        if nc != lengths.shape[0]:
            return False
        got = np.sort(found[:nc])
        for i in range(nc):
            if got[i] != lengths[i]:
                return False
    return True


@njit(cache=True)
def _orientable(alpha, n):
    colour = np.full(n, -1, np.int8)
    stack = np.empty(n, np.int32)
    colour[0] = 0
    stack[0] = 0
    top = 1
    while top > 0:
        top -= 1
        d = stack[top]
        for i in range(3):
            x = alpha[i, d]
            if x == d:
                continue
            if colour[x] < 0:
                colour[x] = 1 - colour[d]
                stack[top] = x
                top += 1
            elif colour[x] == colour[d]:
                return False
    return True


@njit(cache=True)
def _transcript_cmp(alpha, s, ref, lab, order):
    """Compare the transcript started at s with ``ref``: -1, 0 or 1."""
    n = alpha.shape[1]
    for d in range(n):
        lab[d] = -1
    lab[s] = 0
    order[0] = s
    nxt = 1
    pos = 0
    for t in range(n):
        d = order[t]
        for i in range(3):
            e = alpha[i, d]
            if lab[e] < 0:
                lab[e] = nxt
                order[nxt] = e
                nxt += 1
            v = lab[e]
            if v < ref[pos]:
                return -1
            if v > ref[pos]:
                return 1
            pos += 1
    return 0


@njit(cache=True)
def _prefix_cmp(alpha, s, lab, order, lab2, order2):
    """Compare transcripts from s and from 0 on a partial gluing: -1 if s is
    already known to be smaller, 1 if known larger, 0 if undecided.

    Both walks run in lockstep on a partial gluing and stop at the first
    unassigned a2, where neither transcript is determined any more.  ``lab``
    and ``lab2`` must be all -1 on entry and are restored before returning.
    """
    n = alpha.shape[1]
    lab[0] = 0
    order[0] = 0
    lab2[s] = 0
    order2[0] = s
    nxt = 1
    nxt2 = 1
    result = 0
    done = False
    for t in range(n):
        if t >= nxt or t >= nxt2:
            break
        d = order[t]
        d2 = order2[t]
        for i in range(3):
            e = alpha[i, d]
            e2 = alpha[i, d2]
            if e < 0 or e2 < 0:
                done = True
                break
            if lab[e] < 0:
                lab[e] = nxt
                order[nxt] = e
                nxt += 1
            if lab2[e2] < 0:
                lab2[e2] = nxt2
                order2[nxt2] = e2
                nxt2 += 1
            if lab2[e2] != lab[e]:
                result = -1 if lab2[e2] < lab[e] else 1
                done = True
                break
        if done:
            break
    for t in range(nxt):
        lab[order[t]] = -1
    for t in range(nxt2):
        lab2[order2[t]] = -1
    return result


@njit(cache=True)
def start_keys(alpha):
    """Isomorphism-invariant dart key: 2 * vertex orbit size + (dart not on boundary)."""
    n = alpha.shape[1]
    vlab = orbit_labels(alpha, 6)
    sizes = np.zeros(n, np.int64)
    for d in range(n):
        sizes[vlab[d]] += 1
    key = np.empty(n, np.int64)
    for d in range(n):
        key[d] = 2 * sizes[vlab[d]] + (1 if alpha[2, d] != d else 0)
    return key


@njit(cache=True)
def standard_starts(alpha):
    key = start_keys(alpha)
    m = key.min()
    return np.flatnonzero(key == m).astype(np.int32)


@njit(cache=True)
def _accept(alpha, root_boundary, lab, order):
    """Orderly test: is dart 0 a least root?  Returns the canonical transcript or empty."""
    n = alpha.shape[1]
    ref = np.empty(3 * n, np.int32)
    empty = np.empty(0, np.int32)
    if root_boundary:
        # roots are the boundary darts; canonical code is computed afterwards
        for d in range(n):
            lab[d] = -1
        lab[0] = 0
        order[0] = 0
        nxt = 1
        pos = 0
        for t in range(n):
            d = order[t]
            for i in range(3):
                e = alpha[i, d]
                if lab[e] < 0:
                    lab[e] = nxt
                    order[nxt] = e
                    nxt += 1
                ref[pos] = lab[e]
                pos += 1
        for s in range(1, n):
            if alpha[2, s] == s and _transcript_cmp(alpha, s, ref, lab, order) < 0:
                return empty
        return canonical_transcript(alpha, standard_starts(alpha))
    key = start_keys(alpha)
    m = key.min()
    if key[0] != m:
        return empty
    for d in range(n):
        lab[d] = -1
    lab[0] = 0
    order[0] = 0
    nxt = 1
    pos = 0
    for t in range(n):
        d = order[t]
        for i in range(3):
            e = alpha[i, d]
            if lab[e] < 0:
                lab[e] = nxt
                order[nxt] = e
                nxt += 1
            ref[pos] = lab[e]
            pos += 1
    for s in range(1, n):
        if key[s] == m and _transcript_cmp(alpha, s, ref, lab, order) < 0:
            return empty
    return ref


@njit(cache=True)
def run(n_faces, n_vertices, n_boundary_sides, orient_mode, want_b, lengths,
        alpha, parent, size, hist, cur, opt, kk, nbl, entering, beaten, sc, out, stats):
    """Advance the search until ``out`` is full or the search is finished.

    ``orient_mode``: 1 orientable only, 0 non-orientable only, -1 either.
    Returns the number of rows written to ``out`` (canonical transcripts).
    ``stats[0]`` counts complete gluings examined.
    """
    F = n_faces
    n = 8 * F
    cap = out.shape[0]
    produced = 0
    lab = np.empty(n, np.int32)
    order = np.empty(n, np.int32)
    lab2 = np.full(n, -1, np.int32)
    order2 = np.empty(n, np.int32)
    plab = np.full(n, -1, np.int32)
    root_boundary = n_boundary_sides > 0
    if sc[DONE]:
        return 0
    L = sc[LEVEL]
    if L == 0 and entering[0] == 0 and opt[0] == 0:
        kk[0] = 1
        nbl[0] = n_boundary_sides
        entering[0] = 1
        sc[FREE] = 4
    while True:
        if entering[L]:
            entering[L] = 0
            k = kk[L]
            dead = False
            if sc[CLASSES] - 2 * (F - k) < n_vertices:
                dead = True
            room = sc[FREE] + 2 * (F - k)
            if nbl[L] > room or (room - nbl[L]) % 2 == 1:
                dead = True
            if not dead and root_boundary:
                # roots already known to lose stay lost in every extension
                for w in range(beaten.shape[1]):
                    beaten[L, w] = beaten[L - 1, w] if L > 0 else 0
                for s in range(1, 8 * k):
                    if alpha[2, s] != s:
                        continue
                    w = s >> 6
                    bit = np.uint64(1) << np.uint64(s & 63)
                    if beaten[L, w] & bit:
                        continue
                    r = _prefix_cmp(alpha, s, plab, order, lab2, order2)
                    if r < 0:
                        dead = True
                        break
                    if r > 0:
                        beaten[L, w] |= bit
            c = -1
            if not dead:
                start = cur[L - 1] + 1 if L > 0 else 0
                for side in range(start, 4 * k):
                    if alpha[2, 2 * side] == -1:
                        c = side
                        break
                if c < 0:
                    dead = True
                    if k == F and nbl[L] == 0 and sc[CLASSES] == n_vertices:
                        stats[0] += 1
                        ok = True
                        if orient_mode == 0 and _orientable(alpha, n):
                            ok = False
                        if ok and not _boundary_ok(alpha, n, want_b, lengths):
                            ok = False
                        if ok:
                            t = _accept(alpha, root_boundary, lab, order)
                            if t.shape[0] > 0:
                                for i in range(3 * n):
                                    out[produced, i] = t[i]
                                produced += 1
            if dead:
                cur[L] = -1
            else:
                cur[L] = c
                opt[L] = 0
        # try the next option at level L
        advanced = False
        if cur[L] >= 0:
            c = cur[L]
            k = kk[L]
            o = opt[L]
            last = 1 + 8 * F
            while o <= last:
                if o == 0:
                    if nbl[L] > 0:
                        break
                elif o == last:
                    if k < F and not (root_boundary and L == 0):
                        break
                else:
                    if root_boundary and L == 0:
                        o = last
                        continue
                    j = (o - 1) // 2
                    tw = (o - 1) % 2
                    if j <= c:
                        o = 2 * c + 3
                        continue
                    if j >= 4 * k:
                        o = last
                        continue
                    if alpha[2, 2 * j] == -1 and (tw == 0 or orient_mode != 1):
                        x0, x1, y0, y1 = _side_darts(o, F, c)
                        if sc[CLASSES] - _merges(parent, x0, y0, x1, y1) - 2 * (F - k) >= n_vertices:
                            break
                o += 1
            if o <= last:
                opt[L] = o + 1
                x0, x1, y0, y1 = _side_darts(o, F, c)
                kk[L + 1] = k
                nbl[L + 1] = nbl[L]
                if y0 == -1:
                    alpha[2, x0] = x0
                    alpha[2, x1] = x1
                    nbl[L + 1] = nbl[L] - 1
                    sc[FREE] -= 1
                    hist[sc[HIST], 0] = -1
                    sc[HIST] += 1
                    hist[sc[HIST], 0] = -1
                    sc[HIST] += 1
                else:
                    if y0 == -2:
                        y0 = 8 * k + 1
                        y1 = 8 * k
                        kk[L + 1] = k + 1
                        sc[FREE] += 2
                    else:
                        sc[FREE] -= 2
                    alpha[2, x0] = y0
                    alpha[2, y0] = x0
                    alpha[2, x1] = y1
                    alpha[2, y1] = x1
                    _union(parent, size, hist, sc, _corner(x0), _corner(y0))
                    _union(parent, size, hist, sc, _corner(x1), _corner(y1))
                L += 1
                entering[L] = 1
                advanced = True
        if not advanced:
            # backtrack: undo the option applied at level L - 1
            if L == 0:
                sc[DONE] = 1
                sc[LEVEL] = 0
                return produced
            L -= 1
            c = cur[L]
            o = opt[L] - 1
            x0, x1, y0, y1 = _side_darts(o, F, c)
            _undo(parent, size, hist, sc)
            _undo(parent, size, hist, sc)
            if y0 == -1:
                alpha[2, x0] = -1
                alpha[2, x1] = -1
                sc[FREE] += 1
            else:
                if y0 == -2:
                    y0 = 8 * kk[L] + 1
                    y1 = 8 * kk[L]
                    sc[FREE] -= 2
                else:
                    sc[FREE] += 2
                alpha[2, x0] = -1
                alpha[2, x1] = -1
                alpha[2, y0] = -1
                alpha[2, y1] = -1
        if produced >= cap:
            sc[LEVEL] = L
            return produced


# ---------------------------------------------------------------- lookup tables

@njit(cache=True)
def _hash_row(row):
    h = np.uint64(14695981039346656037)
    for v in row:
        h = (h ^ np.uint64(v)) * np.uint64(1099511628211)
    return h


@njit(cache=True)
def build_table(rows):
    """Open-addressing hash table over the rows of a code matrix."""
    m = 1
    while m < 2 * rows.shape[0] + 2:
        m *= 2
    table = np.full(m, -1, np.int64)
    mask = np.uint64(m - 1)
    for r in range(rows.shape[0]):
        h = _hash_row(rows[r]) & mask
        while table[h] >= 0:
            h = (h + np.uint64(1)) & mask
        table[h] = r
    return table


@njit(cache=True)
def lookup(rows, table, code):
    if rows.shape[0] == 0 or rows.shape[1] != code.shape[0]:
        return -1
    mask = np.uint64(table.shape[0] - 1)
    h = _hash_row(code) & mask
    while True:
        r = table[h]
        if r < 0:
            return -1
        same = True
        for i in range(code.shape[0]):
            if rows[r, i] != code[i]:
                same = False
                break
        if same:
            return r
        h = (h + np.uint64(1)) & mask


@njit(cache=True)
def alpha_from_code(row):
    n = row.shape[0] // 3
    alpha = np.empty((3, n), np.int32)
    for t in range(n):
        for i in range(3):
            alpha[i, t] = row[3 * t + i]
    return alpha


@njit(cache=True)
def neighbour_codes(alpha, src_alpha, p_parent, p_via, p_child, tgt_alpha, bmap):
    """Canonical transcripts of all valid substitutions of one rule (with repeats)."""
    anchors, images = match_pattern(src_alpha, p_parent, p_via, p_child, alpha)
    m = anchors.shape[0]
    n_new = alpha.shape[1] - src_alpha.shape[1] + tgt_alpha.shape[1]
    out = np.empty((m, 3 * n_new), np.int32)
    cnt = 0
    for r in range(m):
        new, _ = substitute(alpha, images[r], tgt_alpha, bmap)
        if not is_valid_quad(new):
            continue
        t = canonical_transcript(new, standard_starts(new))
        for i in range(3 * n_new):
            out[cnt, i] = t[i]
        cnt += 1
    return out[:cnt]


# ---------------------------------------------------------------- union-find over class ids

@njit(cache=True)
def uf_find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(cache=True)
def uf_union(parent, a, b):
    ra = uf_find(parent, a)
    rb = uf_find(parent, b)
    if ra == rb:
        return
    # keep the smaller id as root so roots are deterministic
    if ra < rb:
        parent[rb] = ra
    else:
        parent[ra] = rb


@njit(cache=True)
def uf_roots(parent):
    out = np.empty(parent.shape[0], np.int64)
    for i in range(parent.shape[0]):
        out[i] = uf_find(parent, i)
    return out


@njit(cache=True)
def connect_block(block, first_id, src_alpha, p_parent, p_via, p_child, tgt_alpha, bmap,
                  t_rows, t_table, t_base, parent, has_nb):
    """Union every class of ``block`` with its neighbours under one rule.

    Returns the number of neighbours not present in the target layer."""
    misses = 0
    for r in range(block.shape[0]):
        alpha = alpha_from_code(block[r].astype(np.int32))
        codes = neighbour_codes(alpha, src_alpha, p_parent, p_via, p_child, tgt_alpha, bmap)
        for c in range(codes.shape[0]):
            j = lookup(t_rows, t_table, codes[c])
            if j < 0:
                misses += 1
                continue
            uf_union(parent, first_id + r, t_base + j)
            has_nb[r] = 1
    return misses


@njit(cache=True)
def _probe_down(z, src_alpha, p_parent, p_via, p_child, tgt_alpha, bmap, t_rows, t_table,
                t_base, parent, root):
    anchors, images = match_pattern(src_alpha, p_parent, p_via, p_child, z)
    for r in range(anchors.shape[0]):
        w, _ = substitute(z, images[r], tgt_alpha, bmap)
        if not is_valid_quad(w):
            continue
        t = canonical_transcript(w, standard_starts(w))
        j = lookup(t_rows, t_table, t)
        if j >= 0 and uf_find(parent, t_base + j) != root:
            return t_base + j
    return -1


@njit(cache=True)
def probe_up_down(alpha, up_src, up_parent, up_via, up_child, up_tgt, up_bmap,
                  d1_src, d1_parent, d1_via, d1_child, d1_tgt, d1_bmap, rows1, table1, base1,
                  d2_src, d2_parent, d2_via, d2_child, d2_tgt, d2_bmap, rows2, table2, base2,
                  parent, node):
    """Look for a stored class outside ``node``'s component two flips away.

    Each expansion of ``alpha`` by the up rule is collapsed again by either
    down rule; the first collapse landing in another component is returned
    as its id (or -1)."""
    root = uf_find(parent, node)
    anchors, images = match_pattern(up_src, up_parent, up_via, up_child, alpha)
    for r in range(anchors.shape[0]):
        z, _ = substitute(alpha, images[r], up_tgt, up_bmap)
        if not is_valid_quad(z):
            continue
        if rows1.shape[0] > 0:
            hit = _probe_down(z, d1_src, d1_parent, d1_via, d1_child, d1_tgt, d1_bmap,
                              rows1, table1, base1, parent, root)
            if hit >= 0:
                return hit
        if rows2.shape[0] > 0:
            hit = _probe_down(z, d2_src, d2_parent, d2_via, d2_child, d2_tgt, d2_bmap,
                              rows2, table2, base2, parent, root)
            if hit >= 0:
                return hit
    return -1
