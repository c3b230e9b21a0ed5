"""Compiled inner loops over involution arrays.

Every kernel takes ``alpha``, an ``int32`` array of shape ``(3, n)`` whose rows
are the involutions a0, a1, a2 of a generalized map.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def orbit_labels(alpha, mask):
    """Label orbits of the subgroup generated by the involutions in ``mask``.

    ``mask`` is a bit set (bit i selects a_i).  Labels are assigned in order
    of the smallest dart of each orbit.
    """
    n = alpha.shape[1]
    lab = np.full(n, -1, np.int32)
    stack = np.empty(n, np.int32)
    count = 0
    for d0 in range(n):
        if lab[d0] >= 0:
            continue
        lab[d0] = count
        top = 0
        stack[top] = d0
        top += 1
        while top > 0:
            top -= 1
            d = stack[top]
            for i in range(3):
                if (mask >> i) & 1:
                    e = alpha[i, d]
                    if lab[e] < 0:
                        lab[e] = count
                        stack[top] = e
                        top += 1
        count += 1
    return lab


@njit(cache=True)
def face_order(alpha):
    """Darts listed face by face, each face in a0, a1 alternating order.

    Faces come in order of their smallest dart.
    """
    n = alpha.shape[1]
    seen = np.zeros(n, np.bool_)
    out = np.empty(n, np.int64)
    at = 0
    for d0 in range(n):
        if seen[d0]:
            continue
        d = d0
        for k in range(8):
            seen[d] = True
            out[at] = d
            at += 1
            d = alpha[k % 2, d]
    return out


@njit(cache=True)
def two_colourable(alpha):
    """True when darts 2-colour so that each involution swaps colours where it moves."""
    n = alpha.shape[1]
    col = np.full(n, -1, np.int8)
    stack = np.empty(n, np.int32)
    for d0 in range(n):
        if col[d0] >= 0:
            continue
        col[d0] = 0
        top = 1
        stack[0] = d0
        while top > 0:
            top -= 1
            d = stack[top]
            for i in range(3):
                e = alpha[i, d]
                if e == d:
                    continue
                if col[e] < 0:
                    col[e] = 1 - col[d]
                    stack[top] = e
                    top += 1
                elif col[e] == col[d]:
                    return False
    return True


@njit(cache=True)
def is_valid_quad(alpha):
    """Fast boolean form of :func:`cubiflip.gmap.validate`."""
    n = alpha.shape[1]
    for d in range(n):
        for i in range(3):
            e = alpha[i, d]
            if e < 0 or e >= n or alpha[i, e] != d:
                return False
        if alpha[0, d] == d or alpha[1, d] == d:
            return False
        if alpha[0, alpha[2, d]] != alpha[2, alpha[0, d]]:
            return False
        if alpha[2, d] == alpha[0, d]:
            return False
    # every face is an 8-cycle of a0, a1
    for d in range(n):
        e = d
        for k in range(4):
            e = alpha[1, alpha[0, e]]
            if e == d and k < 3:
                return False
        if e != d:
            return False
    return True


@njit(cache=True)
def canonical_transcript(alpha, starts):
    """Lexicographically least breadth-first transcript over ``starts``.

    Darts are numbered in the order a breadth-first walk (a0, a1, a2 visit
    order) reaches them; the transcript lists the numbers of a0(d), a1(d),
    a2(d) for each dart in that order.  Returns an empty array when the map
    is disconnected.
    """
    n = alpha.shape[1]
    best = np.empty(3 * n, np.int32)
    cur = np.empty(3 * n, np.int32)
    lab = np.empty(n, np.int32)
    order = np.empty(n, np.int32)
    have_best = False
    for s in starts:
        for d in range(n):
            lab[d] = -1
        lab[s] = 0
        order[0] = s
        nxt = 1
        pos = 0
        smaller = not have_best
        aborted = False
        for t in range(n):
            if t >= nxt:
                return np.empty(0, np.int32)
            d = order[t]
            for i in range(3):
                e = alpha[i, d]
                if lab[e] < 0:
                    lab[e] = nxt
                    order[nxt] = e
                    nxt += 1
                v = lab[e]
                if not smaller:
                    b = best[pos]
                    if v > b:
                        aborted = True
                        break
                    if v < b:
                        smaller = True
                cur[pos] = v
                pos += 1
            if aborted:
                break
        if aborted:
            continue
        if smaller:
            for k in range(3 * n):
                best[k] = cur[k]
            have_best = True
    return best


@njit(cache=True)
def match_pattern(alpha_s, steps_parent, steps_alpha, steps_child, alpha_g):
    """All dart-injective morphisms from a pattern into a map.

    The pattern is connected; ``steps_*`` describe a spanning walk from
    pattern dart 0 (child = alpha_s[steps_alpha[j], steps_parent[j]]).  A
    morphism commutes with a0 and a1 and with a2 on darts where the pattern's
    a2 is not the identity.  Returns ``(anchors, images)``: one row per
    anchor dart of the map, ordered by anchor.
    """
    ns = alpha_s.shape[1]
    ng = alpha_g.shape[1]
    stamp = np.full(ng, -1, np.int64)
    img = np.empty(ns, np.int32)
    out_anchor = np.empty(ng, np.int32)
    out_img = np.empty((ng, ns), np.int32)
    m = 0
    for g in range(ng):
        img[0] = g
        ok = True
        for j in range(steps_parent.shape[0]):
            img[steps_child[j]] = alpha_g[steps_alpha[j], img[steps_parent[j]]]
        for s in range(ns):
            x = img[s]
            if stamp[x] == g:
                ok = False
                break
            stamp[x] = g
        if not ok:
            continue
        for s in range(ns):
            for i in range(3):
                t = alpha_s[i, s]
                if i == 2 and t == s:
                    continue
                if alpha_g[i, img[s]] != img[t]:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        out_anchor[m] = g
        for s in range(ns):
            out_img[m, s] = img[s]
        m += 1
    return out_anchor[:m], out_img[:m]


@njit(cache=True)
def substitute(alpha_g, img, alpha_t, bmap):
    """Replace the image of a pattern by a replacement patch.

    ``img[s]`` is the map dart of pattern dart s; ``bmap[s]`` is the
    replacement dart corresponding to pattern boundary dart s (-1 for
    interior pattern darts).  Kept map darts are renumbered in increasing
    order, replacement darts follow.  Returns ``(alpha, keep_index)`` where
    ``keep_index[g]`` is the new number of map dart g (-1 if removed).
    """
    ng = alpha_g.shape[1]
    ns = img.shape[0]
    nt = alpha_t.shape[1]
    inv = np.full(ng, -1, np.int32)
    for s in range(ns):
        inv[img[s]] = s
    keep = np.full(ng, -1, np.int32)
    k = 0
    for g in range(ng):
        if inv[g] < 0:
            keep[g] = k
            k += 1
    out = np.empty((3, k + nt), np.int32)
    for g in range(ng):
        if inv[g] >= 0:
            continue
        ng_ = keep[g]
        out[0, ng_] = keep[alpha_g[0, g]]
        out[1, ng_] = keep[alpha_g[1, g]]
        h = alpha_g[2, g]
        if inv[h] < 0:
            out[2, ng_] = keep[h]
        else:
            out[2, ng_] = k + bmap[inv[h]]
    for y in range(nt):
        out[0, k + y] = k + alpha_t[0, y]
        out[1, k + y] = k + alpha_t[1, y]
        out[2, k + y] = k + alpha_t[2, y]
    for s in range(ns):
        y = bmap[s]
        if y < 0:
            continue
        x = img[s]
        h = alpha_g[2, x]
        if h == x:
            out[2, k + y] = k + y
        elif inv[h] >= 0:
            out[2, k + y] = k + bmap[inv[h]]
        else:
            out[2, k + y] = keep[h]
    return out, keep


@njit(cache=True)
def midcurve_bounds(alpha):
    """Whether the mid-curves bound relative to the boundary, mod 2.

    Works on the barycentric-style subdivision without building it: small
    squares are a1-orbits, relative edges are the interior half-edges
    (a2-orbits) and the spokes (a0-orbits).  The sum of all spokes is tested
    for membership in the span of the small-square boundaries by packed
    Gaussian elimination.
    """
    n = alpha.shape[1]
    half = orbit_labels(alpha, 4)
    spoke = orbit_labels(alpha, 1)
    corner = orbit_labels(alpha, 2)
    n_half = 0
    n_spoke = 0
    n_corner = 0
    for d in range(n):
        n_half = max(n_half, half[d] + 1)
        n_spoke = max(n_spoke, spoke[d] + 1)
        n_corner = max(n_corner, corner[d] + 1)
    n_edges = n_half + n_spoke
    words = (n_edges + 63) // 64
    skip = np.zeros(n_half, np.bool_)
    for d in range(n):
        if alpha[2, d] == d:
            skip[half[d]] = True
    rows = np.zeros((n_corner, words), np.uint64)
    one = np.uint64(1)
    for d in range(n):
        e = alpha[1, d]
        if e < d:
            continue
        f = corner[d]
        for k in range(2):
            x = d if k == 0 else e
            h = half[x]
            if not skip[h]:
                rows[f, h // 64] ^= one << np.uint64(h % 64)
            s = n_half + spoke[x]
            rows[f, s // 64] ^= one << np.uint64(s % 64)
    target = np.zeros(words, np.uint64)
    for s in range(n_half, n_edges):
        target[s // 64] ^= one << np.uint64(s % 64)
    # reduce rows to echelon form on the fly, pivot = lowest set bit
    pivot_row = np.full(n_edges, -1, np.int64)
    for r in range(n_corner):
        while True:
            p = -1
            for w in range(words):
                v = rows[r, w]
                if v:
                    b = 0
                    while not (v >> np.uint64(b)) & one:
                        b += 1
                    p = 64 * w + b
                    break
            if p < 0:
                break
            q = pivot_row[p]
            if q < 0:
                pivot_row[p] = r
                break
            for w in range(words):
                rows[r, w] ^= rows[q, w]
    while True:
        p = -1
        for w in range(words):
            v = target[w]
            if v:
                b = 0
                while not (v >> np.uint64(b)) & one:
                    b += 1
                p = 64 * w + b
                break
        if p < 0:
            return True
        q = pivot_row[p]
        if q < 0:
            return False
        for w in range(words):
            target[w] ^= rows[q, w]
