"""Hot loops over int64 arrays, compiled per :mod:`treelabels._backend`.

Every function here is written to run identically under numba's ``njit``
and plain CPython: int64 arrays only, no uint64 (32-bit words live in
int64 storage), shifts below 63 bits, no Python objects.  Bit order and
field formats mirror :mod:`treelabels.bitcodec`; the two are parity-tested.

Conventions: ``put_*`` return the new bit position (target words must be
pre-zeroed), ``read_*`` return ``(new_position, value)`` tuples or plain
values for fixed widths.
"""

import math

import numpy as np

from ._backend import jit

LIMB_BITS = 62
LIMB_MASK = (1 << 62) - 1


# ---------------------------------------------------------------- primitives


@jit
def bit_length(x):
    n = 0
    while x > 0:
        x >>= 1
        n += 1
    return n


@jit
def width_for_k(k):
    # bits for a value in [0, k), clamped to >= 1
    w = bit_length(k - 1)
    if w < 1:
        w = 1
    return w


@jit
def uint_cost_v(v):
    w = width_for_k(v + 1)
    z = bit_length(w - 1)
    return 2 * z + 1 + w


@jit
def read_bits(words, pos, width):
    # width <= 62
    acc = 0
    got = 0
    while got < width:
        p = pos + got
        idx = p >> 5
        bo = p & 31
        take = 32 - bo
        rem = width - got
        if take > rem:
            take = rem
        chunk = (words[idx] >> (32 - bo - take)) & ((1 << take) - 1)
        acc = (acc << take) | chunk
        got += take
    return acc


@jit
def put_bits(words, pos, value, width):
    done = 0
    while done < width:
        p = pos + done
        idx = p >> 5
        bo = p & 31
        take = 32 - bo
        rem = width - done
        if take > rem:
            take = rem
        shift = width - done - take
        chunk = (value >> shift) & ((1 << take) - 1)
        words[idx] |= chunk << (32 - bo - take)
        done += take
    return pos + width


@jit
def put_header(words, pos, k):
    # two-level width header for a value bounded by k; returns (pos, width)
    w = width_for_k(k)
    z = bit_length(w - 1)
    pos = put_bits(words, pos + z, 1, 1)  # z zeros are already there
    pos = put_bits(words, pos, w - 1, z)
    return pos, w


@jit
def put_uint(words, pos, v):
    pos, w = put_header(words, pos, v + 1)
    return put_bits(words, pos, v, w)


@jit
def read_header(words, pos):
    z = 0
    while read_bits(words, pos, 1) == 0:
        z += 1
        pos += 1
    pos += 1
    w = read_bits(words, pos, z) + 1
    return pos + z, w


@jit
def read_uint(words, pos):
    pos, w = read_header(words, pos)
    v = read_bits(words, pos, w)
    return pos + w, v


# --------------------------------------------------------------- tree passes


@jit
def bfs_fill(children_start, children_flat, root, wt, order, depth, distroot):
    """BFS order, hop depth and weighted root distance in one pass.

    ``wt[v]`` is the weight of the edge from v up to its parent (ignored
    at the root).  Returns the number of reached nodes; anything short of
    n means a cycle or an orphaned subtree.
    """
    order[0] = root
    depth[root] = 0
    distroot[root] = 0
    head = 0
    tail = 1
    while head < tail:
        v = order[head]
        head += 1
        for ci in range(children_start[v], children_start[v + 1]):
            c = children_flat[ci]
            depth[c] = depth[v] + 1
            distroot[c] = distroot[v] + wt[c]
            order[tail] = c
            tail += 1
    return tail


@jit
def euler_tour(children_start, children_flat, root, tour, tdepth, first_occ):
    """Iterative Euler tour (2n-1 entries) for sparse-table LCA."""
    n = first_occ.shape[0]
    stack_v = np.empty(n, np.int64)
    stack_ci = np.empty(n, np.int64)
    top = 0
    stack_v[0] = root
    stack_ci[0] = children_start[root]
    tour[0] = root
    tdepth[0] = 0
    first_occ[root] = 0
    t = 1
    while top >= 0:
        v = stack_v[top]
        ci = stack_ci[top]
        if ci < children_start[v + 1]:
            stack_ci[top] = ci + 1
            c = children_flat[ci]
            top += 1
            stack_v[top] = c
            stack_ci[top] = children_start[c]
            first_occ[c] = t
            tour[t] = c
            tdepth[t] = tdepth[first_occ[v]] + 1
            t += 1
        else:
            top -= 1
            if top >= 0:
                p = stack_v[top]
                tour[t] = p
                tdepth[t] = tdepth[first_occ[p]]
                t += 1
    return t


@jit
def subtree_sizes(order, parent, size):
    # size pre-filled with ones; children precede nothing in reverse BFS
    for i in range(order.shape[0] - 1, 0, -1):
        v = order[i]
        size[parent[v]] += size[v]


@jit
def heavy_children(children_start, children_flat, size, heavy):
    # children_flat is id-ascending per parent, so strict > keeps the
    # smallest id among maximal subtrees
    for v in range(children_start.shape[0] - 1):
        best = -1
        bs = 0
        for ci in range(children_start[v], children_start[v + 1]):
            c = children_flat[ci]
            if size[c] > bs:
                bs = size[c]
                best = c
        heavy[v] = best


@jit
def apex_fill(order, parent, is_light, apex, light_depth):
    for i in range(order.shape[0]):
        v = order[i]
        p = parent[v]
        if p < 0:
            apex[v] = v
            light_depth[v] = 1
        elif is_light[v] == 1:
            apex[v] = v
            light_depth[v] = light_depth[p] + 1
        else:
            apex[v] = apex[p]
            light_depth[v] = light_depth[p]


@jit
def walk_dist_pairs(parent, depth, distroot, us, vs, out):
    """Reference distances by parent-pointer walking (the ground truth)."""
    for i in range(us.shape[0]):
        a = us[i]
        b = vs[i]
        s = distroot[a] + distroot[b]
        while depth[a] > depth[b]:
            a = parent[a]
        while depth[b] > depth[a]:
            b = parent[b]
        while a != b:
            a = parent[a]
            b = parent[b]
        out[i] = s - 2 * distroot[a]


# ---------------------------------------------- shared NCA sublabel decoding
#
# Parsed-label arrays: per label i, m[i] light ancestors; segments
# seg_ptr[i]..seg_ptr[i+1] hold (off_val, off_len, rank) per branching;
# (tr_val, tr_len)[i] is the trailer position code.  Position codes are
# order-preserving, so comparing them compares positions along a heavy path.


@jit
def cmp_codes(va, la, vb, lb):
    L = la if la > lb else lb
    a = va << (L - la)
    b = vb << (L - lb)
    if a < b:
        return -1
    if a > b:
        return 1
    if la == lb:
        return 0
    # a proper prefix cannot happen for codes on one path; order by length
    if la < lb:
        return -1
    return 1


@jit
def nca_case(m, seg_ptr, off_val, off_len, rank, tr_val, tr_len, ia, ib):
    """Classify the NCA of two labeled nodes.

    Returns ``(relation, light_side, c)``: relation 0 equal / 1 a is an
    ancestor of b / 2 b is an ancestor of a / 3 divergent; light_side
    (divergent only) 1 a departs the NCA's heavy path by a light edge,
    2 b departs, 3 both depart; c = number of matching segment pairs,
    so the NCA lies on the heavy path of common light ancestor c+1.
    """
    na = m[ia] - 1
    nb = m[ib] - 1
    pa = seg_ptr[ia]
    pb = seg_ptr[ib]
    c = 0
    while c < na and c < nb:
        if (
            off_len[pa + c] == off_len[pb + c]
            and off_val[pa + c] == off_val[pb + c]
            and rank[pa + c] == rank[pb + c]
        ):
            c += 1
        else:
            break
    if c == na and c == nb:
        cc = cmp_codes(tr_val[ia], tr_len[ia], tr_val[ib], tr_len[ib])
        if cc == 0:
            return 0, 0, c
        if cc < 0:
            return 1, 0, c
        return 2, 0, c
    if c == na:
        # a rests on the path from which b departs
        cc = cmp_codes(tr_val[ia], tr_len[ia], off_val[pb + c], off_len[pb + c])
        if cc <= 0:
            return 1, 0, c
        return 3, 2, c
    if c == nb:
        cc = cmp_codes(off_val[pa + c], off_len[pa + c], tr_val[ib], tr_len[ib])
        if cc >= 0:
            return 2, 0, c
        return 3, 1, c
    cc = cmp_codes(
        off_val[pa + c], off_len[pa + c], off_val[pb + c], off_len[pb + c]
    )
    if cc < 0:
        return 3, 1, c
    if cc > 0:
        return 3, 2, c
    return 3, 3, c


# ------------------------------------------------------------- exact scheme
#
# Label layout: uint(n) | distroot in width_for(n) bits | uint(m) |
# per branching j=1..m-1: uint(len) + code + uint(light rank) |
# uint(len) + trailer code | distances to light ancestors, entry i in
# width_for(n) - (i-1) bits (top-down, so widths shrink as subtrees do).


@jit
def _chain_fill(v, parent, nearest_light, chain):
    # bottom-up light ancestors of v, including v itself when light
    cnt = 0
    a = nearest_light[v]
    while True:
        chain[cnt] = a
        cnt += 1
        p = parent[a]
        if p < 0:
            break
        a = nearest_light[p]
    return cnt


@jit
def exact_sizes(n, W, parent, nearest_light, pos_len, light_rank, out_bits):
    chain = np.empty(70, np.int64)
    for v in range(n):
        cnt = _chain_fill(v, parent, nearest_light, chain)
        bits = uint_cost_v(n) + W + uint_cost_v(cnt)
        for j in range(1, cnt):
            lc = chain[cnt - 1 - j]
            dep = parent[lc]
            bits += uint_cost_v(pos_len[dep]) + pos_len[dep]
            bits += uint_cost_v(light_rank[lc])
        bits += uint_cost_v(pos_len[v]) + pos_len[v]
        for i in range(1, cnt + 1):
            bits += W - (i - 1)
        out_bits[v] = bits


@jit
def exact_fill(
    n,
    W,
    parent,
    depth,
    nearest_light,
    pos_val,
    pos_len,
    light_rank,
    starts,
    words,
):
    """Emit all labels of one tree into pre-zeroed words; returns end bits."""
    ends = np.empty(n, np.int64)
    chain = np.empty(70, np.int64)
    for v in range(n):
        cnt = _chain_fill(v, parent, nearest_light, chain)
        pos = starts[v]
        pos = put_uint(words, pos, n)
        pos = put_bits(words, pos, depth[v], W)
        pos = put_uint(words, pos, cnt)
        for j in range(1, cnt):
            lc = chain[cnt - 1 - j]
            dep = parent[lc]
            pos = put_uint(words, pos, pos_len[dep])
            pos = put_bits(words, pos, pos_val[dep], pos_len[dep])
            pos = put_uint(words, pos, light_rank[lc])
        pos = put_uint(words, pos, pos_len[v])
        pos = put_bits(words, pos, pos_val[v], pos_len[v])
        for i in range(1, cnt + 1):
            a = chain[cnt - i]
            pos = put_bits(words, pos, depth[v] - depth[a], W - (i - 1))
        ends[v] = pos
    return ends


@jit
def exact_parse_counts(words, starts, lab_n, lab_dr, lab_m):
    for i in range(starts.shape[0]):
        pos = starts[i]
        pos, n = read_uint(words, pos)
        W = width_for_k(n)
        lab_dr[i] = read_bits(words, pos, W)
        pos += W
        pos, mv = read_uint(words, pos)
        lab_n[i] = n
        lab_m[i] = mv


@jit
def exact_parse_fill(
    words,
    starts,
    seg_ptr,
    off_val,
    off_len,
    rank,
    tr_val,
    tr_len,
    dist_ptr,
    dists,
):
    for i in range(starts.shape[0]):
        pos = starts[i]
        pos, n = read_uint(words, pos)
        W = width_for_k(n)
        pos += W
        pos, mv = read_uint(words, pos)
        sp = seg_ptr[i]
        for j in range(mv - 1):
            pos, ln = read_uint(words, pos)
            off_len[sp + j] = ln
            off_val[sp + j] = read_bits(words, pos, ln)
            pos += ln
            pos, rk = read_uint(words, pos)
            rank[sp + j] = rk
        pos, ln = read_uint(words, pos)
        tr_len[i] = ln
        tr_val[i] = read_bits(words, pos, ln)
        pos += ln
        dp = dist_ptr[i]
        for t in range(mv):
            wd = W - t
            dists[dp + t] = read_bits(words, pos, wd)
            pos += wd


@jit
def exact_combine(
    lab_dr,
    lab_m,
    seg_ptr,
    off_val,
    off_len,
    rank,
    tr_val,
    tr_len,
    dist_ptr,
    dists,
    us,
    vs,
    out,
):
    for i in range(us.shape[0]):
        ia = us[i]
        ib = vs[i]
        rel, side, c = nca_case(
            lab_m, seg_ptr, off_val, off_len, rank, tr_val, tr_len, ia, ib
        )
        if rel == 0:
            out[i] = 0
        elif rel == 1:
            out[i] = lab_dr[ib] - lab_dr[ia]
        elif rel == 2:
            out[i] = lab_dr[ia] - lab_dr[ib]
        else:
            # chain entry c+2 (1-based) is the light ancestor just below
            # the NCA on the departing side; +1 crosses its light edge
            if side == 1:
                out[i] = (
                    lab_dr[ib]
                    - lab_dr[ia]
                    + 2 * (dists[dist_ptr[ia] + c + 1] + 1)
                )
            elif side == 2:
                out[i] = (
                    lab_dr[ia]
                    - lab_dr[ib]
                    + 2 * (dists[dist_ptr[ib] + c + 1] + 1)
                )
            else:
                out[i] = (
                    dists[dist_ptr[ia] + c + 1]
                    + dists[dist_ptr[ib] + c + 1]
                    + 2
                )


# ------------------------------------------------------------ approx scheme
#
# Label layout: eps_fp in 16 bits | uint(distroot) | uint(m) | segments and
# trailer as in the exact scheme | S, a 0/1 stream running to the label end.
# S walks proper light ancestors bottom-up emitting ones while the next
# threshold is below the true distance, then one zero per ancestor.


@jit
def threshold_fill(eps_fp, out):
    """Distinct values of ceil((1+eps_fp/2^13)^i), starting at t_0 = 1.

    Fills ``out`` until capacity or overflow guard; returns the count.
    """
    growth = 1.0 + eps_fp * (2.0 ** -13)
    cap = out.shape[0]
    out[0] = 1
    cnt = 1
    p = 1.0
    last = 1
    while cnt < cap:
        p = p * growth
        if p > 4.0e18:
            break
        t = int(math.ceil(p))
        if t > last:
            out[cnt] = t
            last = t
            cnt += 1
    return cnt


@jit
def _proper_light_start(v, parent, nearest_light):
    a = nearest_light[v]
    if a == v:
        p = parent[v]
        if p < 0:
            return -1
        a = nearest_light[p]
    return a


@jit
def approx_sizes(
    n, parent, depth, nearest_light, pos_len, light_rank, thresholds, out_bits
):
    chain = np.empty(70, np.int64)
    for v in range(n):
        cnt = _chain_fill(v, parent, nearest_light, chain)
        bits = 16 + uint_cost_v(depth[v]) + uint_cost_v(cnt)
        for j in range(1, cnt):
            lc = chain[cnt - 1 - j]
            dep = parent[lc]
            bits += uint_cost_v(pos_len[dep]) + pos_len[dep]
            bits += uint_cost_v(light_rank[lc])
        bits += uint_cost_v(pos_len[v]) + pos_len[v]
        # S: one zero per proper light ancestor plus threshold-crossing ones
        a = _proper_light_start(v, parent, nearest_light)
        j = 0
        while a >= 0:
            d = depth[v] - depth[a]
            while thresholds[j] < d:
                bits += 1
                j += 1
            bits += 1
            p = parent[a]
            a = -1 if p < 0 else nearest_light[p]
        out_bits[v] = bits


@jit
def s_bits_fill(n, parent, depth, nearest_light, thresholds, out_bits):
    """Length of each label's trailing unary stream alone, in bits."""
    for v in range(n):
        bits = 0
        a = _proper_light_start(v, parent, nearest_light)
        j = 0
        while a >= 0:
            d = depth[v] - depth[a]
            while thresholds[j] < d:
                bits += 1
                j += 1
            bits += 1
            p = parent[a]
            a = -1 if p < 0 else nearest_light[p]
        out_bits[v] = bits


@jit
def approx_fill(
    n,
    eps_fp,
    parent,
    depth,
    nearest_light,
    pos_val,
    pos_len,
    light_rank,
    thresholds,
    starts,
    words,
):
    ends = np.empty(n, np.int64)
    chain = np.empty(70, np.int64)
    for v in range(n):
        cnt = _chain_fill(v, parent, nearest_light, chain)
        pos = starts[v]
        pos = put_bits(words, pos, eps_fp, 16)
        pos = put_uint(words, pos, depth[v])
        pos = put_uint(words, pos, cnt)
        for j in range(1, cnt):
            lc = chain[cnt - 1 - j]
            dep = parent[lc]
            pos = put_uint(words, pos, pos_len[dep])
            pos = put_bits(words, pos, pos_val[dep], pos_len[dep])
            pos = put_uint(words, pos, light_rank[lc])
        pos = put_uint(words, pos, pos_len[v])
        pos = put_bits(words, pos, pos_val[v], pos_len[v])
        a = _proper_light_start(v, parent, nearest_light)
        j = 0
        while a >= 0:
            d = depth[v] - depth[a]
            while thresholds[j] < d:
                pos = put_bits(words, pos, 1, 1)
                j += 1
            pos = put_bits(words, pos, 0, 1)
            p = parent[a]
            a = -1 if p < 0 else nearest_light[p]
        ends[v] = pos
    return ends


@jit
def approx_parse_counts(words, starts, nbits, lab_eps, lab_dr, lab_m, lab_z):
    """First pass; returns the max ones-count over all labels' S streams."""
    max_ones = 0
    for i in range(starts.shape[0]):
        pos = starts[i]
        eps_fp = read_bits(words, pos, 16)
        pos += 16
        pos, dr = read_uint(words, pos)
        pos, mv = read_uint(words, pos)
        for j in range(mv - 1):
            pos, ln = read_uint(words, pos)
            pos += ln
            pos, _rk = read_uint(words, pos)
        pos, ln = read_uint(words, pos)
        pos += ln
        zeros = 0
        ones = 0
        end = starts[i] + nbits[i]
        while pos < end:
            if read_bits(words, pos, 1) == 0:
                zeros += 1
            else:
                ones += 1
            pos += 1
        if ones > max_ones:
            max_ones = ones
        lab_eps[i] = eps_fp
        lab_dr[i] = dr
        lab_m[i] = mv
        lab_z[i] = zeros
    return max_ones


@jit
def approx_parse_fill(
    words,
    starts,
    nbits,
    seg_ptr,
    off_val,
    off_len,
    rank,
    tr_val,
    tr_len,
    zero_ptr,
    ones_before,
):
    for i in range(starts.shape[0]):
        pos = starts[i] + 16
        pos, _dr = read_uint(words, pos)
        pos, mv = read_uint(words, pos)
        sp = seg_ptr[i]
        for j in range(mv - 1):
            pos, ln = read_uint(words, pos)
            off_len[sp + j] = ln
            off_val[sp + j] = read_bits(words, pos, ln)
            pos += ln
            pos, rk = read_uint(words, pos)
            rank[sp + j] = rk
        pos, ln = read_uint(words, pos)
        tr_len[i] = ln
        tr_val[i] = read_bits(words, pos, ln)
        pos += ln
        zp = zero_ptr[i]
        ones = 0
        end = starts[i] + nbits[i]
        while pos < end:
            if read_bits(words, pos, 1) == 0:
                ones_before[zp] = ones
                zp += 1
            else:
                ones += 1
            pos += 1


@jit
def _alpha_sub(zeros_i, zero_base, ones_before, idx, thresholds):
    # bottom-up rank of chain entry idx among proper light ancestors;
    # rank 0 means the entry is the node itself (exact, alpha 0)
    r = zeros_i - idx + 1
    if r <= 0:
        return 0
    j = ones_before[zero_base + r - 1]
    return thresholds[j]


@jit
def approx_combine(
    lab_dr,
    lab_m,
    lab_z,
    seg_ptr,
    off_val,
    off_len,
    rank,
    tr_val,
    tr_len,
    zero_ptr,
    ones_before,
    thresholds,
    us,
    vs,
    out,
):
    for i in range(us.shape[0]):
        ia = us[i]
        ib = vs[i]
        rel, side, c = nca_case(
            lab_m, seg_ptr, off_val, off_len, rank, tr_val, tr_len, ia, ib
        )
        if rel == 0:
            out[i] = 0
        elif rel == 1:
            out[i] = lab_dr[ib] - lab_dr[ia]
        elif rel == 2:
            out[i] = lab_dr[ia] - lab_dr[ib]
        else:
            idx = c + 2
            if side == 1:
                au = _alpha_sub(
                    lab_z[ia], zero_ptr[ia], ones_before, idx, thresholds
                )
                out[i] = lab_dr[ib] - lab_dr[ia] + 2 * (au + 1)
            elif side == 2:
                av = _alpha_sub(
                    lab_z[ib], zero_ptr[ib], ones_before, idx, thresholds
                )
                out[i] = lab_dr[ia] - lab_dr[ib] + 2 * (av + 1)
            else:
                au = _alpha_sub(
                    lab_z[ia], zero_ptr[ia], ones_before, idx, thresholds
                )
                av = _alpha_sub(
                    lab_z[ib], zero_ptr[ib], ones_before, idx, thresholds
                )
                out[i] = au + av + 2


# ----------------------------------------------- shared-offset path sublabel
#
# Sublabel: width header for the segment count bound | segment index |
# the (L - ell)-bit value with the index'd ell-bit segment removed.
# Values are rebuilt in two 62-bit limbs since L may reach 124.


@jit
def path_value_at(words, pos, ell, L):
    pos, wi = read_header(words, pos)
    seg = read_bits(words, pos, wi)
    pos += wi
    lo_start = seg * ell
    lo_end = lo_start + ell
    hi = 0
    lo = 0
    rpos = pos
    for t in range(L - 1, -1, -1):
        if lo_start <= t and t < lo_end:
            b = 0
        else:
            b = read_bits(words, rpos, 1)
            rpos += 1
        hi = (hi << 1) | (lo >> (LIMB_BITS - 1))
        lo = ((lo << 1) | b) & LIMB_MASK
    return hi, lo, rpos


@jit
def path_combine(words, starts, ell, L, us, vs, out):
    for i in range(us.shape[0]):
        ha, la, _pa = path_value_at(words, starts[us[i]], ell, L)
        hb, lb, _pb = path_value_at(words, starts[vs[i]], ell, L)
        if ha < hb or (ha == hb and la < lb):
            ha, la, hb, lb = hb, lb, ha, la
        lo = la - lb
        hi = ha - hb
        if lo < 0:
            lo += 1 << LIMB_BITS
            hi -= 1
        # distances fit one limb even when packed values do not
        out[i] = lo


# --------------------------------------------------------- caterpillar labels
#
# Flags (kind, group), then: spine = D field; group-1 leaf = shared-offset
# sublabel + sibling id; group-2 leaf = D field + sibling id.  D fields
# store spine position + x so all positions share one coordinate.


@jit
def cat_parse(
    words, starts, g, ell, L, w_d, w_sib1, w_sib2, kind_out, d_out, sib_out
):
    for i in range(starts.shape[0]):
        pos = starts[i]
        kind = read_bits(words, pos, 1)
        pos += 1
        grp = read_bits(words, pos, 1)
        pos += 1
        if kind == 0:
            d_out[i] = read_bits(words, pos, w_d)
            sib_out[i] = -1
        elif grp == 0:
            hi, lo, pos2 = path_value_at(words, pos, ell, L)
            d_out[i] = lo
            sib_out[i] = read_bits(words, pos2, w_sib1)
        else:
            d_out[i] = read_bits(words, pos, w_d)
            pos += w_d
            sib_out[i] = read_bits(words, pos, w_sib2)
        kind_out[i] = kind


@jit
def cat_combine(kind, d, sib, us, vs, out):
    for i in range(us.shape[0]):
        a = us[i]
        b = vs[i]
        delta = d[a] - d[b]
        if delta < 0:
            delta = -delta
        hops = kind[a] + kind[b]
        if delta == 0:
            if hops == 0:
                out[i] = 0
            elif hops == 1:
                out[i] = 1
            elif sib[a] == sib[b]:
                out[i] = 0
            else:
                out[i] = 2
        else:
            out[i] = delta + hops
