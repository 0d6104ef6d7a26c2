"""Array kernels for the automaton algebra.

Automata are stored in CSR form: indptr (int64, n+1), letters (int32) and
targets (int32) sorted by (state, letter), an accepting mask (uint8) and a
single initial state. Missing transitions are an implicit dead sink.

Every kernel below is a self-contained loop over plain numpy arrays, so the
same source compiles under numba and also runs unmodified as ordinary
Python (set OBD_PURE_PYTHON=1 to force that; it is slow but identical).
"""
from __future__ import annotations

import os

import numpy as np

try:
    if os.environ.get("OBD_PURE_PYTHON"):
        raise ImportError("pure python requested")
    from numba import njit as _numba_njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via OBD_PURE_PYTHON
    HAVE_NUMBA = False


def njit(fn):
    if HAVE_NUMBA:
        return _numba_njit(cache=True)(fn)
    return fn


_MASK63 = 0x7FFFFFFFFFFFFFFF


@njit
def _grow_i32(arr, need):
    if need <= arr.size:
        return arr
    cap = arr.size if arr.size > 0 else 16
    while cap < need:
        cap *= 2
    out = np.empty(cap, np.int32)
    out[: arr.size] = arr
    return out


@njit
def _grow_i64(arr, need):
    if need <= arr.size:
        return arr
    cap = arr.size if arr.size > 0 else 16
    while cap < need:
        cap *= 2
    out = np.empty(cap, np.int64)
    out[: arr.size] = arr
    return out


@njit
def _grow_u8(arr, need):
    if need <= arr.size:
        return arr
    cap = arr.size if arr.size > 0 else 16
    while cap < need:
        cap *= 2
    out = np.empty(cap, np.uint8)
    out[: arr.size] = arr
    return out


@njit
def _mix(key):
    # one xorshift-multiply round; masked so numba int64 and python ints agree
    k = int(key)
    h = (k ^ (k >> 31)) & _MASK63
    h = (h * 0x9E3779B97F4A7C) & _MASK63
    return h


# ---------------------------------------------------------------------------
# pairwise product  (mode: 0 and, 1 or, 2 xor, 3 andnot)
# ---------------------------------------------------------------------------

@njit
def pair_product(ia, la, ta, aa, inita, ib, lb, tb, ab, initb, mode):
    nb = ab.size
    need_a = mode == 0 or mode == 3  # left side must stay alive
    need_b = mode == 0  # right side must stay alive

    cap = 1024
    tkeys = np.full(cap, -1, np.int64)
    tvals = np.empty(cap, np.int32)

    pcap = 256
    pa = np.empty(pcap, np.int32)
    pb = np.empty(pcap, np.int32)
    npairs = 0

    ecap = 1024
    out_letters = np.empty(ecap, np.int32)
    out_targets = np.empty(ecap, np.int32)
    nedges = 0
    indptr = np.empty(pcap + 1, np.int64)
    indptr[0] = 0

    # seed with the initial pair
    key0 = (np.int64(inita) + 1) * (nb + 2) + (initb + 1)
    slot = _mix(key0) & (cap - 1)
    tkeys[slot] = key0
    tvals[slot] = 0
    pa[0] = inita
    pb[0] = initb
    npairs = 1

    cur = 0
    while cur < npairs:
        sa = pa[cur]
        sb = pb[cur]
        i0 = ia[sa] if sa >= 0 else 0
        i1 = ia[sa + 1] if sa >= 0 else 0
        j0 = ib[sb] if sb >= 0 else 0
        j1 = ib[sb + 1] if sb >= 0 else 0
        i = i0
        j = j0
        while i < i1 or j < j1:
            la_i = la[i] if i < i1 else np.int32(2**31 - 1)
            lb_j = lb[j] if j < j1 else np.int32(2**31 - 1)
            if la_i < lb_j:
                letter, na_t, nb_t = la_i, ta[i], np.int32(-1)
                i += 1
            elif lb_j < la_i:
                letter, na_t, nb_t = lb_j, np.int32(-1), tb[j]
                j += 1
            else:
                letter, na_t, nb_t = la_i, ta[i], tb[j]
                i += 1
                j += 1
            if need_a and na_t < 0:
                continue
            if need_b and nb_t < 0:
                continue
            # intern the successor pair
            key = (np.int64(na_t) + 1) * (nb + 2) + (nb_t + 1)
            # grow the table before the load factor hurts
            if (npairs + 1) * 10 > cap * 7:
                ncap = cap * 2
                nk = np.full(ncap, -1, np.int64)
                nv = np.empty(ncap, np.int32)
                for s in range(cap):
                    k = tkeys[s]
                    if k != -1:
                        t = _mix(k) & (ncap - 1)
                        while nk[t] != -1:
                            t = (t + 1) & (ncap - 1)
                        nk[t] = k
                        nv[t] = tvals[s]
                tkeys, tvals, cap = nk, nv, ncap
            slot = _mix(key) & (cap - 1)
            while True:
                k = tkeys[slot]
                if k == -1:
                    tkeys[slot] = key
                    tvals[slot] = npairs
                    pa = _grow_i32(pa, npairs + 1)
                    pb = _grow_i32(pb, npairs + 1)
                    pa[npairs] = na_t
                    pb[npairs] = nb_t
                    pid = npairs
                    npairs += 1
                    break
                if k == key:
                    pid = tvals[slot]
                    break
                slot = (slot + 1) & (cap - 1)
            out_letters = _grow_i32(out_letters, nedges + 1)
            out_targets = _grow_i32(out_targets, nedges + 1)
            out_letters[nedges] = letter
            out_targets[nedges] = pid
            nedges += 1
        indptr = _grow_i64(indptr, cur + 2)
        indptr[cur + 1] = nedges
        cur += 1

    acc = np.zeros(npairs, np.uint8)
    for k in range(npairs):
        fa = pa[k] >= 0 and aa[pa[k]] != 0
        fb = pb[k] >= 0 and ab[pb[k]] != 0
        if mode == 0:
            ok = fa and fb
        elif mode == 1:
            ok = fa or fb
        elif mode == 2:
            ok = fa != fb
        else:
            ok = fa and not fb
        if ok:
            acc[k] = 1
    return indptr[: npairs + 1].copy(), out_letters[:nedges].copy(), out_targets[:nedges].copy(), acc


# ---------------------------------------------------------------------------
# trim: keep states reachable from the initial state and co-reachable
# from an accepting state
# ---------------------------------------------------------------------------

@njit
def trim(indptr, letters, targets, acc, initial):
    n = acc.size
    m = letters.size
    fwd = np.zeros(n, np.uint8)
    stack = np.empty(n, np.int32)
    top = 0
    fwd[initial] = 1
    stack[top] = initial
    top += 1
    while top > 0:
        top -= 1
        s = stack[top]
        for e in range(indptr[s], indptr[s + 1]):
            t = targets[e]
            if fwd[t] == 0:
                fwd[t] = 1
                stack[top] = t
                top += 1
    # reverse adjacency by counting sort on targets
    rcount = np.zeros(n + 1, np.int64)
    for e in range(m):
        rcount[targets[e] + 1] += 1
    for s in range(n):
        rcount[s + 1] += rcount[s]
    rsrc = np.empty(m, np.int32)
    fill = rcount.copy()
    for s in range(n):
        for e in range(indptr[s], indptr[s + 1]):
            t = targets[e]
            rsrc[fill[t]] = s
            fill[t] += 1
    bwd = np.zeros(n, np.uint8)
    top = 0
    for s in range(n):
        if acc[s] != 0:
            bwd[s] = 1
            stack[top] = s
            top += 1
    while top > 0:
        top -= 1
        s = stack[top]
        for e in range(rcount[s], rcount[s + 1]):
            t = rsrc[e]
            if bwd[t] == 0:
                bwd[t] = 1
                stack[top] = t
                top += 1
    remap = np.full(n, -1, np.int32)
    nkeep = 0
    for s in range(n):
        if fwd[s] != 0 and bwd[s] != 0:
            remap[s] = nkeep
            nkeep += 1
    if nkeep == 0 or remap[initial] < 0:
        return (np.zeros(1, np.int64), np.empty(0, np.int32), np.empty(0, np.int32),
                np.zeros(0, np.uint8), np.int64(0), False)
    new_indptr = np.empty(nkeep + 1, np.int64)
    new_indptr[0] = 0
    nedges = 0
    for s in range(n):
        if remap[s] < 0:
            continue
        for e in range(indptr[s], indptr[s + 1]):
            if remap[targets[e]] >= 0:
                nedges += 1
        new_indptr[remap[s] + 1] = nedges
    new_letters = np.empty(nedges, np.int32)
    new_targets = np.empty(nedges, np.int32)
    new_acc = np.zeros(nkeep, np.uint8)
    pos = 0
    for s in range(n):
        ns = remap[s]
        if ns < 0:
            continue
        new_acc[ns] = acc[s]
        for e in range(indptr[s], indptr[s + 1]):
            nt = remap[targets[e]]
            if nt >= 0:
                new_letters[pos] = letters[e]
                new_targets[pos] = nt
                pos += 1
    return new_indptr, new_letters, new_targets, new_acc, np.int64(remap[initial]), True


# ---------------------------------------------------------------------------
# Moore minimization: refine a labelled partition to the Nerode congruence.
# Input must already be trimmed; the implicit sink is its own class.
# ---------------------------------------------------------------------------

@njit
def min_blocks(indptr, letters, targets, labels):
    n = labels.size
    # densify the starting labels
    block = np.empty(n, np.int32)
    cap = 1024
    tkeys = np.full(cap, -1, np.int64)
    tvals = np.empty(cap, np.int32)
    nblocks = 0
    for s in range(n):
        v = int(labels[s])
        key = 2 * v if v >= 0 else -2 * v - 1  # zigzag: any label, never -1
        slot = _mix(key) & (cap - 1)
        while True:
            k = tkeys[slot]
            if k == -1:
                tkeys[slot] = key
                tvals[slot] = nblocks
                block[s] = nblocks
                nblocks += 1
                break
            if k == key:
                block[s] = tvals[slot]
                break
            slot = (slot + 1) & (cap - 1)
        if (nblocks + 1) * 10 > cap * 7:
            ncap = cap * 2
            nk = np.full(ncap, -1, np.int64)
            nv = np.empty(ncap, np.int32)
            for t in range(cap):
                k = tkeys[t]
                if k != -1:
                    u = _mix(k) & (ncap - 1)
                    while nk[u] != -1:
                        u = (u + 1) & (ncap - 1)
                    nk[u] = k
                    nv[u] = tvals[t]
            tkeys, tvals, cap = nk, nv, ncap

    newblock = np.empty(n, np.int32)
    while True:
        # record for s: [block[s], letter, block[target], ...]; rows are
        # letter sorted so equal functions give identical records
        vcap = 4096
        buf = np.empty(vcap, np.int32)
        hcap = 2048
        hkeys = np.full(hcap, -1, np.int64)
        hoff = np.empty(hcap, np.int64)
        hlen = np.empty(hcap, np.int64)
        hval = np.empty(hcap, np.int32)
        used = 0
        tail = np.int64(0)
        nnew = 0
        for s in range(n):
            deg = indptr[s + 1] - indptr[s]
            rlen = 1 + 2 * deg
            buf = _grow_i32(buf, tail + rlen)
            buf[tail] = block[s]
            w = tail + 1
            for e in range(indptr[s], indptr[s + 1]):
                buf[w] = letters[e]
                buf[w + 1] = block[targets[e]]
                w += 2
            h = 1469598103934665603 & _MASK63
            for i in range(tail, tail + rlen):
                h = ((h ^ (int(buf[i]) & 0xFFFFFFFF)) * 0x100000001B3) & _MASK63
            if (used + 1) * 10 > hcap * 7:
                ncap = hcap * 2
                nk = np.full(ncap, -1, np.int64)
                no = np.empty(ncap, np.int64)
                nl = np.empty(ncap, np.int64)
                nv = np.empty(ncap, np.int32)
                for t in range(hcap):
                    k = hkeys[t]
                    if k != -1:
                        u = k & (ncap - 1)
                        while nk[u] != -1:
                            u = (u + 1) & (ncap - 1)
                        nk[u] = k
                        no[u] = hoff[t]
                        nl[u] = hlen[t]
                        nv[u] = hval[t]
                hkeys, hoff, hlen, hval, hcap = nk, no, nl, nv, ncap
            slot = h & (hcap - 1)
            while True:
                k = hkeys[slot]
                if k == -1:
                    hkeys[slot] = h
                    hoff[slot] = tail
                    hlen[slot] = rlen
                    hval[slot] = nnew
                    newblock[s] = nnew
                    nnew += 1
                    used += 1
                    tail += rlen  # commit the staged record
                    break
                if k == h and hlen[slot] == rlen:
                    same = True
                    o = hoff[slot]
                    for i in range(rlen):
                        if buf[o + i] != buf[tail + i]:
                            same = False
                            break
                    if same:
                        newblock[s] = hval[slot]
                        break
                slot = (slot + 1) & (hcap - 1)
        if nnew == nblocks:
            return block
        nblocks = nnew
        block, newblock = newblock.copy(), block


# ---------------------------------------------------------------------------
# quotient by a stable partition, then canonical BFS numbering
# ---------------------------------------------------------------------------

@njit
def quotient(indptr, letters, targets, acc, block, nblocks, initial):
    n = acc.size
    rep = np.full(nblocks, -1, np.int32)
    for s in range(n):
        if rep[block[s]] < 0:
            rep[block[s]] = s
    new_indptr = np.empty(nblocks + 1, np.int64)
    new_indptr[0] = 0
    nedges = 0
    for b in range(nblocks):
        s = rep[b]
        nedges += indptr[s + 1] - indptr[s]
        new_indptr[b + 1] = nedges
    new_letters = np.empty(nedges, np.int32)
    new_targets = np.empty(nedges, np.int32)
    new_acc = np.zeros(nblocks, np.uint8)
    pos = 0
    for b in range(nblocks):
        s = rep[b]
        new_acc[b] = acc[s]
        for e in range(indptr[s], indptr[s + 1]):
            new_letters[pos] = letters[e]
            new_targets[pos] = block[targets[e]]
            pos += 1
    return new_indptr, new_letters, new_targets, new_acc, np.int64(block[initial]), rep


@njit
def bfs_renumber(indptr, letters, targets, acc, initial):
    """Relabel states in BFS discovery order (rows are letter sorted, so
    the numbering is canonical for isomorphic automata)."""
    n = acc.size
    pos = np.full(n, -1, np.int32)
    order = np.empty(n, np.int32)
    pos[initial] = 0
    order[0] = initial
    found = 1
    head = 0
    while head < found:
        s = order[head]
        head += 1
        for e in range(indptr[s], indptr[s + 1]):
            t = targets[e]
            if pos[t] < 0:
                pos[t] = found
                order[found] = t
                found += 1
    # input is normally trimmed, but tolerate unreachable states: they are
    # simply dropped from the renumbered automaton
    new_indptr = np.empty(found + 1, np.int64)
    new_indptr[0] = 0
    m = letters.size
    new_letters = np.empty(m, np.int32)
    new_targets = np.empty(m, np.int32)
    new_acc = np.empty(found, np.uint8)
    w = 0
    for k in range(found):
        s = order[k]
        new_acc[k] = acc[s]
        for e in range(indptr[s], indptr[s + 1]):
            new_letters[w] = letters[e]
            new_targets[w] = pos[targets[e]]
            w += 1
        new_indptr[k + 1] = w
    return new_indptr, new_letters[:w].copy(), new_targets[:w].copy(), new_acc, order[:found].copy()


# ---------------------------------------------------------------------------
# subset construction (also handles projection via letter_map and the
# leading-zero closure that keeps projected languages padding closed)
# ---------------------------------------------------------------------------

@njit
def determinize(indptr, letters, targets, acc, init_states, letter_map, zero_close):
    n = acc.size
    in_init = np.zeros(n, np.uint8)
    stack = np.empty(n, np.int32)
    top = 0
    for i in range(init_states.size):
        s = init_states[i]
        if in_init[s] == 0:
            in_init[s] = 1
            stack[top] = s
            top += 1
    if zero_close:
        while top > 0:
            top -= 1
            s = stack[top]
            for e in range(indptr[s], indptr[s + 1]):
                if letter_map[letters[e]] == 0:
                    t = targets[e]
                    if in_init[t] == 0:
                        in_init[t] = 1
                        stack[top] = t
                        top += 1
    nroot = 0
    for s in range(n):
        if in_init[s] != 0:
            nroot += 1
    root = np.empty(nroot, np.int32)
    w = 0
    for s in range(n):
        if in_init[s] != 0:
            root[w] = s
            w += 1

    # variable-length intern table over sorted member lists
    bcap = max(1024, nroot * 2)
    buf = np.empty(bcap, np.int32)
    offs = np.empty(256, np.int64)
    offs[0] = 0
    hcap = 1024
    hkeys = np.full(hcap, -1, np.int64)
    hval = np.empty(hcap, np.int32)
    nsets = 0
    tail = np.int64(0)

    buf[:nroot] = root
    h = 1469598103934665603 & _MASK63
    for i in range(nroot):
        h = ((h ^ (int(buf[i]) & 0xFFFFFFFF)) * 0x100000001B3) & _MASK63
    slot = h & (hcap - 1)
    hkeys[slot] = h
    hval[slot] = 0
    offs[1] = nroot
    tail = nroot
    nsets = 1

    ecap = 1024
    out_letters = np.empty(ecap, np.int32)
    out_targets = np.empty(ecap, np.int32)
    nedges = 0
    out_indptr = np.empty(256, np.int64)
    out_indptr[0] = 0

    gcap = 1024
    gkeys = np.empty(gcap, np.int64)

    cur = 0
    while cur < nsets:
        lo = offs[cur]
        hi = offs[cur + 1]
        total = 0
        for i in range(lo, hi):
            s = buf[i]
            total += indptr[s + 1] - indptr[s]
        gkeys = _grow_i64(gkeys, total)
        w = 0
        for i in range(lo, hi):
            s = buf[i]
            for e in range(indptr[s], indptr[s + 1]):
                gkeys[w] = np.int64(letter_map[letters[e]]) * n + targets[e]
                w += 1
        keys = np.sort(gkeys[:total])
        # walk groups of equal letter
        g = 0
        while g < total:
            if g > 0 and keys[g] == keys[g - 1]:
                g += 1
                continue
            letter = keys[g] // n
            # stage the member list (deduped, sorted) at buf[tail:]
            rlen = 0
            gg = g
            prev = np.int64(-1)
            while gg < total and keys[gg] // n == letter:
                if keys[gg] != prev:
                    buf = _grow_i32(buf, tail + rlen + 1)
                    buf[tail + rlen] = np.int32(keys[gg] % n)
                    rlen += 1
                    prev = keys[gg]
                gg += 1
            h = 1469598103934665603 & _MASK63
            for i in range(tail, tail + rlen):
                h = ((h ^ (int(buf[i]) & 0xFFFFFFFF)) * 0x100000001B3) & _MASK63
            if (nsets + 1) * 10 > hcap * 7:
                ncap = hcap * 2
                nk = np.full(ncap, -1, np.int64)
                nv = np.empty(ncap, np.int32)
                for t in range(hcap):
                    k = hkeys[t]
                    if k != -1:
                        u = k & (ncap - 1)
                        while nk[u] != -1:
                            u = (u + 1) & (ncap - 1)
                        nk[u] = k
                        nv[u] = hval[t]
                hkeys, hval, hcap = nk, nv, ncap
            slot = h & (hcap - 1)
            while True:
                k = hkeys[slot]
                if k == -1:
                    hkeys[slot] = h
                    hval[slot] = nsets
                    offs = _grow_i64(offs, nsets + 2)
                    offs[nsets + 1] = tail + rlen
                    tail += rlen
                    sid = nsets
                    nsets += 1
                    break
                if k == h:
                    cand = hval[slot]
                    clo = offs[cand]
                    if offs[cand + 1] - clo == rlen:
                        same = True
                        for i in range(rlen):
                            if buf[clo + i] != buf[tail + i]:
                                same = False
                                break
                        if same:
                            sid = cand
                            break
                slot = (slot + 1) & (hcap - 1)
            out_letters = _grow_i32(out_letters, nedges + 1)
            out_targets = _grow_i32(out_targets, nedges + 1)
            out_letters[nedges] = np.int32(letter)
            out_targets[nedges] = sid
            nedges += 1
            g = gg
        out_indptr = _grow_i64(out_indptr, cur + 2)
        out_indptr[cur + 1] = nedges
        cur += 1

    out_acc = np.zeros(nsets, np.uint8)
    for k in range(nsets):
        for i in range(offs[k], offs[k + 1]):
            if acc[buf[i]] != 0:
                out_acc[k] = 1
                break
    return out_indptr[: nsets + 1].copy(), out_letters[:nedges].copy(), out_targets[:nedges].copy(), out_acc


@njit
def walk(indptr, letters, targets, initial, word):
    s = np.int64(initial)
    for i in range(word.size):
        letter = word[i]
        lo = indptr[s]
        hi = indptr[s + 1]
        nxt = np.int64(-1)
        while lo < hi:
            mid = (lo + hi) // 2
            l = letters[mid]
            if l == letter:
                nxt = targets[mid]
                break
            if l < letter:
                lo = mid + 1
            else:
                hi = mid
        if nxt < 0:
            return np.int64(-1)
        s = nxt
    return s
