# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels over 64-bit block masks (so at most 64 points).

Same contracts and same output order as the pure twin in ``_pure``:
uniform-subset enumeration, breadth-first orbit closure, and pair
counting.  The orbit closure keeps its visited set in an open-addressing
hash table of raw masks and applies point permutations through
byte-indexed lookup tables.
"""

from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport calloc, free, malloc, realloc
from libc.string cimport memcpy

from math import comb

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    static inline int cd_ctz64(unsigned long long x) { return __builtin_ctzll(x); }
    #else
    static inline int cd_ctz64(unsigned long long x) {
        int n = 0;
        while (!(x & 1ULL)) { x >>= 1; n++; }
        return n;
    }
    #endif
    """
    int cd_ctz64(unsigned long long x) nogil


cdef inline uint64_t _mix(uint64_t x) nogil:
    # splitmix64 finalizer; 0 is reserved for empty slots and never hashed
    x = (x ^ (x >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    x = (x ^ (x >> 27)) * <uint64_t>0x94D049BB133111EB
    return x ^ (x >> 31)


def enumerate_uniform_masks(e, ratios):
    """Masks of all subsets uniform with the given per-level ratios.

    Identical stream order to the pure implementation: colex combination
    order, depth-first, last chosen subclass fastest.
    """
    cdef int s = len(e)
    cdef int v = 1
    cdef int i
    for i in range(s):
        v *= e[i]
    if v > 64:
        raise ValueError("compiled enumeration requires at most 64 points")

    total = 1
    counts = [total]
    for i in range(s):
        if not 1 <= ratios[i] <= e[i]:
            raise ValueError(f"ratio {ratios[i]} out of range [1, {e[i]}]")
        total = comb(e[i], ratios[i]) * total ** ratios[i]
        counts.append(total)
    if total > (1 << 34):
        raise ValueError(f"{total} masks will not fit in memory")

    prev = np.ones(1, dtype=np.uint64)
    cdef int class_size = 1
    for i in range(s):
        prev = _expand_level(prev, e[i], ratios[i], class_size, counts[i + 1])
        class_size *= e[i]
    return prev


cdef _expand_level(cnp.ndarray prev_arr, int ei, int ti, int class_size, object n_out_py):
    cdef cnp.npy_intp n_out = <cnp.npy_intp> n_out_py
    out_arr = np.empty(n_out, dtype=np.uint64)
    cdef uint64_t[::1] out = out_arr
    cdef const uint64_t[::1] prev = prev_arr
    cdef cnp.npy_intp n_prev = prev.shape[0]
    cdef int combo[64]
    cdef int shifts[64]
    cdef cnp.npy_intp idx[64]
    cdef uint64_t prefix[65]
    cdef cnp.npy_intp written = 0
    cdef int l, pos, limit

    for l in range(ti):
        combo[l] = l
    prefix[0] = 0
    while True:
        for l in range(ti):
            shifts[l] = combo[l] * class_size
        for l in range(ti):
            idx[l] = 0
            prefix[l + 1] = prefix[l] | (prev[0] << shifts[l])
        while True:
            out[written] = prefix[ti]
            written += 1
            pos = ti - 1
            while pos >= 0 and idx[pos] == n_prev - 1:
                idx[pos] = 0
                pos -= 1
            if pos < 0:
                break
            idx[pos] += 1
            for l in range(pos, ti):
                prefix[l + 1] = prefix[l] | (prev[idx[l]] << shifts[l])
        pos = 0
        while pos < ti:
            limit = combo[pos + 1] if pos + 1 < ti else ei
            if combo[pos] + 1 < limit:
                break
            pos += 1
        if pos == ti:
            break
        combo[pos] += 1
        for l in range(pos):
            combo[l] = l
    if written != n_out:
        raise AssertionError("enumeration produced a wrong count")
    return out_arr


def orbit_masks(images, seed, cap):
    """Breadth-first closure of a mask under point permutations.

    Returns ``(complete, found)`` with ``found`` a uint64 array in
    discovery order; stops early (complete=False) past ``cap`` elements.
    """
    images_arr = np.ascontiguousarray(images, dtype=np.int64)
    cdef const int64_t[:, ::1] img = images_arr
    cdef int ngens = img.shape[0]
    cdef int v = img.shape[1]
    if v > 64:
        raise ValueError("compiled orbit closure requires at most 64 points")
    cdef uint64_t seed_m = <uint64_t> seed
    cdef cnp.npy_intp cap_n = <cnp.npy_intp> cap
    if seed_m == 0:
        return True, np.zeros(1, dtype=np.uint64)

    cdef int nbytes = (v + 7) >> 3
    tables_arr = np.zeros((ngens, nbytes, 256), dtype=np.uint64)
    cdef uint64_t[:, :, ::1] tables = tables_arr
    cdef int g, bpos, byte, bit, p
    for g in range(ngens):
        for bpos in range(nbytes):
            for byte in range(256):
                for bit in range(8):
                    p = bpos * 8 + bit
                    if p < v and (byte >> bit) & 1:
                        tables[g, bpos, byte] |= (<uint64_t>1) << img[g, p]

    cdef cnp.npy_intp found_cap = 1024
    cdef uint64_t *found = <uint64_t *>malloc(found_cap * sizeof(uint64_t))
    cdef cnp.npy_intp slot_cap = 2048
    cdef uint64_t *slots = <uint64_t *>calloc(slot_cap, sizeof(uint64_t))
    if found == NULL or slots == NULL:
        free(found)
        free(slots)
        raise MemoryError()

    cdef cnp.npy_intp head = 0, size = 0, hs_size = 0
    cdef cnp.npy_intp j, probe_mask
    cdef uint64_t m, im, cur
    cdef uint64_t *tmp
    cdef uint64_t[::1] out
    cdef bint complete = True

    found[0] = seed_m
    size = 1
    probe_mask = slot_cap - 1
    j = _mix(seed_m) & probe_mask
    slots[j] = seed_m
    hs_size = 1

    try:
        while head < size:
            m = found[head]
            head += 1
            for g in range(ngens):
                im = 0
                for bpos in range(nbytes):
                    im |= tables[g, bpos, (m >> (bpos << 3)) & <uint64_t>0xFF]
                j = _mix(im) & probe_mask
                while True:
                    cur = slots[j]
                    if cur == im:
                        break
                    if cur == 0:
                        slots[j] = im
                        hs_size += 1
                        if size == found_cap:
                            found_cap <<= 1
                            tmp = <uint64_t *>realloc(found, found_cap * sizeof(uint64_t))
                            if tmp == NULL:
                                raise MemoryError()
                            found = tmp
                        found[size] = im
                        size += 1
                        if 2 * hs_size >= slot_cap:
                            slots = _grow_slots(slots, slot_cap)
                            if slots == NULL:
                                raise MemoryError()
                            slot_cap <<= 1
                            probe_mask = slot_cap - 1
                        break
                    j = (j + 1) & probe_mask
                if size > cap_n:
                    complete = False
                    break
            if not complete:
                break

        out_arr = np.empty(size, dtype=np.uint64)
        out = out_arr
        if size > 0:
            memcpy(&out[0], found, size * sizeof(uint64_t))
        return complete, out_arr
    finally:
        free(found)
        free(slots)


cdef uint64_t *_grow_slots(uint64_t *slots, cnp.npy_intp old_cap) nogil:
    cdef cnp.npy_intp new_cap = old_cap << 1
    cdef uint64_t *fresh = <uint64_t *>calloc(new_cap, sizeof(uint64_t))
    if fresh == NULL:
        free(slots)
        return NULL
    cdef cnp.npy_intp i, j, mask = new_cap - 1
    cdef uint64_t key
    for i in range(old_cap):
        key = slots[i]
        if key != 0:
            j = _mix(key) & mask
            while fresh[j] != 0:
                j = (j + 1) & mask
            fresh[j] = key
    free(slots)
    return fresh


def pair_counts(masks, v):
    """Number of blocks containing each point pair; ``counts[p, q]`` for p < q."""
    masks_arr = np.ascontiguousarray(masks, dtype=np.uint64)
    cdef const uint64_t[::1] mv = masks_arr
    cdef int v_c = v
    if v_c > 64:
        raise ValueError("compiled pair counting requires at most 64 points")
    counts_arr = np.zeros((v_c, v_c), dtype=np.int64)
    cdef int64_t[:, ::1] counts = counts_arr
    cdef cnp.npy_intp n = mv.shape[0], t
    cdef uint64_t m, low
    cdef int bits[64]
    cdef int nb, a, b
    for t in range(n):
        m = mv[t]
        nb = 0
        while m:
            low = m & (<uint64_t>0 - m)
            bits[nb] = cd_ctz64(low)
            nb += 1
            m ^= low
        for a in range(nb):
            for b in range(a + 1, nb):
                counts[bits[a], bits[b]] += 1
    return counts_arr
