# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled subset-enumeration kernels.

Mirrors :mod:`splitfinder.kernels.pure` exactly, including enumeration order
and witness tie-breaking, so the two backends are interchangeable.  Widths
are capped at 62 so subset bitmasks fit an unsigned 64-bit word; the
dispatcher in ``kernels.__init__`` routes wider calls to the pure backend.
"""

from libc.stdlib cimport free, malloc

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    #define SF_POPCOUNT(x) __builtin_popcountll(x)
    #else
    static int SF_POPCOUNT(unsigned long long x) {
        int c = 0;
        while (x) { x &= x - 1; c++; }
        return c;
    }
    #endif
    """
    int SF_POPCOUNT(unsigned long long x) nogil


MAX_WIDTH = 62


cdef unsigned long long *_copy_masks(object masks, int width) except NULL:
    cdef Py_ssize_t k = len(masks)
    cdef unsigned long long *ms = <unsigned long long *> malloc(
        (k if k > 0 else 1) * sizeof(unsigned long long))
    if ms == NULL:
        raise MemoryError
    cdef Py_ssize_t i
    for i in range(k):
        ms[i] = <unsigned long long> masks[i]
    return ms


cdef inline int _best_split_count(
    unsigned long long *ms, Py_ssize_t k, unsigned long long s, int size
) nogil:
    cdef int best = 0
    cdef int half = size >> 1
    cdef int c
    cdef Py_ssize_t i
    for i in range(k):
        c = SF_POPCOUNT(s & ms[i])
        if c > size - c:
            c = size - c
        if c > best:
            best = c
            if best == half:
                break
    return best


def min_subset_split(masks, int width):
    """Minimum best-split over all subsets with >= 2 members."""
    if width > MAX_WIDTH:
        raise ValueError(f"width {width} exceeds native limit {MAX_WIDTH}")
    cdef Py_ssize_t k = len(masks)
    cdef unsigned long long *ms = _copy_masks(masks, width)
    cdef unsigned long long limit = (<unsigned long long> 1) << width
    cdef unsigned long long s = 3
    cdef unsigned long long best_num = 1, best_den = 2, witness = 0
    cdef bint have_witness = False
    cdef int size, best
    try:
        with nogil:
            while s < limit:
                size = SF_POPCOUNT(s)
                if size >= 2:
                    best = _best_split_count(ms, k, s, size)
                    if (<unsigned long long> best) * best_den \
                            < best_num * (<unsigned long long> size):
                        best_num = <unsigned long long> best
                        best_den = <unsigned long long> size
                        witness = s
                        have_witness = True
                s += 1
    finally:
        free(ms)
    return int(best_num), int(best_den), (int(witness) if have_witness else None)


def find_split_below(masks, int width, unsigned long long num,
                     unsigned long long den):
    """First subset (>= 2 members) whose best split is strictly below num/den."""
    if width > MAX_WIDTH:
        raise ValueError(f"width {width} exceeds native limit {MAX_WIDTH}")
    cdef Py_ssize_t k = len(masks)
    cdef unsigned long long *ms = _copy_masks(masks, width)
    cdef unsigned long long limit = (<unsigned long long> 1) << width
    cdef unsigned long long s = 3
    cdef unsigned long long found = 0
    cdef bint have_found = False
    cdef unsigned long long threshold
    cdef int size, best, half, c
    cdef Py_ssize_t i
    try:
        with nogil:
            while s < limit:
                size = SF_POPCOUNT(s)
                if size >= 2:
                    threshold = num * (<unsigned long long> size)
                    half = size >> 1
                    best = 0
                    for i in range(k):
                        c = SF_POPCOUNT(s & ms[i])
                        if c > size - c:
                            c = size - c
                        if c > best:
                            best = c
                            if (<unsigned long long> best) * den >= threshold \
                                    or best == half:
                                break
                    if (<unsigned long long> best) * den < threshold:
                        found = s
                        have_found = True
                        break
                s += 1
    finally:
        free(ms)
    return int(found) if have_found else None


def batch_min_split(masks, subsets):
    """Minimum best-split over an explicit list of subsets (>= 2 members each)."""
    cdef Py_ssize_t k = len(masks)
    cdef Py_ssize_t nsub = len(subsets)
    cdef unsigned long long *ms = _copy_masks(masks, MAX_WIDTH)
    cdef unsigned long long *subs = <unsigned long long *> malloc(
        (nsub if nsub > 0 else 1) * sizeof(unsigned long long))
    if subs == NULL:
        free(ms)
        raise MemoryError
    cdef Py_ssize_t j
    for j in range(nsub):
        subs[j] = <unsigned long long> subsets[j]
    cdef unsigned long long s
    cdef unsigned long long best_num = 1, best_den = 2, witness = 0
    cdef bint have_witness = False
    cdef int size, best
    try:
        with nogil:
            for j in range(nsub):
                s = subs[j]
                size = SF_POPCOUNT(s)
                if size < 2:
                    continue
                best = _best_split_count(ms, k, s, size)
                if (<unsigned long long> best) * best_den \
                        < best_num * (<unsigned long long> size):
                    best_num = <unsigned long long> best
                    best_den = <unsigned long long> size
                    witness = s
                    have_witness = True
    finally:
        free(subs)
        free(ms)
    return int(best_num), int(best_den), (int(witness) if have_witness else None)
