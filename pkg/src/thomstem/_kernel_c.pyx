# cython: language_level=3
"""Compiled twin of ``thomstem._kernel_py`` (same contract, same results).

Masks are unpacked into C 64-bit words for the bit fiddling; coefficients
stay Python objects so arbitrary-precision determinants survive intact.
Ranks above 64 generators are routed to the pure kernel by the backend.
"""

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

BACKEND = "compiled"


cpdef int merge_sign(unsigned long long a, unsigned long long b):
    """Sign of interleaving two ascending index sets, 0 if they overlap."""
    cdef int inversions = 0
    cdef int j
    cdef unsigned long long rest = b
    if a & b:
        return 0
    while rest:
        j = __builtin_ctzll(rest)
        # double shift keeps the shift count < 64 even for the top bit
        inversions += __builtin_popcountll((a >> j) >> 1)
        rest &= rest - 1
    return -1 if inversions & 1 else 1


cpdef dict wedge_terms(dict a, dict b, int modulus):
    """Wedge product of two term maps (modulus 0 = integers, 2 = mod 2)."""
    cdef dict out = {}
    cdef unsigned long long ma, mb
    cdef int sign
    for ma_key, ca in a.items():
        ma = ma_key
        for mb_key, cb in b.items():
            mb = mb_key
            if ma & mb:
                continue
            sign = merge_sign(ma, mb)
            key = ma | mb
            c = out.get(key, 0)
            if sign > 0:
                c = c + ca * cb
            else:
                c = c - ca * cb
            if modulus:
                c = c % modulus
            if c:
                out[key] = c
            elif key in out:
                del out[key]
    return out


cpdef dict add_terms(dict a, dict b, int modulus):
    cdef dict out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + c
        if modulus:
            v = v % modulus
        if v:
            out[m] = v
        elif m in out:
            del out[m]
    return out


cpdef dict scale_terms(n, dict a, int modulus):
    cdef dict out = {}
    for m, c in a.items():
        v = n * c
        if modulus:
            v = v % modulus
        if v:
            out[m] = v
    return out
