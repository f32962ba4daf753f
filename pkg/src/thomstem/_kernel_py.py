"""Pure-Python term-map kernels for exterior-algebra arithmetic.

A monomial is an int bitmask (bit k-1 set = degree-1 generator k present);
a class is a dict from mask to a nonzero integer coefficient, optionally
reduced mod 2. These four functions are the hot inner loop of everything
wedge-shaped in the package; ``_kernel_c.pyx`` is the compiled twin and
``thomstem._backend`` picks one at import time.
"""

BACKEND = "pure"


def merge_sign(a: int, b: int) -> int:
    """Sign of interleaving two ascending index sets, 0 if they overlap.

    The sign is the parity of the permutation sorting the concatenation
    (ascending a) ++ (ascending b): for each generator in b, count the
    generators of a strictly above it.
    """
    if a & b:
        return 0
    inversions = 0
    rest = b
    while rest:
        low = rest & -rest
        inversions += (a >> low.bit_length()).bit_count()
        rest ^= low
    return -1 if inversions & 1 else 1


def wedge_terms(a: dict, b: dict, modulus: int) -> dict:
    """Wedge product of two term maps (modulus 0 = integers, 2 = mod 2)."""
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            if ma & mb:
                continue
            m = ma | mb
            c = out.get(m, 0) + merge_sign(ma, mb) * ca * cb
            if modulus:
                c %= modulus
            if c:
                out[m] = c
            elif m in out:
                del out[m]
    return out


def add_terms(a: dict, b: dict, modulus: int) -> dict:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + c
        if modulus:
            v %= modulus
        if v:
            out[m] = v
        elif m in out:
            del out[m]
    return out


def scale_terms(n: int, a: dict, modulus: int) -> dict:
    out: dict = {}
    for m, c in a.items():
        v = n * c
        if modulus:
            v %= modulus
        if v:
            out[m] = v
    return out
