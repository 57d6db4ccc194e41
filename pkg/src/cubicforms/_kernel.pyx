# cython: language_level=3, boundscheck=False, wraparound=False
# distutils: language = c++
"""Compiled sparse polynomial product.

Same contract as ``_kernel_py.mul_terms``.  Packed keys are re-encoded into a
mixed-radix int64 code sized for this particular product, so the inner loop
runs on machine integers.  When the coefficient bound rules out int64
accumulation the inner loop falls back to Python integers but keeps the C
keys.
"""

from libc.stdint cimport int64_t
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector
from cython.operator cimport dereference as deref, preincrement as inc

cdef int64_t CODE_LIMIT = (<int64_t>1) << 62


cdef list _max_exponents(dict terms, int nvars, int bits):
    cdef int v
    cdef object mask = (1 << bits) - 1
    cdef list mx = [0] * nvars
    for key in terms:
        for v in range(nvars):
            e = (key >> (v * bits)) & mask
            if e > mx[v]:
                mx[v] = e
    return mx


cdef vector[int64_t] _encode(dict terms, int nvars, int bits, vector[int64_t]& place):
    cdef vector[int64_t] codes
    cdef int64_t code
    cdef int v
    cdef object mask = (1 << bits) - 1
    codes.reserve(len(terms))
    for key in terms:
        code = 0
        for v in range(nvars):
            code += <int64_t>((key >> (v * bits)) & mask) * place[v]
        codes.push_back(code)
    return codes


cdef object _decode(int64_t code, int nvars, int bits, vector[int64_t]& radix):
    cdef int v
    cdef int64_t e
    key = 0
    for v in range(nvars):
        e = code % radix[v]
        code = code // radix[v]
        if e:
            key |= (<object>e) << (v * bits)
    return key


def mul_terms(dict a, dict b, int nvars, int bits):
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a

    cdef list mxa = _max_exponents(a, nvars, bits)
    cdef list mxb = _max_exponents(b, nvars, bits)
    cdef vector[int64_t] radix
    cdef vector[int64_t] place
    cdef int64_t total = 1
    cdef int v
    for v in range(nvars):
        r = mxa[v] + mxb[v] + 1
        if total > CODE_LIMIT // r:
            from ._kernel_py import mul_terms as slow
            return slow(a, b, nvars, bits)
        radix.push_back(<int64_t>r)
        place.push_back(total)
        total *= r

    cdef vector[int64_t] ka = _encode(a, nvars, bits, place)
    cdef vector[int64_t] kb = _encode(b, nvars, bits, place)
    cdef Py_ssize_t na = ka.size(), nb = kb.size(), i, j

    bound_a = max(abs(c) for c in a.values())
    bound_b = max(abs(c) for c in b.values())
    if bound_a * bound_b * na < CODE_LIMIT:
        return _mul_small(a, b, ka, kb, na, nb, nvars, bits, radix)

    cdef list ca = list(a.values())
    cdef list cb = list(b.values())
    cdef dict acc = {}
    cdef int64_t k
    for i in range(na):
        x = ca[i]
        for j in range(nb):
            k = ka[i] + kb[j]
            acc[k] = acc.get(k, 0) + x * cb[j]
    return {_decode(code, nvars, bits, radix): c for code, c in acc.items() if c}


cdef dict _mul_small(dict a, dict b, vector[int64_t]& ka, vector[int64_t]& kb,
                     Py_ssize_t na, Py_ssize_t nb, int nvars, int bits,
                     vector[int64_t]& radix):
    cdef vector[int64_t] ca, cb
    cdef Py_ssize_t i, j
    cdef int64_t x, kx
    for c in a.values():
        ca.push_back(<int64_t>c)
    for c in b.values():
        cb.push_back(<int64_t>c)
    cdef unordered_map[int64_t, int64_t] acc
    acc.reserve(na * nb if na * nb < 1 << 22 else 1 << 22)
    for i in range(na):
        x = ca[i]
        kx = ka[i]
        for j in range(nb):
            acc[kx + kb[j]] += x * cb[j]
    cdef dict out = {}
    cdef unordered_map[int64_t, int64_t].iterator it = acc.begin()
    while it != acc.end():
        if deref(it).second != 0:
            out[_decode(deref(it).first, nvars, bits, radix)] = deref(it).second
        inc(it)
    return out
