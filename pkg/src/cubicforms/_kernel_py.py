"""Pure-Python sparse polynomial product.

Monomials are packed integers: the exponent of variable ``k`` occupies bits
``[k*bits, (k+1)*bits)``.  Multiplying two monomials is then a single integer
addition, provided no exponent field overflows (the caller guarantees this).
"""


def mul_terms(a, b, nvars, bits):
    if len(a) > len(b):
        a, b = b, a
    out = {}
    get = out.get
    b_items = list(b.items())
    for ka, ca in a.items():
        for kb, cb in b_items:
            k = ka + kb
            out[k] = get(k, 0) + ca * cb
    return {k: c for k, c in out.items() if c}
