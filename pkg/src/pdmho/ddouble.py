"""
Double-double arithmetic on ``(hi, lo)`` float pairs.

Used where a sum's terms dwarf its value; error-free transforms follow
Dekker and Knuth, with Dekker's splitting in place of an fma.
"""

_SPLIT = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    t = _SPLIT * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def dd_add(x, y):
    s, e = two_sum(x[0], y[0])
    return quick_two_sum(s, e + x[1] + y[1])


def dd_mul(x, y):
    p, e = two_prod(x[0], y[0])
    return quick_two_sum(p, e + (x[0] * y[1] + x[1] * y[0]))


def dd_div(x, y):
    q1 = x[0] / y[0]
    r = dd_add(x, dd_mul(y, (-q1, 0.0)))
    q2 = r[0] / y[0]
    r = dd_add(r, dd_mul(y, (-q2, 0.0)))
    q3 = r[0] / y[0]
    q1, q2 = quick_two_sum(q1, q2)
    return dd_add((q1, q2), (q3, 0.0))


def dd_pochhammer(a, k):
    """``(a)_k`` as a double-double."""
    out = (1.0, 0.0)
    for i in range(k):
        out = dd_mul(out, two_sum(a, float(i)))
    return out


def dd_to_float(v):
    return v[0] + v[1]
