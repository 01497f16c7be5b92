# cython: language_level=3
"""Compiled evaluation kernels.

Mirror of _kernels_py (same API, same exact arithmetic on arbitrary
precision Python ints); the speedup comes from compiled loop and
dispatch overhead, not from machine integers.
"""
from math import gcd

BACKEND = "compiled"


def rat_reduce(n, d):
    """Normalize a rational pair: positive denominator, lowest terms."""
    if d < 0:
        n, d = -n, -d
    g = gcd(abs(n), d)
    if g > 1:
        n //= g
        d //= g
    return n, d


def line_sign(A, B, C, xn, xd, yn, yd):
    """Sign of A*x + B*y + C at the rational point (xn/xd, yn/yd)."""
    v = A * xn * yd + B * yn * xd + C * xd * yd
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


def eval_terms(list terms, xn, xd, yn, yd):
    """Exact value of a sum of nested-max terms at a rational point."""
    cdef Py_ssize_t i, m
    P = xd * yd
    acc_n, acc_d = 0, 1
    m = len(terms)
    for i in range(m):
        (s1, s2, A1, B1, C1, D1, A2, B2, C2, D2, A3, B3, C3, D3) = terms[i]
        N1 = A1 * xn * yd + B1 * yn * xd + C1 * P
        N2 = A2 * xn * yd + B2 * yn * xd + C2 * P
        N3 = A3 * xn * yd + B3 * yn * xd + C3 * P
        if N2 * D3 >= N3 * D2:
            Nm, Dm = N2, D2
        else:
            Nm, Dm = N3, D3
        if N1 * Dm >= s2 * Nm * D1:
            Nt, Dt = N1, D1
        else:
            Nt, Dt = s2 * Nm, Dm
        tn, td = s1 * Nt, Dt * P
        acc_n = acc_n * td + tn * acc_d
        acc_d = acc_d * td
        g = gcd(abs(acc_n), acc_d)
        if g > 1:
            acc_n //= g
            acc_d //= g
    return acc_n, acc_d


def forward_layers(list layers, xn, xd, yn, yd):
    """Exact forward pass of affine layers with ReLU between them."""
    cdef Py_ssize_t li, nlayers, ti, ntrip, r, c, ri, rows
    vals = [(xn, xd), (yn, yd)]
    nlayers = len(layers)
    for li in range(nlayers):
        rows, triplets, bias = layers[li]
        acc_n = [bn for (bn, bd) in bias]
        acc_d = [bd for (bn, bd) in bias]
        ntrip = len(triplets)
        for ti in range(ntrip):
            (r, c, wn, wd) = triplets[ti]
            vn, vd = vals[c]
            pn = wn * vn
            pd = wd * vd
            acc_n[r] = acc_n[r] * pd + pn * acc_d[r]
            acc_d[r] = acc_d[r] * pd
        out = []
        for ri in range(rows):
            n = acc_n[ri]
            d = acc_d[ri]
            g = gcd(abs(n), d)
            if g > 1:
                n //= g
                d //= g
            if li != nlayers - 1 and n <= 0:
                out.append((0, 1))
            else:
                out.append((n, d))
        vals = out
    if len(vals) != 1:
        raise ValueError("final layer must produce a single value")
    return vals[0]
