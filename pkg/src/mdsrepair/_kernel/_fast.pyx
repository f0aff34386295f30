# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled row reduction kernels, same contract as pure.py."""


def rre_rank(unsigned char[::1] buf, int rows, int cols, int q,
             const unsigned char[::1] sub, const unsigned char[::1] mul,
             const unsigned char[::1] inv):
    cdef int rank = 0
    cdef int col, r, j, piv, base, off
    cdef unsigned char pinv, f, tmp
    for col in range(cols):
        if rank == rows:
            break
        piv = -1
        for r in range(rank, rows):
            if buf[r * cols + col]:
                piv = r
                break
        if piv < 0:
            continue
        base = rank * cols
        if piv != rank:
            off = piv * cols
            for j in range(col, cols):
                tmp = buf[off + j]
                buf[off + j] = buf[base + j]
                buf[base + j] = tmp
        pinv = inv[buf[base + col]]
        for r in range(rank + 1, rows):
            off = r * cols
            f = mul[buf[off + col] * q + pinv]
            if f:
                for j in range(col, cols):
                    buf[off + j] = sub[buf[off + j] * q + mul[f * q + buf[base + j]]]
        rank += 1
    return rank


def rref_rank(unsigned char[::1] buf, int rows, int cols, int q,
              const unsigned char[::1] sub, const unsigned char[::1] mul,
              const unsigned char[::1] inv):
    cdef int rank = 0
    cdef int col, r, j, piv, base, off
    cdef unsigned char pinv, f, tmp
    for col in range(cols):
        if rank == rows:
            break
        piv = -1
        for r in range(rank, rows):
            if buf[r * cols + col]:
                piv = r
                break
        if piv < 0:
            continue
        base = rank * cols
        if piv != rank:
            off = piv * cols
            for j in range(col, cols):
                tmp = buf[off + j]
                buf[off + j] = buf[base + j]
                buf[base + j] = tmp
        pinv = inv[buf[base + col]]
        if pinv != 1 or buf[base + col] != 1:
            for j in range(col, cols):
                buf[base + j] = mul[buf[base + j] * q + pinv]
        for r in range(rows):
            if r == rank:
                continue
            off = r * cols
            f = buf[off + col]
            if f:
                for j in range(col, cols):
                    buf[off + j] = sub[buf[off + j] * q + mul[f * q + buf[base + j]]]
        rank += 1
    return rank
