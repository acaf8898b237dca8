# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled twins of ``_kernels_py``; same signatures, same results."""

from libc.stdint cimport int64_t, uint64_t
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector


def refine(delta, labels, int n, int k):
    cdef vector[int] d = delta
    cdef vector[int] cls
    cdef vector[int] nxt
    cdef unordered_map[int64_t, int] ids
    cdef int s, a, count, before
    cdef int64_t key
    cls.resize(n)
    nxt.resize(n)

    pyids = {}
    for s in range(n):
        cls[s] = pyids.setdefault(labels[s], len(pyids))
    count = len(pyids)
    while True:
        before = count
        for a in range(k):
            ids.clear()
            for s in range(n):
                key = <int64_t>cls[s] * n + cls[d[s * k + a]]
                it = ids.find(key)
                if it == ids.end():
                    nxt[s] = <int>ids.size()
                    ids[key] = nxt[s]
                else:
                    nxt[s] = ids[key]
            cls.swap(nxt)
        count = <int>ids.size()
        if count == before:
            return list(cls)


def compose(df, of, dg, og, int k, int64_t cap):
    cdef vector[int] vdf = df
    cdef vector[int] vof = of
    cdef vector[int] vdg = dg
    cdef vector[int] vog = og
    cdef int64_t nf = len(df) // k
    cdef unordered_map[int64_t, int] index
    cdef vector[int] qg, qf, delta, out
    cdef int64_t i = 0, key
    cdef int pg, pf, a, b, ng, nfs, j
    index[0] = 0
    qg.push_back(0)
    qf.push_back(0)
    while i < <int64_t>qg.size():
        pg = qg[i]
        pf = qf[i]
        i += 1
        for a in range(k):
            b = vog[pg * k + a]
            out.push_back(vof[pf * k + b])
            ng = vdg[pg * k + a]
            nfs = vdf[pf * k + b]
            key = <int64_t>ng * nf + nfs
            it = index.find(key)
            if it == index.end():
                j = <int>qg.size()
                if j >= cap:
                    return None
                index[key] = j
                qg.push_back(ng)
                qf.push_back(nfs)
            else:
                j = index[key]
            delta.push_back(j)
    return list(delta), list(out), <int>qg.size()


def subsets(delta, int n, int k, start):
    if n > 63:
        from ._kernels_py import subsets as slow
        return slow(delta, n, k, start)
    cdef vector[int] d = delta
    cdef unordered_map[uint64_t, int] index
    cdef vector[uint64_t] masks
    cdef vector[int] table
    cdef uint64_t m, img
    cdef size_t i = 0
    cdef int a, q, j
    masks.push_back(<uint64_t>start)
    index[<uint64_t>start] = 0
    while i < masks.size():
        m = masks[i]
        i += 1
        for a in range(k):
            img = 0
            for q in range(n):
                if (m >> q) & 1:
                    img |= (<uint64_t>1) << d[q * k + a]
            it = index.find(img)
            if it == index.end():
                j = <int>masks.size()
                index[img] = j
                masks.push_back(img)
            else:
                j = index[img]
            table.push_back(j)
    return [int(x) for x in masks], list(table)


cdef void _run(vector[int]& d, vector[int]& o, int k, int state,
               vector[int]& src, vector[int]& dst):
    cdef size_t i
    cdef int p
    for i in range(src.size()):
        p = state * k + src[i]
        dst[i] = o[p]
        state = d[p]


def transduce(delta, out, int k, int state, word):
    cdef vector[int] d = delta
    cdef vector[int] o = out
    cdef vector[int] src = word
    cdef vector[int] dst
    dst.resize(src.size())
    _run(d, o, k, state, src, dst)
    return list(dst)


def orbit_length(delta, out, int k, int state, word, int cap):
    cdef vector[int] d = delta
    cdef vector[int] o = out
    cdef vector[int] start = word
    cdef vector[int] cur = word
    cdef vector[int] nxt
    cdef int steps
    nxt.resize(start.size())
    for steps in range(1, cap + 1):
        _run(d, o, k, state, cur, nxt)
        cur.swap(nxt)
        if cur == start:
            return steps
    return cap + 1
