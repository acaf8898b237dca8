"""Pure-Python versions of the hot loops.

Every function here has a twin in ``_ckernels.pyx`` with the same signature
and bit-identical results.  Tables are flat lists indexed ``state * k + symbol``.
"""


def refine(delta, labels, n, k):
    """Coarsest partition of ``range(n)`` that refines ``labels`` and is
    stable under every letter.

    Returns dense class ids numbered by first occurrence in state order.
    """
    ids = {}
    cls = [ids.setdefault(x, len(ids)) for x in labels]
    count = len(ids)
    while True:
        before = count
        for a in range(k):
            ids = {}
            cls = [
                ids.setdefault((cls[s], cls[delta[s * k + a]]), len(ids))
                for s in range(n)
            ]
        count = len(ids)
        if count == before:
            return cls


def compose(df, of, dg, og, k, cap):
    """Product transducer for ``f o g`` (``g`` reads first), both started at 0.

    Returns ``(delta, out, n)`` with states numbered in BFS order, or ``None``
    when more than ``cap`` states are reachable.
    """
    index = {(0, 0): 0}
    queue = [(0, 0)]
    delta = []
    out = []
    i = 0
    while i < len(queue):
        pg, pf = queue[i]
        i += 1
        bg = pg * k
        for a in range(k):
            b = og[bg + a]
            c = of[pf * k + b]
            nxt = (dg[bg + a], df[pf * k + b])
            j = index.get(nxt)
            if j is None:
                j = len(queue)
                if j >= cap:
                    return None
                index[nxt] = j
                queue.append(nxt)
            delta.append(j)
            out.append(c)
    return delta, out, len(queue)


def subsets(delta, n, k, start):
    """Explore the power automaton from the bitmask ``start``.

    Returns ``(masks, table)``: masks in BFS order (letters expanded in
    declared order) and the flat successor table over mask indices.
    """
    index = {start: 0}
    masks = [start]
    table = []
    i = 0
    while i < len(masks):
        m = masks[i]
        i += 1
        members = [q for q in range(n) if m >> q & 1]
        for a in range(k):
            img = 0
            for q in members:
                img |= 1 << delta[q * k + a]
            j = index.get(img)
            if j is None:
                j = len(masks)
                index[img] = j
                masks.append(img)
            table.append(j)
    return masks, table


def transduce(delta, out, k, state, word):
    res = []
    for a in word:
        p = state * k + a
        res.append(out[p])
        state = delta[p]
    return res


def orbit_length(delta, out, k, state, word, cap):
    """Length of the cycle through ``word`` under the transducer at ``state``,
    or ``cap + 1`` if the word has not returned after ``cap`` steps."""
    start = list(word)
    cur = start
    for steps in range(1, cap + 1):
        cur = transduce(delta, out, k, state, cur)
        if cur == start:
            return steps
    return cap + 1
