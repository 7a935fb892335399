"""Pure-Python reference kernels.

Exact (unbounded integers), no dependencies; the compiled backend in
_ckern.pyx mirrors these semantics on int64 data.
"""

BACKEND = "python"


def enumerate_points(cols, counts):
    """All integer combinations sum_j a_j * cols[j], 0 <= a_j < counts[j].

    Mixed-radix order with the last generator varying fastest.  Returns a
    list of coordinate tuples.
    """
    m = len(cols)
    if m == 0:
        return [()]
    d = len(cols[0])
    total = 1
    for c in counts:
        total *= c
    out = []
    digits = [0] * m
    cur = [0] * d
    for _ in range(total):
        out.append(tuple(cur))
        j = m - 1
        while j >= 0:
            digits[j] += 1
            if digits[j] < counts[j]:
                col = cols[j]
                for i in range(d):
                    cur[i] += col[i]
                break
            back = digits[j] - 1
            digits[j] = 0
            col = cols[j]
            for i in range(d):
                cur[i] -= back * col[i]
            j -= 1
        if j < 0:
            break
    return out


def count_images(cols, counts, map_rows):
    """Number of distinct images of the enumerated box under the linear map
    given by map_rows (one row per output coordinate)."""
    m = len(cols)
    k = len(map_rows)
    if m == 0:
        return 1
    d = len(cols[0])
    # projected generator columns
    pc = [tuple(sum(map_rows[r][i] * cols[j][i] for i in range(d)) for r in range(k)) for j in range(m)]
    total = 1
    for c in counts:
        total *= c
    seen = set()
    digits = [0] * m
    cur = [0] * k
    for _ in range(total):
        seen.add(tuple(cur))
        j = m - 1
        while j >= 0:
            digits[j] += 1
            if digits[j] < counts[j]:
                col = pc[j]
                for i in range(k):
                    cur[i] += col[i]
                break
            back = digits[j] - 1
            digits[j] = 0
            col = pc[j]
            for i in range(k):
                cur[i] -= back * col[i]
            j -= 1
        if j < 0:
            break
    return len(seen)


def cover_multiplicity(translates, tile_points, radius):
    """Cover multiplicities of translate+tile over the window [-R, R]^d.

    Returns (min_count, max_count) over every window point.
    """
    if not tile_points:
        return (0, 0)
    d = len(tile_points[0])
    width = 2 * radius + 1
    size = width**d
    counts = [0] * size
    for t in translates:
        for s in tile_points:
            idx = 0
            ok = True
            for i in range(d):
                x = t[i] + s[i]
                if x < -radius or x > radius:
                    ok = False
                    break
                idx = idx * width + (x + radius)
            if ok:
                counts[idx] += 1
    return (min(counts), max(counts))
