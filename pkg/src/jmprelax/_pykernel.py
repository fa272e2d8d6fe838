"""Pure-Python relaxation kernel; the fallback when the extension is missing."""

from __future__ import annotations

import random
from array import array
from collections import deque

WINDOW = 128


def relax_kernel(start, original, current, marked, long_size, policy="fifo", seed=0):
    """Mark long jumps in place. Returns (dequeues, neighbor_checks, max_neighbors)."""
    n = len(start)
    start = list(start)
    original = list(original)
    cur = list(current)
    long_size = list(long_size)

    queue = deque()
    for i in range(n):
        d = cur[i]
        if d >= 128 or d < -128:
            marked[i] = 1
            queue.append(i)

    if policy == "fifo":
        pop = queue.popleft
    elif policy == "lifo":
        pop = queue.pop
    elif policy == "shuffle":
        queue = list(queue)
        rng = random.Random(seed)

        def pop():
            k = rng.randrange(len(queue))
            queue[k], queue[-1] = queue[-1], queue[k]
            return queue.pop()
    else:
        raise ValueError(f"unknown queue policy {policy!r}")
    push = queue.append

    dequeues = checks = max_nb = 0
    while queue:
        j = pop()
        dequeues += 1
        sj = start[j]
        pj = sj + 2
        grow = long_size[j] - 2
        seen = 0

        i = j - 1
        while i >= 0 and sj - start[i] <= WINDOW:
            seen += 1
            if not marked[i]:
                d0 = original[i]
                if d0 > 0 and start[i] + 2 + d0 >= pj:
                    c = cur[i] + grow
                    cur[i] = c
                    if c >= 128:
                        marked[i] = 1
                        push(i)
            i -= 1

        i = j + 1
        while i < n and start[i] - sj <= WINDOW:
            seen += 1
            if not marked[i]:
                d0 = original[i]
                if d0 < 0 and start[i] + 2 + d0 <= sj:
                    c = cur[i] - grow
                    cur[i] = c
                    if c < -128:
                        marked[i] = 1
                        push(i)
            i += 1

        checks += seen
        if seen > max_nb:
            max_nb = seen

    current[:] = array(current.typecode, cur) if isinstance(current, array) else cur
    return dequeues, checks, max_nb
