# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled relaxation kernel (FIFO and LIFO queue policies)."""

from libc.stdlib cimport malloc, free

DEF WINDOW = 128


def relax_kernel(const long long[::1] start, const long long[::1] original,
                 long long[::1] current, unsigned char[::1] marked,
                 const long long[::1] long_size, str policy="fifo", seed=0):
    cdef Py_ssize_t n = start.shape[0]
    cdef Py_ssize_t i, j, head = 0, tail = 0
    cdef long long sj, pj, grow, d0, c
    cdef long long dequeues = 0, checks = 0, max_nb = 0, seen
    cdef bint lifo

    if policy == "fifo":
        lifo = False
    elif policy == "lifo":
        lifo = True
    else:
        raise ValueError(f"compiled kernel does not support policy {policy!r}")

    # each jump is enqueued at most once, so n slots suffice for either order
    cdef Py_ssize_t *queue = <Py_ssize_t *> malloc((n + 1) * sizeof(Py_ssize_t))
    if queue == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            c = current[i]
            if c >= 128 or c < -128:
                marked[i] = 1
                queue[tail] = i
                tail += 1

        while tail > head:
            if lifo:
                tail -= 1
                j = queue[tail]
            else:
                j = queue[head]
                head += 1
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
                        c = current[i] + grow
                        current[i] = c
                        if c >= 128:
                            marked[i] = 1
                            queue[tail] = i
                            tail += 1
                i -= 1

            i = j + 1
            while i < n and start[i] - sj <= WINDOW:
                seen += 1
                if not marked[i]:
                    d0 = original[i]
                    if d0 < 0 and start[i] + 2 + d0 <= sj:
                        c = current[i] - grow
                        current[i] = c
                        if c < -128:
                            marked[i] = 1
                            queue[tail] = i
                            tail += 1
                i += 1

            checks += seen
            if seen > max_nb:
                max_nb = seen
    finally:
        free(queue)
    return dequeues, checks, max_nb
