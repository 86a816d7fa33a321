"""Transportation simplex kernel (network simplex on the complete bipartite graph).

Nodes ``0..n-1`` are sources, ``n..n+m-1`` are sinks.  The basis is a spanning
tree stored as ``n+m-1`` (row, col, flow) triplets.  Supplies are perturbed
(Orden) so that every basic solution is nondegenerate; pivots then strictly
decrease the objective and the method cannot cycle.
"""

import numpy as np
from numba import njit

QUANTUM = 1e9

STATUS_OPTIMAL = 0
STATUS_MAX_ITER = 1


@njit(cache=True, nogil=True)
def _initial_basis(supply, demand, order, m):
    n = supply.shape[0]
    nb = n + m - 1
    bi = np.empty(nb, np.int64)
    bj = np.empty(nb, np.int64)
    bf = np.empty(nb, np.int64)
    rs = supply.copy()
    rd = demand.copy()
    row_alive = np.ones(n, np.bool_)
    col_alive = np.ones(m, np.bool_)
    rows_left = n
    cols_left = m
    k = 0
    for idx in range(order.shape[0]):
        if k == nb:
            break
        i = order[idx] // m
        j = order[idx] % m
        if not row_alive[i] or not col_alive[j]:
            continue
        f = min(rs[i], rd[j])
        bi[k] = i
        bj[k] = j
        bf[k] = f
        k += 1
        rs[i] -= f
        rd[j] -= f
        # kill exactly one line per allocation so the cells form a spanning tree
        if rs[i] == 0 and (rows_left > 1 or cols_left == 1):
            row_alive[i] = False
            rows_left -= 1
        else:
            col_alive[j] = False
            cols_left -= 1
    return bi, bj, bf, k


@njit(cache=True, nogil=True)
def _tree(bi, bj, n, m, cost):
    """Adjacency, BFS parent links and dual potentials of the basis tree."""
    nn = n + m
    nb = bi.shape[0]
    deg = np.zeros(nn + 1, np.int64)
    for k in range(nb):
        deg[bi[k] + 1] += 1
        deg[n + bj[k] + 1] += 1
    for v in range(nn):
        deg[v + 1] += deg[v]
    start = deg.copy()
    adj_node = np.empty(2 * nb, np.int64)
    adj_edge = np.empty(2 * nb, np.int64)
    fill = start[:nn].copy()
    for k in range(nb):
        a = bi[k]
        b = n + bj[k]
        adj_node[fill[a]] = b
        adj_edge[fill[a]] = k
        fill[a] += 1
        adj_node[fill[b]] = a
        adj_edge[fill[b]] = k
        fill[b] += 1

    pot = np.zeros(nn)
    parent = np.full(nn, -1, np.int64)
    pedge = np.full(nn, -1, np.int64)
    depth = np.zeros(nn, np.int64)
    seen = np.zeros(nn, np.bool_)
    queue = np.empty(nn, np.int64)
    queue[0] = 0
    seen[0] = True
    head = 0
    tail = 1
    while head < tail:
        v = queue[head]
        head += 1
        for p in range(start[v], start[v + 1]):
            w = adj_node[p]
            if seen[w]:
                continue
            seen[w] = True
            e = adj_edge[p]
            parent[w] = v
            pedge[w] = e
            depth[w] = depth[v] + 1
            # u_i + v_j = c_ij on every basic cell
            pot[w] = cost[bi[e], bj[e]] - pot[v]
            queue[tail] = w
            tail += 1
    return pot, parent, pedge, depth, tail == nn


@njit(cache=True, nogil=True)
def network_simplex(supply, demand, cost, order, max_iter, tol):
    """Optimal basis for ``min <C, X>`` s.t. ``X 1 = supply``, ``X^T 1 = demand``, ``X >= 0``.

    ``supply``/``demand`` are int64 and must balance.  Returns basis cells,
    their (perturbed) flows, an iteration count and a status flag.
    """
    n = supply.shape[0]
    m = demand.shape[0]
    s = supply * (n + 1) + 1
    d = demand * (n + 1)
    d[m - 1] += n
    bi, bj, bf, k = _initial_basis(s, d, order, m)
    nn = n + m
    path_e = np.empty(nn, np.int64)
    up_b = np.empty(nn, np.int64)
    it = 0
    status = STATUS_OPTIMAL
    if k != n + m - 1:
        return bi, bj, bf, it, STATUS_MAX_ITER
    while True:
        pot, parent, pedge, depth, ok = _tree(bi, bj, n, m, cost)
        if not ok:
            return bi, bj, bf, it, STATUS_MAX_ITER
        best = -tol
        ei = -1
        ej = -1
        for i in range(n):
            ui = pot[i]
            for j in range(m):
                rc = cost[i, j] - ui - pot[n + j]
                if rc < best:
                    best = rc
                    ei = i
                    ej = j
        if ei < 0:
            break
        if it >= max_iter:
            status = STATUS_MAX_ITER
            break
        it += 1

        # tree path from the sink node back to the source node
        a = ei
        b = n + ej
        nu = 0
        na = 0
        while depth[b] > depth[a]:
            up_b[nu] = pedge[b]
            nu += 1
            b = parent[b]
        while depth[a] > depth[b]:
            path_e[na] = pedge[a]
            na += 1
            a = parent[a]
        while a != b:
            up_b[nu] = pedge[b]
            nu += 1
            b = parent[b]
            path_e[na] = pedge[a]
            na += 1
            a = parent[a]
        # ordered path: sink side upward, then source side downward
        for q in range(na):
            up_b[nu + q] = path_e[na - 1 - q]
        plen = nu + na

        theta = -1
        leave = -1
        for q in range(0, plen, 2):
            e = up_b[q]
            if theta < 0 or bf[e] < theta:
                theta = bf[e]
                leave = e
        for q in range(plen):
            e = up_b[q]
            if q % 2 == 0:
                bf[e] -= theta
            else:
                bf[e] += theta
        bi[leave] = ei
        bj[leave] = ej
        bf[leave] = theta
    return bi, bj, bf, it, status


@njit(cache=True, nogil=True)
def tree_flows(bi, bj, n, m, a, b):
    """Solve the basis tree for flows with float supplies ``a`` and demands ``b``.

    Leaf elimination; returns flows aligned with the basis cells and the
    leftover residual at the last node (the float imbalance).
    """
    nn = n + m
    nb = bi.shape[0]
    deg = np.zeros(nn, np.int64)
    for k in range(nb):
        deg[bi[k]] += 1
        deg[n + bj[k]] += 1
    # incident edge xor trick: the last remaining edge of a leaf is the xor of its live edges
    xor_e = np.zeros(nn, np.int64)
    for k in range(nb):
        xor_e[bi[k]] ^= k
        xor_e[n + bj[k]] ^= k
    res = np.empty(nn)
    res[:n] = a
    res[n:] = b
    flow = np.zeros(nb)
    stack = np.empty(nn, np.int64)
    top = 0
    for v in range(nn):
        if deg[v] == 1:
            stack[top] = v
            top += 1
    done = 0
    last = 0
    while top > 0 and done < nb:
        top -= 1
        v = stack[top]
        if deg[v] != 1:
            continue
        e = xor_e[v]
        w = n + bj[e] if v < n else bi[e]
        f = res[v]
        flow[e] = f
        res[v] = 0.0
        res[w] -= f
        deg[v] = 0
        deg[w] -= 1
        xor_e[w] ^= e
        done += 1
        last = w
        if deg[w] == 1:
            stack[top] = w
            top += 1
    return flow, res[last]


def quantize(a: np.ndarray) -> np.ndarray:
    return np.rint(np.asarray(a, dtype=np.float64) * QUANTUM).astype(np.int64)


def solve_transport(a: np.ndarray, b: np.ndarray, cost: np.ndarray, max_iter: int | None = None):
    """Exact transportation LP; returns dense-free (rows, cols, flows) on the optimal basis.

    Weights are quantized to integers for pivoting; the final flows are
    recomputed on the optimal basis from the unquantized weights.
    """
    from .errors import InputError, NumericalError

    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    cost = np.ascontiguousarray(cost, dtype=np.float64)
    n, m = cost.shape
    qa = quantize(a)
    qb = quantize(b)
    diff = int(qa.sum() - qb.sum())
    if diff:
        big = int(np.argmax(b))
        qb[big] += diff
        if qb[big] < 0:
            raise InputError("masses too unbalanced to quantize")
    order = np.argsort(cost, axis=None, kind="stable").astype(np.int64)
    scale = max(1.0, float(np.max(np.abs(cost))) if cost.size else 1.0)
    if max_iter is None:
        max_iter = 50 * (n + m) * max(n, m) + 1000
    bi, bj, _, it, status = network_simplex(qa, qb, cost, order, max_iter, 1e-12 * scale)
    if status != STATUS_OPTIMAL:
        raise NumericalError(f"network simplex stopped after {it} pivots without an optimal basis")
    flow, _ = tree_flows(bi, bj, n, m, a, b)
    return bi, bj, flow, it
