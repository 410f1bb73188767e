import itertools

import cvxpy as cp
import numpy as np

from kpoint.graphs import Graph, gnp


def all_graphs(nmax):
    """Every labelled graph on 1..nmax vertices."""
    for n in range(1, nmax + 1):
        pairs = list(itertools.combinations(range(n), 2))
        for bits in range(2 ** len(pairs)):
            yield Graph.from_edges(n, [p for i, p in enumerate(pairs) if bits >> i & 1])


def random_graphs(count, nmin, nmax, p=0.4, seed0=1, accept=lambda G: True):
    out, seed = [], seed0
    while len(out) < count:
        n = nmin + seed % (nmax - nmin + 1)
        G = gnp(n, p, seed)
        if accept(G):
            out.append(G)
        seed += 1
    return out


def sdpa_to_cvxpy(text):
    """Independent reader: min c^T x s.t. sum x_i F_i - F_0 >= 0."""
    rows = [ln.split() for ln in text.splitlines() if ln and not ln.startswith("*")]
    m, nb = int(rows[0][0]), int(rows[1][0])
    sizes = [int(s) for s in rows[2]]
    c = np.array([float(v) for v in rows[3]])
    mats = [[np.zeros((abs(s), abs(s))) for s in sizes] for _ in range(m + 1)]
    for mat, blk, i, j, v in rows[4:]:
        M = mats[int(mat)][int(blk) - 1]
        M[int(i) - 1, int(j) - 1] = M[int(j) - 1, int(i) - 1] = float(v)
    x = cp.Variable(m)
    cons = []
    for b in range(nb):
        S = sum(x[i] * mats[i + 1][b] for i in range(m)) - mats[0][b]
        if sizes[b] < 0:
            cons.append(cp.diag(S) >= 0)
        else:
            cons.append((S + S.T) / 2 >> 0)
    prob = cp.Problem(cp.Minimize(c @ x), cons)
    prob.solve(solver="CLARABEL")
    return prob.value
