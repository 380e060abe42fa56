"""Independent brute-force oracles used to freeze expected values.

Everything here is deliberately naive (nested loops, exhaustive enumeration)
and shares no code with the library paths it checks.
"""

import itertools
from collections import Counter

import numpy as np


def naive_te_ratio(x, y):
    """Single-log-ratio transfer entropy (k=l=1) by quadruple nested loops
    over symbol values, from raw counted probabilities."""
    x = list(map(int, x))
    y = list(map(int, y))
    T1 = len(x) - 1
    c3 = Counter()
    c2 = Counter()
    c1 = Counter()
    csd = Counter()
    for n in range(T1):
        c3[(x[n + 1], x[n], y[n])] += 1
        c2[(x[n + 1], x[n])] += 1
        c1[x[n]] += 1
        csd[(x[n], y[n])] += 1
    symbols = sorted(set(x) | set(y))
    te = 0.0
    for i1 in symbols:
        for i0 in symbols:
            for j0 in symbols:
                c = c3[(i1, i0, j0)]
                if c == 0:
                    continue
                p3 = c / T1
                ratio = (c * c1[i0]) / (c2[(i1, i0)] * csd[(i0, j0)])
                te += p3 * np.log2(ratio)
    return te


def naive_te_two_sums(x, y):
    """Two-sum form: sum p log2 p(i1|i0,j0) minus sum p log2 p(i1|i0)."""
    x = list(map(int, x))
    y = list(map(int, y))
    T1 = len(x) - 1
    c3 = Counter()
    c2 = Counter()
    c1 = Counter()
    csd = Counter()
    for n in range(T1):
        c3[(x[n + 1], x[n], y[n])] += 1
        c2[(x[n + 1], x[n])] += 1
        c1[x[n]] += 1
        csd[(x[n], y[n])] += 1
    s1 = 0.0
    s2 = 0.0
    for (i1, i0, j0), c in c3.items():
        p = c / T1
        s1 += p * np.log2(c / csd[(i0, j0)])
        s2 += p * np.log2(c2[(i1, i0)] / c1[i0])
    return s1 - s2


def naive_joint_counts(x, y, k, l):
    """Brute-force recount of (next, dest history, source history) tuples."""
    x = list(map(int, x))
    y = list(map(int, y))
    m = max(k, l)
    table = Counter()
    for n in range(m - 1, len(x) - 1):
        dest = tuple(x[n - k + 1 : n + 1][::-1])
        src = tuple(y[n - l + 1 : n + 1][::-1])
        table[(x[n + 1], dest, src)] += 1
    return dict(table)


def naive_conditional_entropy(x, y):
    """Direct double sum over the joint table of H(X|Y)."""
    T = len(x)
    joint = Counter(zip(map(int, x), map(int, y)))
    marg = Counter(map(int, y))
    h = 0.0
    for (i, j), c in joint.items():
        pij = c / T
        h -= pij * np.log2(pij / (marg[j] / T))
    return h


def textbook_pearson(a, b):
    """Covariance over product of standard deviations, by explicit loops."""
    n = len(a)
    ma = sum(a) / n
    mb = sum(b) / n
    cov = sum((ai - ma) * (bi - mb) for ai, bi in zip(a, b)) / n
    va = sum((ai - ma) ** 2 for ai in a) / n
    vb = sum((bi - mb) ** 2 for bi in b) / n
    return cov / np.sqrt(va * vb)


# ---------------------------------------------------------------------------
# Graph oracles: exhaustive simple-path enumeration (no BFS/Brandes reuse)
# ---------------------------------------------------------------------------

def _neighbors(n, edges, directed):
    succ = {u: [] for u in range(n)}
    for u, v in edges:
        succ[u].append(v)
        if not directed:
            succ[v].append(u)
    return succ


def all_simple_paths(succ, s, t):
    paths = []

    def walk(node, seen, path):
        if node == t:
            paths.append(list(path))
            return
        for nxt in succ[node]:
            if nxt not in seen:
                seen.add(nxt)
                path.append(nxt)
                walk(nxt, seen, path)
                path.pop()
                seen.remove(nxt)

    walk(s, {s}, [s])
    return paths


def oracle_shortest_hops(n, edges, directed):
    """All-pairs shortest hop counts from exhaustive path enumeration;
    -1 where unreachable."""
    succ = _neighbors(n, edges, directed)
    hops = -np.ones((n, n), dtype=int)
    for s in range(n):
        hops[s, s] = 0
        for t in range(n):
            if s == t:
                continue
            paths = all_simple_paths(succ, s, t)
            if paths:
                hops[s, t] = min(len(p) - 1 for p in paths)
    return hops


def oracle_betweenness(n, edges, directed):
    """Fraction-of-shortest-paths betweenness from exhaustive enumeration.

    Undirected graphs count each unordered pair once.
    """
    succ = _neighbors(n, edges, directed)
    bc = np.zeros(n)
    if directed:
        pairs = [(s, t) for s in range(n) for t in range(n) if s != t]
    else:
        pairs = [(s, t) for s in range(n) for t in range(s + 1, n)]
    for s, t in pairs:
        paths = all_simple_paths(succ, s, t)
        if not paths:
            continue
        shortest = min(len(p) - 1 for p in paths)
        geodesics = [p for p in paths if len(p) - 1 == shortest]
        for v in range(n):
            if v in (s, t):
                continue
            through = sum(1 for p in geodesics if v in p)
            bc[v] += through / len(geodesics)
    return bc


def oracle_closeness(n, edges, directed):
    hops = oracle_shortest_hops(n, edges, directed)
    cc = np.empty(n)
    for u in range(n):
        reach = [hops[u, v] for v in range(n) if v != u and hops[u, v] > 0]
        cc[u] = sum(reach) / len(reach) if reach else np.inf
    return cc


def oracle_harmonic(n, edges, directed, incoming=False):
    hops = oracle_shortest_hops(n, edges, directed)
    if incoming:
        hops = hops.T
    return np.array([
        sum(1.0 / hops[u, v] for v in range(n) if v != u and hops[u, v] > 0)
        for u in range(n)
    ])


def oracle_eigenvector(n, edges, directed, incoming=False):
    """Dense eigendecomposition per weakly connected component, unit max."""
    A = np.zeros((n, n))
    for u, v in edges:
        A[u, v] = 1.0
        if not directed:
            A[v, u] = 1.0
    # weakly connected components
    undir = ((A + A.T) > 0)
    seen = [False] * n
    out = np.zeros(n)
    for s in range(n):
        if seen[s]:
            continue
        comp = [s]
        seen[s] = True
        stack = [s]
        while stack:
            u = stack.pop()
            for v in range(n):
                if undir[u, v] and not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    stack.append(v)
        if len(comp) == 1:
            continue
        sub = A[np.ix_(comp, comp)]
        M = sub.T if incoming else sub
        evals, evecs = np.linalg.eig(M)
        rho = np.max(evals.real)
        if rho < 1e-12:
            continue
        idx = int(np.argmax(evals.real))
        vec = np.abs(evecs[:, idx].real)
        if vec.max() > 0:
            vec = vec / vec.max()
        for node, val in zip(comp, vec):
            out[node] = val
    return out


def connected_graphs(n):
    """Every connected undirected graph on n labelled nodes, as edge lists."""
    all_edges = list(itertools.combinations(range(n), 2))
    for bits in range(1, 2 ** len(all_edges)):
        edges = [e for i, e in enumerate(all_edges) if bits >> i & 1]
        succ = _neighbors(n, edges, directed=False)
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in succ[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        if len(seen) == n:
            yield edges
