"""Linear algebra over the chain ring Z/p^N.

Everything here works on plain lists of Python ints.  ``smith`` brings a
matrix to diagonal form ``U A V = D`` with ``D[k][k] = p^v_k`` using row and
column operations, always pivoting on an entry of minimal valuation.  Solving,
kernels and image enumeration for matrices over any ring in this package go
through it after expansion to integer coordinates.
"""

from itertools import product


def valuation(x, p, N):
    x %= p ** N
    if x == 0:
        return N
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


class SmithForm:
    """Result of ``smith``: ``U A V = diag(p^vals)`` modulo p^N."""

    def __init__(self, p, N, m, n, U, Uinv, V, vals):
        self.p, self.N, self.m, self.n = p, N, m, n
        self.U, self.Uinv, self.V, self.vals = U, Uinv, V, vals

    @property
    def rank(self):
        return len(self.vals)


def smith(A, p, N, ncols=None):
    q = p ** N
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    M = [[x % q for x in row] for row in A]
    U = identity(m)
    Uinv = identity(m)
    V = identity(n)
    vals = []
    for k in range(min(m, n)):
        best = None
        for i in range(k, m):
            row = M[i]
            for j in range(k, n):
                if row[j]:
                    v = valuation(row[j], p, N)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i, j = best
        if i != k:
            M[i], M[k] = M[k], M[i]
            U[i], U[k] = U[k], U[i]
            for row in Uinv:
                row[i], row[k] = row[k], row[i]
        if j != k:
            for row in M:
                row[j], row[k] = row[k], row[j]
            for row in V:
                row[j], row[k] = row[k], row[j]
        unit = M[k][k] // p ** v
        uinv = pow(unit, -1, q)
        M[k] = [x * uinv % q for x in M[k]]
        U[k] = [x * uinv % q for x in U[k]]
        for row in Uinv:
            row[k] = row[k] * unit % q
        pk = p ** v
        rowk = M[k]
        for i2 in range(m):
            if i2 == k or not M[i2][k]:
                continue
            c = M[i2][k] // pk
            M[i2] = [(a - c * b) % q for a, b in zip(M[i2], rowk)]
            U[i2] = [(a - c * b) % q for a, b in zip(U[i2], U[k])]
            for row in Uinv:
                row[k] = (row[k] + c * row[i2]) % q
        for j2 in range(k + 1, n):
            if not rowk[j2]:
                continue
            c = rowk[j2] // pk
            for row in M:
                row[j2] = (row[j2] - c * row[k]) % q
            for row in V:
                row[j2] = (row[j2] - c * row[k]) % q
        vals.append(v)
    return SmithForm(p, N, m, n, U, Uinv, V, vals)


def mat_vec(A, x, q):
    return [sum(a * b for a, b in zip(row, x)) % q for row in A]


def solve(A, b, p, N, ncols=None):
    """Return ``("solution", x)`` or ``("none", c)`` with ``cA = 0``, ``c.b != 0``."""
    q = p ** N
    sf = smith(A, p, N, ncols)
    y = mat_vec(sf.U, b, q) if sf.m else []
    z = [0] * sf.n
    for k, v in enumerate(sf.vals):
        if valuation(y[k], p, N) < v:
            c = [p ** (N - v) * u % q for u in sf.U[k]]
            return "none", c
        z[k] = (y[k] % q) // p ** v
    for k in range(sf.rank, sf.m):
        if y[k] % q:
            return "none", list(sf.U[k])
    x = mat_vec(sf.V, z, q) if sf.n else []
    return "solution", x


def kernel(A, p, N, ncols=None):
    """Generators of ``{x : A x = 0}``."""
    q = p ** N
    sf = smith(A, p, N, ncols)
    gens = []
    for k, v in enumerate(sf.vals):
        if v > 0:
            gens.append([p ** (N - v) * sf.V[i][k] % q for i in range(sf.n)])
    for j in range(sf.rank, sf.n):
        gens.append([sf.V[i][j] for i in range(sf.n)])
    return gens


def image_basis(cols, dim, p, N):
    """Pairs ``(vector, order_exponent)`` giving the span of ``cols`` as a direct sum.

    Every element of the span is uniquely ``sum c_k g_k`` with
    ``0 <= c_k < p^order_exponent_k``.
    """
    q = p ** N
    if not cols:
        return []
    A = [[c[i] % q for c in cols] for i in range(dim)]
    sf = smith(A, p, N, len(cols))
    out = []
    for k, v in enumerate(sf.vals):
        g = [p ** v * sf.Uinv[i][k] % q for i in range(dim)]
        out.append((g, N - v))
    return out


def span_size(cols, dim, p, N):
    return p ** sum(e for _, e in image_basis(cols, dim, p, N))


def span_elements(cols, dim, p, N):
    q = p ** N
    basis = image_basis(cols, dim, p, N)
    ranges = [range(p ** e) for _, e in basis]
    for coeffs in product(*ranges):
        v = [0] * dim
        for c, (g, _) in zip(coeffs, basis):
            if c:
                for i in range(dim):
                    v[i] += c * g[i]
        yield tuple(x % q for x in v)
