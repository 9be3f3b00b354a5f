"""Independent invariant-dimension oracle for the tests.

The Lie superalgebra acts on V^{(x)N} through super Kronecker products,
(A (x) B)(e_i (x) e_j) = (-1)^{|B| p(i)} A e_i (x) B e_j, so
rho(X) = sum_k I^{(x)(k-1)} (x) X (x) I^{(x)(N-k)}.  A form t (a row vector)
is invariant when t rho(X) = 0 for every generator and t g^{(x)N} = t for the
component representatives.  Ranks are taken modulo a large prime with a
plain sparse elimination, sharing no code with the package solver.
"""

from fractions import Fraction

P = (1 << 61) - 1


def _mod(x: Fraction) -> int:
    return x.numerator % P * pow(x.denominator % P, P - 2, P) % P


def _skron(A, a_par, B, b_par, b_deg):
    """Sparse super Kronecker product; matrices are {(row, col): value}."""
    nb = len(b_par)
    out = {}
    for (i1, j1), x in A.items():
        sign = -1 if (b_deg and a_par[j1]) else 1
        for (i2, j2), y in B.items():
            out[(i1 * nb + i2, j1 * nb + j2)] = sign * x * y
    par = [pa + pb for pa in a_par for pb in b_par]
    return out, [p % 2 for p in par]


def _eye(par):
    return {(i, i): 1 for i in range(len(par))}


def rho(X, N):
    """Sparse matrix of X acting on the N-th tensor power (mod P)."""
    par = list(X.dim_in.parities())
    x = X.to_rational()
    d = len(x)
    Xs = {(i, j): _mod(x[i][j]) for i in range(d) for j in range(d) if x[i][j]}
    deg = 0 if X.parity == "even" else 1
    total = {}
    for k in range(N):
        M, mp = {(0, 0): 1}, [0]
        for pos in range(N):
            if pos == k:
                M, mp = _skron(M, mp, Xs, par, deg)
            else:
                M, mp = _skron(M, mp, _eye(par), par, 0)
        for key, v in M.items():
            total[key] = (total.get(key, 0) + v) % P
    return {k: v for k, v in total.items() if v}


def group_power(g, N):
    x = g.to_rational()
    par = list(g.dim_in.parities())
    G = {(i, j): _mod(x[i][j]) for i in range(len(x)) for j in range(len(x)) if x[i][j]}
    M, mp = {(0, 0): 1}, [0]
    for _ in range(N):
        M, mp = _skron(M, mp, G, par, 0)
    return M


class _RankModP:
    def __init__(self):
        self.pivots = {}

    def add(self, row):
        row = {k: v % P for k, v in row.items() if v % P}
        while row:
            lead = min(row)
            piv = self.pivots.get(lead)
            if piv is None:
                inv = pow(row[lead], P - 2, P)
                self.pivots[lead] = {k: v * inv % P for k, v in row.items()}
                return
            c = row[lead]
            for k, v in piv.items():
                nv = (row.get(k, 0) - c * v) % P
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)

    @property
    def rank(self):
        return len(self.pivots)


def _columns(M):
    cols = {}
    for (i, j), v in M.items():
        cols.setdefault(j, {})[i] = v
    return cols


def constraint_rows(lie, comps, N):
    for X in lie:
        yield from _columns(rho(X, N)).values()
    for g in comps:
        Mg = group_power(g, N)
        for j, col in _columns(Mg).items():
            col = dict(col)
            col[j] = col.get(j, 0) - 1
            yield col


def invariant_dimension(lie, comps, N, d):
    r = _RankModP()
    for row in constraint_rows(lie, comps, N):
        r.add(row)
    return d ** N - r.rank


def annihilates(lie, comps, N, coeffs, d):
    """True when the tensor {index tuple: Fraction} satisfies every constraint."""
    t = {}
    for idx, v in coeffs.items():
        flat = 0
        for i in idx:
            flat = flat * d + i
        t[flat] = _mod(Fraction(v))
    for row in constraint_rows(lie, comps, N):
        if sum(t.get(i, 0) * v for i, v in row.items()) % P:
            return False
    return True
