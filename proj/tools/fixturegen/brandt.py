"""Brandt modules for Eichler orders in the definite algebra (-1,-1) over a
real quadratic field of class number one.  Produces Hecke eigenvalue tables
of Hilbert newforms of parallel weight two and squarefree level."""

import itertools
import random
from fractions import Fraction

import cypari2

pari = cypari2.Pari()
pari.allocatemem(1 << 30)


def lcm(a, b):
    from math import gcd
    return a // gcd(a, b) * b


class Field:
    """Q(w) with w^2 = T*w + n0, w = sqrt(d) or (1+sqrt(d))/2."""

    def __init__(self, d):
        self.d = d
        if d % 4 == 1:
            self.T, self.n0 = 1, (d - 1) // 4
            self.poly = "x^2 - x - %d" % self.n0
            self.w0, self.w1 = Fraction(1, 2), Fraction(1, 2)
        else:
            self.T, self.n0 = 0, d
            self.poly = "x^2 - %d" % d
            self.w0, self.w1 = Fraction(0), Fraction(1)
        self.bnf = pari.bnfinit(self.poly, 1)
        self.nf = self.bnf[6]
        assert int(self.bnf.bnf_get_no()) == 1
        u = pari.lift(self.bnf.bnf_get_fu()[0])
        self.eps = self.from_pari(u)
        self.eps_norm = self.norm(self.eps)
        if self.eps_norm == 1:
            e = self.eps
            s = self.signs(e)
            self.eta = e if s == (1, 1) else self.neg(e)
        else:
            self.eta = None

    # elements are pairs (a, b) of Fractions meaning a + b*w
    def mul(self, x, y):
        a, b = x
        c, e = y
        return (a * c + b * e * self.n0, a * e + b * c + b * e * self.T)

    def add(self, x, y):
        return (x[0] + y[0], x[1] + y[1])

    def neg(self, x):
        return (-x[0], -x[1])

    def conj(self, x):
        # w -> T - w
        return (x[0] + x[1] * self.T, -x[1])

    def norm(self, x):
        n = self.mul(x, self.conj(x))
        assert n[1] == 0
        return n[0]

    def trace(self, x):
        return 2 * x[0] + x[1] * self.T

    def inv(self, x):
        n = self.norm(x)
        c = self.conj(x)
        return (c[0] / n, c[1] / n)

    def signs(self, x):
        u = x[0] + x[1] * self.w0
        v = x[1] * self.w1

        def sgn(u, v):
            if u >= 0 and v >= 0:
                return 1 if (u or v) else 0
            if u <= 0 and v <= 0:
                return -1
            uu, vv = u * u, v * v * self.d
            if u > 0:
                return 1 if uu > vv else -1
            return 1 if vv > uu else -1

        return (sgn(u, v), sgn(u, -v))

    def to_pari(self, x):
        return pari("Mod(%s + (%s)*x, %s)" % (x[0], x[1], self.poly))

    def from_pari(self, e):
        e = pari.lift(e)
        if e.type() != "t_POL":
            return (Fraction(str(e)), Fraction(0))
        c0 = pari.polcoef(e, 0)
        c1 = pari.polcoef(e, 1)
        return (Fraction(str(c0)), Fraction(str(c1)))

    def totally_positive_generator(self, x):
        s = self.signs(x)
        if s == (1, 1):
            return x
        if s == (-1, -1):
            return self.neg(x)
        if self.eps_norm == -1:
            y = self.mul(x, self.eps)
            return y if self.signs(y) == (1, 1) else self.neg(y)
        return None

    def integral(self, x):
        return x[0].denominator == 1 and x[1].denominator == 1

    def primes_upto(self, bound):
        out = []
        for p in pari.primes(bound):
            p = int(p)
            for pr in pari.idealprimedec(self.nf, p):
                nq = int(pari.idealnorm(self.nf, pr))
                if nq >= bound:
                    continue
                gen = pari.bnfisprincipal(self.bnf, pr)[1]
                g = self.from_pari(pari.nfbasistoalg(self.nf, gen))
                out.append(Prime(self, p, pr, nq, g))
        out.sort(key=lambda q: (q.norm, q.residue))
        idx = {}
        for q in out:
            idx[q.norm] = idx.get(q.norm, 0) + 1
            q.label = "%d.%d" % (q.norm, idx[q.norm])
        return out

    def prime_of(self, p, pred):
        for pr in pari.idealprimedec(self.nf, p):
            if pred(pr):
                gen = pari.bnfisprincipal(self.bnf, pr)[1]
                g = self.from_pari(pari.nfbasistoalg(self.nf, gen))
                return Prime(self, p, pr, int(pari.idealnorm(self.nf, pr)), g)
        raise ValueError("no prime")


class Prime:
    def __init__(self, F, p, pr, norm, gen):
        self.F, self.p, self.pr, self.norm, self.gen = F, p, pr, norm, gen
        self.f = int(pr[3])
        # residue of w modulo the prime (degree one only), used for labels
        self.residue = -1
        if self.f == 1:
            for r in range(p):
                if int(pari.idealval(F.nf, pari("x - %d" % r), pr)) > 0:
                    self.residue = r
                    break
        self.label = None

    def contains(self, x):
        if x == (0, 0):
            return True
        return int(pari.idealval(self.F.nf, self.F.to_pari(x), self.pr)) > 0

    def residues(self):
        if self.f == 1:
            return [(Fraction(r), Fraction(0)) for r in range(self.p)]
        return [(Fraction(a), Fraction(b)) for a in range(self.p) for b in range(self.p)]


# quaternions: 4-tuples of field elements, i^2 = j^2 = -1
class Algebra:
    def __init__(self, F):
        self.F = F

    def mul(self, x, y):
        m, a = self.F.mul, self.F.add

        def s(*terms):
            r = (Fraction(0), Fraction(0))
            for sign, u, v in terms:
                t = m(u, v)
                r = a(r, t) if sign > 0 else a(r, self.F.neg(t))
            return r

        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        return (
            s((1, x0, y0), (-1, x1, y1), (-1, x2, y2), (-1, x3, y3)),
            s((1, x0, y1), (1, x1, y0), (1, x2, y3), (-1, x3, y2)),
            s((1, x0, y2), (-1, x1, y3), (1, x2, y0), (1, x3, y1)),
            s((1, x0, y3), (1, x1, y2), (-1, x2, y1), (1, x3, y0)),
        )

    def conj(self, x):
        n = self.F.neg
        return (x[0], n(x[1]), n(x[2]), n(x[3]))

    def nrd(self, x):
        r = (Fraction(0), Fraction(0))
        for t in x:
            r = self.F.add(r, self.F.mul(t, t))
        return r

    def trd(self, x):
        return (2 * x[0][0], 2 * x[0][1])

    @staticmethod
    def flat(x):
        return [c for t in x for c in t]

    @staticmethod
    def unflat(v):
        v = [Fraction(c) for c in v]
        return tuple((v[2 * t], v[2 * t + 1]) for t in range(4))

    def scalar(self, f):
        z = (Fraction(0), Fraction(0))
        return (f, z, z, z)

    def integral(self, x):
        return self.F.integral(self.trd(x)) and self.F.integral(self.nrd(x))


def ints(M):
    return [int(M[i, 0]) for i in range(M.nrows())]


def qmat(cols):
    """PARI matrix from a list of rational column vectors."""
    n = len(cols[0])
    return pari.matrix(n, len(cols), [str(cols[j][i]) for i in range(n) for j in range(len(cols))])


def cols_of(M):
    return [[Fraction(str(M[i, j])) for i in range(M.nrows())] for j in range(M.ncols())]


def hnf(cols):
    den = 1
    for c in cols:
        for x in c:
            den = lcm(den, Fraction(x).denominator)
    M = qmat([[Fraction(x) * den for x in c] for c in cols])
    H = pari.mathnf(M)
    return [[x / den for x in c] for c in cols_of(H)]


def solve_coords(basis_M, v):
    return pari.matsolve(basis_M, qmat([v]))


def maximal_order(A):
    F = A.F
    z = (Fraction(0), Fraction(0))
    o = (Fraction(1), Fraction(0))
    w = (Fraction(0), Fraction(1))
    h = [
        (o, z, z, z),
        (z, o, z, z),
        (z, z, o, z),
        tuple((Fraction(1, 2), Fraction(0)) for _ in range(4)),
    ]
    gens = []
    for s in (o, w):
        for t in h:
            gens.append(A.mul(A.scalar(s), t))
    O = hnf([A.flat(g) for g in gens])
    O = ring_closure(A, O)
    assert O is not None

    target = (F.d if F.d % 4 == 1 else 4 * F.d) ** 4
    while abs(discriminant(A, O)) != target:
        grown = None
        for coeffs in itertools.product(range(2), repeat=8):
            if not any(coeffs):
                continue
            y = [sum(Fraction(coeffs[k]) * O[k][i] for k in range(8)) / 2 for i in range(8)]
            x = A.unflat(y)
            if not A.integral(x):
                continue
            M = qmat(O)
            c = solve_coords(M, y)
            if all(Fraction(str(c[i, 0])).denominator == 1 for i in range(8)):
                continue
            L = ring_closure(A, hnf(O + [y]))
            if L is not None:
                grown = L
                break
        if grown is None:
            raise RuntimeError("cannot enlarge order")
        O = grown
    return O


def ring_closure(A, L, limit=6):
    for _ in range(limit):
        elems = [A.unflat(c) for c in L]
        if not all(A.integral(e) for e in elems):
            return None
        prods = [A.flat(A.mul(a, b)) for a in elems for b in elems]
        L2 = hnf(L + prods)
        if L2 == L:
            return L
        L = L2
    return None


def discriminant(A, O):
    F = A.F
    elems = [A.unflat(c) for c in O]
    G = [[F.trace(A.trd(A.mul(a, b))) for b in elems] for a in elems]
    return Fraction(str(pari.matdet(qmat(G))))


class Order:
    """Order with Z-basis given in ambient coordinates; arithmetic in its own coordinates."""

    def __init__(self, A, basis):
        self.A = A
        self.F = A.F
        self.basis = basis
        self.M = qmat(basis)
        self.Minv = self.M ** -1
        self.elems = [A.unflat(c) for c in basis]
        self.L = []
        for a in self.elems:
            cols = [self.coords(A.mul(a, b)) for b in self.elems]
            self.L.append(pari.matrix(8, 8, [cols[j][i] for i in range(8) for j in range(8)]))
        self.Cj = pari.mattranspose(pari.matrix(8, 8, [self.coords(A.conj(e))[i] for e in self.elems for i in range(8)]))
        # trd(e_a conj(e_b)) = T0 + T1 w
        T0, T1 = [], []
        for a in self.elems:
            for b in self.elems:
                t = A.trd(A.mul(a, A.conj(b)))
                T0.append(t[0])
                T1.append(t[1])
        self.T0 = pari.matrix(8, 8, [str(x) for x in T0])
        self.T1 = pari.matrix(8, 8, [str(x) for x in T1])

    def coords(self, x):
        c = self.Minv * qmat([self.A.flat(x)])
        out = [c[i, 0] for i in range(8)]
        for v in out:
            assert pari.denominator(v) == 1
        return [int(v) for v in out]

    def central(self, f):
        return self.coords(self.A.scalar(f))

    def lmul_matrix(self, v):
        R = pari.matrix(8, 8)
        for a in range(8):
            if v[a]:
                R = R + int(v[a]) * self.L[a]
        return R

    def mulv(self, x, y):
        return ints(self.lmul_matrix(x) * pari.matrix(8, 1, [int(t) for t in y]))

    def nrd(self, v):
        vv = pari.matrix(8, 1, [int(t) for t in v])
        a = (pari.mattranspose(vv) * self.T0 * vv)[0, 0] / 2
        b = (pari.mattranspose(vv) * self.T1 * vv)[0, 0] / 2
        return (Fraction(str(a)), Fraction(str(b)))

    def conjv(self, v):
        return ints(self.Cj * pari.matrix(8, 1, [int(t) for t in v]))


def lat_hnf(M):
    return pari.mathnf(M)


def lat_product(O, X, Y):
    """HNF of the Z-span of products x*y, x in X, y in Y (columns, O-coords)."""
    blocks = []
    for j in range(X.ncols()):
        xj = [X[i, j] for i in range(8)]
        blocks.append(O.lmul_matrix(xj) * Y)
    return pari.mathnf(pari.matconcat(blocks))


def sublattice_mod_p(L, p, condition_rows):
    """{y in Z^n : condition(y) = 0 mod p} pushed through L; condition_rows is a PARI matrix."""
    K = pari.matkermod(condition_rows, p)
    n = L.ncols()
    gens = [K] if K.ncols() else []
    gens.append(p * pari.matid(n))
    S = pari.mathnf(pari.matconcat(gens))
    return pari.mathnf(L * S)


def eichler_order(A, Omax, level):
    """level: list of Prime.  Returns ambient basis of the Eichler order."""
    O = Order(A, Omax)
    L = pari.matid(8)
    for P in level:
        pi = O.central(P.gen)
        piO = pari.mathnf(O.lmul_matrix(pi))
        e = None
        rng = random.Random(P.norm)
        for _ in range(20000):
            v = [rng.randint(-2, 2) for _ in range(8)]
            if not any(v):
                continue
            if not P.contains(O.nrd(v)):
                continue
            c = pari.matsolve(piO, pari.matrix(8, 1, v))
            if all(pari.denominator(c[i, 0]) == 1 for i in range(8)):
                continue
            e = v
            break
        assert e is not None
        J = pari.mathnf(pari.matconcat([O.lmul_matrix(e), piO]))
        p = P.p
        # functionals vanishing on J mod p
        Phi = pari.mattranspose(pari.matkermod(pari.mattranspose(J), p))
        rows = []
        for a in range(L.ncols()):
            la = [L[i, a] for i in range(8)]
            col = []
            prod = O.lmul_matrix(la) * J
            img = Phi * prod
            col = [img[i, j] for j in range(img.ncols()) for i in range(img.nrows())]
            rows.append(col)
        C = pari.mattranspose(pari.matrix(len(rows), len(rows[0]), [x for r in rows for x in r]))
        L = sublattice_mod_p(L, p, C)
    amb = O.M * L
    return cols_of(amb)


def zeta_minus1(F):
    """zeta_F(-1) = B_{2,chi}/24 via generalized Bernoulli numbers."""
    D = F.d if F.d % 4 == 1 else 4 * F.d
    B = Fraction(0)
    for a in range(1, D + 1):
        chi = int(pari.kronecker(D, a))
        x = Fraction(a, D)
        B += chi * (x * x - x + Fraction(1, 6))
    B *= D
    return B / 24


class Brandt:
    def __init__(self, F, level, verbose=False):
        self.F = F
        self.A = Algebra(F)
        self.level = level
        self.verbose = verbose
        Omax = maximal_order(self.A)
        self.O = Order(self.A, eichler_order(self.A, Omax, level))
        mass = abs(zeta_minus1(F)) / 2
        for P in level:
            mass *= P.norm + 1
        self.mass = mass
        self.classes = []  # (basis matrix, nu, invariant, w)
        self.zdiv = {}
        self.nbrs = {}

    # quadratic form Tr(nrd(x)/nu) scaled to integers: value 2*N(nu)*Q
    def gram(self, X, nu):
        F = self.F
        inv = F.inv(nu)
        c0 = F.trace(inv)
        c1 = F.trace(F.mul((Fraction(0), Fraction(1)), inv))
        N = F.norm(nu)
        G = (self.O.T0 * pari(str(c0 * N)) + self.O.T1 * pari(str(c1 * N)))
        return pari.mattranspose(X) * G * X, N

    def count(self, X, nu, qbound):
        G, N = self.gram(X, nu)
        return int(pari.qfminim(G, 2 * N * qbound, 0)[0])

    def has_vector(self, X, nu):
        G, N = self.gram(X, nu)
        return int(pari.qfminim(G, 4 * N, 1)[0]) > 0

    def nus(self, nu):
        out = [nu]
        if self.F.eta is not None:
            out.append(self.F.mul(nu, self.F.eta))
        return out

    def left_order_lattice(self, X, nu):
        # I*Ibar = nu*O_L(I); forms below are scaled by nu^2
        Xbar = pari.mathnf(self.O.Cj * X)
        return lat_product(self.O, X, Xbar), self.F.mul(nu, nu)

    def invariant(self, X, nu):
        L, nu2 = self.left_order_lattice(X, nu)
        return tuple(sorted((self.count(L, n, 2), self.count(L, n, 3)) for n in self.nus(nu2)))

    def isomorphic(self, X, nuX, Y, nuY):
        F = self.F
        nu = F.totally_positive_generator(F.mul(nuX, nuY))
        if nu is None:
            return False
        Ybar = pari.mathnf(self.O.Cj * Y)
        L = lat_product(self.O, X, Ybar)
        return any(self.has_vector(L, n) for n in self.nus(nu))

    def unit_index(self, inv):
        # [O_L(I)^x : O_F^x]: vectors of reduced norm 1 or eta in O_L(I), up to sign
        return Fraction(sum(c[0] for c in inv), 2)

    def identify(self, X, nu, add=False):
        inv = self.invariant(X, nu)
        for idx, (Y, nuY, invY, _) in enumerate(self.classes):
            if invY == inv and self.isomorphic(X, nu, Y, nuY):
                return idx
        if not add:
            raise RuntimeError("unidentified ideal")
        w = self.unit_index(inv)
        self.classes.append((X, nu, inv, w))
        return len(self.classes) - 1

    def zero_divisor(self, q):
        if q.label in self.zdiv:
            return self.zdiv[q.label]
        O = self.O
        pi = O.central(q.gen)
        qO = pari.mathnf(O.lmul_matrix(pi))
        rng = random.Random(q.norm * 7 + q.residue)

        def in_qO(v):
            c = pari.matsolve(qO, pari.matrix(8, 1, v))
            return all(pari.denominator(c[i, 0]) == 1 for i in range(8))

        e = None
        for _ in range(200000):
            v = [rng.randint(-3, 3) for _ in range(8)]
            if any(v) and q.contains(O.nrd(v)) and not in_qO(v):
                e = v
                break
        assert e is not None
        u2 = None
        for a in range(8):
            basis_a = [1 if i == a else 0 for i in range(8)]
            cand = O.mulv(basis_a, e)
            dep = False
            for c in q.residues():
                cv = O.mulv(O.central(c), e)
                if in_qO([cand[i] - cv[i] for i in range(8)]):
                    dep = True
                    break
            if not dep:
                u2 = cand
                break
        assert u2 is not None
        ws = []
        for c in q.residues():
            cv = O.mulv(O.central(c), u2)
            ws.append([e[i] + cv[i] for i in range(8)])
        ws.append(u2)
        self.zdiv[q.label] = (pi, ws)
        return self.zdiv[q.label]

    def neighbours(self, X, nu, q):
        O = self.O
        pi, ws = self.zero_divisor(q)
        x = None
        for coeffs in itertools.chain(
            ([1 if i == k else 0 for i in range(8)] for k in range(8)),
            itertools.product(range(-1, 2), repeat=8),
        ):
            v = ints(X * pari.matrix(8, 1, list(coeffs)))
            if not any(v):
                continue
            n = O.nrd(v)
            r = self.F.mul(n, self.F.inv(nu))
            if not q.contains(r):
                x = v
                break
        assert x is not None
        piI = O.lmul_matrix(pi) * X
        out = []
        Lx = O.lmul_matrix(x)
        for w in ws:
            xw = ints(Lx * pari.matrix(8, 1, w))
            J = pari.mathnf(pari.matconcat([O.lmul_matrix(xw), piI]))
            assert pari.matdet(J) == pari.matdet(X) * q.norm ** 2 or pari.matdet(J) == -pari.matdet(X) * q.norm ** 2
            out.append((J, self.F.mul(nu, q.gen)))
        return out

    def build_classes(self, qs):
        one = (Fraction(1), Fraction(0))
        self.identify(pari.matid(8), one, add=True)
        total = lambda: sum(Fraction(1) / c[3] for c in self.classes)
        queue = [0]
        while total() < self.mass:
            if not queue:
                raise RuntimeError("neighbour graph exhausted before mass")
            j = queue.pop(0)
            X, nu, _, _ = self.classes[j]
            for q in qs:
                for J, nuJ in self.neighbours(X, nu, q):
                    before = len(self.classes)
                    self.identify(J, nuJ, add=True)
                    if len(self.classes) > before:
                        queue.append(before)
                        if total() >= self.mass:
                            break
                if total() >= self.mass:
                    break
        assert total() == self.mass, (total(), self.mass)
        if self.verbose:
            print("  classes", len(self.classes), "mass", self.mass)

    def hecke(self, q):
        n = len(self.classes)
        rows = [[0] * n for _ in range(n)]
        for j, (X, nu, _, _) in enumerate(self.classes):
            for J, nuJ in self.neighbours(X, nu, q):
                i = self.identify(J, nuJ)
                rows[j][i] += 1
        return pari.matrix(n, n, [x for r in rows for x in r])

    def narrow_sign(self, nu):
        return 1 if self.F.totally_positive_generator(nu) is not None else -1
