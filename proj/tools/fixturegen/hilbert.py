"""Hilbert newforms of parallel weight two from Brandt modules."""

import itertools
import os
import random
from fractions import Fraction

from brandt import Brandt, Field, pari


def divisors(level):
    out = []
    for k in range(len(level) + 1):
        for sub in itertools.combinations(level, k):
            out.append(list(sub))
    return out


def factor_multiset(P):
    fa = pari.factor(P)
    out = {}
    for i in range(fa.nrows()):
        out[str(fa[i, 0])] = int(fa[i, 1])
    return out


class LevelData:
    def __init__(self, F, level, qs, coeffs, verbose=False):
        self.level = level
        self.B = Brandt(F, level, verbose=verbose)
        seeds = [q for q in qs[:4]]
        self.B.build_classes(seeds)
        self.T = {q.label: self.B.hecke(q) for q in qs}
        n = len(self.B.classes)
        labels = list(self.T)
        for a, b in itertools.combinations(labels[:4], 2):
            assert self.T[a] * self.T[b] == self.T[b] * self.T[a]
        self.F = F
        self.set_coeffs(qs, coeffs)

    def set_coeffs(self, qs, coeffs):
        F = self.F
        n = len(self.B.classes)
        G = pari.matrix(n, n)
        for q in qs:
            G = G + coeffs[q.label] * self.T[q.label]
        self.G = G
        self.charpoly = pari.charpoly(G)
        # Eisenstein lines: characters of the narrow class group
        eis = []
        chars = [lambda q: 1]
        if F.eta is not None:
            B = self.B
            chars.append(lambda q: B.narrow_sign(q.gen))
        for chi in chars:
            val = sum(coeffs[q.label] * chi(q) * (q.norm + 1) for q in qs)
            eis.append(pari("x - (%d)" % val))
        cusp = self.charpoly
        for e in eis:
            r = pari.divrem(cusp, e)
            assert r[1] == 0, "missing Eisenstein factor"
            cusp = r[0]
        self.cusp = cusp
        self.factors = factor_multiset(cusp) if pari.poldegree(cusp) > 0 else {}


def newforms(F, level, bound=50, verbose=False, cache=None):
    cache = {} if cache is None else cache
    qs = [q for q in F.primes_upto(bound) if all(q.pr != P.pr for P in level)]
    rng = random.Random(int(os.environ.get("FIXTUREGEN_SEED", "12345")))
    coeffs = {q.label: rng.randint(-40, 40) or 1 for q in qs}
    data = {}
    for M in sorted(divisors(level), key=len):
        key = tuple(sorted(P.norm for P in M))
        if verbose:
            print(" level", key)
        data[key] = LevelData(F, M, qs, coeffs, verbose=verbose)
    for attempt in range(20):
        try:
            new = split_new(level, data)
            break
        except AssertionError:
            # eigenvalue collision between systems; redraw the combination
            coeffs = {q.label: rng.randint(-400, 400) or 1 for q in qs}
            for ld in data.values():
                ld.set_coeffs(qs, coeffs)
    else:
        raise RuntimeError("could not separate the new subspace")
    top = data[tuple(sorted(P.norm for P in level))]
    forms = []
    for f, m in new[tuple(sorted(P.norm for P in level))].items():
        forms.append(eigen_system(top, pari(f), qs))
    return forms, qs


def split_new(level, data):
    new = {}
    for M in sorted(divisors(level), key=len):
        key = tuple(sorted(P.norm for P in M))
        mult = dict(data[key].factors)
        for M2 in divisors(M):
            if len(M2) == len(M):
                continue
            k2 = tuple(sorted(P.norm for P in M2))
            copies = 2 ** (len(M) - len(M2))
            for f, m in new[k2].items():
                mult[f] = mult.get(f, 0) - copies * m
                assert mult[f] >= 0, "old multiplicity mismatch"
        new[key] = {f: m for f, m in mult.items() if m}
    top = tuple(sorted(P.norm for P in level))
    for f, m in new[top].items():
        assert m == 1, "new multiplicity %d" % m
        assert data[top].factors[f] == 1, "new system shares its value with an old one"
    return new


def eigen_system(ld, g, qs):
    G = ld.G
    W = pari.matker(poly_at(g, G))
    e = W.ncols()
    # restrict operators to W
    R = {}
    for q in qs:
        TW = ld.T[q.label] * W
        R[q.label] = pari.matinverseimage(W, TW)
    gen = None
    for q in qs:
        cp = pari.charpoly(R[q.label])
        if pari.polisirreducible(cp) and pari.poldegree(cp) == e:
            gen = q
            break
    if gen is None:
        gen_mat = pari.matinverseimage(W, G * W)
        gen_label = None
    else:
        gen_mat = R[gen.label]
        gen_label = gen.label
    cp = pari.charpoly(gen_mat)
    red = pari.polredabs(cp, 1)
    P, a = red[0], red[1]
    v = pari.matrix(e, 1, [1] + [0] * (e - 1))
    K = pari.matconcat([gen_mat ** k * v for k in range(e)])
    Kinv = K ** -1
    eig = {}
    for q in qs:
        c = Kinv * (R[q.label] * v)
        poly = sum(c[k, 0] * pari("x") ** k for k in range(e))
        val = pari.lift(pari.subst(poly, "x", a))
        coords = [Fraction(str(pari.polcoef(val, k))) for k in range(e)]
        eig[q.label] = coords
    coeffs = [int(pari.polcoef(P, k)) for k in range(e + 1)]
    return {"hecke_poly": coeffs, "eigenvalues": eig, "generator": gen_label}


def poly_at(g, M):
    n = M.nrows()
    R = pari.matrix(n, n)
    for k in range(int(pari.poldegree(g)), -1, -1):
        R = R * M + pari.polcoef(g, k) * pari.matid(n)
    return R
