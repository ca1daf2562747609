"""Regenerate the shipped newform fixtures.

Hilbert forms over real quadratic fields come from Brandt modules (brandt.py);
Bianchi forms over imaginary quadratic fields are base changes of classical
newforms computed with PARI's mf package.

usage: python3 gen_fixtures.py OUTDIR [case ...]
"""

import json
import os
import sys
from fractions import Fraction

from brandt import Field, pari
from hilbert import newforms

SCHEMA = 1


def field_label(d):
    D = d if d % 4 == 1 else 4 * d
    return "2.%d.%d.1" % (2 if d > 0 else 0, abs(D))


def letters(i):
    s = ""
    while True:
        s = chr(ord("a") + i % 26) + s
        i //= 26
        if i == 0:
            return s
        i -= 1


def rat(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)


def level_label(nf, primes):
    I = pari.idealhnf(nf, 1)
    for pr in primes:
        I = pari.idealmul(nf, I, pr)
    n = int(pari.idealnorm(nf, I))
    same = pari.ideallist(nf, n)[n - 1]
    assert len(same) == 1, "level label ambiguous"
    return "%d.1" % n, n


def write(outdir, d, kind, lev_label, lev_norm, forms, provenance):
    flabel = field_label(d)
    forms = sorted(forms, key=lambda f: (len(f["hecke_poly"]), f["sort_key"]))
    out = []
    for i, f in enumerate(forms):
        out.append({
            "label": "%s-%s-%s" % (flabel, lev_label, letters(i)),
            "hecke_poly": f["hecke_poly"],
            "eigenvalues": {k: [rat(c) for c in v] for k, v in f["eigenvalues"].items()},
        })
    doc = {
        "schema": SCHEMA,
        "base_field": flabel,
        "level": lev_label,
        "level_norm": lev_norm,
        "kind": kind,
        "provenance": provenance,
        "forms": out,
    }
    path = os.path.join(outdir, flabel)
    os.makedirs(path, exist_ok=True)
    fn = os.path.join(path, "%s-%s.json" % (kind.lower(), lev_label))
    with open(fn, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print("wrote", fn, len(out), "forms", flush=True)


def sort_key(eig, labels):
    return [str(eig[l]) for l in labels if l in eig]


def hilbert_case(outdir, d, level_ps, extra=None):
    F = Field(d)
    level = []
    for p in level_ps:
        prs = pari.idealprimedec(F.nf, p)
        assert len(prs) == 1, "level prime must be unique above p"
        level.append(F.prime_of(p, lambda pr: True))
    lab, n = level_label(F.nf, [P.pr for P in level])
    forms, qs = newforms(F, level, verbose=True)
    labels = [q.label for q in qs]
    for f in forms:
        f["sort_key"] = sort_key(f["eigenvalues"], labels)
    write(outdir, d, "HILBERT", lab, n, forms,
          "Brandt module of an Eichler order in (-1,-1)/F; good primes of norm < 50")


def bianchi_case(outdir, d, N):
    """Base change to Q(sqrt(-d)) of the newforms of level N and trivial character."""
    m = -d
    poly = "x^2 - x + %d" % ((d + 1) // 4) if m % 4 == 1 else "x^2 + %d" % d
    nf = pari.nfinit(poly)
    primes = []
    for p in pari.primes(50):
        p = int(p)
        for pr in pari.idealprimedec(nf, p):
            nq = int(pari.idealnorm(nf, pr))
            if nq >= 50:
                continue
            r = -1
            if int(pr[3]) == 1:
                for t in range(p):
                    if int(pari.idealval(nf, pari("x - %d" % t), pr)) > 0:
                        r = t
                        break
            primes.append((nq, r, p, pr))
    primes.sort(key=lambda t: (t[0], t[1]))
    labelled = []
    idx = {}
    for nq, r, p, pr in primes:
        idx[nq] = idx.get(nq, 0) + 1
        labelled.append(("%d.%d" % (nq, idx[nq]), nq, p, pr))
    level_primes = []
    fa = pari.factor(N)
    for p in [int(fa[i, 0]) for i in range(fa.nrows())]:
        if p == d:
            level_primes.append(pari.idealprimedec(nf, p)[0])
        elif p == 2:
            prs = pari.idealprimedec(nf, 2)
            assert len(prs) == 1
            level_primes.append(prs[0])
    lab, n = level_label(nf, level_primes)
    mf = pari.mfinit([N, 2], 0)
    fields = pari.mffields(mf)
    forms = []
    for idx_f, f in enumerate(pari.mfeigenbasis(mf)):
        fpoly = fields[idx_f]
        co = pari.mfcoefs(f, 50)
        deg = int(pari.poldegree(fpoly))
        eig = {}
        for lab_q, nq, p, pr in labelled:
            if N % p == 0:
                continue
            ap = co[p]
            aq = ap if nq == p else ap * ap - 2 * p
            aq = pari.lift(pari.Mod(pari.lift(aq), fpoly)) if deg > 1 else aq
            coords = [Fraction(str(pari.polcoef(aq, k, "y"))) for k in range(deg)]
            eig[lab_q] = coords
        hp = [int(pari.polcoef(fpoly, k, "y")) for k in range(deg + 1)] if deg > 1 else [0, 1]
        forms.append({"hecke_poly": hp, "eigenvalues": eig,
                      "sort_key": sort_key(eig, [l[0] for l in labelled])})
    # keep forms new at N
    write(outdir, m, "BIANCHI", lab, n, forms,
          "base change of classical weight-2 newforms of level %d (PARI mf); non-base-change forms not included" % N)


CASES = {
    "b3": lambda o: (bianchi_case(o, 3, 3), bianchi_case(o, 3, 6)),
    "b11": lambda o: (bianchi_case(o, 11, 11), bianchi_case(o, 11, 22)),
    "b19": lambda o: (bianchi_case(o, 19, 19), bianchi_case(o, 19, 38)),
    "b43": lambda o: (bianchi_case(o, 43, 43), bianchi_case(o, 43, 86)),
    "h3": lambda o: (hilbert_case(o, 3, [3]), hilbert_case(o, 3, [2, 3])),
    "h5": lambda o: (hilbert_case(o, 5, [5]), hilbert_case(o, 5, [2, 5])),
    "h11": lambda o: (hilbert_case(o, 11, [11]), hilbert_case(o, 11, [2, 11])),
    "h13": lambda o: (hilbert_case(o, 13, [13]), hilbert_case(o, 13, [2, 13])),
    "h19": lambda o: (hilbert_case(o, 19, [19]), hilbert_case(o, 19, [2, 19])),
    "h29": lambda o: (hilbert_case(o, 29, [29]), hilbert_case(o, 29, [2, 29])),
    "a2": lambda o: (hilbert_case(o, 2, [2]), hilbert_case(o, 2, [2, 3])),
    "a5": lambda o: (hilbert_case(o, 5, [5]), hilbert_case(o, 5, [3, 5])),
    "a14": lambda o: (hilbert_case(o, 14, [2, 7]), hilbert_case(o, 14, [2, 3, 7])),
}


if __name__ == "__main__":
    outdir = sys.argv[1]
    names = sys.argv[2:] or list(CASES)
    for name in names:
        print("case", name, flush=True)
        CASES[name](outdir)
