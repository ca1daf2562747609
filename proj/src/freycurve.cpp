#include "ppelim/freycurve.hpp"

#include <climits>

namespace ppelim {

std::string signature_name(Signature s) {
    switch (s) {
        case Signature::PPQ2_GENERAL: return "ppq2-general";
        case Signature::PPQ2_EFFECTIVE: return "ppq2-effective";
        case Signature::PPQ3_CUBIC: return "ppq3";
    }
    return "?";
}

Signature parse_signature(const std::string& s) {
    if (s == "ppq2-general" || s == "general") return Signature::PPQ2_GENERAL;
    if (s == "ppq2-effective" || s == "ppq2" || s == "effective") return Signature::PPQ2_EFFECTIVE;
    if (s == "ppq3") return Signature::PPQ3_CUBIC;
    throw MathError("unknown signature '" + s + "'");
}

bool SolutionTriple::satisfies_equation() const {
    switch (sig) {
        case Signature::PPQ2_GENERAL: return A * a.pow(p) + B * b.pow(p) == C * c * c;
        case Signature::PPQ2_EFFECTIVE: return a.pow(p) + d * b.pow(p) == c * c;
        case Signature::PPQ3_CUBIC: return a.pow(p) + d * b.pow(p) == c * c * c;
    }
    return false;
}

namespace {

SolutionTriple base(Signature sig, const FieldElement& a, long p) {
    SolutionTriple t;
    t.sig = sig;
    const QuadField& K = a.field();
    t.A = t.B = t.C = t.d = FieldElement(K, 1);
    t.p = p;
    return t;
}

}  // namespace

SolutionTriple general_triple(FieldElement A, FieldElement B, FieldElement C, FieldElement a, FieldElement b,
                              FieldElement c, long p) {
    SolutionTriple t = base(Signature::PPQ2_GENERAL, a, p);
    t.A = std::move(A);
    t.B = std::move(B);
    t.C = std::move(C);
    t.a = std::move(a);
    t.b = std::move(b);
    t.c = std::move(c);
    return t;
}

SolutionTriple effective_triple(FieldElement d, FieldElement a, FieldElement b, FieldElement c, long p) {
    SolutionTriple t = base(Signature::PPQ2_EFFECTIVE, a, p);
    t.d = std::move(d);
    t.a = std::move(a);
    t.b = std::move(b);
    t.c = std::move(c);
    return t;
}

SolutionTriple cubic_triple(FieldElement d, FieldElement a, FieldElement b, FieldElement c, long p) {
    SolutionTriple t = effective_triple(std::move(d), std::move(a), std::move(b), std::move(c), p);
    t.sig = Signature::PPQ3_CUBIC;
    return t;
}

WeierstrassModel model(const QuadField& K, Rat a1, Rat a2, Rat a3, Rat a4, Rat a6) {
    return {FieldElement(K, a1), FieldElement(K, a2), FieldElement(K, a3), FieldElement(K, a4), FieldElement(K, a6)};
}

bool coprime(const FieldElement& x, const FieldElement& y) {
    if (x.is_zero() || y.is_zero()) return false;
    if (!x.is_integral() || !y.is_integral()) throw MathError("coprimality needs integral elements");
    Int nx = abs(Int(x.norm().get_num())), ny = abs(Int(y.norm().get_num()));
    Int g = gcd(nx, ny);
    if (g == 1) return true;
    for (const Int& l : prime_divisors(g)) {
        if (!l.fits_slong_p()) throw MathError("common norm factor too large");
        for (const PrimeIdeal& P : split_prime(x.field(), l.get_si(), false))
            if (valuation(x, P) > 0 && valuation(y, P) > 0) return false;
    }
    return true;
}

bool is_odd(const FieldElement& x) {
    if (x.is_zero()) return false;
    for (const PrimeIdeal& P : split_prime(x.field(), 2, false))
        if (valuation(x, P) > 0) return false;
    return true;
}

bool is_primitive(const SolutionTriple& t) {
    FieldElement db = t.d * t.b;
    return coprime(t.a, db) && coprime(t.a, t.c) && coprime(db, t.c);
}

WeierstrassModel build_frey(const SolutionTriple& t) {
    const QuadField& K = t.field();
    if (t.p < 3 || !is_prime(t.p)) throw MathError("exponent must be an odd prime");
    if (t.a.is_zero() || t.b.is_zero() || t.c.is_zero()) throw MathError("trivial solution (abc = 0)");
    if (!t.satisfies_equation()) throw MathError("triple does not satisfy its equation");
    FieldElement zero(K);
    switch (t.sig) {
        case Signature::PPQ2_GENERAL: {
            for (const FieldElement* e : {&t.A, &t.B, &t.C})
                if (!e->is_integral() || !is_odd(*e)) throw MathError("A, B, C must be odd integral elements");
            if (!coprime(t.A, t.B) || !coprime(t.A, t.C) || !coprime(t.B, t.C))
                throw MathError("A, B, C are not pairwise coprime");
            // Y^2 = X^3 + 2Cc X^2 + BCb^p X
            return {zero, 2 * t.C * t.c, zero, t.B * t.C * t.b.pow(t.p), zero};
        }
        case Signature::PPQ2_EFFECTIVE:
            if (t.d.is_zero()) throw MathError("d must be nonzero");
            // Y^2 + XY = X^3 + (c-1)/4 X^2 + d b^p/64 X
            return {FieldElement(K, 1), (t.c - Rat(1)) * Rat(1, 4), zero, t.d * t.b.pow(t.p) * Rat(1, 64), zero};
        case Signature::PPQ3_CUBIC:
            if (t.d.is_zero()) throw MathError("d must be nonzero");
            // Y^2 + 3cXY + d b^p Y = X^3
            return {3 * t.c, zero, t.d * t.b.pow(t.p), zero, zero};
    }
    throw MathError("unknown signature");
}

InvariantSet invariants(const WeierstrassModel& E) {
    InvariantSet I;
    const auto &a1 = E.a1, &a2 = E.a2, &a3 = E.a3, &a4 = E.a4, &a6 = E.a6;
    I.b2 = a1 * a1 + 4 * a2;
    I.b4 = 2 * a4 + a1 * a3;
    I.b6 = a3 * a3 + 4 * a6;
    I.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    I.c4 = I.b2 * I.b2 - 24 * I.b4;
    I.c6 = -(I.b2 * I.b2 * I.b2) + 36 * I.b2 * I.b4 - 216 * I.b6;
    I.delta = -(I.b2 * I.b2 * I.b8) - 8 * I.b4 * I.b4 * I.b4 - 27 * I.b6 * I.b6 + 9 * I.b2 * I.b4 * I.b6;
    if (!I.delta.is_zero()) I.j = I.c4 * I.c4 * I.c4 / I.delta;
    return I;
}

InvariantSet closed_forms(const SolutionTriple& t) {
    InvariantSet I;
    FieldElement ap = t.a.pow(t.p), bp = t.b.pow(t.p);
    switch (t.sig) {
        case Signature::PPQ2_GENERAL: {
            FieldElement s = 4 * t.A * ap + t.B * bp;
            FieldElement ab2p = (t.a * t.b * t.b).pow(t.p);
            I.delta = 64 * t.A * t.B * t.B * t.C.pow(3) * ab2p;
            I.c4 = 16 * t.C * s;
            I.c6 = 64 * t.C * t.C * t.c * (t.B * bp - 8 * t.A * ap);
            I.j = 64 * s.pow(3) / (t.A * t.B * t.B * ab2p);
            break;
        }
        case Signature::PPQ2_EFFECTIVE: {
            FieldElement s = 4 * ap + t.d * bp;
            FieldElement ab2p = (t.a * t.b * t.b).pow(t.p);
            I.delta = t.d * t.d * ab2p * Rat(1, 4096);
            I.c4 = s * Rat(1, 4);
            I.c6 = t.c * (t.d * bp - 8 * ap) * Rat(1, 8);
            I.j = 64 * s.pow(3) / (t.d * t.d * ab2p);
            break;
        }
        case Signature::PPQ3_CUBIC: {
            FieldElement s = 9 * ap + t.d * bp;
            FieldElement ab3p = (t.a * t.b.pow(3)).pow(t.p);
            FieldElement dbp = t.d * bp;
            I.delta = 27 * t.d.pow(3) * ab3p;
            I.c4 = 9 * t.c * s;
            I.c6 = -27 * (27 * t.c.pow(6) - 36 * t.c.pow(3) * dbp + 8 * dbp * dbp);
            I.j = 27 * t.c.pow(3) * s.pow(3) / (t.d.pow(3) * ab3p);
            break;
        }
    }
    return I;
}

bool check_closed_forms(const SolutionTriple& t) {
    InvariantSet got = invariants(build_frey(t));
    InvariantSet want = closed_forms(t);
    return got.delta == want.delta && got.c4 == want.c4 && got.c6 == want.c6 && got.j && want.j &&
           *got.j == *want.j;
}

std::string reduction_name(Reduction r) {
    switch (r) {
        case Reduction::GOOD: return "good";
        case Reduction::MULTIPLICATIVE: return "multiplicative";
        case Reduction::ADDITIVE_BOUNDED: return "additive-bounded";
        case Reduction::POTENTIALLY_MULTIPLICATIVE_FLAG: return "potentially-multiplicative";
    }
    return "?";
}

namespace {

bool divides(const PrimeIdeal& P, const FieldElement& x) { return !x.is_zero() && valuation(x, P) > 0; }

std::optional<long> val_or_empty(const FieldElement& x, const PrimeIdeal& P) {
    if (x.is_zero()) return std::nullopt;
    return valuation(x, P);
}

}  // namespace

LocalReductionData local_data(const SolutionTriple& t, const WeierstrassModel& E, const PrimeIdeal& P) {
    InvariantSet I = invariants(E);
    if (I.delta.is_zero()) throw MathError("singular model");
    LocalReductionData L;
    L.prime = P;
    L.v_c4 = val_or_empty(I.c4, P);
    L.v_c6 = val_or_empty(I.c6, P);
    L.v_delta = valuation(I.delta, P);
    if (I.j && !I.j->is_zero()) L.v_j = valuation(*I.j, P);

    auto set = [&](Reduction r, long lo, long hi, std::string why) {
        L.reduction = r;
        L.cond_exp_lo = lo;
        L.cond_exp_hi = hi;
        L.basis = std::move(why);
    };
    auto semistable_check = [&](const char* what) {
        if (!L.v_c4 || *L.v_c4 != 0)
            throw MathError(std::string("hypotheses violated at ") + P.label + ": v(c4) != 0 at a " + what);
    };
    auto good_check = [&] {
        if (L.v_delta != 0) throw MathError("hypotheses violated at " + P.label + ": discriminant not a unit");
    };
    const long v2 = valuation(FieldElement(P.K, 2), P);
    const bool above2 = P.p == 2;

    switch (t.sig) {
        case Signature::PPQ2_GENERAL: {
            if (above2 || divides(P, t.C)) {
                set(Reduction::ADDITIVE_BOUNDED, 0, 2 + 6 * v2, "prime dividing 2C: exponent bounded by 2+6v(2)");
            } else if (divides(P, t.A * t.a) || divides(P, t.B * t.b)) {
                semistable_check("prime dividing Aa or Bb");
                set(Reduction::MULTIPLICATIVE, 1, 1, "odd prime dividing Aa or Bb, not 2C");
            } else {
                good_check();
                set(Reduction::GOOD, 0, 0, "prime coprime to 2CABab");
            }
            break;
        }
        case Signature::PPQ2_EFFECTIVE: {
            if (above2) {
                if (!divides(P, t.b)) throw MathError("hypotheses violated: the prime above 2 must divide b");
                if (t.p <= 11) throw MathError("hypotheses violated: exponent must exceed 11");
                set(Reduction::POTENTIALLY_MULTIPLICATIVE_FLAG, 0, 1, "prime above 2 dividing b, p > 11");
            } else if (divides(P, t.d)) {
                semistable_check("prime dividing d");
                set(Reduction::MULTIPLICATIVE, 1, 1, "prime dividing d");
            } else if (divides(P, t.a * t.b)) {
                semistable_check("prime dividing ab");
                set(Reduction::MULTIPLICATIVE, 1, 1, "odd prime dividing ab, not d");
            } else {
                good_check();
                set(Reduction::GOOD, 0, 0, "prime coprime to 2dab");
            }
            break;
        }
        case Signature::PPQ3_CUBIC: {
            if (P.p == 3) {
                if (!divides(P, t.b)) throw MathError("hypotheses violated: the prime above 3 must divide b");
                if (t.p <= 4) throw MathError("hypotheses violated: exponent must exceed 4");
                set(Reduction::POTENTIALLY_MULTIPLICATIVE_FLAG, 0, 1, "prime above 3 dividing b, p > 4");
            } else if (divides(P, t.d * t.a * t.b)) {
                semistable_check("prime dividing dab");
                set(Reduction::MULTIPLICATIVE, 1, 1, "prime dividing dab, not 3");
            } else {
                good_check();
                set(Reduction::GOOD, 0, 0, "prime coprime to 3dab");
            }
            break;
        }
    }
    return L;
}

long vj_direct(const WeierstrassModel& E, const PrimeIdeal& P) {
    InvariantSet I = invariants(E);
    if (!I.j) throw MathError("singular model");
    if (I.j->is_zero()) throw MathError("j = 0 has no valuation");
    return valuation(*I.j, P);
}

long vj_formula(const SolutionTriple& t, const PrimeIdeal& P) {
    const FieldElement two(P.K, 2), three(P.K, 3);
    const long vb = valuation(t.b, P);
    long formula = 0;
    if (t.sig == Signature::PPQ3_CUBIC) {
        if (P.p != 3) throw MathError("precondition: prime must lie above 3");
        if (vb <= 0) throw MathError("precondition: prime must divide b");
        if (!t.d.is_zero() && valuation(t.d, P) != 0) throw MathError("precondition: d must be prime to 3");
        if (valuation(t.a, P) != 0) throw MathError("precondition: a must be prime to 3");
        if (t.p * vb <= 2 * valuation(three, P)) throw MathError("precondition: exponent too small");
        formula = 9 * valuation(three, P) - 3 * t.p * vb;
    } else {
        if (P.p != 2) throw MathError("precondition: prime must lie above 2");
        if (vb <= 0) throw MathError("precondition: prime must divide b");
        for (const FieldElement* e : {&t.A, &t.B, &t.C, &t.d, &t.a})
            if (valuation(*e, P) != 0) throw MathError("precondition: A, B, C, d, a must be odd at the prime");
        if (t.p * vb <= 2 * valuation(two, P)) throw MathError("precondition: exponent too small");
        formula = 12 * valuation(two, P) - 2 * t.p * vb;
    }
    long direct = vj_direct(build_frey(t), P);
    if (direct != formula)
        throw MathError("v(j) formula " + std::to_string(formula) + " disagrees with direct value " +
                        std::to_string(direct));
    return formula;
}

bool inertia_order_p_test(long v_j, long p) { return v_j < 0 && (-v_j) % p != 0; }

LambdaMu lambda_mu(const FieldElement& a_prime, const FieldElement& b_prime) {
    if (b_prime.is_zero()) throw MathError("b' must be nonzero");
    FieldElement lambda = a_prime * a_prime / b_prime;
    if (lambda.is_zero() || lambda == FieldElement(lambda.field(), 4)) throw MathError("degenerate lambda (0 or 4)");
    return {lambda, lambda - Rat(4)};
}

WeierstrassModel curve_from_mu(const FieldElement& mu) {
    const QuadField& K = mu.field();
    if (mu.is_zero() || mu == FieldElement(K, -4)) throw MathError("degenerate mu (0 or -4)");
    FieldElement lambda = mu + Rat(4);
    FieldElement zero(K);
    return {zero, FieldElement(K, 1), zero, FieldElement(K, 1) / lambda, zero};
}

FieldElement model_lambda(const WeierstrassModel& E) {
    if (!E.a1.is_zero() || !E.a3.is_zero() || !E.a6.is_zero()) throw MathError("model is not of the form X^3+aX^2+bX");
    if (E.a4.is_zero()) throw MathError("singular model");
    return E.a2 * E.a2 / E.a4;
}

CaseAnalysis mu_case_analysis(const FieldElement& mu, const PrimeIdeal& P) {
    const QuadField& K = mu.field();
    if (mu.is_zero() || mu == FieldElement(K, -1)) throw MathError("mu must avoid 0 and -1");
    CaseAnalysis r;
    const long v2 = valuation(FieldElement(K, 2), P);
    r.v_mu = valuation(mu, P);
    r.case_no = r.v_mu == 0 ? 1 : (r.v_mu > 0 ? 2 : 3);
    r.vj_formula = 8 * v2 + 3 * valuation(mu + Rat(1), P) - r.v_mu;
    FieldElement j = FieldElement(K, 256) * (mu + Rat(1)).pow(3) / mu;
    r.vj_direct = valuation(j, P);
    if (r.vj_direct != r.vj_formula) throw MathError("v(j') formula disagrees with direct valuation");
    r.applicable = -4 * v2 <= r.v_mu && r.v_mu <= 8 * v2;
    r.contradiction = r.applicable && r.vj_direct >= 0;
    return r;
}

}  // namespace ppelim
