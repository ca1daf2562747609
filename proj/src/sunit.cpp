#include "ppelim/sunit.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ppelim {

namespace {

bool abs_gt_one(const FieldElement& u) {
    return (u - Rat(1)).sign(0) > 0 || (u + Rat(1)).sign(0) < 0;
}

FieldElement inverse(const FieldElement& x) { return FieldElement(x.field(), 1) / x; }

FieldElement power(const FieldElement& x, long k) { return k >= 0 ? x.pow(k) : inverse(x).pow(-k); }

long floor_div2(long a) { return a >= 0 ? a / 2 : -((-a + 1) / 2); }

FieldElement canonical_sign(const FieldElement& g) {
    if (g.x() < 0 || (g.x() == 0 && g.y() < 0)) return -g;
    return g;
}

}  // namespace

SUnitBasis s_unit_basis(const QuadField& K, const std::vector<PrimeIdeal>& S) {
    SUnitBasis B;
    B.K = K;
    for (const PrimeIdeal& P : S) {
        if (!(P.K == K)) throw MathError("s_unit_basis: prime from another field");
        std::optional<FieldElement> g = P.gen ? P.gen : find_generator(P);
        if (!g) throw MathError("s_unit_basis: " + P.label + " is not principal (no generator found)");
        if (abs(g->norm()) != P.norm() || !g->is_integral() || !P.contains(*g))
            throw MathError("s_unit_basis: generator of " + P.label + " fails the norm check");
        B.S.push_back(P);
        B.gens.push_back(*g);
    }
    if (K.real()) {
        FieldElement e = fundamental_unit(K);
        if (!abs_gt_one(e)) e = inverse(e);
        B.unit = e;
    }
    FieldElement one(K, 1);
    if (K.m == -1 || K.m == -3) {
        FieldElement z = FieldElement::omega(K);
        FieldElement x = one;
        do {
            B.torsion.push_back(x);
            x = x * z;
        } while (x != one);
    } else {
        B.torsion = {one, -one};
    }
    return B;
}

namespace {

// x / prod gens^v has no valuation on S, so x is an S-unit iff that quotient is a unit
FieldElement strip_s(const SUnitBasis& B, const FieldElement& x, std::vector<long>* exps = nullptr) {
    FieldElement u = x;
    for (size_t i = 0; i < B.S.size(); ++i) {
        long e = valuation(x, B.S[i]);
        if (exps) exps->push_back(e);
        u = u / power(B.gens[i], e);
    }
    return u;
}

}  // namespace

bool is_s_unit(const SUnitBasis& B, const FieldElement& x) {
    if (x.is_zero()) return false;
    FieldElement u = strip_s(B, x);
    return abs(u.norm()) == 1 && u.is_integral();
}

std::optional<SUnitExponents> decompose(const SUnitBasis& B, const FieldElement& x) {
    if (!is_s_unit(B, x)) return std::nullopt;
    SUnitExponents r;
    FieldElement u = strip_s(B, x, &r.e);
    if (B.unit) {
        FieldElement one(B.K, 1);
        for (int it = 0; it < 100000; ++it) {
            if (u == one || u == -one) break;
            if (abs_gt_one(u)) {
                u = u / *B.unit;
                ++r.k;
            } else {
                u = u * *B.unit;
                --r.k;
            }
        }
    }
    for (size_t j = 0; j < B.torsion.size(); ++j)
        if (B.torsion[j] == u) {
            r.zeta = j;
            return r;
        }
    throw std::logic_error("decompose: unit " + u.str() + " is not torsion");
}

FieldElement compose(const SUnitBasis& B, const SUnitExponents& x) {
    FieldElement r = B.torsion.at(x.zeta);
    if (x.k != 0) {
        if (!B.unit) throw MathError("compose: no fundamental unit");
        r = r * power(*B.unit, x.k);
    }
    for (size_t i = 0; i < x.e.size(); ++i) r = r * power(B.gens[i], x.e[i]);
    return r;
}

std::vector<FieldElement> s_units_in_box(const SUnitBasis& B, long box) {
    if (box < 0) throw std::invalid_argument("box must be non-negative");
    std::vector<FieldElement> cur = B.torsion;
    if (B.unit) {
        std::vector<FieldElement> nxt;
        for (long k = -box; k <= box; ++k) {
            FieldElement uk = power(*B.unit, k);
            for (const FieldElement& c : cur) nxt.push_back(c * uk);
        }
        cur = std::move(nxt);
    }
    for (const FieldElement& g : B.gens) {
        std::vector<FieldElement> nxt;
        for (long e = -box; e <= box; ++e) {
            FieldElement ge = power(g, e);
            for (const FieldElement& c : cur) nxt.push_back(c * ge);
        }
        cur = std::move(nxt);
    }
    return cur;
}

std::string solution_key(const SUnitSolution& s) {
    return s.alpha.str() + " | " + s.beta.str() + " | " + s.gamma.str();
}

SUnitSolution normalize_solution(const SUnitBasis& B, const SUnitSolution& s, const PrimeIdeal& P) {
    std::vector<SUnitSolution> cand;
    for (int swap = 0; swap < 2; ++swap) {
        const FieldElement& a = swap ? s.beta : s.alpha;
        const FieldElement& b = swap ? s.alpha : s.beta;
        std::optional<SUnitExponents> eb = decompose(B, b);
        if (!eb) throw MathError("normalize_solution: " + b.str() + " is not an S-unit");
        SUnitExponents d;
        d.k = floor_div2(eb->k);
        for (long e : eb->e) d.e.push_back(floor_div2(e));
        d.zeta = (eb->zeta - eb->zeta % 2) / 2;
        FieldElement delta = compose(B, d);
        FieldElement d2 = delta * delta;
        SUnitSolution c;
        c.alpha = a / d2;
        c.beta = b / d2;
        c.gamma = canonical_sign(s.gamma / delta);
        c.ea = *decompose(B, c.alpha);
        c.eb = *decompose(B, c.beta);
        cand.push_back(c);
    }
    auto ordered = [&](const SUnitSolution& c) {
        long va = valuation(c.alpha, P), vb = valuation(c.beta, P);
        return 0 <= vb && vb <= va;
    };
    std::sort(cand.begin(), cand.end(), [&](const SUnitSolution& x, const SUnitSolution& y) {
        bool ox = ordered(x), oy = ordered(y);
        if (ox != oy) return ox;
        return solution_key(x) < solution_key(y);
    });
    return cand.front();
}

std::vector<SUnitSolution> solve_square_equation(const SUnitBasis& B, long box, const PrimeIdeal& P) {
    if (box < 1) throw std::invalid_argument("box must be at least 1");
    // square-class representatives for beta
    std::vector<SUnitExponents> reps{SUnitExponents{0, 0, std::vector<long>(B.S.size(), 0)}};
    auto widen = [&](auto f) {
        std::vector<SUnitExponents> nxt;
        for (const SUnitExponents& r : reps)
            for (long v = 0; v <= 1; ++v) {
                SUnitExponents c = r;
                f(c, v);
                nxt.push_back(c);
            }
        reps = std::move(nxt);
    };
    widen([](SUnitExponents& c, long v) { c.zeta = static_cast<size_t>(v); });
    if (B.unit) widen([](SUnitExponents& c, long v) { c.k = v; });
    for (size_t i = 0; i < B.S.size(); ++i) widen([i](SUnitExponents& c, long v) { c.e[i] = v; });

    std::vector<FieldElement> alphas = s_units_in_box(B, box);
    std::map<std::string, SUnitSolution> found;
    for (const SUnitExponents& r : reps) {
        FieldElement beta = compose(B, r);
        for (const FieldElement& alpha : alphas) {
            FieldElement s = alpha + beta;
            std::optional<FieldElement> g;
            if (s.is_zero())
                g = FieldElement(B.K, 0);
            else
                g = sqrt_in_field(s);
            if (!g) continue;
            SUnitSolution sol{alpha, beta, *g, {}, {}};
            SUnitSolution n = normalize_solution(B, sol, P);
            if (n.alpha + n.beta != n.gamma * n.gamma) throw std::logic_error("normalized solution broke the equation");
            found.emplace(solution_key(n), n);
        }
    }
    std::vector<SUnitSolution> out;
    for (auto& [k, v] : found) out.push_back(v);
    return out;
}

std::vector<SUnitSolution> solve_square_plus_one(const SUnitBasis& B, long box, const PrimeIdeal& P) {
    (void)P;
    std::map<std::string, SUnitSolution> found;
    FieldElement one(B.K, 1);
    for (const FieldElement& alpha : s_units_in_box(B, box)) {
        FieldElement s = alpha + one;
        std::optional<FieldElement> g = s.is_zero() ? std::optional<FieldElement>(FieldElement(B.K, 0)) : sqrt_in_field(s);
        if (!g) continue;
        SUnitSolution sol{alpha, one, canonical_sign(*g), *decompose(B, alpha), *decompose(B, one)};
        found.emplace(solution_key(sol), sol);
    }
    std::vector<SUnitSolution> out;
    for (auto& [k, v] : found) out.push_back(v);
    return out;
}

std::vector<std::pair<FieldElement, FieldElement>> solve_unit_equation(const SUnitBasis& B, long box) {
    if (box < 0) throw std::invalid_argument("box must be non-negative");
    std::map<std::string, std::pair<FieldElement, FieldElement>> found;
    FieldElement one(B.K, 1);
    auto inside = [&](const SUnitExponents& e) {
        if (std::labs(e.k) > box) return false;
        return std::all_of(e.e.begin(), e.e.end(), [&](long v) { return std::labs(v) <= box; });
    };
    for (const FieldElement& x : s_units_in_box(B, box)) {
        FieldElement y = one - x;
        if (y.is_zero()) continue;
        std::optional<SUnitExponents> ey = decompose(B, y);
        if (!ey || !inside(*ey)) continue;
        found.emplace(x.str() + " | " + y.str(), std::make_pair(x, y));
    }
    std::vector<std::pair<FieldElement, FieldElement>> out;
    for (auto& [k, v] : found) out.push_back(v);
    return out;
}

bool criterion_A(const std::vector<SUnitSolution>& sols, const PrimeIdeal& P) {
    long bound = 6 * valuation(FieldElement(P.K, 2), P);
    for (const SUnitSolution& s : sols) {
        if (s.gamma * s.gamma != s.alpha + s.beta) throw std::invalid_argument("criterion_A: not a solution");
        if (std::labs(valuation(s.alpha, P) - valuation(s.beta, P)) > bound) return false;
    }
    return true;
}

CriterionB criterion_B(const SUnitBasis& B, const PrimeIdeal& P, long box, long bound) {
    CriterionB r;
    r.box = box;
    r.holds = true;
    std::vector<SUnitSolution> sols = solve_square_plus_one(B, box, P);
    r.solutions = sols.size();
    for (const SUnitSolution& s : sols) {
        long v = valuation(s.alpha, P);
        if (v < 0) continue;
        r.max_v = std::max(r.max_v, v);
        if (v > bound) r.holds = false;
    }
    r.scope = "verified within box " + std::to_string(box);
    return r;
}

DescentReport unit_descent(long q, long ell, long box) {
    DescentReport r;
    r.q = q;
    r.ell = ell;
    r.box = box;
    if (!is_prime(q) || q < 13) r.failed.push_back("q must be a prime >= 13");
    if (((q % 8) + 8) % 8 != 5) r.failed.push_back("q must be 5 mod 8");
    if (!is_prime(ell) || ell < 29) r.failed.push_back("l must be a prime >= 29");
    if (((ell % 8) + 8) % 8 != 5) r.failed.push_back("l must be 5 mod 8");
    if (is_prime(ell) && is_prime(q) && kronecker(Int(q), ell) != -1) r.failed.push_back("Kronecker(q, l) must be -1");
    // the computation still runs when only congruence conditions fail, so its output can be inspected
    if (!is_prime(q) || !is_prime(ell) || q < 5 || ell == 2) return r;

    QuadField K = make_field(q);
    std::vector<PrimeIdeal> over2 = split_prime(K, 2), overl = split_prime(K, ell);
    r.two_inert = over2.size() == 1 && over2[0].f == 2;
    r.ell_inert = overl.size() == 1 && overl[0].f == 2;
    r.unit_norm = Int(fundamental_unit(K).norm().get_num()).get_si();
    r.h_plus = class_numbers(K).h_plus;
    if (!r.two_inert) r.failed.push_back("2 is not inert");
    if (!r.ell_inert) r.failed.push_back("l is not inert");
    if (r.unit_norm != -1) r.failed.push_back("fundamental unit has norm +1");
    if (r.h_plus % 2 == 0) r.failed.push_back("narrow class number is even");
    r.hypotheses = r.failed.empty();

    const PrimeIdeal& P = over2[0];
    std::vector<PrimeIdeal> S = over2;
    S.insert(S.end(), overl.begin(), overl.end());
    SUnitBasis B = s_unit_basis(K, S);
    r.unit_solutions = solve_unit_equation(B, box);
    std::set<std::string> seen;
    r.alphas_expected = !r.unit_solutions.empty();
    for (const auto& [x, y] : r.unit_solutions) {
        FieldElement gamma = x * Rat(2) - Rat(1);
        FieldElement alpha = gamma * gamma - Rat(1);
        if (!seen.insert(alpha.str()).second) continue;
        long v = valuation(alpha, P);
        r.alphas.push_back(alpha);
        r.v_alpha.push_back(v);
        bool ok = (alpha == FieldElement(K, -1) && v == 0) || (alpha == FieldElement(K, 8) && v == 3);
        r.alphas_expected = r.alphas_expected && ok;
    }
    r.criterionB = criterion_B(B, P, box);
    r.computed = true;
    return r;
}

}  // namespace ppelim
