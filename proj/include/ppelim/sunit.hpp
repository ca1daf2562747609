#pragma once

#include "ppelim/quadfield.hpp"

#include <string>
#include <vector>

namespace ppelim {

struct SUnitBasis {
    QuadField K;
    std::vector<PrimeIdeal> S;
    std::vector<FieldElement> gens;  // gens[i] O_K = S[i]
    std::optional<FieldElement> unit;
    std::vector<FieldElement> torsion;
};

SUnitBasis s_unit_basis(const QuadField& K, const std::vector<PrimeIdeal>& S);

// x = torsion[zeta] * unit^k * prod gens[i]^e[i]
struct SUnitExponents {
    size_t zeta = 0;
    long k = 0;
    std::vector<long> e;
    bool operator==(const SUnitExponents& o) const { return zeta == o.zeta && k == o.k && e == o.e; }
};

bool is_s_unit(const SUnitBasis& B, const FieldElement& x);
std::optional<SUnitExponents> decompose(const SUnitBasis& B, const FieldElement& x);
FieldElement compose(const SUnitBasis& B, const SUnitExponents& x);
// all S-units with |k|, |e_i| <= box
std::vector<FieldElement> s_units_in_box(const SUnitBasis& B, long box);

struct SUnitSolution {
    FieldElement alpha, beta, gamma;
    SUnitExponents ea, eb;
};

// representative of the ~2 class with the order of alpha, beta fixed as described in normalize_solution
SUnitSolution normalize_solution(const SUnitBasis& B, const SUnitSolution& s, const PrimeIdeal& P);
std::string solution_key(const SUnitSolution& s);

// alpha + beta = gamma^2, alpha in the box, beta over the square classes; P orders each pair
std::vector<SUnitSolution> solve_square_equation(const SUnitBasis& B, long box, const PrimeIdeal& P);
// alpha + 1 = gamma^2 with alpha in the box
std::vector<SUnitSolution> solve_square_plus_one(const SUnitBasis& B, long box, const PrimeIdeal& P);
std::vector<std::pair<FieldElement, FieldElement>> solve_unit_equation(const SUnitBasis& B, long box);

bool criterion_A(const std::vector<SUnitSolution>& sols, const PrimeIdeal& P);

struct CriterionB {
    bool holds = false;
    long box = 0;
    size_t solutions = 0;
    long max_v = 0;
    std::string scope;
};
// every solution of alpha + 1 = gamma^2 in the box with v_P(alpha) >= 0 has v_P(alpha) <= bound
CriterionB criterion_B(const SUnitBasis& B, const PrimeIdeal& P, long box, long bound = 6);

struct DescentReport {
    long q = 0, ell = 0;
    long box = 0;
    bool hypotheses = false;
    bool computed = false;  // the solver ran; false when q or l is unusable
    std::vector<std::string> failed;
    bool two_inert = false, ell_inert = false;
    long unit_norm = 0;
    long h_plus = 0;
    std::vector<std::pair<FieldElement, FieldElement>> unit_solutions;
    std::vector<FieldElement> alphas;
    std::vector<long> v_alpha;
    bool alphas_expected = false;
    CriterionB criterionB;
    bool holds() const { return hypotheses && alphas_expected && criterionB.holds; }
};

DescentReport unit_descent(long q, long ell, long box = 6);

}  // namespace ppelim
