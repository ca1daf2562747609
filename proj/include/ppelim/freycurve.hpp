#pragma once

#include "ppelim/quadfield.hpp"

#include <optional>
#include <string>

namespace ppelim {

enum class Signature { PPQ2_GENERAL, PPQ2_EFFECTIVE, PPQ3_CUBIC };

std::string signature_name(Signature s);
Signature parse_signature(const std::string& s);

// A a^p + B b^p = C c^2      (PPQ2_GENERAL)
// a^p + d b^p = c^2          (PPQ2_EFFECTIVE)
// a^p + d b^p = c^3          (PPQ3_CUBIC)
struct SolutionTriple {
    Signature sig = Signature::PPQ2_EFFECTIVE;
    FieldElement A, B, C, d;
    FieldElement a, b, c;
    long p = 0;

    const QuadField& field() const { return a.field(); }
    bool satisfies_equation() const;
};

SolutionTriple general_triple(FieldElement A, FieldElement B, FieldElement C, FieldElement a, FieldElement b,
                              FieldElement c, long p);
SolutionTriple effective_triple(FieldElement d, FieldElement a, FieldElement b, FieldElement c, long p);
SolutionTriple cubic_triple(FieldElement d, FieldElement a, FieldElement b, FieldElement c, long p);

struct WeierstrassModel {
    FieldElement a1, a2, a3, a4, a6;
    const QuadField& field() const { return a1.field(); }
};

WeierstrassModel model(const QuadField& K, Rat a1, Rat a2, Rat a3, Rat a4, Rat a6);

struct InvariantSet {
    FieldElement b2, b4, b6, b8, c4, c6, delta;
    std::optional<FieldElement> j;
};

// coprime as ideals of O_K (both integral, nonzero)
bool coprime(const FieldElement& x, const FieldElement& y);
bool is_odd(const FieldElement& x);
// (a, d b, c) pairwise coprime
bool is_primitive(const SolutionTriple& t);

WeierstrassModel build_frey(const SolutionTriple& t);
InvariantSet invariants(const WeierstrassModel& E);
// the stated closed forms for c4, c6, Delta, j; b-invariants left empty
InvariantSet closed_forms(const SolutionTriple& t);
bool check_closed_forms(const SolutionTriple& t);

enum class Reduction { GOOD, MULTIPLICATIVE, ADDITIVE_BOUNDED, POTENTIALLY_MULTIPLICATIVE_FLAG };
std::string reduction_name(Reduction r);

struct LocalReductionData {
    PrimeIdeal prime;
    std::optional<long> v_c4, v_c6;
    long v_delta = 0;
    std::optional<long> v_j;
    Reduction reduction = Reduction::GOOD;
    long cond_exp_lo = 0, cond_exp_hi = 0;
    std::string basis;
};

LocalReductionData local_data(const SolutionTriple& t, const WeierstrassModel& E, const PrimeIdeal& P);

// v_P(j) from the closed formula; checked against the direct valuation
long vj_formula(const SolutionTriple& t, const PrimeIdeal& P);
long vj_direct(const WeierstrassModel& E, const PrimeIdeal& P);

bool inertia_order_p_test(long v_j, long p);

struct LambdaMu {
    FieldElement lambda, mu;
};
LambdaMu lambda_mu(const FieldElement& a_prime, const FieldElement& b_prime);
WeierstrassModel curve_from_mu(const FieldElement& mu);
// a2^2 / a4 for a model Y^2 = X^3 + a2 X^2 + a4 X
FieldElement model_lambda(const WeierstrassModel& E);

struct CaseAnalysis {
    long v_mu = 0;
    int case_no = 0;
    bool applicable = false;
    long vj_formula = 0;
    long vj_direct = 0;
    bool contradiction = false;
};
CaseAnalysis mu_case_analysis(const FieldElement& mu, const PrimeIdeal& P);

}  // namespace ppelim
