#pragma once

#include "ppelim/freycurve.hpp"
#include "ppelim/newforms.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace ppelim {

struct TraceSet {
    long norm_q = 0;
    int t = 2;
    std::vector<long> values;
};

// integers |a| <= 2 sqrt(q) with a = q + 1 mod t
TraceSet trace_set(long norm_q, int t);

struct EliminationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Bfq {
    HeckeElement value;
    Int norm;  // |Norm(value)|
};

// N(q) ((N(q)+1)^2 - a_q^2) prod_{a in A_t(q)} (a - a_q)
Bfq b_fq(const NewformRecord& f, const PrimeIdeal& q, int t);

struct FormVerdict {
    std::string form;
    bool rational = true;
    std::map<std::string, Int> per_prime;
    Int eliminator = 0;  // 0 when every N_fq vanishes
    long floor = 17;
    std::vector<long> survivors;  // primes > floor dividing the eliminator; empty and all_survive when it is 0
    bool all_survive = false;
    // primes > floor dividing the eliminator with no single prime of Q_f above them dividing every B_fq
    std::vector<long> cleared;
};

// norm < bound, coprime to the level support, not above t
std::vector<PrimeIdeal> auxiliary_primes(const QuadField& K, const std::vector<PrimeIdeal>& level, int t,
                                         long norm_bound = 50);

FormVerdict eliminator(const NewformRecord& f, const std::vector<PrimeIdeal>& primes, int t, long floor = 17);

struct CurveRecord {
    std::string label;
    QuadField field;
    std::string conductor_label;
    WeierstrassModel model;
    std::string provenance;
};

CurveRecord load_curve(const std::string& path);
std::vector<CurveRecord> curves_for(const std::string& dir, const QuadField& K, const std::string& conductor_label);

// primes where the eigenvalue table and the curve's traces were compared; throws on any mismatch
std::vector<std::string> check_curve_matches(const NewformRecord& f, const CurveRecord& E);

struct InertiaResult {
    std::string form;
    std::string curve;
    std::string prime;
    long curve_vj = 0;
    long frey_vj = 0;
    bool eliminated = false;
    std::vector<std::string> matched_primes;
};

InertiaResult inertia_eliminate(const NewformRecord& f, const FormVerdict& v, const CurveRecord& E, long frey_vj,
                                const PrimeIdeal& P);

struct BoundReport {
    QuadField field;
    Signature signature = Signature::PPQ2_EFFECTIVE;
    std::vector<FormVerdict> verdicts;
    std::vector<InertiaResult> inertia;
    long floor = 17;
    std::vector<long> torsion_primes;
    std::vector<long> excluded;
    std::vector<std::string> unresolved;
    long bound = 0;  // C_K; meaningful only when resolved()
    bool resolved() const { return unresolved.empty(); }
};

// C_K = max(floor, survivors, torsion primes), then raised past excluded primes that sit right above it
BoundReport bound_synthesis(const QuadField& K, Signature sig, const std::vector<FormVerdict>& verdicts,
                            const std::vector<InertiaResult>& inertia, const std::vector<long>& torsion_primes,
                            long floor, const std::vector<long>& excluded);

}  // namespace ppelim
