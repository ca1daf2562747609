#pragma once

#include "ppelim/freycurve.hpp"
#include "ppelim/newforms.hpp"

#include <string>
#include <vector>

namespace ppelim {

struct LevelSpec {
    std::string name;  // "D" or "PD"; "D" or "LD" for the (p,p,3) case
    std::string label;
    long norm = 0;
};

// the fields and levels with explicit bounds
struct FieldCase {
    QuadField K;
    Signature sig = Signature::PPQ2_EFFECTIVE;
    long d = 0;
    int t = 2;
    FormKind kind = FormKind::BIANCHI;
    PrimeIdeal special;               // unique prime above t
    std::vector<PrimeIdeal> d_primes;  // primes above d
    std::vector<LevelSpec> levels;
    std::vector<long> excluded;
    long floor = 17;
};

// m < 0: Q(sqrt(m)) with d = -m; m > 0: Q(sqrt(m)) with d = m
FieldCase field_case(long m, Signature sig);
bool in_catalog(long m, Signature sig);
std::vector<std::pair<long, Signature>> catalog();

// "D"/"Q" and "PD"/"PQ" ("LD" for the (p,p,3) case) or a literal label "N.i"
const LevelSpec& level_by_descriptor(const FieldCase& c, const std::string& descriptor);

// every prime dividing the largest predicted level
std::vector<PrimeIdeal> maximal_level_support(const FieldCase& c);

}  // namespace ppelim
