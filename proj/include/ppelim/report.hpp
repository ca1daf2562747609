#pragma once

#include "ppelim/catalog.hpp"
#include "ppelim/criteria.hpp"
#include "ppelim/eliminate.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace ppelim {

struct CaseOptions {
    std::string fixture_root;  // holds newforms/, curves/, torsion/
    long norm_bound = 50;
    long floor = 17;
    std::optional<FetchOptions> fetch;  // forms from LMFDB (or its cache) instead of the shipped fixtures
    int threads = 1;
};

struct LevelResult {
    LevelSpec level;
    std::string source;
    std::vector<NewformRecord> forms;
    std::vector<FormVerdict> verdicts;
    std::vector<long> torsion_primes;
};

struct CaseReport {
    FieldCase fc;
    IrreducibilityContext irr;
    std::vector<PrimeIdeal> aux_primes;
    std::vector<LevelResult> levels;
    BoundReport bound;
    long frey_vj = 0;
    long frey_vj_p = 0;
};

// v_P(j) of the Frey curve at the special prime for the smallest prime exponent above the floor and v_P(b) = 1
long frey_vj_at_floor(const FieldCase& c, long floor, long* p_used = nullptr);

CaseReport run_case(const FieldCase& c, const CaseOptions& opt);

nlohmann::json verdict_json(const FormVerdict& v);
nlohmann::json case_json(const CaseReport& r);
std::string case_markdown(const CaseReport& r);

// canonical rendering shared by every report: sorted keys, one-space indent, trailing newline
std::string canonical(const nlohmann::json& j);

}  // namespace ppelim
