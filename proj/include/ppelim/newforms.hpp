#pragma once

#include "ppelim/poly.hpp"
#include "ppelim/quadfield.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ppelim {

enum class FormKind { BIANCHI, HILBERT };
std::string kind_name(FormKind k);
FormKind parse_kind(const std::string& s);

struct NewformRecord {
    QuadField base_field;
    std::string level_label;
    long level_norm = 0;
    FormKind kind = FormKind::BIANCHI;
    HeckeField hecke_field;
    // prime label "N.i" -> coordinates in the power basis of the Hecke field
    std::map<std::string, HeckeElement> eigenvalues;
    std::string label;
    std::optional<std::string> lmfdb_label;

    bool rational() const { return hecke_field.rational(); }
    bool operator==(const NewformRecord& o) const;
};

struct FixtureData {
    int schema = 1;
    std::string base_field;
    std::string level;
    long level_norm = 0;
    FormKind kind = FormKind::BIANCHI;
    std::string provenance;
    std::vector<NewformRecord> forms;
};

struct FixtureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "2.0.11.1" -> Q(sqrt(-11)), "2.2.12.1" -> Q(sqrt(3))
QuadField field_from_label(const std::string& label);

// every prime of K over a rational prime dividing the level norm
std::vector<PrimeIdeal> level_support(const QuadField& K, long level_norm);

FixtureData parse_fixture(const std::string& text, const std::string& source = "<string>");
std::string fixture_text(const FixtureData& data);
FixtureData read_fixture(const std::string& path);
std::vector<NewformRecord> load_fixture(const std::string& path);
void save_fixture(const std::string& path, const FixtureData& data);
// structural checks shared by load and fetch; throws FixtureError
void validate_record(const NewformRecord& r);

std::string fixture_path(const std::string& root, const std::string& field_label, FormKind kind,
                         const std::string& level_label);

// LMFDB access with a fixture-format cache

struct FetchOptions {
    std::string base_url = "https://www.lmfdb.org";
    std::string cache_dir;
    bool offline = false;
    int timeout_seconds = 30;
};

enum class FetchStatus { NETWORK, CACHE, CACHE_FALLBACK, UNKNOWN_LEVEL };
std::string fetch_status_name(FetchStatus s);

struct FetchResult {
    FetchStatus status = FetchStatus::NETWORK;
    std::string level_label;
    std::vector<NewformRecord> forms;
    std::string note;
};

struct FetchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PayloadError : std::runtime_error {
    std::string path;
    PayloadError(const std::string& p, const std::string& what) : std::runtime_error(p + ": " + what), path(p) {}
};

// "11" or "11.1"; the norm must be that of an integral ideal of K
std::pair<std::string, long> resolve_level(const QuadField& K, const std::string& level);

FetchResult fetch_lmfdb(const std::string& field_label, const std::string& level, FormKind kind,
                        const FetchOptions& opt);

// payload decoding, exposed for tests
std::vector<NewformRecord> decode_bianchi(const std::string& body, const QuadField& K, const std::string& level_label,
                                          long level_norm);
std::vector<Rat> parse_univariate(const std::string& expr);
// "3", "1/2 - w", "(1+w)^2" with w the integral basis generator
FieldElement parse_element(const QuadField& K, const std::string& expr);

}  // namespace ppelim
