#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ppelim/newforms.hpp"
#include "testutil.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

using namespace ppelim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

HeckeElement random_hecke(std::mt19937_64& rng, const HeckeField& F) {
    std::uniform_int_distribution<long> d(-30, 30), den(1, 6);
    HeckeElement e;
    for (long i = 0; i < F.degree(); ++i) e.push_back(Rat(d(rng), den(rng)));
    for (Rat& r : e) r.canonicalize();
    return e;
}

std::vector<fs::path> all_fixtures() {
    std::vector<fs::path> out;
    for (const auto& e : fs::recursive_directory_iterator(fs::path(testutil::fixtures()) / "newforms"))
        if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

const char* kMinimal = R"({
 "base_field": "2.0.11.1",
 "forms": [
  {
   "eigenvalues": {
    "3.1": ["-1"],
    "5.1": ["1"]
   },
   "hecke_poly": [0, 1],
   "label": "f"
  }
 ],
 "kind": "BIANCHI",
 "level": "11.1",
 "level_norm": 11,
 "provenance": "test",
 "schema": 1
})";

std::string replace(std::string s, const std::string& from, const std::string& to) {
    auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("hecke_norm examples") {
    HeckeField Q = make_hecke_field({Int(0), Int(1)});
    CHECK(hecke_norm(Q, {Rat(45)}) == 45);
    HeckeField F = make_hecke_field({Int(-5), Int(0), Int(1)});
    CHECK(hecke_norm(F, {Rat(0), Rat(1)}) == -5);
    CHECK(hecke_norm(F, {Rat(1), Rat(1)}) == -4);
    CHECK_THROWS(make_hecke_field({Int(-4), Int(0), Int(1)}));
    CHECK_THROWS(make_hecke_field({Int(-5), Int(0), Int(2)}));
}

TEST_CASE("hecke_norm multiplicative on every fixture field") {
    std::vector<std::vector<Int>> polys = {{Int(-5), Int(0), Int(1)}, {Int(-1), Int(-1), Int(0), Int(1)}};
    for (const fs::path& p : all_fixtures())
        for (const NewformRecord& r : load_fixture(p.string())) polys.push_back(r.hecke_field.poly);
    std::sort(polys.begin(), polys.end());
    polys.erase(std::unique(polys.begin(), polys.end()), polys.end());
    std::mt19937_64 rng(17);
    for (const auto& poly : polys) {
        HeckeField F = make_hecke_field(poly);
        for (int i = 0; i < 500; ++i) {
            HeckeElement a = random_hecke(rng, F), b = random_hecke(rng, F);
            CHECK(hecke_norm(F, hecke_mul(F, a, b)) == hecke_norm(F, a) * hecke_norm(F, b));
        }
        Rat cube = 1;
        for (long k = 0; k < F.degree(); ++k) cube *= 3;
        CHECK(hecke_norm(F, hecke_from(F, Rat(3))) == cube);
    }
}

TEST_CASE("charpoly and Hasse check") {
    HeckeField F = make_hecke_field({Int(-5), Int(0), Int(1)});
    // sqrt5 has |sigma| = 2.236 <= 2 sqrt(2) but > 2 sqrt(1)
    CHECK(hasse_bound_holds(F, {Rat(0), Rat(1)}, 2));
    CHECK_FALSE(hasse_bound_holds(F, {Rat(0), Rat(2)}, 4));
    CHECK(hasse_bound_holds(F, {Rat(0), Rat(2)}, 5));
    QPoly c = hecke_charpoly(F, {Rat(1), Rat(1)});
    // (x - 1)^2 - 5
    CHECK(c == QPoly{Rat(-4), Rat(-2), Rat(1)});
    // x^2 + 1 is not totally real
    HeckeField G = make_hecke_field({Int(1), Int(0), Int(1)});
    CHECK_FALSE(hasse_bound_holds(G, {Rat(0), Rat(1)}, 49));
}

TEST_CASE("common prime of Q_f above l") {
    HeckeField F = make_hecke_field({Int(-5), Int(0), Int(1)});
    // 5 = 4^2 mod 11: x - 4 and x + 4 lie in the two primes above 11
    HeckeElement a{Rat(-4), Rat(1)}, b{Rat(4), Rat(1)};
    CHECK(hecke_norm(F, a) == 11);
    CHECK(hecke_norm(F, b) == 11);
    CHECK(common_prime_above(F, {a, a}, 11) == true);
    CHECK(common_prime_above(F, {a, b}, 11) == false);
    CHECK(common_prime_above(F, {a, hecke_from(F, 0), a}, 11) == true);
    CHECK(common_prime_above(F, {{Rat(0), Rat(1)}}, 5) == true);
    CHECK(common_prime_above(F, {{Rat(0), Rat(1)}}, 11) == false);
    // disc(x^2 - 5) = 20 is divisible by 2^2
    CHECK_FALSE(common_prime_above(F, {a}, 2).has_value());
}

TEST_CASE("field labels and level support") {
    CHECK(field_from_label("2.0.11.1").m == -11);
    CHECK(field_from_label("2.2.12.1").m == 3);
    CHECK(field_from_label("2.2.56.1").m == 14);
    CHECK(field_from_label("2.0.4.1").m == -1);
    CHECK_THROWS(field_from_label("3.1.23.1"));
    CHECK_THROWS(field_from_label("2.2.13"));
    QuadField K = make_field(-19);
    auto s = level_support(K, 76);
    REQUIRE(s.size() == 2);
    CHECK(s[0].norm() == 4);
    CHECK(s[1].norm() == 19);
}

TEST_CASE("fixture parsing and validation") {
    FixtureData d = parse_fixture(kMinimal);
    REQUIRE(d.forms.size() == 1);
    CHECK(d.forms[0].rational());
    CHECK(d.forms[0].eigenvalues.at("3.1") == HeckeElement{Rat(-1)});

    CHECK_THROWS_AS(parse_fixture(replace(kMinimal, "\"schema\": 1", "\"schema\": 2")), FixtureError);
    CHECK_THROWS_AS(parse_fixture(replace(kMinimal, "\"5.1\": [\"1\"]", "\"3.1\": [\"1\"]")), FixtureError);
    // a_5 = 5 breaks |a| <= 2 sqrt 5
    CHECK_THROWS_AS(parse_fixture(replace(kMinimal, "\"5.1\": [\"1\"]", "\"5.1\": [\"5\"]")), FixtureError);
    CHECK_THROWS_AS(parse_fixture(replace(kMinimal, "[0, 1]", "[0, 2]")), FixtureError);
    CHECK_THROWS_AS(parse_fixture(replace(kMinimal, "[0, 1]", "[-4, 0, 1]")), FixtureError);
    CHECK_THROWS_AS(parse_fixture(replace(kMinimal, "\"5.1\": [\"1\"]", "\"5.7\": [\"1\"]")), FixtureError);
    CHECK_THROWS_AS(parse_fixture(replace(kMinimal, "\"5.1\": [\"1\"]", "\"5.1\": [\"1\", \"0\"]")), FixtureError);
    CHECK_THROWS_AS(parse_fixture("{"), FixtureError);
    try {
        parse_fixture(replace(kMinimal, "\"level_norm\": 11", "\"level_norm\": \"x\""));
        FAIL("expected an error");
    } catch (const FixtureError& e) {
        CHECK(std::string(e.what()).find("level_norm") != std::string::npos);
    }

    const char* none = R"({"base_field": "2.0.11.1", "forms": [], "kind": "BIANCHI", "level": "44.1",
                           "level_norm": 44, "provenance": "test", "schema": 1})";
    FixtureData empty = parse_fixture(none);
    CHECK(empty.forms.empty());
}

TEST_CASE("every shipped fixture round-trips byte for byte") {
    auto files = all_fixtures();
    CHECK(files.size() >= 20);
    for (const fs::path& p : files) {
        CAPTURE(p.string());
        std::string text = slurp(p);
        FixtureData d = parse_fixture(text, p.string());
        CHECK(fixture_text(d) == text);
        CHECK(fixture_path((fs::path(testutil::fixtures()) / "newforms").string(), d.base_field, d.kind,
                           d.level) == p.string());
    }
}

TEST_CASE("save then load") {
    fs::path dir = testutil::scratch_dir("fixtures");
    FixtureData d = read_fixture(
        (fs::path(testutil::fixtures()) / "newforms" / "2.2.76.1" / "hilbert-19.1.json").string());
    fs::path out = dir / "a" / "b.json";
    save_fixture(out.string(), d);
    FixtureData e = read_fixture(out.string());
    CHECK(e.forms == d.forms);
    CHECK(fixture_text(e) == fixture_text(d));
    CHECK_THROWS_AS(read_fixture((dir / "missing.json").string()), FixtureError);
    fs::remove_all(dir);
}

TEST_CASE("form counts of the shipped fixtures, offline fetch") {
    FetchOptions opt;
    opt.cache_dir = (fs::path(testutil::fixtures()) / "newforms").string();
    opt.offline = true;
    FetchResult r = fetch_lmfdb("2.0.11.1", "11", FormKind::BIANCHI, opt);
    CHECK(r.status == FetchStatus::CACHE);
    CHECK(r.level_label == "11.1");
    CHECK(r.forms.size() == 1);
    CHECK(fetch_lmfdb("2.2.12.1", "3.1", FormKind::HILBERT, opt).forms.empty());
    CHECK(fetch_lmfdb("2.2.12.1", "6.1", FormKind::HILBERT, opt).forms.empty());
    CHECK(fetch_lmfdb("2.2.5.1", "5.1", FormKind::HILBERT, opt).forms.empty());
    CHECK(fetch_lmfdb("2.2.5.1", "20.1", FormKind::HILBERT, opt).forms.empty());
    CHECK(fetch_lmfdb("2.0.3.1", "3.1", FormKind::BIANCHI, opt).forms.empty());
    CHECK(fetch_lmfdb("2.0.3.1", "12.1", FormKind::BIANCHI, opt).forms.empty());
    CHECK(fetch_lmfdb("2.0.11.1", "44.1", FormKind::BIANCHI, opt).forms.empty());
    CHECK(fetch_lmfdb("2.2.76.1", "19.1", FormKind::HILBERT, opt).forms.size() == 4);
    CHECK(fetch_lmfdb("2.2.76.1", "38.1", FormKind::HILBERT, opt).forms.size() == 10);
    CHECK(fetch_lmfdb("2.2.29.1", "29.1", FormKind::HILBERT, opt).forms.size() == 3);
    CHECK(fetch_lmfdb("2.2.29.1", "116.1", FormKind::HILBERT, opt).forms.size() == 5);
    CHECK(fetch_lmfdb("2.2.44.1", "11.1", FormKind::HILBERT, opt).forms.size() == 2);
    CHECK(fetch_lmfdb("2.2.44.1", "22.1", FormKind::HILBERT, opt).forms.size() == 2);
    CHECK(fetch_lmfdb("2.2.13.1", "13.1", FormKind::HILBERT, opt).forms.size() == 1);
    CHECK(fetch_lmfdb("2.2.13.1", "52.1", FormKind::HILBERT, opt).forms.size() == 2);
    CHECK(fetch_lmfdb("2.2.8.1", "2.1", FormKind::HILBERT, opt).forms.empty());
    CHECK(fetch_lmfdb("2.2.8.1", "18.1", FormKind::HILBERT, opt).forms.empty());

    FetchResult u = fetch_lmfdb("2.0.11.1", "11.2", FormKind::BIANCHI, opt);
    CHECK(u.status == FetchStatus::UNKNOWN_LEVEL);
    CHECK(u.forms.empty());
    CHECK(fetch_lmfdb("2.0.11.1", "2", FormKind::BIANCHI, opt).status == FetchStatus::UNKNOWN_LEVEL);
    CHECK_THROWS_AS(fetch_lmfdb("2.0.11.1", "3.1", FormKind::BIANCHI, opt), FetchError);
    CHECK_THROWS(fetch_lmfdb("2.0.11.1", "x", FormKind::BIANCHI, opt));
    CHECK_THROWS(fetch_lmfdb("2.2.12.1", "3.1", FormKind::BIANCHI, opt));
}

TEST_CASE("expression parsing") {
    CHECK(parse_univariate("x^2 - x - 1") == QPoly{Rat(-1), Rat(-1), Rat(1)});
    CHECK(parse_univariate("2*e**2+3e-1/2") == QPoly{Rat(-1, 2), Rat(3), Rat(2)});
    CHECK(parse_univariate("(a+1)^2") == QPoly{Rat(1), Rat(2), Rat(1)});
    CHECK(parse_univariate("-7") == QPoly{Rat(-7)});
    CHECK_THROWS(parse_univariate("x + y"));
    CHECK_THROWS(parse_univariate("x +"));
    CHECK_THROWS(parse_univariate("1/x"));
    QuadField K = make_field(13);
    CHECK(parse_element(K, "w^2") == FieldElement(K, 3, 1));
    CHECK(parse_element(K, "1/2 - w") == FieldElement(K, Rat(1, 2), -1));
}

TEST_CASE("Bianchi payload decoding") {
    QuadField K = make_field(-11);
    std::vector<PrimeIdeal> ps = primes_up_to(K, 50);
    nlohmann::json eigs = nlohmann::json::array();
    for (const PrimeIdeal& q : ps) eigs.push_back(q.p == 11 ? 0 : (q.norm() < 5 ? 0 : 1));
    nlohmann::json body = {{"data", {{{"label", "2.0.11.1-11.1-a"}, {"hecke_eigs", eigs}}}}};
    auto forms = decode_bianchi(body.dump(), K, "11.1", 11);
    REQUIRE(forms.size() == 1);
    CHECK(forms[0].eigenvalues.count("11.1") == 0);
    CHECK(forms[0].eigenvalues.size() == ps.size() - 1);
    CHECK(forms[0].lmfdb_label == "2.0.11.1-11.1-a");

    body["data"][0]["hecke_eigs"][2] = "zz(";
    try {
        decode_bianchi(body.dump(), K, "11.1", 11);
        FAIL("expected a payload error");
    } catch (const PayloadError& e) {
        CHECK(e.path == "$.data[0].hecke_eigs[2]");
    }
    body["data"][0]["hecke_eigs"][2] = 1;
    body["data"][0].erase("label");
    try {
        decode_bianchi(body.dump(), K, "11.1", 11);
        FAIL("expected a payload error");
    } catch (const PayloadError& e) {
        CHECK(e.path == "$.data[0].label");
    }
    CHECK_THROWS_AS(decode_bianchi("not json", K, "11.1", 11), PayloadError);
    CHECK_THROWS_AS(decode_bianchi("{\"data\": 3}", K, "11.1", 11), PayloadError);
}
