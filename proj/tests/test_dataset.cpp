#include "wavespec/stats.hpp"

#include "wavespec/errors.hpp"
#include "wavespec/rng.hpp"
#include "wavespec/serialize.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>

using namespace wavespec;

namespace {

std::string temp_path(const char* name) {
    return std::string("/tmp/wavespec_test_") + name;
}

} // namespace

TEST_CASE("dataset CSV round trip is lossless") {
    Dataset d;
    d.feature_names = {"alpha", "beta", "gamma"};
    d.p = 3;
    d.n = 17;
    Philox gen(2);
    for (int i = 0; i < d.n; ++i) {
        for (int j = 0; j < 3; ++j) d.features.push_back(gen.gaussian() * 1e3);
        d.labels.push_back(static_cast<int>(gen.next32() & 1));
    }
    const std::string path = temp_path("roundtrip.csv");
    d.write_csv(path);
    const Dataset back = Dataset::read_csv(path);
    CHECK(back.feature_names == d.feature_names);
    CHECK(back.labels == d.labels);
    REQUIRE(back.features.size() == d.features.size());
    for (std::size_t i = 0; i < d.features.size(); ++i)
        CHECK(back.features[i] == d.features[i]); // bitwise, %.17g is lossless
    std::remove(path.c_str());
}

TEST_CASE("dataset CSV validation") {
    const std::string path = temp_path("bad.csv");
    SUBCASE("missing label column") {
        std::ofstream(path) << "a,b\n1,2\n";
        CHECK_THROWS_AS(Dataset::read_csv(path), DataError);
    }
    SUBCASE("missing value") {
        std::ofstream(path) << "a,label\n,1\n";
        CHECK_THROWS_AS(Dataset::read_csv(path), DataError);
    }
    SUBCASE("non-numeric cell") {
        std::ofstream(path) << "a,label\nfoo,1\n";
        CHECK_THROWS_AS(Dataset::read_csv(path), DataError);
    }
    SUBCASE("non-binary label") {
        std::ofstream(path) << "a,label\n1.5,2\n";
        CHECK_THROWS_AS(Dataset::read_csv(path), DataError);
    }
    SUBCASE("ragged row") {
        std::ofstream(path) << "a,label\n1,0,3\n";
        CHECK_THROWS_AS(Dataset::read_csv(path), DataError);
    }
    std::remove(path.c_str());
}

TEST_CASE("dataset select validates names and reorders columns") {
    Dataset d;
    d.feature_names = {"a", "b"};
    d.p = 2;
    d.n = 2;
    d.features = {1, 2, 3, 4};
    d.labels = {0, 1};
    const Dataset s = d.select({"b"});
    CHECK(s.p == 1);
    CHECK(s.feat(0, 0) == 2);
    CHECK(s.feat(1, 0) == 4);
    CHECK_THROWS_AS(d.select({"zzz"}), DataError);
}

TEST_CASE("report serialization produces valid JSON with expected fields") {
    CvReport rep;
    rep.k = 2;
    rep.r = 1;
    rep.accuracy = {0.5, 1.0};
    rep.sensitivity = {1.0, 1.0};
    rep.specificity = {0.0, 1.0};
    rep.mean_accuracy = 0.75;
    const auto j = nlohmann::json::parse(cv_report_json(rep));
    CHECK(j["k"] == 2);
    CHECK(j["accuracy"].size() == 2);
    CHECK(j["mean_accuracy"] == doctest::Approx(0.75));

    TestResult t;
    t.kind = TestKind::deviance_chi2;
    t.statistic = 3.5;
    t.p_value = 0.0614;
    t.df = 1;
    const auto tj = nlohmann::json::parse(test_result_json(t));
    CHECK(tj["kind"] == "deviance_chi2");
    CHECK(tj["p_value"] == doctest::Approx(0.0614));
}
