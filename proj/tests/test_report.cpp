#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include "gcert/builtins.hpp"
#include "gcert/io.hpp"
#include "gcert/report.hpp"
#include "test_util.hpp"

namespace gcert {
namespace {

using nlohmann::json;

/// Stable summary of one report: the fields the fixtures pin down.
json summary(const std::string& example, const CertificationReport& r) {
  json j{{"example", example},
         {"candidate", r.candidate},
         {"classification", to_string(r.classification)}};
  if (r.region) {
    json proj = json::array();
    for (const auto& iv : r.region->projections) proj.push_back(json{iv.lo, iv.hi});
    j["region_shape"] = to_string(r.region->shape);
    j["region"] = proj;
  }
  json cert = json::object();
  for (const auto& s : r.certified) {
    json ivs = json::array();
    for (const auto& iv : s.intervals) ivs.push_back(json{iv.lo, iv.hi});
    cert[s.certificate] = json{{"samples", s.certified_samples}, {"intervals", ivs}};
  }
  j["certified"] = cert;
  if (r.oracle) {
    j["oracle_best"] = r.oracle->result.best_value;
    j["oracle_point"] = r.oracle->result.best_point.x;
  }
  return j;
}

json run_all_examples() {
  json out = json::array();
  for (const auto& e : builtin_examples()) {
    const auto parsed = parse_problem_text(e.text);
    const auto oracle = global_search(parsed.instance);
    for (const auto& c : parsed.candidates) {
      out.push_back(summary(e.name, certify_candidate(parsed.instance, c.x, {}, &oracle)));
    }
  }
  return out;
}

void expect_json_near(const json& a, const json& b, const std::string& path) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>();
    const double y = b.get<double>();
    EXPECT_NEAR(x, y, 1e-9 * (1 + std::abs(y))) << path;
    return;
  }
  ASSERT_EQ(a.type(), b.type()) << path;
  if (a.is_array()) {
    ASSERT_EQ(a.size(), b.size()) << path;
    for (std::size_t i = 0; i < a.size(); ++i) {
      expect_json_near(a[i], b[i], path + "[" + std::to_string(i) + "]");
    }
  } else if (a.is_object()) {
    ASSERT_EQ(a.size(), b.size()) << path;
    for (auto it = b.begin(); it != b.end(); ++it) {
      ASSERT_TRUE(a.contains(it.key())) << path << "." << it.key();
      expect_json_near(a.at(it.key()), it.value(), path + "." + it.key());
    }
  } else {
    EXPECT_EQ(a, b) << path;
  }
}

TEST(Report, ExamplesMatchFrozenFixtures) {
  const std::string path = std::string(GCERT_FIXTURE_DIR) + "/examples_summary.json";
  const json actual = run_all_examples();
  if (std::getenv("GCERT_WRITE_FIXTURES")) {
    std::ofstream(path) << actual.dump(2) << "\n";
    GTEST_SKIP() << "fixtures written to " << path;
  }
  std::ifstream in(path);
  ASSERT_TRUE(in.good()) << path;
  const json expected = json::parse(in);
  expect_json_near(actual, expected, "$");
}

TEST(Report, ClassificationIsPureFunctionOfComponents) {
  const auto p = testutil::builtin("e2.opt");
  const auto oracle = global_search(p, 41, 1);
  for (const Vector& x : {Vector{-1, -1}, Vector{1, 1}, Vector{0, 1}}) {
    auto r = certify_candidate(p, x, {}, &oracle);
    const auto stored = r.classification;
    r.classification = Classification::Infeasible;
    EXPECT_EQ(classify_report(r), stored);
  }

  auto r = certify_candidate(p, Vector{-1, -1}, {}, &oracle);
  ASSERT_EQ(r.classification, Classification::CertifiedUniqueGlobal);
  r.oracle->uniqueness_conflict = true;
  EXPECT_EQ(classify_report(r), Classification::CertifiedGlobal);
  r.oracle->conflict = true;
  EXPECT_EQ(classify_report(r), Classification::LocalOnly);
  r.oracle.reset();
  r.oracle = std::nullopt;
  EXPECT_EQ(classify_report(r), Classification::CertifiedUniqueGlobal);
  r.feasibility.feasible = false;
  EXPECT_EQ(classify_report(r), Classification::Infeasible);
}

TEST(Report, E1CertifiedUniqueAtBoxFreeMultiplier) {
  const auto p = testutil::builtin("e1.opt");
  const auto r = certify_candidate(p, Vector{2, 2});
  EXPECT_EQ(r.classification, Classification::CertifiedUniqueGlobal);
  ASSERT_TRUE(r.region && r.region->box_free_multiplier);
  EXPECT_NEAR((*r.region->box_free_multiplier)[0], 2.4, 1e-8);
  const auto j = to_json(r);
  EXPECT_EQ(j["classification"], "CertifiedUniqueGlobal");
  EXPECT_FALSE(to_text(r).empty());
}

TEST(Report, FixedMultiplier) {
  const auto p = testutil::builtin("e2.opt");
  PipelineOptions opts;
  opts.run_oracle = false;
  opts.lambda = Vector{2.5};
  EXPECT_EQ(certify_candidate(p, Vector{-1, -1}, opts).classification, Classification::NotKKT);
  opts.lambda = Vector{1.0};
  EXPECT_EQ(certify_candidate(p, Vector{-1, -1}, opts).classification,
            Classification::CertifiedUniqueGlobal);
}

TEST(Report, InfeasibleCandidate) {
  const auto p = testutil::builtin("e1.opt");
  PipelineOptions opts;
  opts.run_oracle = false;
  EXPECT_EQ(certify_candidate(p, Vector{0, 0.5}, opts).classification, Classification::Infeasible);
}

TEST(Report, Formatting) {
  EXPECT_EQ(fmt(0.0), "0");
  EXPECT_EQ(fmt(2.4), "2.4");
  EXPECT_EQ(fmt(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(fmt(Vector{1, -0.5}), "(1, -0.5)");
}

}  // namespace
}  // namespace gcert
