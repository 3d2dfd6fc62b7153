// Exercises the shared library through its C header only.
#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>
#include <string>

#include "courant_c.h"

namespace {

const char* kScenario = R"({
  "name": "capi", "dimension": 2, "seed": 3, "ladder": [8, 16, 32],
  "checks": ["coboundary_omega", {"id": "horn_fill", "label": "horns"}]
})";

struct ScenarioGuard {
  courant_scenario* sc = nullptr;
  ~ScenarioGuard() { courant_scenario_free(sc); }
};
struct ReportGuard {
  courant_report* r = nullptr;
  ~ReportGuard() { courant_report_free(r); }
};

}  // namespace

TEST(CApi, Version) {
  const std::string v = courant_version();
  EXPECT_FALSE(v.empty());
  EXPECT_EQ(std::count(v.begin(), v.end(), '.'), 2);
}

TEST(CApi, ParseAndInspect) {
  ScenarioGuard g;
  ASSERT_EQ(courant_scenario_parse(kScenario, &g.sc), COURANT_OK) << courant_last_error();
  EXPECT_STREQ(courant_scenario_name(g.sc), "capi");
  EXPECT_EQ(courant_scenario_seed(g.sc), 3u);
  ASSERT_EQ(courant_scenario_check_count(g.sc), 2u);
  EXPECT_STREQ(courant_scenario_check_label(g.sc, 1), "horns");
  EXPECT_EQ(courant_scenario_check_label(g.sc, 2), nullptr);
  EXPECT_EQ(courant_scenario_set_seed(g.sc, 77), COURANT_OK);
  EXPECT_EQ(courant_scenario_seed(g.sc), 77u);
}

TEST(CApi, ErrorsCarryMessages) {
  courant_scenario* sc = nullptr;
  EXPECT_EQ(courant_scenario_parse("{\"name\": 1", &sc), COURANT_ERR_PARSE);
  EXPECT_EQ(sc, nullptr);
  EXPECT_GT(std::strlen(courant_last_error()), 0u);

  EXPECT_EQ(courant_scenario_parse(R"({"name": "x", "dimension": 2, "ladder": [8, 16, 32], "checks": ["nope"]})", &sc),
            COURANT_ERR_PARSE);
  EXPECT_NE(std::string(courant_last_error()).find("nope"), std::string::npos);

  EXPECT_EQ(courant_scenario_load("/nonexistent/s.json", &sc), COURANT_ERR_IO);
  EXPECT_EQ(courant_scenario_parse(nullptr, &sc), COURANT_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(courant_scenario_parse(kScenario, nullptr), COURANT_ERR_INVALID_ARGUMENT);
  courant_report* r = nullptr;
  EXPECT_EQ(courant_run(nullptr, 1, &r), COURANT_ERR_INVALID_ARGUMENT);
}

TEST(CApi, RunProducesReports) {
  ScenarioGuard g;
  ASSERT_EQ(courant_scenario_parse(kScenario, &g.sc), COURANT_OK);
  ReportGuard r1, r2;
  ASSERT_EQ(courant_run(g.sc, 1, &r1.r), COURANT_OK) << courant_last_error();
  ASSERT_EQ(courant_run(g.sc, 3, &r2.r), COURANT_OK);
  EXPECT_EQ(courant_report_exit_code(r1.r), 0);
  const std::string json = courant_report_json(r1.r);
  EXPECT_NE(json.find("\"scenario\": \"capi\""), std::string::npos) << json.substr(0, 200);
  EXPECT_EQ(json, courant_report_json(r2.r));
  const std::string csv = courant_report_csv(r1.r);
  EXPECT_EQ(csv.rfind("check,N,residual,fitted_order,status\n", 0), 0u);
  EXPECT_NE(csv.find("horns,8,"), std::string::npos);
}

TEST(CApi, LoadsShippedScenario) {
  ScenarioGuard g;
  const std::string path = std::string(COURANT_SCENARIO_DIR) + "/coboundary_flat_R3.json";
  ASSERT_EQ(courant_scenario_load(path.c_str(), &g.sc), COURANT_OK) << courant_last_error();
  EXPECT_STREQ(courant_scenario_name(g.sc), "coboundary_flat_R3");
}

TEST(CApi, CheckCatalog) {
  const size_t n = courant_check_count();
  ASSERT_GE(n, 18u);
  bool saw = false;
  for (size_t i = 0; i < n; ++i) {
    ASSERT_NE(courant_check_id(i), nullptr);
    EXPECT_GT(std::strlen(courant_check_summary(i)), 0u);
    saw |= std::strcmp(courant_check_id(i), "pushforward_isotropy_bgraph") == 0;
  }
  EXPECT_TRUE(saw);
  EXPECT_EQ(courant_check_id(n), nullptr);
}

TEST(CApi, LatticeSamples) {
  for (const char* kind : {"path", "tangent_path", "triangle", "tangent_triangle"}) {
    char* a = nullptr;
    char* b = nullptr;
    ASSERT_EQ(courant_lattice_sample(kind, 2, 4, 5, &a), COURANT_OK) << kind;
    ASSERT_EQ(courant_lattice_sample(kind, 2, 4, 5, &b), COURANT_OK);
    EXPECT_STREQ(a, b);
    EXPECT_EQ(std::string(a).rfind(std::string("lattice kind=") + kind + " n=2 N=4", 0), 0u) << a;
    courant_string_free(a);
    courant_string_free(b);
  }
  char* out = nullptr;
  EXPECT_EQ(courant_lattice_sample("hexagon", 2, 4, 5, &out), COURANT_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(courant_lattice_sample("path", 0, 4, 5, &out), COURANT_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(out, nullptr);
}
