// Runs the shipped scenarios and prints one PASS/FAIL line per acceptance
// criterion. Exit status is nonzero if any criterion fails.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "courant/checks.hpp"
#include "courant/scenario.hpp"

using namespace courant;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream why;
  void need(bool cond, const std::string& msg) {
    if (!cond) {
      ok = false;
      why << " [" << msg << "]";
    }
  }
};

const CheckResult* find(const Report& r, const std::string& label) {
  for (const auto& c : r.results)
    if (c.check == label) return &c;
  return nullptr;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// Residual at the largest ladder size must be below `tol`; when `order` is
// set, every fitted order must reach it.
void converged(Outcome& o, const Report& r, const std::string& label, double tol,
               std::optional<double> order) {
  const CheckResult* c = find(r, label);
  if (!c || c->rows.empty()) {
    o.need(false, r.scenario + "/" + label + " missing");
    return;
  }
  const CheckRecord& last = c->rows.back();
  o.need(last.residual < tol || (tol == 0.0 && last.residual == 0.0),
         r.scenario + "/" + label + " residual " + sci(last.residual) + " at N=" +
             std::to_string(last.N));
  if (order)
    for (const auto& row : c->rows)
      if (row.fitted_order)
        o.need(*row.fitted_order >= *order, r.scenario + "/" + label + " order " +
                                                sci(*row.fitted_order) + " at N=" +
                                                std::to_string(row.N));
}

double detail(const CheckResult* c, const std::string& key) {
  double worst = 0.0;
  for (const auto& row : c->rows) {
    auto it = row.detail.find(key);
    if (it != row.detail.end()) worst = std::max(worst, std::abs(it->second));
  }
  return worst;
}

}  // namespace

int main() {
  const std::string dir = COURANT_SCENARIO_DIR;
  std::map<std::string, Report> reports;
  for (const char* name : {"full_suite", "coboundary_flat_R3", "nonclosed_H", "twisted_pushforward",
                           "lagrangian_constant_B"}) {
    Scenario sc = load_scenario(dir + "/" + name + ".json");
    reports.emplace(name, run_scenario(sc, 4));
  }
  const Report& full = reports.at("full_suite");

  std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria;

  criteria.push_back({"courant axioms", [&](Outcome& o) {
    const CheckResult* c = find(full, "courant_axioms");
    o.need(c != nullptr, "courant_axioms missing");
    if (!c) return;
    o.need(detail(c, "pairing_symmetry") == 0.0, "pairing not exactly symmetric");
    o.need(detail(c, "jacobi") < 1e-8, "jacobi " + sci(detail(c, "jacobi")));
    o.need(detail(c, "anomaly") < 1e-8, "anomaly " + sci(detail(c, "anomaly")));
  }});

  criteria.push_back({"coboundaries and exactness", [&](Outcome& o) {
    for (const auto& [name, r] : reports)
      for (const char* label : {"coboundary_omega", "coboundary_phi", "coboundary_lambda"})
        if (find(r, label)) converged(o, r, label, 1e-6, 2.0);
    converged(o, full, "exactness_lambda", 1e-6, std::nullopt);
    converged(o, reports.at("coboundary_flat_R3"), "exactness_lambda", 1e-6, std::nullopt);
  }});

  criteria.push_back({"differential of the transgression", [&](Outcome& o) {
    converged(o, full, "transgression_differential", 1e-6, std::nullopt);
    converged(o, reports.at("nonclosed_H"), "transgression_differential", 1e-6, std::nullopt);
  }});

  criteria.push_back({"basic-ness of omega_2", [&](Outcome& o) {
    converged(o, full, "basic_kernel", 1e-8, std::nullopt);
    converged(o, reports.at("coboundary_flat_R3"), "basic_kernel", 1e-8, std::nullopt);
  }});

  criteria.push_back({"horn filling", [&](Outcome& o) {
    converged(o, full, "horn_fill", 0.0, std::nullopt);
    converged(o, reports.at("coboundary_flat_R3"), "horn_fill", 0.0, std::nullopt);
  }});

  criteria.push_back({"nondegeneracy", [&](Outcome& o) {
    for (const Report* r : std::initializer_list<const Report*>{&full, &reports.at("coboundary_flat_R3")}) {
      const CheckResult* c = find(*r, "nondegeneracy");
      o.need(c != nullptr, r->scenario + "/nondegeneracy missing");
      if (!c) continue;
      double prev = 0.0;
      for (const auto& row : c->rows) {
        o.need(row.residual > 1e-4, r->scenario + " sigma_min " + sci(row.residual));
        o.need(row.residual >= prev, r->scenario + " sigma_min decreases at N=" +
                                         std::to_string(row.N));
        prev = row.residual;
      }
    }
  }});

  criteria.push_back({"multiplicativity of omega^H_2 on pushed tangents", [&](Outcome& o) {
    converged(o, full, "pushforward_isotropy_bgraph", 1e-5, 1.5);
    converged(o, full, "pushforward_isotropy_constpi", 1e-5, 1.5);
    converged(o, reports.at("twisted_pushforward"), "pushforward_isotropy_twisted", 1e-5, 1.5);
  }});

  criteria.push_back({"pulled-back form closed and multiplicative", [&](Outcome& o) {
    for (const char* l : {"pullback_closed_bgraph", "pullback_closed_constpi",
                          "pullback_multiplicative_bgraph", "pullback_multiplicative_constpi"})
      converged(o, full, l, 1e-5, std::nullopt);
    const Report& tw = reports.at("twisted_pushforward");
    converged(o, tw, "pullback_closed", 1e-5, std::nullopt);
    converged(o, tw, "pullback_multiplicative", 1e-5, std::nullopt);
  }});

  criteria.push_back({"Lagrangian at the unit", [&](Outcome& o) {
    double worst_defect = 0.0;
    std::vector<std::pair<const Report*, const char*>> frames = {
        {&full, "lagrangian_unit_tm"},
        {&full, "lagrangian_unit_bgraph"},
        {&reports.at("lagrangian_constant_B"), "lagrangian_unit_bgraph"}};
    for (auto [r, label] : frames) {
      const CheckResult* c = find(*r, label);
      o.need(c != nullptr, r->scenario + "/" + label + " missing");
      if (!c) continue;
      o.need(detail(c, "isotropy") < 1e-6, r->scenario + "/" + label + " isotropy " +
                                               sci(detail(c, "isotropy")));
      o.need(detail(c, "coisotropy_defect") < 1e-4, r->scenario + "/" + label + " defect " +
                                                        sci(detail(c, "coisotropy_defect")));
      worst_defect = std::max(worst_defect, detail(c, "coisotropy_defect"));
    }
    for (const Report* r : std::initializer_list<const Report*>{&full, &reports.at("lagrangian_constant_B")}) {
      const CheckResult* c = find(*r, "lagrangian_unit_control");
      o.need(c != nullptr, r->scenario + "/control missing");
      if (!c) continue;
      double least = 1e300;
      for (const auto& row : c->rows) least = std::min(least, row.detail.at("coisotropy_defect"));
      o.need(least > 1e-2, r->scenario + " control defect " + sci(least));
      o.need(least >= 100.0 * std::max(worst_defect, 1e-4),
             r->scenario + " separation below 100x");
    }
  }});

  criteria.push_back({"determinism", [&](Outcome& o) {
    Scenario sc = load_scenario(dir + "/full_suite.json");
    Report again = run_scenario(sc, 1);
    o.need(again.json() == full.json(), "full_suite JSON differs between runs");
  }});

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.need(false, std::string("exception: ") + e.what());
    }
    std::printf("criterion %2zu %-52s %s%s\n", i + 1, criteria[i].first.c_str(),
                o.ok ? "PASS" : "FAIL", o.why.str().c_str());
    if (!o.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
