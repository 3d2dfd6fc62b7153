#include "courant_c.h"

#include <cstdlib>
#include <cstring>
#include <random>
#include <string>

#include "courant/checks.hpp"
#include "courant/error.hpp"
#include "courant/lattice_io.hpp"
#include "courant/morphisms.hpp"
#include "courant/scenario.hpp"

struct courant_scenario {
  courant::Scenario sc;
};

struct courant_report {
  courant::Report report;
  std::string json, csv;
  int exit_code;
};

namespace {

thread_local std::string last_error;

courant_status status_of(const courant::Error& e) {
  switch (e.code()) {
    case courant::ErrorCode::parse: return COURANT_ERR_PARSE;
    case courant::ErrorCode::io: return COURANT_ERR_IO;
    default: return COURANT_ERR_INVALID_ARGUMENT;
  }
}

template <class F>
courant_status guarded(F&& f) {
  last_error.clear();
  try {
    f();
    return COURANT_OK;
  } catch (const courant::Error& e) {
    last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    last_error = e.what();
    return COURANT_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return COURANT_ERR_INTERNAL;
  }
}

courant_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return COURANT_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* courant_last_error(void) { return last_error.c_str(); }

const char* courant_version(void) {
  static const std::string v = courant::library_version();
  return v.c_str();
}

courant_status courant_scenario_load(const char* path, courant_scenario** out) {
  if (!path || !out) return null_argument("path/out");
  *out = nullptr;
  return guarded([&] { *out = new courant_scenario{courant::load_scenario(path)}; });
}

courant_status courant_scenario_parse(const char* text, courant_scenario** out) {
  if (!text || !out) return null_argument("text/out");
  *out = nullptr;
  return guarded([&] { *out = new courant_scenario{courant::parse_scenario(text)}; });
}

void courant_scenario_free(courant_scenario* sc) { delete sc; }

const char* courant_scenario_name(const courant_scenario* sc) { return sc ? sc->sc.name.c_str() : ""; }

uint64_t courant_scenario_seed(const courant_scenario* sc) { return sc ? sc->sc.seed : 0; }

courant_status courant_scenario_set_seed(courant_scenario* sc, uint64_t seed) {
  if (!sc) return null_argument("scenario");
  sc->sc.seed = seed;
  return COURANT_OK;
}

size_t courant_scenario_check_count(const courant_scenario* sc) { return sc ? sc->sc.checks.size() : 0; }

const char* courant_scenario_check_label(const courant_scenario* sc, size_t i) {
  if (!sc || i >= sc->sc.checks.size()) return nullptr;
  return sc->sc.checks[i].label.c_str();
}

size_t courant_check_count(void) { return courant::available_checks().size(); }

const char* courant_check_id(size_t i) {
  const auto& c = courant::available_checks();
  return i < c.size() ? c[i].id.c_str() : nullptr;
}

const char* courant_check_summary(size_t i) {
  const auto& c = courant::available_checks();
  return i < c.size() ? c[i].summary.c_str() : nullptr;
}

courant_status courant_run(const courant_scenario* sc, int jobs, courant_report** out) {
  if (!sc || !out) return null_argument("scenario/out");
  *out = nullptr;
  return guarded([&] {
    auto* r = new courant_report{courant::run_scenario(sc->sc, jobs), {}, {}, 0};
    r->json = r->report.json();
    r->csv = r->report.csv();
    r->exit_code = r->report.exit_code();
    *out = r;
  });
}

int courant_report_exit_code(const courant_report* r) { return r ? r->exit_code : 1; }
const char* courant_report_json(const courant_report* r) { return r ? r->json.c_str() : ""; }
const char* courant_report_csv(const courant_report* r) { return r ? r->csv.c_str() : ""; }
void courant_report_free(courant_report* r) { delete r; }

courant_status courant_lattice_sample(const char* kind, int dim, int N, uint64_t seed, char** out) {
  if (!kind || !out) return null_argument("kind/out");
  *out = nullptr;
  return guarded([&] {
    courant::require(dim >= 1 && dim <= 8 && N >= 1 && N <= 256, courant::ErrorCode::invalid_argument,
                     "dimension or N out of range");
    std::mt19937_64 rng(seed);
    const std::string k = kind;
    std::string text;
    if (k == "path" || k == "tangent_path") {
      // a triangle's third face is a generic path
      auto p = courant::SimplexMap::random(dim, 3, 1.0, rng).sample(N);
      auto c = courant::SimplexMap::random(dim, 3, 1.0, rng).sample(N);
      courant::DiscreteTriangle t = courant::DiscreteTriangle::zeros(N, dim);
      t.point = p;
      t.slot1 = c;
      t.slot2 = courant::SimplexMap::random(dim, 3, 1.0, rng).sample(N);
      const courant::DiscretePath path = courant::face(t, 2);
      if (k == "path") {
        text = courant::dump_lattice(path);
      } else {
        courant::TangentPath tp = courant::TangentPath::zeros(N, dim);
        tp.point = path.point;
        tp.covector = path.covector;
        text = courant::dump_lattice(tp);
      }
    } else if (k == "triangle" || k == "tangent_triangle") {
      auto p = courant::SimplexMap::random(dim, 3, 1.0, rng).sample(N);
      auto s1 = courant::SimplexMap::random(dim, 3, 1.0, rng).sample(N);
      auto s2 = courant::SimplexMap::random(dim, 3, 1.0, rng).sample(N);
      if (k == "triangle") {
        courant::DiscreteTriangle t = courant::DiscreteTriangle::zeros(N, dim);
        t.point = p, t.slot1 = s1, t.slot2 = s2;
        text = courant::dump_lattice(t);
      } else {
        courant::TangentTriangle t = courant::TangentTriangle::zeros(N, dim);
        t.point = p, t.slot1 = s1, t.slot2 = s2;
        text = courant::dump_lattice(t);
      }
    } else {
      courant::fail(courant::ErrorCode::invalid_argument, "unknown lattice kind '" + k + "'");
    }
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    courant::require(buf != nullptr, courant::ErrorCode::invalid_argument, "out of memory");
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

void courant_string_free(char* s) { std::free(s); }

}  // extern "C"
