#include "courant/checks.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <random>
#include <thread>

#include <json.hpp>

#include "courant/calculus.hpp"
#include "courant/courant_algebra.hpp"
#include "courant/dirac.hpp"
#include "courant/error.hpp"
#include "courant/forms.hpp"
#include "courant/lagrangian.hpp"
#include "courant/morphisms.hpp"
#include "courant/quadrature.hpp"
#include "courant/simplex.hpp"

#ifndef COURANT_VERSION
#define COURANT_VERSION "0.1.0"
#endif

namespace courant {

namespace {

using nlohmann::json;

struct Sample {
  double residual = 0.0;
  bool inconclusive = false;
  std::string note;
  std::map<std::string, double> detail;
};

struct Context {
  const Scenario& sc;
  const CheckSpec& spec;
  json opts;
  std::uint64_t seed;

  int n() const { return sc.dimension; }
  template <class T>
  T opt(const char* key, T fallback) const {
    return opts.contains(key) ? opts[key].get<T>() : fallback;
  }
  TwistClass twist() const { return sc.H ? TwistClass(*sc.H) : TwistClass::none(n()); }
};

// A check prepares its fixed data once and returns an evaluator per N.
using Evaluator = std::function<Sample(int N)>;
using Factory = std::function<Evaluator(const Context&)>;

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t check_seed(std::uint64_t seed, const std::string& label) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : label) h = (h ^ c) * 0x100000001b3ull;
  return mix(seed ^ h);
}

// ---- random data, drawn independently of N ----

struct PolyPath {
  Eigen::MatrixXd c;  // rows: powers of t
  Eigen::MatrixXd sample(int N) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(N + 1, c.cols());
    for (int k = 0; k <= N; ++k) {
      const double t = double(k) / N;
      double p = 1.0;
      for (int j = 0; j < c.rows(); ++j, p *= t) out.row(k) += p * c.row(j);
    }
    return out;
  }
};

PolyPath random_poly_path(int n, double amp, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-amp, amp);
  PolyPath p{Eigen::MatrixXd(4, n)};
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < n; ++i) p.c(j, i) = u(rng);
  return p;
}

struct PathData {
  PolyPath x, xi;
  DiscretePath at(int N) const {
    DiscretePath p = DiscretePath::zeros(N, static_cast<int>(x.c.cols()));
    p.point = x.sample(N);
    p.covector = xi.sample(N);
    return p;
  }
  TangentPath tangent(int N) const {
    TangentPath p = TangentPath::zeros(N, static_cast<int>(x.c.cols()));
    p.point = x.sample(N);
    p.covector = xi.sample(N);
    return p;
  }
};

PathData random_path(int n, double amp, std::mt19937_64& rng) {
  PathData d{random_poly_path(n, amp, rng), random_poly_path(n, amp, rng)};
  return d;
}

struct TriangleData {
  SimplexMap point, slot1, slot2;
  template <class Tri>
  Tri at(int N) const {
    Tri t = Tri::zeros(N, point.components());
    t.point = point.sample(N);
    t.slot1 = slot1.sample(N);
    t.slot2 = slot2.sample(N);
    return t;
  }
};

TriangleData random_triangle(int n, double amp, std::mt19937_64& rng) {
  auto p = SimplexMap::random(n, 3, amp, rng);
  auto s1 = SimplexMap::random(n, 3, amp, rng);
  auto s2 = SimplexMap::random(n, 3, amp, rng);
  return {p, s1, s2};
}

SmoothField random_field(FieldKind kind, int n, int degree, double amp, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-amp, amp);
  std::vector<std::vector<int>> monomials;
  std::vector<int> e(n, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == n) {
      monomials.push_back(e);
      return;
    }
    for (int a = 0; a <= left; ++a) {
      e[i] = a;
      rec(i + 1, left - a);
    }
    e[i] = 0;
  };
  rec(0, degree);
  std::vector<std::vector<int>> slots;
  const int rank = tensor_rank(kind);
  if (rank == 0) slots.push_back({});
  else if (rank == 1)
    for (int i = 0; i < n; ++i) slots.push_back({i});
  else
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) slots.push_back({i, j});
  std::vector<PolyTerm> terms;
  for (const auto& m : monomials)
    for (const auto& s : slots) terms.push_back({u(rng), m, s});
  return SmoothField::polynomial(kind, n, terms);
}

// ---- frames ----

enum class Family { bgraph, constpi, twisted };

Family parse_family(const std::string& s) {
  if (s == "bgraph") return Family::bgraph;
  if (s == "constpi") return Family::constpi;
  if (s == "twisted") return Family::twisted;
  fail(ErrorCode::parse, "scenario: unknown family '" + s + "'");
}

DiracFrame family_frame(const Context& c, Family fam, double twist_sign = 1.0) {
  const int n = c.n();
  switch (fam) {
    case Family::bgraph:
      return DiracFrame::graph_of_two_form(*c.sc.B, TwistClass::none(n));
    case Family::constpi:
      return DiracFrame::graph_of_bivector(*c.sc.pi);
    case Family::twisted: {
      FrameOptions o;
      // a flipped sign is a deliberately non-involutive frame
      o.validate = twist_sign > 0;
      return DiracFrame::graph_of_two_form(*c.sc.B, TwistClass(twist_sign * exterior_derivative(*c.sc.B)), o);
    }
  }
  fail(ErrorCode::invalid_argument, "unknown family");
}

MorphismFamily morphism_family(Family f) {
  return f == Family::constpi ? MorphismFamily::constpi : MorphismFamily::bgraph;
}

// ---- checks ----

Evaluator courant_axioms(const Context& c) {
  return [c = c](int) {
    std::mt19937_64 rng(c.seed);
    const int n = c.n();
    auto section = [&] {
      return GeneralizedSection(random_field(FieldKind::vector, n, 3, 1.0, rng),
                                random_field(FieldKind::one_form, n, 3, 1.0, rng));
    };
    const int triples = c.opt("triples", 3);
    const TwistClass tw = c.twist();
    Sample s;
    double sym = 0.0, jac = 0.0, anomaly = 0.0;
    for (int t = 0; t < triples; ++t) {
      const auto a = section(), b = section(), d = section();
      const auto half_d = GeneralizedSection::form_part(0.5 * exterior_derivative(pairing_field(a, a)));
      const auto aa = twisted_bracket(a, a, tw) - half_d;
      for (const auto& x : sample_points(n, c.opt("points", 10), mix(c.seed + t))) {
        sym = std::max(sym, std::abs(pairing(a, b, x) - pairing(b, a, x)));
        jac = std::max(jac, jacobi_residual(a, b, d, tw, x));
        anomaly = std::max(anomaly, section_norm(aa, x));
      }
    }
    s.detail = {{"pairing_symmetry", sym}, {"jacobi", jac}, {"anomaly", anomaly}};
    if (!tw.closed()) s.note = "twist is not closed; the Jacobi identity is not expected to hold";
    s.residual = std::max({sym, jac, anomaly});
    return s;
  };
}

enum class Coboundary { omega, phi, lambda };

Evaluator coboundary(const Context& c, Coboundary which) {
  std::mt19937_64 rng(c.seed);
  const int n = c.n(), pairs = c.opt("pairs", 5);
  const TriangleData base = random_triangle(n, 0.5, rng);
  std::vector<TriangleData> tangents;
  for (int p = 0; p < 2 * pairs; ++p) tangents.push_back(random_triangle(n, 1.0, rng));
  const TwistClass tw = c.twist();
  return [=](int N) {
    const auto T = base.at<DiscreteTriangle>(N);
    PathForm form = which == Coboundary::omega ? omega1_form()
                    : which == Coboundary::phi ? phi_H_1_form(tw)
                                               : lambda1_form();
    const TriangleForm delta = simplicial_coboundary(form);
    Sample s;
    for (int p = 0; p < pairs; ++p) {
      const auto X = tangents[2 * p].at<TangentTriangle>(N);
      const auto Y = tangents[2 * p + 1].at<TangentTriangle>(N);
      double direct, via;
      if (which == Coboundary::lambda) {
        std::array<TangentTriangle, 1> args{X};
        direct = lambda2(T, X);
        via = delta(T, args);
      } else {
        std::array<TangentTriangle, 2> args{X, Y};
        direct = which == Coboundary::omega ? omega2(T, X, Y) : phi_H_2(T, X, Y, tw);
        via = delta(T, args);
      }
      s.residual = std::max(s.residual, std::abs(via - direct));
    }
    return s;
  };
}

Evaluator exactness_lambda(const Context& c) {
  std::mt19937_64 rng(c.seed);
  const int n = c.n(), pairs = c.opt("pairs", 5);
  const PathData base = random_path(n, 0.5, rng);
  std::vector<PathData> tangents;
  for (int p = 0; p < 2 * pairs; ++p) tangents.push_back(random_path(n, 1.0, rng));
  return [=](int N) {
    const auto b = base.at(N);
    const PathForm dl = exterior_derivative_mapping(lambda1_form());
    Sample s;
    for (int p = 0; p < pairs; ++p) {
      auto X = tangents[2 * p].tangent(N), Y = tangents[2 * p + 1].tangent(N);
      const double sx = sup_norm(X), sy = sup_norm(Y);
      X.point /= sx, X.covector /= sx, Y.point /= sy, Y.covector /= sy;
      std::array<TangentPath, 2> args{X, Y};
      s.residual = std::max(s.residual, std::abs(omega1(b, X, Y) + dl(b, args)));
    }
    return s;
  };
}

Evaluator transgression_differential(const Context& c) {
  std::mt19937_64 rng(c.seed);
  const int n = c.n(), triples = c.opt("triples", 5);
  const PathData base = random_path(n, 0.5, rng);
  std::vector<PathData> tangents;
  for (int p = 0; p < 3 * triples; ++p) tangents.push_back(random_path(n, 1.0, rng));
  const TwistClass tw = c.twist();
  const SmoothField dH = exterior_derivative(tw.H());
  return [=](int N) {
    const auto b = base.at(N);
    const PathForm dphi = exterior_derivative_mapping(phi_H_1_form(tw));
    Sample s;
    for (int t = 0; t < triples; ++t) {
      std::array<TangentPath, 3> args;
      for (int a = 0; a < 3; ++a) {
        args[a] = tangents[3 * t + a].tangent(N);
        const double sn = sup_norm(args[a]);
        args[a].point /= sn;
        args[a].covector /= sn;
      }
      double endpoint = 0.0;
      for (int end : {0, N}) {
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = b.point(end, i);
        const auto H = tw.H().values(x);
        double v = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
              v += H[(i * n + j) * n + l] * args[0].point(end, i) * args[1].point(end, j) * args[2].point(end, l);
        endpoint += end == N ? v : -v;
      }
      const double bulk = tw.closed() ? 0.0 : transgress_four_form(b, args[0], args[1], args[2], dH);
      s.residual = std::max(s.residual, std::abs(dphi(b, args) - bulk - endpoint));
    }
    return s;
  };
}

Evaluator basic_kernel(const Context& c) {
  std::mt19937_64 rng(c.seed);
  const int n = c.n(), probes = c.opt("probes", 20);
  const TriangleData base = random_triangle(n, 0.5, rng);
  const TriangleData interior = random_triangle(n, 1.0, rng);
  std::vector<TriangleData> ys;
  for (int p = 0; p < probes; ++p) ys.push_back(random_triangle(n, 1.0, rng));
  const TwistClass tw = c.twist();
  return [=](int N) {
    const auto T = base.at<DiscreteTriangle>(N);
    auto X = interior.at<TangentTriangle>(N);
    // zero on the boundary, so every face push vanishes
    for (int f = 0; f < 3; ++f)
      for (int k = 0; k <= N; ++k) {
        const int node = face_node(N, f, k);
        X.point.row(node).setZero();
        X.slot1.row(node).setZero();
        X.slot2.row(node).setZero();
      }
    Sample s;
    for (const auto& y : ys) {
      const auto Y = y.at<TangentTriangle>(N);
      s.residual = std::max({s.residual, std::abs(omega2(T, X, Y)), std::abs(omega_H_2(T, X, Y, tw))});
    }
    return s;
  };
}

Evaluator horn_fill_check(const Context& c) {
  const int n = c.n(), horns = c.opt("horns", 50);
  const std::uint64_t seed = c.seed;
  return [=](int N) {
    std::mt19937_64 rng(seed);
    // dyadic entries: the fill's sums of two inputs are then exact
    std::uniform_int_distribution<std::int64_t> u(-(std::int64_t(1) << 31), std::int64_t(1) << 31);
    auto dyadic = [&](int rows) {
      Eigen::MatrixXd m(rows, n);
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = std::ldexp(double(u(rng)), -30);
      return m;
    };
    Sample s;
    for (int h = 0; h < horns; ++h) {
      const int ell = h % 3;
      DiscreteTriangle T = DiscreteTriangle::zeros(N, n);
      T.point = dyadic(lattice_size(N));
      T.slot1 = dyadic(lattice_size(N));
      T.slot2 = dyadic(lattice_size(N));
      std::array<DiscretePath, 2> given;
      std::array<int, 2> ids;
      for (int i = 0, k = 0; i < 3; ++i)
        if (i != ell) {
          ids[k] = i;
          given[k++] = face(T, i);
        }
      const DiscreteTriangle fill = horn_fill(given, ell, T.point);
      for (int k = 0; k < 2; ++k) {
        const DiscretePath out = face(fill, ids[k]);
        s.residual = std::max({s.residual, (out.point - given[k].point).cwiseAbs().maxCoeff(),
                               (out.covector - given[k].covector).cwiseAbs().maxCoeff()});
      }
    }
    return s;
  };
}

Evaluator nondegeneracy(const Context& c) {
  std::mt19937_64 rng(c.seed);
  const PathData base = random_path(c.n(), 0.5, rng);
  const TwistClass tw = c.opt("twisted", false) ? c.twist() : TwistClass::none(c.n());
  return [=](int N) {
    const Eigen::MatrixXd G = omega_H_1_gram(base.at(N), tw);
    Sample s;
    const Eigen::VectorXd sig = Eigen::JacobiSVD<Eigen::MatrixXd>(G).singularValues();
    s.residual = sig[sig.size() - 1];
    s.detail = {{"sigma_max", sig[0]}};
    return s;
  };
}

Evaluator pushforward_isotropy(const Context& c, Family fam, bool coboundary_only) {
  const double sign = c.opt("twist_sign", 1.0);
  auto frame = std::make_shared<DiracFrame>(family_frame(c, fam, sign));
  PushforwardCheckOptions o;
  o.pairs = c.opt("pairs", 20);
  o.degree = c.opt("degree", 3);
  o.seed = c.seed;
  return [=](int N) {
    const PushforwardCheckResult r = pushforward_isotropy_check(*frame, morphism_family(fam), N, o);
    Sample s;
    s.detail = {{"direct", r.residual}, {"coboundary", r.coboundary_residual}};
    s.residual = coboundary_only ? r.coboundary_residual : std::max(r.residual, r.coboundary_residual);
    return s;
  };
}

Evaluator pullback_closed(const Context& c) {
  const Family fam = parse_family(c.opt<std::string>("family", "bgraph"));
  auto frame = std::make_shared<DiracFrame>(family_frame(c, fam));
  const int triples = c.opt("triples", 5);
  const std::uint64_t seed = c.seed;
  return [=](int N) {
    Sample s;
    s.residual = pullback_closedness(*frame, morphism_family(fam), N, triples, seed);
    return s;
  };
}

Sample from_report(const LagrangianReport& r, bool control, double min_defect) {
  Sample s;
  s.detail = {{"isotropy", r.isotropy_residual},
              {"coisotropy_defect", r.coisotropy_defect},
              {"ambient_dim", double(r.ambient_dim)},
              {"subspace_dim", double(r.subspace_dim)},
              {"kernel_dim", double(r.kernel_dim)},
              {"complement_dim", double(r.complement_dim)}};
  s.inconclusive = !r.conclusive;
  s.note = r.note;
  if (control) {
    // the control passes when isotropic and visibly not coisotropic
    s.residual = r.isotropy_residual;
    if (r.coisotropy_defect < min_defect) {
      s.residual = std::numeric_limits<double>::infinity();
      char buf[96];
      std::snprintf(buf, sizeof buf, "control frame looks Lagrangian: defect %.3g", r.coisotropy_defect);
      s.note = buf;
    }
  } else {
    s.residual = std::max(r.isotropy_residual, r.coisotropy_defect);
  }
  return s;
}

Evaluator lagrangian_unit(const Context& c) {
  const int n = c.n();
  const std::string kind = c.opt<std::string>("frame", "tm");
  std::shared_ptr<DiracFrame> frame;
  if (kind == "tm") {
    frame = std::make_shared<DiracFrame>(
        DiracFrame::graph_of_two_form(SmoothField::zero(FieldKind::two_form, n), TwistClass::none(n)));
  } else if (kind == "bgraph") {
    frame = std::make_shared<DiracFrame>(DiracFrame::graph_of_two_form(*c.sc.B, TwistClass::none(n)));
  } else if (kind == "bivector") {
    frame = std::make_shared<DiracFrame>(DiracFrame::graph_of_bivector(*c.sc.pi));
  } else if (kind == "isotropic_control") {
    // d_1 .. d_{n-1}: isotropic and involutive, one section short
    FrameOptions o;
    o.allow_non_maximal = true;
    Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n - 1);
    frame = std::make_shared<DiracFrame>(
        DiracFrame::constant(q, Eigen::MatrixXd::Zero(n, n - 1), TwistClass::none(n), o));
  } else {
    fail(ErrorCode::parse, "scenario: unknown frame '" + kind + "'");
  }
  Eigen::VectorXd x0(n);
  if (c.opts.contains("x0")) {
    const auto v = c.opts["x0"].get<std::vector<double>>();
    for (int i = 0; i < n; ++i) x0[i] = v[i];
  } else {
    for (int i = 0; i < n; ++i) x0[i] = 0.1 * (i + 1);
  }
  const int n_probe = c.opt("n_probe", 0);
  const double sigma_cut = c.opt("sigma_cut", 1e-6), min_defect = c.opt("min_defect", 1e-2);
  const bool control = kind == "isotropic_control";
  const std::uint64_t seed = c.seed;
  return [=](int N) {
    return from_report(lagrangian_at_unit(*frame, x0, N, n_probe, seed, sigma_cut), control, min_defect);
  };
}

Evaluator lagrangian_general(const Context& c) {
  const int n = c.n();
  auto frame = std::make_shared<DiracFrame>(DiracFrame::graph_of_two_form(*c.sc.B, TwistClass::none(n)));
  std::mt19937_64 rng(c.seed);
  const SimplexMap f = SimplexMap::random(n, 3, 0.5, rng);
  const int n_probe = c.opt("n_probe", 0);
  const double sigma_cut = c.opt("sigma_cut", 1e-6);
  const std::uint64_t seed = mix(c.seed);
  return [=](int N) {
    return from_report(lagrangian_general_bgraph(*frame, f, N, n_probe, seed, sigma_cut), false, 0.0);
  };
}

Evaluator apath(const Context& c) {
  const int n = c.n();
  auto frame = std::make_shared<DiracFrame>(DiracFrame::graph_of_two_form(*c.sc.B, TwistClass::none(n)));
  std::mt19937_64 rng(c.seed);
  const PolyPath x = random_poly_path(n, 0.5, rng);
  return [=](int N) {
    Sample s;
    s.residual = apath_residual(*frame, build_apath_bgraph(*frame, x.c, N));
    return s;
  };
}

Evaluator morphism_check(const Context& c) {
  const Family fam = parse_family(c.opt<std::string>("family", "bgraph"));
  auto frame = std::make_shared<DiracFrame>(family_frame(c, fam));
  const int n = c.n(), k = frame->rank();
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const int comps = fam == Family::constpi ? k : n;
  const SimplexMap base = SimplexMap::random(comps, 3, 0.5, rng);
  const SimplexMap tangent = SimplexMap::random(comps, 3, 1.0, rng);
  Eigen::VectorXd f0(n), v0(n);
  for (int i = 0; i < n; ++i) f0[i] = u(rng), v0[i] = u(rng);
  return [=](int N) {
    const bool constpi = fam == Family::constpi;
    const AlgebroidTriangle T =
        constpi ? build_morphism_constpi(*frame, base, f0, N) : build_morphism_bgraph(*frame, base, N);
    const AlgebroidTangent t =
        constpi ? build_tangent_constpi(T, tangent, v0) : build_tangent_bgraph(T, tangent);
    const ResidualPair m = morphism_residual(T), d = tangent_residual(T, t);
    Sample s;
    s.detail = {{"r1", m.r1}, {"r2", m.r2}, {"tangent_r1", d.r1}, {"tangent_r2", d.r2}};
    s.residual = std::max({m.r1, m.r2, d.r1, d.r2});
    return s;
  };
}

struct Registered {
  CheckInfo info;
  Factory make;
};

const std::vector<Registered>& registry() {
  static const std::vector<Registered> r = [] {
    std::vector<Registered> v;
    auto add = [&](CheckInfo info, Factory f) { v.push_back({std::move(info), std::move(f)}); };
    const std::optional<double> none;
    add({"apath", 1e-3, 1.5, true, false, {"B"}, {}, "A-path membership of a 2-form graph path"}, apath);
    add({"coboundary_lambda", 1e-6, 2.0, true, false, {}, {"pairs"}, "delta lambda_1 against lambda_2"},
        [](const Context& c) { return coboundary(c, Coboundary::lambda); });
    add({"coboundary_omega", 1e-6, 2.0, true, false, {}, {"pairs"}, "delta omega_1 against omega_2"},
        [](const Context& c) { return coboundary(c, Coboundary::omega); });
    add({"coboundary_phi", 1e-6, 2.0, true, false, {}, {"pairs"}, "delta phi^H_1 against phi^H_2"},
        [](const Context& c) { return coboundary(c, Coboundary::phi); });
    add({"pullback_closed", 1e-5, none, true, false, {}, {"family", "triples"},
         "closedness of the pulled-back omega^H_1 on A-path families"},
        pullback_closed);
    add({"pullback_multiplicative", 1e-5, 1.5, true, false, {}, {"family", "pairs", "degree"},
         "delta of the pulled-back omega^H_1 on morphism tangents"},
        [](const Context& c) {
          return pushforward_isotropy(c, parse_family(c.opt<std::string>("family", "bgraph")), true);
        });
    add({"courant_axioms", 1e-8, none, false, false, {}, {"triples", "points"},
         "pairing symmetry, Jacobi identity and the [a,a] anomaly"},
        courant_axioms);
    add({"exactness_lambda", 1e-6, none, true, false, {}, {"pairs"}, "omega_1 + d lambda_1"}, exactness_lambda);
    add({"horn_fill", 0.0, none, true, false, {}, {"horns"}, "horn fills reproduce their input faces"},
        horn_fill_check);
    add({"lagrangian_general_bgraph", 1e-4, none, true, false, {"B"}, {"n_probe", "sigma_cut"},
         "Lagrangian test at a non-unit morphism of a closed 2-form graph"},
        lagrangian_general);
    add({"lagrangian_unit", 1e-4, none, true, false, {}, {"frame", "x0", "n_probe", "sigma_cut", "min_defect"},
         "Lagrangian test at a unit"},
        lagrangian_unit);
    add({"morphism_residual", 1e-2, 1.5, true, false, {}, {"family"},
         "algebroid morphism and linearized morphism residuals"},
        morphism_check);
    add({"nondegeneracy", 1e-4, none, true, true, {}, {"twisted"},
         "smallest singular value of the omega^H_1 Gram matrix"},
        nondegeneracy);
    add({"basic_kernel", 1e-8, none, true, false, {}, {"probes"},
         "tangents with zero face pushes are in the kernel of omega_2"},
        basic_kernel);
    add({"transgression_differential", 1e-6, none, true, false, {"H"}, {"triples"}, "d phi^H_1 against the transgression and endpoint terms"},
        transgression_differential);
    add({"pushforward_isotropy_bgraph", 1e-5, 1.5, true, false, {"B"}, {"pairs", "degree"},
         "omega^H_2 on pushed tangents, closed 2-form graph"},
        [](const Context& c) { return pushforward_isotropy(c, Family::bgraph, false); });
    add({"pushforward_isotropy_constpi", 1e-5, 1.5, true, false, {"pi"}, {"pairs", "degree"},
         "omega^H_2 on pushed tangents, constant bivector graph"},
        [](const Context& c) { return pushforward_isotropy(c, Family::constpi, false); });
    add({"pushforward_isotropy_twisted", 1e-5, 1.5, true, false, {"B"}, {"pairs", "degree", "twist_sign"},
         "omega^H_2 on pushed tangents, 2-form graph with H = dB"},
        [](const Context& c) { return pushforward_isotropy(c, Family::twisted, false); });
    return v;
  }();
  return r;
}

const Registered* find_registered(const std::string& id) {
  for (const auto& r : registry())
    if (r.info.id == id) return &r;
  return nullptr;
}

std::optional<double> fitted(double r0, double r1, int N0, int N1) {
  if (r0 <= kExactFloor && r1 <= kExactFloor) return std::nullopt;
  if (!std::isfinite(r0) || !std::isfinite(r1)) return std::nullopt;
  return std::log2(std::max(r0, kExactFloor) / std::max(r1, kExactFloor)) / std::log2(double(N1) / N0);
}

CheckResult run_check(const Scenario& sc, const CheckSpec& spec) {
  const Registered& reg = *find_registered(spec.id);
  CheckResult res;
  res.check = spec.label;
  res.id = spec.id;
  res.exploratory = spec.exploratory;
  res.tolerance = spec.tolerance ? *spec.tolerance
                  : sc.tolerances.count(spec.id) ? sc.tolerances.at(spec.id)
                                                 : reg.info.default_tolerance;
  res.expected_order = spec.expected_order ? *spec.expected_order : reg.info.default_order;

  std::vector<int> Ns = reg.info.laddered ? sc.ladder : std::vector<int>{0};
  std::vector<Sample> samples;
  try {
    const Context ctx{sc, spec, json::parse(spec.options), check_seed(sc.seed, spec.label)};
    const Evaluator eval = reg.make(ctx);
    for (int N : Ns) samples.push_back(eval(N));
  } catch (const std::exception& e) {
    res.status = CheckStatus::fail;
    res.note = e.what();
    return res;
  }

  bool ok = true, inconclusive = false;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    CheckRecord row;
    row.check = spec.label;
    row.N = Ns[i];
    row.residual = samples[i].residual;
    row.detail = samples[i].detail;
    if (!samples[i].note.empty() && res.note.find(samples[i].note) == std::string::npos)
      res.note += (res.note.empty() ? "" : "; ") + samples[i].note;
    inconclusive |= samples[i].inconclusive;
    if (!std::isfinite(row.residual)) ok = false;
    if (reg.info.lower_bound) {
      if (!(row.residual > res.tolerance)) ok = false;
      if (i > 0 && row.residual < samples[i - 1].residual * (1.0 - 1e-9)) ok = false;
    } else if (i > 0) {
      row.fitted_order = fitted(samples[i - 1].residual, row.residual, Ns[i - 1], Ns[i]);
      if (res.expected_order && row.fitted_order && *row.fitted_order < *res.expected_order - 0.5) ok = false;
    }
    res.rows.push_back(row);
  }
  if (!reg.info.lower_bound && !(res.rows.back().residual <= res.tolerance)) ok = false;
  res.status = inconclusive ? CheckStatus::inconclusive : ok ? CheckStatus::pass : CheckStatus::fail;
  for (auto& row : res.rows) row.status = res.status;
  return res;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string format_csv_number(double v, const char* fmt) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  std::string out = buf;
  // Tiny negative values round to "-0.000"; drop the sign.
  if (out.find_first_not_of("-0.e+") == std::string::npos && out[0] == '-') out.erase(0, 1);
  return out;
}

}  // namespace

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::inconclusive: return "inconclusive";
  }
  return "fail";
}

const std::vector<CheckInfo>& available_checks() {
  static const std::vector<CheckInfo> infos = [] {
    std::vector<CheckInfo> v;
    for (const auto& r : registry()) v.push_back(r.info);
    return v;
  }();
  return infos;
}

const CheckInfo* find_check(const std::string& id) {
  const Registered* r = find_registered(id);
  return r ? &r->info : nullptr;
}

void validate_check(const Scenario& sc, const CheckSpec& spec) {
  const json o = json::parse(spec.options);
  auto bad = [&](const std::string& msg) { fail(ErrorCode::parse, "scenario: check '" + spec.label + "': " + msg); };
  auto need = [&](bool have, const char* field) {
    if (!have) bad(std::string("needs field ") + field);
  };
  auto positive_int = [&](const char* key) {
    if (o.contains(key) && !(o[key].is_number_integer() && o[key].get<long long>() > 0))
      bad(std::string(key) + " must be a positive integer");
  };
  for (const char* key : {"pairs", "triples", "points", "probes", "horns", "n_probe", "degree"}) positive_int(key);
  for (const char* key : {"sigma_cut", "min_defect", "twist_sign"})
    if (o.contains(key) && !o[key].is_number()) bad(std::string(key) + " must be a number");
  if (o.contains("twist_sign") && std::abs(o["twist_sign"].get<double>()) != 1.0) bad("twist_sign must be 1 or -1");
  if (o.contains("twisted") && !o["twisted"].is_boolean()) bad("twisted must be a boolean");
  if (o.contains("degree") && o["degree"].get<int>() > 3) bad("degree must be at most 3");
  if (o.contains("family")) {
    if (!o["family"].is_string()) bad("family must be a string");
    const std::string f = o["family"];
    if (f != "bgraph" && f != "constpi" && f != "twisted") bad("unknown family '" + f + "'");
  }
  const std::string fam = o.contains("family") ? o["family"].get<std::string>() : "bgraph";
  if (spec.id == "pullback_closed" || spec.id == "pullback_multiplicative" || spec.id == "morphism_residual") {
    if (spec.id == "morphism_residual" && fam == "twisted") bad("family 'twisted' is not available here");
    need(fam == "constpi" ? sc.pi.has_value() : sc.B.has_value(), fam == "constpi" ? "pi" : "B");
  }
  if (spec.id == "lagrangian_unit") {
    const std::string frame = o.contains("frame") ? o["frame"].get<std::string>() : "tm";
    if (frame == "bgraph") need(sc.B.has_value(), "B");
    else if (frame == "bivector") need(sc.pi.has_value(), "pi");
    else if (frame == "isotropic_control") {
      if (sc.dimension < 2) bad("the isotropic control needs dimension >= 2");
    } else if (frame != "tm") bad("unknown frame '" + frame + "'");
    if (o.contains("x0")) {
      if (!o["x0"].is_array() || static_cast<int>(o["x0"].size()) != sc.dimension) bad("x0 must have one entry per coordinate");
      for (const auto& e : o["x0"])
        if (!e.is_number()) bad("x0 entries must be numbers");
    }
  }
}

int Report::exit_code() const {
  bool fail = false, inconclusive = false;
  for (const auto& r : results) {
    if (r.exploratory) continue;
    fail |= r.status == CheckStatus::fail;
    inconclusive |= r.status == CheckStatus::inconclusive;
  }
  return fail ? 1 : inconclusive ? 3 : 0;
}

std::string Report::json() const {
  nlohmann::ordered_json root;
  root["schema_version"] = 1;
  root["scenario"] = scenario;
  nlohmann::ordered_json env;
  env["version"] = library_version();
  env["seed"] = seed;
  nlohmann::ordered_json tol = nlohmann::ordered_json::object();
  for (const auto& r : results) tol[r.check] = r.tolerance;
  env["tolerances"] = tol;
  root["environment"] = env;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    if (r.rows.empty()) {
      nlohmann::ordered_json rec;
      rec["check"] = r.check;
      rec["id"] = r.id;
      rec["N"] = nullptr;
      rec["residual"] = nullptr;
      rec["expected_order"] = r.expected_order ? nlohmann::ordered_json(*r.expected_order) : nullptr;
      rec["fitted_order"] = nullptr;
      rec["status"] = status_name(r.status);
      rec["exploratory"] = r.exploratory;
      rec["note"] = r.note;
      rows.push_back(rec);
    }
    for (const auto& row : r.rows) {
      nlohmann::ordered_json rec;
      rec["check"] = r.check;
      rec["id"] = r.id;
      rec["N"] = row.N;
      rec["residual"] = number(row.residual);
      rec["expected_order"] = r.expected_order ? nlohmann::ordered_json(*r.expected_order) : nullptr;
      rec["fitted_order"] = row.fitted_order ? number(*row.fitted_order) : nullptr;
      rec["status"] = status_name(row.status);
      rec["exploratory"] = r.exploratory;
      if (!row.detail.empty()) {
        nlohmann::ordered_json d;
        for (const auto& [k, v] : row.detail) d[k] = number(v);
        rec["detail"] = d;
      }
      if (!r.note.empty()) rec["note"] = r.note;
      rows.push_back(rec);
    }
  }
  root["results"] = rows;
  return root.dump(2) + "\n";
}

std::string Report::csv() const {
  std::string out = "check,N,residual,fitted_order,status\n";
  for (const auto& r : results) {
    if (r.rows.empty()) out += r.check + ",,,," + status_name(r.status) + "\n";
    for (const auto& row : r.rows) {
      out += r.check + "," + std::to_string(row.N) + "," + format_csv_number(row.residual, "%.6e") + ",";
      if (row.fitted_order) out += format_csv_number(*row.fitted_order, "%.3f");
      out += std::string(",") + status_name(row.status) + "\n";
    }
  }
  return out;
}

Report run_scenario(const Scenario& sc, int jobs) {
  Report rep;
  rep.scenario = sc.name;
  rep.seed = sc.seed;
  std::vector<CheckResult> results(sc.checks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < sc.checks.size();) results[i] = run_check(sc, sc.checks[i]);
  };
  const int threads = std::clamp(jobs, 1, static_cast<int>(sc.checks.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::sort(results.begin(), results.end(),
            [](const CheckResult& a, const CheckResult& b) { return a.check < b.check; });
  rep.results = std::move(results);
  return rep;
}

std::string library_version() { return COURANT_VERSION; }

}  // namespace courant
