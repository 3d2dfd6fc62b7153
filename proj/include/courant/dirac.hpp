#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "courant/courant_algebra.hpp"

namespace courant {

enum class FrameKind { custom, two_form_graph, bivector_graph };

struct FrameOptions {
  /// Accept isotropic involutive frames with fewer than n sections.
  bool allow_non_maximal = false;
  /// Skip the constructor gates entirely (used to build deliberately broken frames).
  bool validate = true;
  double isotropy_tol = 1e-9;
  double involutivity_tol = 1e-7;
  int validation_points = 100;
  std::uint64_t seed = 0xD1AC;
};

/// k sections Theta_a = q^i_a d_i + p_ia dx^i spanning an isotropic,
/// involutive subbundle for the given twist.
class DiracFrame {
 public:
  DiracFrame(std::vector<GeneralizedSection> sections, TwistClass twist,
             FrameKind kind = FrameKind::custom, FrameOptions opts = {});

  /// Theta_a = d_a + B_ia dx^i; involutive exactly when H = dB.
  static DiracFrame graph_of_two_form(const SmoothField& B, const TwistClass& twist,
                                      FrameOptions opts = {});
  /// Theta_a = pi^{ai} d_i + dx^a, untwisted.
  static DiracFrame graph_of_bivector(const SmoothField& pi, FrameOptions opts = {});
  /// Constant coefficient frame; q and p are n x k.
  static DiracFrame constant(const Eigen::MatrixXd& q, const Eigen::MatrixXd& p,
                             const TwistClass& twist, FrameOptions opts = {});

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(sections_.size()); }
  bool maximal() const { return rank() == dim_; }
  FrameKind kind() const { return kind_; }
  const TwistClass& twist() const { return twist_; }
  const std::vector<GeneralizedSection>& sections() const { return sections_; }
  /// The defining 2-form or bivector for graph frames.
  const std::optional<SmoothField>& generator() const { return generator_; }

  /// n x k coefficient matrices at x.
  Eigen::MatrixXd q(std::span<const double> x) const;
  Eigen::MatrixXd p(std::span<const double> x) const;
  /// Coefficient jets, index [i * k + a].
  std::vector<Jet> q_jets(std::span<const double> x, int order) const;
  std::vector<Jet> p_jets(std::span<const double> x, int order) const;

  /// [Theta_a, Theta_b]_H for a < b, computed once.
  const GeneralizedSection& bracket(int a, int b) const;

  /// Worst residuals found while validating (zero when validation is off).
  double validated_isotropy() const { return checked_isotropy_; }
  double validated_involutivity() const { return checked_involutivity_; }

 private:
  int dim_;
  FrameKind kind_;
  TwistClass twist_;
  std::vector<GeneralizedSection> sections_;
  std::vector<GeneralizedSection> brackets_;
  std::optional<SmoothField> generator_;
  double checked_isotropy_ = 0.0;
  double checked_involutivity_ = 0.0;
};

/// C^g_ab(x) with C[g][a][b] antisymmetric in (a,b), plus the largest
/// off-span residual of the per-pair least-squares solves.
struct StructureFunctions {
  int k = 0;
  std::vector<double> C;  // index (g * k + a) * k + b
  double offspan_residual = 0.0;
  double operator()(int g, int a, int b) const { return C[(g * k + a) * k + b]; }
};

StructureFunctions structure_functions(const DiracFrame& frame, std::span<const double> x);

/// Structure functions as scalar fields (index (g*k+a)*k+b) with
/// finite-difference derivatives.
std::vector<SmoothField> structure_function_fields(const DiracFrame& frame, double step = 1e-5);

double isotropy_residual(const DiracFrame& frame, const std::vector<std::vector<double>>& points);
double involutivity_residual(const DiracFrame& frame, const std::vector<std::vector<double>>& points);

/// Largest gap between C^g_ab p_ig and the coordinate expression
/// q^j_a d_j p_ib - q^j_b d_j p_ia + p_jb d_i q^j_a + q^j_b d_i p_ja
/// (+ H_jli q^j_a q^l_b for a twist).
double coordinate_identity_residual(const DiracFrame& frame,
                                    const std::vector<std::vector<double>>& points);

}  // namespace courant
