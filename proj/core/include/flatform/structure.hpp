#pragma once

#include "flatform/kaehler.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace flatform {

/// Codimension from which the nullity estimate is no longer claimed.
inline constexpr std::size_t kScopeLimit = 12;

/// Raised by compute_Q when its preconditions fail or J cannot be solved.
/// code() is one of "not_flat", "incompatible", "inconsistent_J".
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string code, const std::string& what) : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Delta_c = N(gamma), checked against N(alpha) ∩ J N(alpha).
/// Throws std::logic_error if the two computations differ.
Subspace complex_relative_nullity(const KaehlerPoint& kp);

struct QResult {
  Subspace q{InnerSpace::euclidean(0)};  // in U^p
  /// Complex structure on Q in the coordinates of q.basis() (acting on
  /// coefficient columns).
  std::optional<ComplexStructure> j_matrix;
  bool routes_agree = false;   // radical route vs. inner-product definition
  bool bar_well_defined = false;  // eta -> eta-bar is a function on Q
  bool j_relation = false;     // J alpha_Q(X,Y) = alpha_Q(X,JY) on all basis pairs
  bool j_squared = false;      // J^2 = -I
  bool j_isometric = false;    // <J a, J b> = <a, b> on Q
  bool l_even = false;
};

/// Q = pi_1(S(gamma) ∩ S(gamma)^⊥) and the complex structure it carries.
/// Requires gamma and beta flat and compatible; throws PipelineError.
QResult compute_Q(const KaehlerPoint& kp);

/// Q from {eta in N_1 : <eta, alpha(Z,T)> = <eta-bar, alpha(Z,JT)>} over a
/// basis of generator pairs. Sets well_defined to whether eta-bar is a
/// function of eta on the solution set.
Subspace q_by_definition(const KaehlerPoint& kp, bool& well_defined);

struct StructureReport {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t q = 0;  // dim N_1
  std::size_t nu_c = 0;
  bool s_gamma_degenerate = false;
  std::size_t q_dim = 0;
  std::optional<Subspace> q_basis;
  std::optional<ComplexStructure> j_matrix;
  std::size_t p_dim = 0;
  std::size_t p_part_nullity = 0;  // nu^c(alpha_P)
  std::size_t bound = 0;           // 2(n - p + l), clamped at 0
  bool bound_ok = false;
  bool hypothesis_ok = false;
  // Checks on the P part.
  bool gamma_p_flat = false;
  bool s_gamma_p_nondegenerate = false;
  bool gamma_p_nullity_ok = false;  // nu(gamma_P) >= 2n - dim S(gamma_P)
  bool p_nullity_consistent = false;  // nu^c(alpha_P) = nu(gamma_P)
};

/// P = N_1 ∩ Q^⊥ and the nullity bound for alpha_P.
StructureReport split_and_bound(const KaehlerPoint& kp, const Subspace& q);

struct CurvatureResult {
  bool ok = false;
  std::size_t vectors = 0;
  std::vector<Scalar> values;  // K(X, JX) per basis vector of N(alpha_P)
  std::string detail;
};

/// K(X,JX) = <alpha(X,X), alpha(JX,JX)> - |alpha(X,JX)|^2 equals
/// -|alpha_Q(X,X)|^2 - |alpha_Q(X,JX)|^2 and is <= 0 for X in N(alpha_P).
CurvatureResult curvature_check(const KaehlerPoint& kp, const StructureReport& report);

enum class Verdict { theorem_verified, hypothesis_not_met, outside_theorem_scope, violation_candidate, input_invalid };

std::string to_string(Verdict v);
int exit_code(Verdict v);

/// flagged: a noted discrepancy that does not count as a failure (e.g. a
/// sampled kappa below the grid maximum).
enum class CheckStatus { pass, fail, skipped, flagged };
std::string to_string(CheckStatus s);

struct Check {
  std::string name;
  CheckStatus status = CheckStatus::skipped;
  std::string detail;
};

struct FormSummary {
  std::size_t image_dim = 0;
  std::size_t nullity_dim = 0;
  std::size_t radical_dim = 0;
  bool flat = false;
  bool null = false;
  bool symmetric = false;
  RegularElementCertificate kappa;
};

struct AnalysisOptions {
  std::uint64_t seed = 0;
};

struct Analysis {
  Verdict verdict = Verdict::hypothesis_not_met;
  StructureReport report;
  FormSummary gamma, beta, theta;
  std::size_t alpha_nullity = 0;  // dim Delta
  bool pluriharmonic = false;
  bool compatible = false;
  std::optional<std::size_t> u1_dim;
  std::optional<BetaDiagonalization> diagonalization;
  std::vector<Check> checks;
  std::uint64_t seed = 0;

  const Check* find(const std::string& name) const;
  bool passed(const std::string& name) const;
};

/// Every invariant, identity check and, when the hypotheses hold, the
/// structure pipeline, followed by the verdict.
Analysis analyze(const KaehlerPoint& kp, const AnalysisOptions& options);

}  // namespace flatform
