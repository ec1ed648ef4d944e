#pragma once

#include "flatform/kaehler.hpp"
#include "flatform/structure.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace flatform {

/// Brute-force recomputation of the invariants of a KaehlerPoint. Everything
/// below is evaluated from the raw J and alpha entries with a separate naive
/// Gauss-Jordan elimination; only the Scalar type is shared with the main path.
namespace oracle {

using Rows = std::vector<std::vector<Scalar>>;

struct Limits {
  std::size_t max_tangent_dim = 12;  // 2n
  std::size_t max_codim = 6;         // p
};

class SizeGuardExceeded : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FormTable {
  Rows image;    // basis of S
  Rows nullity;  // basis of N
  bool flat = false;
  bool null = false;
  std::size_t kappa_grid = 0;   // max dim phi_X(V) over the grid
  std::size_t grid_points = 0;
};

struct Table {
  std::size_t n = 0;
  std::size_t p = 0;
  Rows first_normal;  // S(alpha)
  Rows delta;         // N(alpha)
  Rows delta_c;       // Delta ∩ J Delta
  FormTable gamma, beta, theta;
  bool compatible = false;
  Rows q;  // {eta : <eta, alpha(Z,T)> = <eta-bar, alpha(Z,JT)>} over all coefficient vectors
  bool q_bar_consistent = false;
};

/// Throws SizeGuardExceeded beyond the limits.
Table compute(const KaehlerPoint& kp, const Limits& limits = {});

/// Grid used for kappa: {-1,0,1}^d when d <= 6, otherwise {0,1}^d together
/// with all vectors of support at most two and entries in {-1, 1}.
std::vector<std::vector<Scalar>> kappa_grid(std::size_t d);

std::size_t rank(const Rows& rows);
bool same_span(const Rows& a, const Rows& b);

struct Comparison {
  bool agreement = true;  // every compared field matches
  std::vector<Check> checks;
};

/// Field-by-field comparison with the main path. kappa disagreements are
/// recorded as flagged checks and do not affect `agreement`.
Comparison compare(const Analysis& analysis, const KaehlerPoint& kp, const Table& table);

}  // namespace oracle
}  // namespace flatform
