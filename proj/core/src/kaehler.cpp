#include "flatform/kaehler.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace flatform {

KaehlerPoint KaehlerPoint::make(std::size_t n, std::size_t p, ComplexStructure j, BilinearMap alpha) {
  if (n < 1) throw std::invalid_argument("n: must be at least 1");
  if (p < 1) throw std::invalid_argument("p: must be at least 1");
  if (j.dim() != 2 * n) throw std::invalid_argument("J: expected a " + std::to_string(2 * n) + "x" +
                                                    std::to_string(2 * n) + " matrix");
  if (alpha.v1dim() != 2 * n || alpha.v2dim() != 2 * n) {
    throw std::invalid_argument("alpha: expected tangent dimension " + std::to_string(2 * n));
  }
  if (alpha.wdim() != p) throw std::invalid_argument("alpha: expected " + std::to_string(p) + " normal components");
  if (!(alpha.target().gram() == Matrix::identity(p))) {
    throw std::invalid_argument("alpha: normal space must carry the Euclidean inner product");
  }
  if (!alpha.is_symmetric()) throw std::invalid_argument("alpha: not symmetric");
  return KaehlerPoint(n, p, std::move(j), std::move(alpha));
}

BilinearMap build_gamma(const KaehlerPoint& kp) {
  const std::size_t d = 2 * kp.n();
  const SplitSpace split(kp.p());
  const BilinearMap& a = kp.alpha();
  const BilinearMap a_j = a.precompose(Matrix::identity(d), kp.j().matrix());
  BilinearMap gamma(d, d, split.space());
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < d; ++k) gamma.set(i, k, split.join(a.at(i, k), a_j.at(i, k)));
  }
  return gamma;
}

BilinearMap build_beta(const KaehlerPoint& kp) {
  const BilinearMap gamma = build_gamma(kp);
  return gamma + gamma.precompose(kp.j().matrix(), kp.j().matrix());
}

BilinearMap build_theta(const KaehlerPoint& kp) {
  const BilinearMap gamma = build_gamma(kp);
  return gamma - gamma.precompose(kp.j().matrix(), kp.j().matrix());
}

bool is_pluriharmonic(const KaehlerPoint& kp) {
  const Matrix id = Matrix::identity(kp.j().dim());
  return kp.alpha().precompose(kp.j().matrix(), id) == kp.alpha().precompose(id, kp.j().matrix());
}

CompatibilityResult check_compatibility(const KaehlerPoint& kp) {
  const BilinearMap gamma = build_gamma(kp);
  const BilinearMap jj = gamma.precompose(kp.j().matrix(), kp.j().matrix());
  const BilinearMap beta = gamma + jj;
  const BilinearMap theta = gamma - jj;
  CompatibilityResult r;
  r.beta_gamma = satisfies_exchange(beta, gamma);
  r.beta_theta = satisfies_exchange(beta, theta);
  return r;
}

Subspace pluriharmonic_nullity(const KaehlerPoint& kp) {
  const Matrix id = Matrix::identity(kp.j().dim());
  const Matrix& jm = kp.j().matrix();
  // D(X, Y) = alpha(X, JY) - alpha(JX, Y) vanishes for all X exactly on the subspace.
  return nullity(kp.alpha().precompose(id, jm) - kp.alpha().precompose(jm, id));
}

bool nullity_intersection_identity(const KaehlerPoint& kp) {
  const Subspace ng = nullity(build_gamma(kp));
  const Subspace nb = nullity(build_beta(kp));
  const Subspace nt = nullity(build_theta(kp));
  return ng.same_as(intersect(nb, nt));
}

namespace {

Matrix first_projection(std::size_t p) {
  Matrix m(p, 2 * p);
  for (std::size_t i = 0; i < p; ++i) m(i, i) = 1;
  return m;
}

Matrix block_diagonal(const Matrix& a) {
  const std::size_t p = a.rows();
  Matrix m(2 * p, 2 * p);
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t c = 0; c < p; ++c) {
      m(r, c) = a(r, c);
      m(p + r, p + c) = a(r, c);
    }
  }
  return m;
}

// Rows (u, 0) and (0, u) for u in the basis of a subspace of U^p.
Matrix doubled(const Subspace& u) {
  const std::size_t p = u.ambient_dim();
  Matrix m(2 * u.dim(), 2 * p);
  for (std::size_t r = 0; r < u.dim(); ++r) {
    for (std::size_t c = 0; c < p; ++c) {
      m(r, c) = u.basis()(r, c);
      m(u.dim() + r, p + c) = u.basis()(r, c);
    }
  }
  return m;
}

}  // namespace

SBetaReport sbeta_identities(const KaehlerPoint& kp) {
  if (!check_compatibility(kp).beta_gamma) {
    throw PreconditionViolation("sbeta_identities: beta and gamma are not compatible");
  }
  const std::size_t p = kp.p();
  const auto euclid = InnerSpace::euclidean(p);
  const BilinearMap gamma = build_gamma(kp);
  const BilinearMap beta = build_beta(kp);

  SBetaReport r;
  r.u1 = image(beta.post_compose(first_projection(p), euclid));
  r.s = r.u1.dim();
  const Subspace s_beta = image(beta);
  r.image_is_double = s_beta.same_as(Subspace::span(s_beta.ambient_ptr(), doubled(r.u1)));
  const Matrix proj = block_diagonal(orthogonal_projector(r.u1));
  const BilinearMap gamma_u1 = gamma.post_compose(proj, gamma.target_ptr());
  r.nullity_matches = nullity(beta).same_as(nullity(gamma_u1));
  return r;
}

EvenReport even_facts(const BilinearMap& phi, const ComplexStructure& j, const SplitSpace& split) {
  EvenReport r;
  const Subspace s = image(phi);
  const Subspace u = radical(s);
  const Subspace nu = nullity(phi);
  r.image_dim = s.dim();
  r.radical_dim = u.dim();
  r.nullity_dim = nu.dim();
  r.image_even = s.dim() % 2 == 0;
  r.radical_even = u.dim() % 2 == 0;
  r.image_t_invariant = s.contains(map(split.t(), s, s.ambient_ptr()));
  r.radical_t_invariant = u.contains(map(split.t(), u, u.ambient_ptr()));
  r.nullity_j_invariant = is_invariant(nu, j);

  const std::size_t p = split.p();
  const auto euclid = InnerSpace::euclidean(p);
  const Subspace omega = map(first_projection(p), u, euclid);
  const Matrix proj = block_diagonal(orthogonal_projector(omega));
  const Subspace s_omega = image(phi.post_compose(proj, phi.target_ptr()));
  r.omega_matches = omega.dim() == u.dim() && s_omega.same_as(u);
  return r;
}

std::pair<BilinearMap, BilinearMap> split_theta(const KaehlerPoint& kp, const Subspace& u1) {
  const BilinearMap theta = build_theta(kp);
  const Matrix p1 = orthogonal_projector(u1);
  const Matrix p2 = Matrix::identity(kp.p()) - p1;
  return {theta.post_compose(block_diagonal(p1), theta.target_ptr()),
          theta.post_compose(block_diagonal(p2), theta.target_ptr())};
}

std::string to_string(DiagonalizationStatus status) {
  switch (status) {
    case DiagonalizationStatus::ok: return "ok";
    case DiagonalizationStatus::kappa_deficient: return "kappa_deficient";
    case DiagonalizationStatus::not_flat: return "not_flat";
    case DiagonalizationStatus::irrational_frame: return "irrational_frame";
    case DiagonalizationStatus::failed: return "failed";
  }
  return "unknown";
}

std::vector<Vector> complex_basis(const Subspace& s, const ComplexStructure& j) {
  if (!is_invariant(s, j)) throw std::invalid_argument("complex_basis: subspace is not J-invariant");
  std::vector<Vector> out;
  Matrix current(0, s.ambient_dim());
  for (std::size_t r = 0; r < s.dim() && current.rows() < s.dim(); ++r) {
    const Vector v = s.basis().row_vector(r);
    Matrix trial = current;
    trial.append_row(v);
    if (rank(trial) == current.rows()) continue;
    trial.append_row(j.apply(v));
    current = std::move(trial);
    out.push_back(v);
  }
  return out;
}

namespace {

// Best rational approximation by continued fractions, accepted only when it
// reproduces x to within a relative 1e-9 with a modest denominator.
std::optional<Scalar> rationalize(double x) {
  constexpr long kMaxDen = 1'000'000;
  const double tol = 1e-9 * std::max(1.0, std::fabs(x));
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rest = x;
  for (int step = 0; step < 40; ++step) {
    const double a = std::floor(rest);
    if (std::fabs(a) > 1e15) break;
    const long ai = static_cast<long>(a);
    const long h2 = ai * h1 + h0;
    const long k2 = ai * k1 + k0;
    if (k2 > kMaxDen) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::fabs(x - static_cast<double>(h1) / static_cast<double>(k1)) <= tol) return Scalar(h1, k1);
    const double frac = rest - a;
    if (frac == 0.0) break;
    rest = 1.0 / frac;
  }
  return std::nullopt;
}

bool is_rational_square(const Scalar& q, Scalar& root) {
  if (sgn(q) < 0) return false;
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return false;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  root = Scalar(rn, rd);
  root.canonicalize();
  return true;
}

// q = u^2 + v^2 with rational u, v; q = a/b is such a sum iff a*b is a sum of
// two integer squares.
bool sum_of_two_squares(const Scalar& q, Scalar& u, Scalar& v) {
  if (sgn(q) <= 0) return false;
  const mpz_class m = q.get_num() * q.get_den();
  if (!m.fits_ulong_p() || m > mpz_class(1) << 50) return false;
  const unsigned long mm = m.get_ui();
  for (unsigned long x = 0; x * x <= mm; ++x) {
    const unsigned long rest = mm - x * x;
    const unsigned long y = static_cast<unsigned long>(std::llround(std::sqrt(static_cast<double>(rest))));
    for (unsigned long yy : {y == 0 ? 0UL : y - 1, y, y + 1}) {
      if (yy * yy == rest) {
        u = Scalar(mpz_class(x), q.get_den());
        v = Scalar(mpz_class(yy), q.get_den());
        u.canonicalize();
        v.canonicalize();
        return true;
      }
    }
  }
  return false;
}

Eigen::MatrixXd to_double(const Matrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c).get_d();
  }
  return out;
}

Eigen::VectorXd to_double(std::span<const Scalar> v) {
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = v[i].get_d();
  return out;
}

// Floating-point image of a bilinear map, for witnesses only.
class FloatForm {
 public:
  explicit FloatForm(const BilinearMap& phi)
      : v1_(phi.v1dim()), v2_(phi.v2dim()), gram_(to_double(phi.target().gram())) {
    values_.reserve(v1_ * v2_);
    for (std::size_t i = 0; i < v1_; ++i) {
      for (std::size_t j = 0; j < v2_; ++j) values_.push_back(to_double(phi.at(i, j)));
    }
  }

  Eigen::VectorXd operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(gram_.rows());
    for (std::size_t i = 0; i < v1_; ++i) {
      if (x(i) == 0.0) continue;
      for (std::size_t j = 0; j < v2_; ++j) out += x(i) * y(j) * values_[i * v2_ + j];
    }
    return out;
  }

  /// phi_X as a w x v2 matrix.
  Eigen::MatrixXd partial(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(gram_.rows(), v2_);
    for (std::size_t i = 0; i < v1_; ++i) {
      for (std::size_t j = 0; j < v2_; ++j) m.col(j) += x(i) * values_[i * v2_ + j];
    }
    return m;
  }

  double pair(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const { return a.dot(gram_ * b); }
  const Eigen::MatrixXd& gram() const { return gram_; }

 private:
  std::size_t v1_, v2_;
  Eigen::MatrixXd gram_;
  std::vector<Eigen::VectorXd> values_;
};

// Right null space of m by SVD: columns for singular values below tol.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() == 0) return Eigen::MatrixXd::Identity(m.cols(), m.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol) ++rank;
  }
  return svd.matrixV().rightCols(m.cols() - static_cast<Eigen::Index>(rank));
}

struct Plane {
  Scalar a, b;
  Matrix basis;  // 2 rows in W
};

// Exact M-invariant planes on which M acts as aI + bT; empty when the
// eigenvalues of M are not all rational or two blocks share an eigenvalue.
std::optional<std::vector<Plane>> exact_planes(const Matrix& m, bool& irrational) {
  const std::size_t w = m.rows();
  Eigen::EigenSolver<Eigen::MatrixXd> es(to_double(m), false);
  std::vector<Plane> planes;
  std::size_t total = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const auto ev = es.eigenvalues()(i);
    if (ev.imag() < 0) continue;
    auto a = rationalize(ev.real());
    auto b = rationalize(ev.imag());
    if (!a || !b) {
      irrational = true;
      return std::nullopt;
    }
    bool seen = false;
    for (const Plane& pl : planes) seen = seen || (pl.a == *a && pl.b == *b);
    if (seen) continue;
    Matrix shifted = m - (*a) * Matrix::identity(w);
    Matrix k = shifted * shifted + ((*b) * (*b)) * Matrix::identity(w);
    Matrix ker = kernel(k);
    if (ker.rows() == 0) {
      irrational = true;
      return std::nullopt;
    }
    if (ker.rows() != 2) return std::nullopt;
    total += 2;
    planes.push_back({*a, *b, std::move(ker)});
  }
  if (total != w) return std::nullopt;
  Matrix all(0, w);
  for (const Plane& pl : planes) all = all.stack(pl.basis);
  if (rank(all) != w) return std::nullopt;
  std::sort(planes.begin(), planes.end(), [](const Plane& x, const Plane& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  });
  return planes;
}

// J-invariant complement of a J-invariant subspace, as J-pairs (c, Jc).
Matrix complex_complement(const Subspace& s, const ComplexStructure& j) {
  const std::size_t d = s.ambient_dim();
  Matrix span_rows = s.basis();
  Matrix out(0, d);
  for (std::size_t i = 0; i < d && span_rows.rows() < d; ++i) {
    Vector e(d);
    e[i] = 1;
    Matrix trial = span_rows;
    trial.append_row(e);
    if (rank(trial) == span_rows.rows()) continue;
    const Vector je = j.apply(e);
    trial.append_row(je);
    span_rows = std::move(trial);
    out.append_row(e);
    out.append_row(je);
  }
  return out;
}

Vector combine(const Matrix& rows, std::span<const Scalar> coeffs) {
  Vector out(rows.cols());
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    if (flatform::is_zero(coeffs[r])) continue;
    for (std::size_t c = 0; c < rows.cols(); ++c) out[c] += coeffs[r] * rows(r, c);
  }
  return out;
}

void check_nullity_split(BetaDiagonalization& out, const ComplexStructure& j, std::size_t p) {
  const std::size_t d = j.dim();
  Matrix all(0, d);
  Matrix tail(0, d);
  for (std::size_t k = 0; k < out.frame.size(); ++k) {
    const Vector jx = j.apply(out.frame[k]);
    all.append_row(out.frame[k]);
    all.append_row(jx);
    if (k >= p) {
      tail.append_row(out.frame[k]);
      tail.append_row(jx);
    }
  }
  out.nullity_split = rank(all) == d && out.nullity.same_as(Subspace::span(out.nullity.ambient_ptr(), tail));
}

void check_cross_terms(BetaDiagonalization& out, const BilinearMap& beta, const ComplexStructure& j) {
  out.cross_terms_zero = true;
  for (std::size_t a = 0; a < out.frame.size() && out.cross_terms_zero; ++a) {
    const Vector ya[2] = {out.frame[a], j.apply(out.frame[a])};
    for (std::size_t b = 0; b < out.frame.size() && out.cross_terms_zero; ++b) {
      if (a == b) continue;
      const Vector yb[2] = {out.frame[b], j.apply(out.frame[b])};
      for (const auto& u : ya) {
        for (const auto& v : yb) {
          if (!flatform::is_zero(std::span<const Scalar>(beta(u, v)))) out.cross_terms_zero = false;
        }
      }
    }
  }
}

// Gram matrix of {beta(X_j,X_j), beta(X_j,JX_j)}_{j<p}.
Matrix block_gram(const std::vector<Vector>& frame, std::size_t p, const BilinearMap& beta,
                  const ComplexStructure& j) {
  Matrix values(0, beta.wdim());
  for (std::size_t k = 0; k < p; ++k) {
    values.append_row(beta(frame[k], frame[k]));
    values.append_row(beta(frame[k], j.apply(frame[k])));
  }
  return beta.target().gram_of(values);
}

double float_gram_error(const std::vector<Vector>& frame, std::size_t p, const BilinearMap& beta,
                        const ComplexStructure& j) {
  const FloatForm fb(beta);
  const Eigen::MatrixXd jd = to_double(j.matrix());
  std::vector<Eigen::VectorXd> values;
  for (std::size_t k = 0; k < p; ++k) {
    Eigen::VectorXd x = to_double(frame[k]);
    const double c = fb.pair(fb(x, x), fb(x, x));
    x *= std::pow(c, -0.25);
    values.push_back(fb(x, x));
    values.push_back(fb(x, jd * x));
  }
  double err = 0;
  for (std::size_t r = 0; r < values.size(); ++r) {
    for (std::size_t c = 0; c < values.size(); ++c) {
      const double target = r != c ? 0.0 : (r % 2 == 0 ? 1.0 : -1.0);
      err = std::max(err, std::fabs(fb.pair(values[r], values[c]) - target));
    }
  }
  return err;
}

void float_frame(BetaDiagonalization& out, const BilinearMap& beta, const ComplexStructure& j,
                 const Matrix& m, const Matrix& complement, std::size_t p, const std::vector<Vector>& tail) {
  constexpr double kTol = 1e-9;
  const FloatForm fb(beta);
  const Eigen::MatrixXd jd = to_double(j.matrix());
  const Eigen::MatrixXd cd = to_double(complement);  // rows
  const std::size_t d = j.dim();
  const std::size_t w = beta.wdim();

  Eigen::EigenSolver<Eigen::MatrixXd> es(to_double(m), true);
  std::vector<Eigen::MatrixXd> planes;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i).imag() <= kTol) continue;
    Eigen::MatrixXd pl(w, 2);
    pl.col(0) = es.eigenvectors().col(i).real();
    pl.col(1) = es.eigenvectors().col(i).imag();
    planes.push_back(pl);
  }
  if (planes.size() != p) {
    out.status = DiagonalizationStatus::failed;
    out.detail = "floating-point eigenplanes could not be separated";
    return;
  }

  std::vector<Eigen::VectorXd> xs;
  for (const auto& pl : planes) {
    // Complement of the plane: f with f^T G pl = 0.
    const Eigen::MatrixXd perp_basis = null_space(pl.transpose() * fb.gram(), kTol);
    // Constraints on coefficients c: f^T G beta(sum c_m C_m, e_b) = 0.
    Eigen::MatrixXd sys(d * perp_basis.cols(), complement.rows());
    for (Eigen::Index mcol = 0; mcol < static_cast<Eigen::Index>(complement.rows()); ++mcol) {
      const Eigen::MatrixXd part = fb.partial(cd.row(mcol).transpose());
      const Eigen::MatrixXd proj = perp_basis.transpose() * fb.gram() * part;  // f x d
      for (std::size_t b = 0; b < d; ++b) {
        for (Eigen::Index f = 0; f < perp_basis.cols(); ++f) sys(b * perp_basis.cols() + f, mcol) = proj(f, b);
      }
    }
    const Eigen::MatrixXd ns = null_space(sys, 1e-7);
    if (ns.cols() != 2) {
      out.status = DiagonalizationStatus::failed;
      out.detail = "floating-point block solve did not yield a complex line";
      return;
    }
    Eigen::VectorXd x = cd.transpose() * ns.col(0);
    const double c = fb.pair(fb(x, x), fb(x, x));
    x *= std::pow(c, -0.25);
    xs.push_back(x);
  }
  for (const Vector& t : tail) xs.push_back(to_double(t));

  double cross = 0;
  for (std::size_t a = 0; a < xs.size(); ++a) {
    for (std::size_t b = 0; b < xs.size(); ++b) {
      if (a == b) continue;
      for (const Eigen::VectorXd& u : {Eigen::VectorXd(xs[a]), Eigen::VectorXd(jd * xs[a])}) {
        for (const Eigen::VectorXd& v : {Eigen::VectorXd(xs[b]), Eigen::VectorXd(jd * xs[b])}) {
          cross = std::max(cross, fb(u, v).cwiseAbs().maxCoeff());
        }
      }
    }
  }
  std::vector<Eigen::VectorXd> values;
  for (std::size_t k = 0; k < p; ++k) {
    values.push_back(fb(xs[k], xs[k]));
    values.push_back(fb(xs[k], jd * xs[k]));
  }
  double err = 0;
  for (std::size_t r = 0; r < values.size(); ++r) {
    for (std::size_t c = 0; c < values.size(); ++c) {
      const double target = r != c ? 0.0 : (r % 2 == 0 ? 1.0 : -1.0);
      err = std::max(err, std::fabs(fb.pair(values[r], values[c]) - target));
    }
  }
  for (const auto& x : xs) out.float_frame.emplace_back(x.data(), x.data() + x.size());
  out.nullity_split = true;  // the tail is exact
  out.cross_terms_zero = cross <= kTol;
  out.gram_ok = err <= kTol;
  out.float_witness_error = err;
  out.status = out.cross_terms_zero && out.gram_ok ? DiagonalizationStatus::irrational_frame
                                                   : DiagonalizationStatus::failed;
}

}  // namespace

BetaDiagonalization diagonalize_beta(const KaehlerPoint& kp, std::uint64_t seed) {
  const std::size_t p = kp.p();
  const std::size_t d = 2 * kp.n();
  const ComplexStructure& j = kp.j();
  const BilinearMap beta = build_beta(kp);

  BetaDiagonalization out;
  out.nullity = nullity(beta);
  if (!is_flat(beta)) {
    out.status = DiagonalizationStatus::not_flat;
    out.detail = "beta is not flat";
    return out;
  }
  const RegularElementCertificate cert = kappa(beta, seed);
  out.kappa = cert.kappa;
  const std::vector<Vector> tail = complex_basis(out.nullity, j);
  if (cert.kappa < 2 * p) {
    out.status = DiagonalizationStatus::kappa_deficient;
    out.detail = "kappa(beta) = " + std::to_string(cert.kappa) + " < 2p = " + std::to_string(2 * p);
    out.nullity_split = out.nullity.dim() == d - cert.kappa;
    return out;
  }

  // beta_X is onto W; M = beta_Z R acts on each block plane as a complex scalar.
  const Matrix bx = beta.partial(cert.vector);
  const auto right_inverse = solve(bx, Matrix::identity(beta.wdim()));
  if (!right_inverse) {
    out.status = DiagonalizationStatus::failed;
    out.detail = "beta_X is not onto at the regular element";
    return out;
  }
  const Matrix complement = complex_complement(out.nullity, j);

  std::mt19937_64 rng(seed ^ 0x5deece66dULL);
  std::optional<std::vector<Plane>> planes;
  Matrix m;
  bool irrational = false;
  for (int attempt = 0; attempt < 8 && !planes; ++attempt) {
    Vector z(d);
    for (auto& c : z) c = static_cast<long>(rng() % 11) - 5;
    m = beta.partial(z) * (*right_inverse);
    irrational = false;
    planes = exact_planes(m, irrational);
    if (irrational) break;
  }
  if (!planes) {
    float_frame(out, beta, j, m, complement, p, tail);
    if (!irrational && out.status == DiagonalizationStatus::irrational_frame) {
      out.detail = "exact eigenplanes not separated; floating-point frame";
    } else if (out.detail.empty()) {
      out.detail = "eigenvalues are irrational; floating-point frame";
    }
    return out;
  }

  // X_k in the complement with beta(X_k, V) inside plane k.
  std::vector<Matrix> partials;
  for (std::size_t r = 0; r < complement.rows(); ++r) partials.push_back(beta.partial(complement.row(r)));
  const auto& w_space = beta.target_ptr();
  for (const Plane& pl : *planes) {
    const Subspace plane_perp = perp(Subspace::from_basis(w_space, pl.basis));
    const Matrix fg = plane_perp.basis() * w_space->gram();  // rows f^T G
    Matrix sys(d * fg.rows(), complement.rows());
    for (std::size_t mcol = 0; mcol < complement.rows(); ++mcol) {
      const Matrix proj = fg * partials[mcol];
      for (std::size_t b = 0; b < d; ++b) {
        for (std::size_t f = 0; f < fg.rows(); ++f) sys(b * fg.rows() + f, mcol) = proj(f, b);
      }
    }
    const Matrix coeffs = kernel(sys);
    if (coeffs.rows() != 2) {
      out.status = DiagonalizationStatus::failed;
      out.detail = "block solve returned dimension " + std::to_string(coeffs.rows());
      return out;
    }
    out.frame.push_back(combine(complement, coeffs.row(0)));
  }

  // Scale each block so that <<beta(X,X), beta(X,X)>> = 1 when that is possible over Q.
  out.unit_scaling = true;
  for (std::size_t k = 0; k < p; ++k) {
    Vector& x = out.frame[k];
    const Vector e = beta(x, x);
    const Scalar c = beta.target().pair(e, e);
    Scalar r, u, v;
    if (is_rational_square(c, r) && sgn(r) > 0 && sum_of_two_squares(Scalar(1) / r, u, v)) {
      const Vector jx = j.apply(x);
      for (std::size_t i = 0; i < d; ++i) x[i] = u * x[i] + v * jx[i];
    }
    const Vector e2 = beta(x, x);
    out.block_norms.push_back(beta.target().pair(e2, e2));
    if (out.block_norms.back() != 1) out.unit_scaling = false;
  }
  for (const Vector& t : tail) out.frame.push_back(t);

  check_nullity_split(out, j, p);
  check_cross_terms(out, beta, j);

  const Matrix gram = block_gram(out.frame, p, beta, j);
  bool diagonal = true;
  for (std::size_t r = 0; r < gram.rows(); ++r) {
    for (std::size_t c = 0; c < gram.cols(); ++c) {
      if (r != c && !flatform::is_zero(gram(r, c))) diagonal = false;
    }
  }
  bool signs = true;
  for (std::size_t k = 0; k < p; ++k) {
    const Scalar& pos = gram(2 * k, 2 * k);
    signs = signs && sgn(pos) > 0 && gram(2 * k + 1, 2 * k + 1) == -pos;
  }
  if (out.unit_scaling) {
    out.gram_ok = diagonal && signs;
  } else {
    const double err = float_gram_error(out.frame, p, beta, j);
    out.float_witness_error = err;
    out.gram_ok = diagonal && signs && err <= 1e-12;
  }

  const bool all = out.nullity_split && out.cross_terms_zero && out.gram_ok;
  out.status = all ? DiagonalizationStatus::ok : DiagonalizationStatus::failed;
  if (!all) {
    std::ostringstream os;
    os << "postconditions: (i) " << out.nullity_split << " (ii) " << out.cross_terms_zero << " (iii) "
       << out.gram_ok;
    out.detail = os.str();
  } else if (!out.unit_scaling) {
    out.detail = "unit scaling needs irrational factors; Gram checked in diagonal form";
  }
  return out;
}

}  // namespace flatform
