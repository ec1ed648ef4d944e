#include "flatform/structure.hpp"

#include <random>
#include <sstream>

namespace flatform {

Subspace complex_relative_nullity(const KaehlerPoint& kp) {
  const Subspace via_gamma = nullity(build_gamma(kp));
  const Subspace delta = nullity(kp.alpha());
  const Subspace via_alpha = complex_part(delta, kp.j());
  if (!via_gamma.same_as(via_alpha)) {
    throw std::logic_error("complex_relative_nullity: N(gamma) differs from Delta ∩ J Delta");
  }
  return via_gamma;
}

namespace {

Matrix first_projection(std::size_t p) {
  Matrix m(p, 2 * p);
  for (std::size_t i = 0; i < p; ++i) m(i, i) = 1;
  return m;
}

// Coordinates of the orthogonal projection onto span(rows of b) with respect
// to those rows: (B B^T)^{-1} B.
Matrix projection_coordinates(const Subspace& q) {
  const Matrix& b = q.basis();
  auto inv = inverse(q.gram());
  if (!inv) throw std::logic_error("projection_coordinates: degenerate subspace");
  return (*inv) * b * q.ambient().gram();
}

}  // namespace

Subspace q_by_definition(const KaehlerPoint& kp, bool& well_defined) {
  const std::size_t d = kp.j().dim();
  const std::size_t p = kp.p();
  const BilinearMap& alpha = kp.alpha();
  const BilinearMap alpha_j = alpha.precompose(Matrix::identity(d), kp.j().matrix());
  const BilinearMap gamma = build_gamma(kp);

  // Generator pairs whose gamma values form a basis of S(gamma); on them
  // eta -> eta-bar is a linear map of the coefficients.
  const std::vector<std::size_t> gens = independent_rows(gamma.value_rows());
  const std::size_t m = gens.size();
  Matrix a(p, m), b(p, m);
  for (std::size_t r = 0; r < m; ++r) {
    const Vector& av = alpha.at(gens[r] / d, gens[r] % d);
    const Vector& bv = alpha_j.at(gens[r] / d, gens[r] % d);
    for (std::size_t k = 0; k < p; ++k) {
      a(k, r) = av[k];
      b(k, r) = bv[k];
    }
  }
  // <eta, alpha(Z,T)> - <eta-bar, alpha(Z,JT)> = 0 for all basis Z, T.
  Matrix system(d * d, m);
  for (std::size_t z = 0; z < d; ++z) {
    for (std::size_t t = 0; t < d; ++t) {
      const Vector& azt = alpha.at(z, t);
      const Vector& azjt = alpha_j.at(z, t);
      for (std::size_t r = 0; r < m; ++r) {
        Scalar s = 0;
        for (std::size_t k = 0; k < p; ++k) s += a(k, r) * azt[k] - b(k, r) * azjt[k];
        system(z * d + t, r) = s;
      }
    }
  }
  const Matrix coeffs = kernel(system);  // rows c
  const auto target = alpha.target_ptr();
  if (coeffs.empty()) {
    well_defined = true;
    return Subspace(target);
  }
  const Matrix etas = coeffs * a.transpose();
  const Matrix bars = coeffs * b.transpose();
  // Combinations with eta = 0 must also have eta-bar = 0.
  const Matrix null_eta = kernel(etas.transpose());
  well_defined = null_eta.empty() || (null_eta * bars).is_zero();
  return Subspace::span(target, etas);
}

QResult compute_Q(const KaehlerPoint& kp) {
  const BilinearMap gamma = build_gamma(kp);
  const BilinearMap beta = build_beta(kp);
  if (!is_flat(gamma) || !is_flat(beta)) throw PipelineError("not_flat", "compute_Q: gamma or beta is not flat");
  if (!check_compatibility(kp).beta_gamma) {
    throw PipelineError("incompatible", "compute_Q: beta and gamma are not compatible");
  }
  const std::size_t p = kp.p();
  const std::size_t d = kp.j().dim();
  const auto target = kp.alpha().target_ptr();

  QResult r;
  const Subspace rad = radical(image(gamma));
  r.q = map(first_projection(p), rad, target);
  bool well_defined = false;
  const Subspace q_def = q_by_definition(kp, well_defined);
  r.routes_agree = r.q.same_as(q_def);
  r.bar_well_defined = well_defined;
  const std::size_t l = r.q.dim();
  r.l_even = l % 2 == 0;
  if (l == 0) {
    r.j_relation = r.j_squared = r.j_isometric = true;
    return r;
  }

  // J a_ij = b_ij with a_ij, b_ij the Q-coordinates of alpha_Q(e_i,e_j), alpha_Q(e_i,Je_j).
  const Matrix coords = projection_coordinates(r.q);  // l x p
  const BilinearMap alpha_j = kp.alpha().precompose(Matrix::identity(d), kp.j().matrix());
  Matrix a(d * d, l), b(d * d, l);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      const Vector ca = coords.apply(kp.alpha().at(i, k));
      const Vector cb = coords.apply(alpha_j.at(i, k));
      for (std::size_t c = 0; c < l; ++c) {
        a(i * d + k, c) = ca[c];
        b(i * d + k, c) = cb[c];
      }
    }
  }
  auto jt = solve(a, b);  // a J^T = b
  if (!jt) throw PipelineError("inconsistent_J", "compute_Q: J alpha_Q(X,Y) = alpha_Q(X,JY) has no solution");
  const Matrix jm = jt->transpose();
  r.j_relation = a * (*jt) == b;
  r.j_squared = squares_to_minus_identity(jm);
  const Matrix g = r.q.gram();
  r.j_isometric = jm.transpose() * g * jm == g;
  if (r.j_squared) r.j_matrix = ComplexStructure(jm);
  return r;
}

StructureReport split_and_bound(const KaehlerPoint& kp, const Subspace& q) {
  StructureReport rep;
  rep.n = kp.n();
  rep.p = kp.p();
  const auto target = kp.alpha().target_ptr();
  const Subspace n1 = image(kp.alpha());
  rep.q = n1.dim();
  rep.nu_c = complex_relative_nullity(kp).dim();
  rep.s_gamma_degenerate = radical(image(build_gamma(kp))).dim() > 0;
  rep.q_dim = q.dim();
  rep.q_basis = q;

  const Subspace p_space = intersect(n1, perp(Subspace::from_basis(target, q.basis())));
  rep.p_dim = p_space.dim();
  const BilinearMap alpha_p = kp.alpha().post_compose(orthogonal_projector(p_space), target);
  const KaehlerPoint kp_p = KaehlerPoint::make(kp.n(), kp.p(), kp.j(), alpha_p);
  const BilinearMap gamma_p = build_gamma(kp_p);
  const Subspace s_gamma_p = image(gamma_p);
  const std::size_t nu_gamma_p = nullity(gamma_p).dim();
  rep.gamma_p_flat = is_flat(gamma_p);
  rep.s_gamma_p_nondegenerate = !is_degenerate(s_gamma_p);
  rep.gamma_p_nullity_ok = nu_gamma_p + s_gamma_p.dim() >= 2 * kp.n();
  rep.p_part_nullity = complex_part(nullity(alpha_p), kp.j()).dim();
  rep.p_nullity_consistent = rep.p_part_nullity == nu_gamma_p;
  const long bound = 2 * (static_cast<long>(kp.n()) - static_cast<long>(kp.p()) + static_cast<long>(q.dim()));
  rep.bound = bound > 0 ? static_cast<std::size_t>(bound) : 0;
  rep.bound_ok = rep.p_part_nullity >= rep.bound;
  return rep;
}

CurvatureResult curvature_check(const KaehlerPoint& kp, const StructureReport& report) {
  CurvatureResult out;
  const auto target = kp.alpha().target_ptr();
  const Subspace q = report.q_basis ? Subspace::from_basis(target, report.q_basis->basis()) : Subspace(target);
  const Subspace n1 = image(kp.alpha());
  const Subspace p_space = intersect(n1, perp(q));
  const BilinearMap alpha_p = kp.alpha().post_compose(orthogonal_projector(p_space), target);
  const Matrix proj_q = orthogonal_projector(q);
  const Subspace delta_p = nullity(alpha_p);
  const InnerSpace& u = kp.alpha().target();
  out.ok = true;
  for (std::size_t r = 0; r < delta_p.dim(); ++r) {
    const Vector x = delta_p.basis().row_vector(r);
    const Vector jx = kp.j().apply(x);
    const Vector axx = kp.alpha()(x, x);
    const Vector ajxjx = kp.alpha()(jx, jx);
    const Vector axjx = kp.alpha()(x, jx);
    const Scalar gauss = u.pair(axx, ajxjx) - u.pair(axjx, axjx);
    const Vector qxx = proj_q.apply(axx);
    const Vector qxjx = proj_q.apply(axjx);
    const Scalar via_q = -u.pair(qxx, qxx) - u.pair(qxjx, qxjx);
    out.values.push_back(gauss);
    if (gauss != via_q || sgn(gauss) > 0) {
      out.ok = false;
      std::ostringstream os;
      os << "basis vector " << r << ": K = " << gauss.get_str() << ", -|alpha_Q|^2 = " << via_q.get_str();
      out.detail = os.str();
    }
  }
  out.vectors = delta_p.dim();
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::theorem_verified: return "theorem_verified";
    case Verdict::hypothesis_not_met: return "hypothesis_not_met";
    case Verdict::outside_theorem_scope: return "outside_theorem_scope";
    case Verdict::violation_candidate: return "violation_candidate";
    case Verdict::input_invalid: return "input_invalid";
  }
  return "unknown";
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::violation_candidate: return 2;
    case Verdict::input_invalid: return 1;
    default: return 0;
  }
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
    case CheckStatus::flagged: return "flagged";
  }
  return "unknown";
}

const Check* Analysis::find(const std::string& name) const {
  for (const Check& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

bool Analysis::passed(const std::string& name) const {
  const Check* c = find(name);
  return c != nullptr && c->status == CheckStatus::pass;
}

namespace {

class CheckList {
 public:
  explicit CheckList(std::vector<Check>& out) : out_(out) {}

  void add(std::string name, bool ok, std::string detail = {}) {
    out_.push_back({std::move(name), ok ? CheckStatus::pass : CheckStatus::fail, std::move(detail)});
  }
  void skip(std::string name, std::string reason) {
    out_.push_back({std::move(name), CheckStatus::skipped, std::move(reason)});
  }

 private:
  std::vector<Check>& out_;
};

FormSummary summarize(const BilinearMap& phi, std::uint64_t seed) {
  FormSummary s;
  const Subspace img = image(phi);
  s.image_dim = img.dim();
  s.radical_dim = radical(img).dim();
  s.nullity_dim = nullity(phi).dim();
  s.flat = is_flat(phi);
  s.null = is_null(phi);
  s.symmetric = phi.is_symmetric();
  s.kappa = kappa(phi, seed);
  return s;
}

// Regular-element facts for one form at its certified point.
void regular_checks(CheckList& checks, const std::string& prefix, const BilinearMap& phi, const FormSummary& s) {
  const Vector& x = s.kappa.vector;
  const Subspace ker = partial_kernel(phi, x);
  checks.add(prefix + ".kernel_dimension", ker.dim() + s.kappa.kappa == phi.v2dim(),
             "dim ker = " + std::to_string(ker.dim()) + ", kappa = " + std::to_string(s.kappa.kappa));
  const Subspace l = l_space(phi, x);
  const Subspace img = partial_image(phi, x);
  checks.add(prefix + ".l_in_image", img.contains(l));
  if (s.flat) {
    checks.add(prefix + ".l_in_u", u_space(phi, x).contains(l),
               "sigma = " + std::to_string(s.kappa.sigma_at_x) + ", tau = " + std::to_string(s.kappa.tau_at_x));
    checks.add(prefix + ".sigma_le_tau", s.kappa.sigma_at_x <= s.kappa.tau_at_x);
  } else {
    checks.skip(prefix + ".l_in_u", "form is not flat");
    checks.skip(prefix + ".sigma_le_tau", "form is not flat");
  }
}

void even_checks(CheckList& checks, const std::string& prefix, const BilinearMap& phi, const ComplexStructure& j,
                 const SplitSpace& split) {
  const EvenReport e = even_facts(phi, j, split);
  std::ostringstream os;
  os << "dim S = " << e.image_dim << ", dim U = " << e.radical_dim << ", nu = " << e.nullity_dim;
  checks.add(prefix + ".even", e.all(), os.str());
}

void estpluri_check(CheckList& checks, const std::string& name, const BilinearMap& phi, const ComplexStructure& j,
                    const SplitSpace& split, std::uint64_t seed) {
  try {
    const PluriharmonicBound b = pluriharmonic_bound_check(phi, j, split, seed);
    checks.add(name, b.holds,
               "4*" + std::to_string(b.image_dim) + " <= " + std::to_string(b.kappa) + "*" +
                   std::to_string(b.kappa + 2));
  } catch (const PreconditionViolation& e) {
    checks.add(name, false, std::string("precondition: ") + e.what());
  }
}

}  // namespace

Analysis analyze(const KaehlerPoint& kp, const AnalysisOptions& options) {
  Analysis an;
  an.seed = options.seed;
  CheckList checks(an.checks);
  const std::size_t n = kp.n();
  const std::size_t p = kp.p();
  const std::size_t d = 2 * n;
  const ComplexStructure& j = kp.j();
  const SplitSpace split(p);

  const BilinearMap gamma = build_gamma(kp);
  const BilinearMap beta = build_beta(kp);
  const BilinearMap theta = build_theta(kp);
  an.gamma = summarize(gamma, options.seed);
  an.beta = summarize(beta, options.seed);
  an.theta = summarize(theta, options.seed);
  an.alpha_nullity = nullity(kp.alpha()).dim();
  an.pluriharmonic = is_pluriharmonic(kp);
  const CompatibilityResult compat = check_compatibility(kp);
  an.compatible = compat.beta_gamma;

  // Identities that hold for every input.
  checks.add("split.operator_laws", split.check_operator_laws());
  checks.add("gamma.t_relation", is_t_compatible(gamma, j, split));
  checks.add("beta.t_relation", is_t_compatible(beta, j, split));
  checks.add("theta.t_relation", is_t_compatible(theta, j, split));
  checks.add("forms.sum_identity", Scalar(2) * gamma == beta + theta);
  {
    const Matrix id = Matrix::identity(d);
    checks.add("theta.symmetric_pluriharmonic",
               theta.is_symmetric() && theta.precompose(j.matrix(), id) == theta.precompose(id, j.matrix()));
  }
  checks.add("gamma.symmetric_iff_pluriharmonic", an.gamma.symmetric == an.pluriharmonic,
             std::string("gamma symmetric: ") + (an.gamma.symmetric ? "yes" : "no") +
                 ", alpha pluriharmonic: " + (an.pluriharmonic ? "yes" : "no"));
  {
    const Subspace ph = pluriharmonic_nullity(kp);
    checks.add("beta.pluriharmonic_nullity", ph.same_as(nullity(beta)) && is_invariant(ph, j),
               "dim = " + std::to_string(ph.dim()));
  }
  checks.add("nullity.intersection", nullity_intersection_identity(kp));
  std::optional<std::size_t> nu_c;
  try {
    nu_c = complex_relative_nullity(kp).dim();
    checks.add("nullity.complex_relative", true, "nu_c = " + std::to_string(*nu_c));
  } catch (const std::logic_error& e) {
    checks.add("nullity.complex_relative", false, e.what());
    nu_c = nullity(gamma).dim();
  }
  if (an.gamma.flat) {
    checks.add("theta.flat_if_gamma_flat", an.theta.flat);
  } else {
    checks.skip("theta.flat_if_gamma_flat", "gamma is not flat");
  }
  checks.add("compatibility.beta_theta", compat.implication_holds());
  even_checks(checks, "gamma", gamma, j, split);
  even_checks(checks, "beta", beta, j, split);
  even_checks(checks, "theta", theta, j, split);
  regular_checks(checks, "gamma", gamma, an.gamma);
  regular_checks(checks, "beta", beta, an.beta);
  regular_checks(checks, "theta", theta, an.theta);
  {
    std::vector<Vector> pivots{an.gamma.kappa.vector};
    std::mt19937_64 rng(options.seed ^ 0xc4a1ULL);
    for (int k = 0; k < 3; ++k) {
      Vector z(d);
      for (auto& c : z) c = static_cast<long>(rng() % 7) - 3;
      pivots.push_back(std::move(z));
    }
    const auto chain = kernel_chain(gamma, pivots);
    bool descending = true;
    for (std::size_t k = 1; k < chain.size(); ++k) descending = descending && chain[k - 1].contains(chain[k]);
    checks.add("gamma.kernel_chain", descending && chain.back().contains(nullity(gamma)),
               "terminal dimension " + std::to_string(chain.back().dim()));
  }
  estpluri_check(checks, "estpluri.theta", theta, j, split, options.seed);
  if (an.gamma.symmetric) {
    estpluri_check(checks, "estpluri.gamma", gamma, j, split, options.seed);
  } else {
    checks.skip("estpluri.gamma", "gamma is not symmetric");
  }

  // Facts that need flatness or compatibility.
  if (an.beta.flat && p <= n) {
    checks.add("beta.nullity_kappa", an.beta.nullity_dim + an.beta.kappa.kappa == d,
               "nu(beta) = " + std::to_string(an.beta.nullity_dim) + ", kappa(beta) = " +
                   std::to_string(an.beta.kappa.kappa));
  } else {
    checks.skip("beta.nullity_kappa", "needs flat beta and p <= n");
  }
  if (compat.beta_gamma) {
    const SBetaReport sb = sbeta_identities(kp);
    an.u1_dim = sb.s;
    checks.add("sbeta.image", sb.image_is_double, "s = " + std::to_string(sb.s));
    checks.add("sbeta.nullity", sb.nullity_matches);
    if (an.gamma.flat && an.beta.flat && p <= n && an.beta.nullity_dim + 2 * sb.s == d) {
      const auto [theta1, theta2] = split_theta(kp, sb.u1);
      checks.add("theta.split_flat", is_flat(theta1) && is_flat(theta2));
      estpluri_check(checks, "estpluri.theta1", theta1, j, split, options.seed);
      estpluri_check(checks, "estpluri.theta2", theta2, j, split, options.seed);
    } else {
      checks.skip("theta.split_flat", "needs flat gamma, beta and nu(beta) = 2n - 2s");
    }
  } else {
    checks.skip("sbeta.image", "beta and gamma not compatible");
    checks.skip("sbeta.nullity", "beta and gamma not compatible");
    checks.skip("theta.split_flat", "beta and gamma not compatible");
  }
  if (an.beta.flat && p <= n && an.beta.kappa.kappa == 2 * p) {
    BetaDiagonalization diag = diagonalize_beta(kp, options.seed);
    const bool ok = diag.status == DiagonalizationStatus::ok || diag.status == DiagonalizationStatus::irrational_frame;
    checks.add("beta.diagonalization", ok && diag.nullity_split && diag.cross_terms_zero && diag.gram_ok,
               to_string(diag.status) + (diag.detail.empty() ? "" : ": " + diag.detail));
    an.diagonalization = std::move(diag);
  } else {
    checks.skip("beta.diagonalization", "needs flat beta, p <= n and kappa(beta) = 2p");
  }

  // Structure pipeline.
  StructureReport& rep = an.report;
  rep.n = n;
  rep.p = p;
  rep.q = image(kp.alpha()).dim();
  rep.nu_c = *nu_c;
  rep.s_gamma_degenerate = an.gamma.radical_dim > 0;
  const bool pre = an.gamma.flat && an.beta.flat && compat.beta_gamma;
  rep.hypothesis_ok = pre && p >= 2 && p + 1 <= n && rep.nu_c + 2 * rep.q < d;

  std::optional<QResult> qres;
  if (pre) {
    try {
      qres = compute_Q(kp);
      checks.add("q.routes_agree", qres->routes_agree, "l = " + std::to_string(qres->q.dim()));
      checks.add("q.bar_well_defined", qres->bar_well_defined);
    } catch (const PipelineError& e) {
      checks.add("q.routes_agree", false, e.code() + ": " + e.what());
    }
  } else {
    checks.skip("q.routes_agree", "needs flat gamma, flat beta and compatibility");
  }

  const std::vector<std::string> pipeline_names = {
      "pipeline.s_gamma_degenerate", "pipeline.l_positive", "pipeline.l_even", "pipeline.j_relation",
      "pipeline.j_squared", "pipeline.j_isometric", "pipeline.gamma_p_flat", "pipeline.s_gamma_p_nondegenerate",
      "pipeline.gamma_p_nullity", "pipeline.p_nullity_consistent", "pipeline.bound", "pipeline.curvature"};
  if (rep.hypothesis_ok && qres) {
    const QResult& qr = *qres;
    rep.q_dim = qr.q.dim();
    rep.q_basis = qr.q;
    rep.j_matrix = qr.j_matrix;
    checks.add("pipeline.s_gamma_degenerate", rep.s_gamma_degenerate);
    checks.add("pipeline.l_positive", rep.q_dim > 0, "l = " + std::to_string(rep.q_dim));
    checks.add("pipeline.l_even", qr.l_even);
    checks.add("pipeline.j_relation", qr.j_relation);
    checks.add("pipeline.j_squared", qr.j_squared);
    checks.add("pipeline.j_isometric", qr.j_isometric);
    const StructureReport sp = split_and_bound(kp, qr.q);
    rep.p_dim = sp.p_dim;
    rep.p_part_nullity = sp.p_part_nullity;
    rep.bound = sp.bound;
    rep.bound_ok = sp.bound_ok;
    rep.gamma_p_flat = sp.gamma_p_flat;
    rep.s_gamma_p_nondegenerate = sp.s_gamma_p_nondegenerate;
    rep.gamma_p_nullity_ok = sp.gamma_p_nullity_ok;
    rep.p_nullity_consistent = sp.p_nullity_consistent;
    checks.add("pipeline.gamma_p_flat", sp.gamma_p_flat);
    checks.add("pipeline.s_gamma_p_nondegenerate", sp.s_gamma_p_nondegenerate);
    checks.add("pipeline.gamma_p_nullity", sp.gamma_p_nullity_ok);
    checks.add("pipeline.p_nullity_consistent", sp.p_nullity_consistent);
    checks.add("pipeline.bound", sp.bound_ok,
               std::to_string(sp.p_part_nullity) + " >= " + std::to_string(sp.bound));
    const CurvatureResult curv = curvature_check(kp, rep);
    checks.add("pipeline.curvature", curv.ok,
               curv.detail.empty() ? std::to_string(curv.vectors) + " vectors" : curv.detail);
  } else {
    if (qres) {
      rep.q_dim = qres->q.dim();
      rep.q_basis = qres->q;
      rep.j_matrix = qres->j_matrix;
    }
    const std::string reason = rep.hypothesis_ok ? "Q could not be computed" : "hypothesis not met";
    for (const auto& name : pipeline_names) checks.skip(name, reason);
  }

  bool any_fail = false;
  for (const Check& c : an.checks) any_fail = any_fail || c.status == CheckStatus::fail;
  if (p >= kScopeLimit) {
    an.verdict = Verdict::outside_theorem_scope;
  } else if (any_fail) {
    an.verdict = Verdict::violation_candidate;
  } else if (!rep.hypothesis_ok) {
    an.verdict = Verdict::hypothesis_not_met;
  } else {
    an.verdict = Verdict::theorem_verified;
  }
  return an;
}

}  // namespace flatform
