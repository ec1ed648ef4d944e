#include "flatform/oracle.hpp"

#include <functional>

namespace flatform::oracle {

namespace {

using Vec = std::vector<Scalar>;

struct Reduced {
  Rows rows;
  std::vector<std::size_t> pivots;
};

// Plain Gauss-Jordan with the first nonzero entry as pivot.
Reduced gauss_jordan(Rows m, std::size_t cols) {
  Reduced out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[r], m[piv]);
    const Scalar inv = 1 / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Scalar f = m[i][c];
      for (std::size_t k = 0; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    out.pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  out.rows = std::move(m);
  return out;
}

std::size_t width(const Rows& rows, std::size_t fallback) { return rows.empty() ? fallback : rows.front().size(); }

Rows null_space(const Rows& m, std::size_t cols) {
  const Reduced red = gauss_jordan(m, cols);
  std::vector<bool> pivot(cols, false);
  for (auto c : red.pivots) pivot[c] = true;
  Rows out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (pivot[f]) continue;
    Vec v(cols);
    v[f] = 1;
    for (std::size_t r = 0; r < red.pivots.size(); ++r) v[red.pivots[r]] = -red.rows[r][f];
    out.push_back(std::move(v));
  }
  return out;
}

Rows basis_of(const Rows& rows, std::size_t cols) { return gauss_jordan(rows, cols).rows; }

Scalar split_pair(const Vec& a, const Vec& b, std::size_t p) {
  Scalar s = 0;
  for (std::size_t k = 0; k < p; ++k) s += a[k] * b[k] - a[p + k] * b[p + k];
  return s;
}

using FormValues = std::vector<std::vector<Vec>>;  // [i][j] -> vector in W^{p,p}

FormTable tabulate(const FormValues& f, std::size_t d, std::size_t p, const Rows& grid) {
  FormTable t;
  const std::size_t w = 2 * p;
  Rows all;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) all.push_back(f[i][j]);
  }
  t.image = basis_of(all, w);

  Rows system;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < w; ++k) {
      Vec row(d);
      for (std::size_t j = 0; j < d; ++j) row[j] = f[i][j][k];
      system.push_back(std::move(row));
    }
  }
  t.nullity = null_space(system, d);

  t.flat = true;
  t.null = true;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t l = 0; l < d; ++l) {
          const Scalar lhs = split_pair(f[i][j], f[k][l], p);
          if (lhs != 0) t.null = false;
          if (lhs != split_pair(f[i][l], f[k][j], p)) t.flat = false;
        }
      }
    }
  }

  for (const Vec& x : grid) {
    Rows m(w, Vec(d));
    for (std::size_t i = 0; i < d; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k < w; ++k) m[k][j] += x[i] * f[i][j][k];
      }
    }
    t.kappa_grid = std::max(t.kappa_grid, gauss_jordan(m, d).pivots.size());
  }
  t.grid_points = grid.size();
  return t;
}

Rows to_rows(const Matrix& m) {
  Rows out;
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(m.row_vector(r));
  return out;
}

}  // namespace

std::size_t rank(const Rows& rows) { return gauss_jordan(rows, width(rows, 0)).pivots.size(); }

bool same_span(const Rows& a, const Rows& b) {
  Rows both = a;
  both.insert(both.end(), b.begin(), b.end());
  const std::size_t r = rank(both);
  return rank(a) == r && rank(b) == r;
}

std::vector<std::vector<Scalar>> kappa_grid(std::size_t d) {
  Rows grid;
  if (d <= 6) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
      Vec v(d);
      std::size_t c = code;
      for (std::size_t i = 0; i < d; ++i) {
        v[i] = static_cast<long>(c % 3) - 1;
        c /= 3;
      }
      grid.push_back(std::move(v));
    }
    return grid;
  }
  for (std::size_t code = 0; code < (std::size_t{1} << d); ++code) {
    Vec v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = (code >> i) & 1U;
    grid.push_back(std::move(v));
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      for (int si : {-1, 1}) {
        for (int sj : {-1, 1}) {
          if (si == 1 && sj == 1) continue;  // already in {0,1}^d
          Vec v(d);
          v[i] = si;
          v[j] = sj;
          grid.push_back(std::move(v));
        }
      }
    }
    Vec v(d);
    v[i] = -1;
    grid.push_back(std::move(v));
  }
  return grid;
}

Table compute(const KaehlerPoint& kp, const Limits& limits) {
  const std::size_t n = kp.n();
  const std::size_t p = kp.p();
  const std::size_t d = 2 * n;
  if (d > limits.max_tangent_dim || p > limits.max_codim) {
    throw SizeGuardExceeded("oracle: instance with 2n = " + std::to_string(d) + ", p = " + std::to_string(p) +
                            " exceeds the size guard (2n <= " + std::to_string(limits.max_tangent_dim) +
                            ", p <= " + std::to_string(limits.max_codim) + ")");
  }
  // Raw entries.
  std::vector<std::vector<Scalar>> jm(d, Vec(d));
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) jm[r][c] = kp.j().matrix()(r, c);
  }
  std::vector<std::vector<Vec>> a(d, std::vector<Vec>(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) a[i][j] = kp.alpha().at(i, j);
  }
  // alpha(e_i, J e_j) = sum_c J[c][j] alpha(e_i, e_c)
  std::vector<std::vector<Vec>> aj(d, std::vector<Vec>(d, Vec(p)));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t c = 0; c < d; ++c) {
        if (jm[c][j] == 0) continue;
        for (std::size_t k = 0; k < p; ++k) aj[i][j][k] += jm[c][j] * a[i][c][k];
      }
    }
  }

  FormValues g(d, std::vector<Vec>(d, Vec(2 * p)));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < p; ++k) {
        g[i][j][k] = a[i][j][k];
        g[i][j][p + k] = aj[i][j][k];
      }
    }
  }
  // gamma(J e_i, J e_j) = sum_{s,t} J[s][i] J[t][j] gamma(e_s, e_t)
  FormValues gjj(d, std::vector<Vec>(d, Vec(2 * p)));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t s = 0; s < d; ++s) {
        if (jm[s][i] == 0) continue;
        for (std::size_t t = 0; t < d; ++t) {
          if (jm[t][j] == 0) continue;
          const Scalar c = jm[s][i] * jm[t][j];
          for (std::size_t k = 0; k < 2 * p; ++k) gjj[i][j][k] += c * g[s][t][k];
        }
      }
    }
  }
  FormValues b = g, th = g;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < 2 * p; ++k) {
        b[i][j][k] += gjj[i][j][k];
        th[i][j][k] -= gjj[i][j][k];
      }
    }
  }

  Table t;
  t.n = n;
  t.p = p;
  const Rows grid = kappa_grid(d);
  t.gamma = tabulate(g, d, p, grid);
  t.beta = tabulate(b, d, p, grid);
  t.theta = tabulate(th, d, p, grid);

  t.compatible = true;
  for (std::size_t i = 0; i < d && t.compatible; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t l = 0; l < d; ++l) {
          if (split_pair(b[i][j], g[k][l], p) != split_pair(b[i][l], g[k][j], p)) t.compatible = false;
        }
      }
    }
  }

  Rows alpha_values;
  Rows delta_system;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) alpha_values.push_back(a[i][j]);
    for (std::size_t k = 0; k < p; ++k) {
      Vec row(d);
      for (std::size_t j = 0; j < d; ++j) row[j] = a[i][j][k];
      delta_system.push_back(std::move(row));
    }
  }
  t.first_normal = basis_of(alpha_values, p);
  t.delta = null_space(delta_system, d);
  // x in Delta with J x in Delta.
  Rows joint = delta_system;
  for (const Vec& row : delta_system) {
    Vec rj(d);
    for (std::size_t c = 0; c < d; ++c) {
      for (std::size_t s = 0; s < d; ++s) rj[c] += row[s] * jm[s][c];
    }
    joint.push_back(std::move(rj));
  }
  t.delta_c = null_space(joint, d);

  // Q over the full coefficient space: (A^T A - B^T B) c = 0, eta = A c.
  const std::size_t m = d * d;
  Rows sys(m, Vec(m));
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t v = 0; v < m; ++v) {
      Scalar s = 0;
      for (std::size_t k = 0; k < p; ++k) {
        s += a[u / d][u % d][k] * a[v / d][v % d][k] - aj[u / d][u % d][k] * aj[v / d][v % d][k];
      }
      sys[u][v] = s;
    }
  }
  const Rows coeffs = null_space(sys, m);
  Rows etas, bars;
  for (const Vec& c : coeffs) {
    Vec eta(p), bar(p);
    for (std::size_t u = 0; u < m; ++u) {
      if (c[u] == 0) continue;
      for (std::size_t k = 0; k < p; ++k) {
        eta[k] += c[u] * a[u / d][u % d][k];
        bar[k] += c[u] * aj[u / d][u % d][k];
      }
    }
    etas.push_back(std::move(eta));
    bars.push_back(std::move(bar));
  }
  t.q = basis_of(etas, p);
  // Combinations t with sum t_i eta_i = 0 must give sum t_i bar_i = 0.
  Rows eta_columns(p, Vec(etas.size()));
  for (std::size_t i = 0; i < etas.size(); ++i) {
    for (std::size_t k = 0; k < p; ++k) eta_columns[k][i] = etas[i][k];
  }
  t.q_bar_consistent = true;
  for (const Vec& comb : null_space(eta_columns, etas.size())) {
    for (std::size_t k = 0; k < p; ++k) {
      Scalar s = 0;
      for (std::size_t i = 0; i < bars.size(); ++i) s += comb[i] * bars[i][k];
      if (s != 0) t.q_bar_consistent = false;
    }
  }
  return t;
}

Comparison compare(const Analysis& analysis, const KaehlerPoint& kp, const Table& table) {
  Comparison out;
  auto add = [&](const std::string& name, bool ok, const std::string& detail = {}) {
    out.checks.push_back({name, ok ? CheckStatus::pass : CheckStatus::fail, detail});
    out.agreement = out.agreement && ok;
  };

  add("oracle.first_normal", same_span(to_rows(image(kp.alpha()).basis()), table.first_normal));
  add("oracle.delta", same_span(to_rows(nullity(kp.alpha()).basis()), table.delta));
  {
    const Subspace dc = nullity(build_gamma(kp));
    add("oracle.nu_c", same_span(to_rows(dc.basis()), table.delta_c) && table.delta_c.size() == analysis.report.nu_c,
        "main " + std::to_string(analysis.report.nu_c) + ", oracle " + std::to_string(table.delta_c.size()));
  }

  const std::pair<const char*, std::function<BilinearMap(const KaehlerPoint&)>> forms[] = {
      {"gamma", build_gamma}, {"beta", build_beta}, {"theta", build_theta}};
  const FormSummary* summaries[] = {&analysis.gamma, &analysis.beta, &analysis.theta};
  const FormTable* tables[] = {&table.gamma, &table.beta, &table.theta};
  for (std::size_t idx = 0; idx < 3; ++idx) {
    const std::string name = forms[idx].first;
    const BilinearMap phi = forms[idx].second(kp);
    const FormSummary& s = *summaries[idx];
    const FormTable& t = *tables[idx];
    add("oracle." + name + ".image", same_span(to_rows(image(phi).basis()), t.image) && s.image_dim == t.image.size());
    add("oracle." + name + ".nullity",
        same_span(to_rows(nullity(phi).basis()), t.nullity) && s.nullity_dim == t.nullity.size());
    add("oracle." + name + ".flat", s.flat == t.flat);
    add("oracle." + name + ".null", s.null == t.null);
    const std::string detail =
        "sampled " + std::to_string(s.kappa.kappa) + ", grid " + std::to_string(t.kappa_grid) + " over " +
        std::to_string(t.grid_points) + " points";
    out.checks.push_back({"oracle." + name + ".kappa",
                          s.kappa.kappa == t.kappa_grid ? CheckStatus::pass : CheckStatus::flagged, detail});
  }
  add("oracle.compatible", analysis.compatible == table.compatible);
  if (analysis.report.q_basis) {
    add("oracle.q", same_span(to_rows(analysis.report.q_basis->basis()), table.q),
        "main " + std::to_string(analysis.report.q_basis->dim()) + ", oracle " + std::to_string(table.q.size()));
    add("oracle.q_bar_consistent", table.q_bar_consistent);
  } else {
    out.checks.push_back({"oracle.q", CheckStatus::skipped, "Q not computed on the main path"});
  }
  return out;
}

}  // namespace flatform::oracle
