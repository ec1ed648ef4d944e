#include "flatform/cli/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace flatform::cli {

InputError::InputError(std::string field, std::optional<std::size_t> line, const std::string& message)
    : std::invalid_argument((line ? "line " + std::to_string(*line) + ": " : std::string()) +
                            (field.empty() ? std::string() : field + ": ") + message),
      field_(std::move(field)),
      line_(line),
      message_(message) {}

namespace {

// Decimal numbers are kept as {"$decimal": "<source text>"} so no binary
// floating point value is ever formed.
constexpr const char* kDecimalKey = "$decimal";

std::size_t line_of(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

class ExactSax : public nlohmann::json_sax<nlohmann::json> {
 public:
  explicit ExactSax(std::string_view text) : text_(text) {}

  nlohmann::json root;

  bool null() override { return put(nullptr); }
  bool boolean(bool v) override { return put(v); }
  bool number_integer(number_integer_t v) override { return put(v); }
  bool number_unsigned(number_unsigned_t v) override { return put(v); }
  bool number_float(number_float_t, const string_t& s) override { return put(nlohmann::json{{kDecimalKey, s}}); }
  bool string(string_t& v) override { return put(v); }
  bool binary(binary_t&) override { return put(nullptr); }
  bool start_object(std::size_t) override { return open(nlohmann::json::object()); }
  bool key(string_t& k) override {
    key_ = k;
    return true;
  }
  bool end_object() override { return close(); }
  bool start_array(std::size_t) override { return open(nlohmann::json::array()); }
  bool end_array() override { return close(); }
  bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& ex) override {
    std::string msg = ex.what();
    if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw InputError("", line_of(text_, position > 0 ? position - 1 : 0), msg);
  }

 private:
  nlohmann::json* insert(nlohmann::json v) {
    if (stack_.empty()) {
      root = std::move(v);
      return &root;
    }
    nlohmann::json& top = *stack_.back();
    if (top.is_array()) {
      top.push_back(std::move(v));
      return &top.back();
    }
    top[key_] = std::move(v);
    return &top[key_];
  }
  bool put(nlohmann::json v) {
    insert(std::move(v));
    return true;
  }
  bool open(nlohmann::json v) {
    stack_.push_back(insert(std::move(v)));
    return true;
  }
  bool close() {
    stack_.pop_back();
    return true;
  }

  std::string_view text_;
  std::vector<nlohmann::json*> stack_;
  std::string key_;
};

Scalar read_scalar(const nlohmann::json& v, const std::string& field) {
  if (v.is_number_integer()) {
    return v.is_number_unsigned() ? Scalar(mpz_class(std::to_string(v.get<std::uint64_t>()))) :
                                    Scalar(mpz_class(std::to_string(v.get<std::int64_t>())));
  }
  if (v.is_object() && v.size() == 1 && v.contains(kDecimalKey)) {
    const std::string raw = v[kDecimalKey].get<std::string>();
    try {
      return parse_scalar(raw);
    } catch (const std::invalid_argument& e) {
      throw InputError(field, std::nullopt, e.what());
    }
  }
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    const bool shape_ok = !s.empty() && s.find_first_not_of("-0123456789/") == std::string::npos;
    Scalar value;
    try {
      if (!shape_ok) throw std::invalid_argument("bad");
      value = parse_scalar(s);
    } catch (const std::invalid_argument&) {
      throw InputError(field, std::nullopt, "'" + s + "' is not an integer or a fraction a/b");
    }
    if (format_scalar(value) != s) {
      throw InputError(field, std::nullopt,
                       "'" + s + "' is not in lowest terms with a positive denominator (expected '" +
                           format_scalar(value) + "')");
    }
    return value;
  }
  throw InputError(field, std::nullopt, "expected a number or a fraction string");
}

std::size_t read_size(const nlohmann::json& doc, const std::string& key) {
  if (!doc.contains(key)) throw InputError(key, std::nullopt, "missing");
  const auto& v = doc[key];
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
    throw InputError(key, std::nullopt, "must be a positive integer");
  }
  return v.get<std::size_t>();
}

const nlohmann::json& array_of(const nlohmann::json& v, std::size_t size, const std::string& field) {
  if (!v.is_array()) throw InputError(field, std::nullopt, "expected an array");
  if (v.size() != size) {
    throw InputError(field, std::nullopt,
                     "expected " + std::to_string(size) + " entries, found " + std::to_string(v.size()));
  }
  return v;
}

}  // namespace

KaehlerPoint parse_instance(std::string_view text) {
  ExactSax sax(text);
  nlohmann::json::sax_parse(text.begin(), text.end(), &sax);
  const nlohmann::json& doc = sax.root;
  if (!doc.is_object()) throw InputError("", std::nullopt, "top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "version" && key != "n" && key != "p" && key != "J" && key != "alpha") {
      throw InputError(key, std::nullopt, "unknown field");
    }
  }
  if (!doc.contains("version")) throw InputError("version", std::nullopt, "missing");
  if (!doc["version"].is_number_integer() || doc["version"].get<std::int64_t>() != kInstanceVersion) {
    throw InputError("version", std::nullopt, "unsupported version (expected " + std::to_string(kInstanceVersion) + ")");
  }
  const std::size_t n = read_size(doc, "n");
  const std::size_t p = read_size(doc, "p");
  const std::size_t d = 2 * n;
  if (!doc.contains("J")) throw InputError("J", std::nullopt, "missing");
  if (!doc.contains("alpha")) throw InputError("alpha", std::nullopt, "missing");

  Matrix jm(d, d);
  const auto& jrows = array_of(doc["J"], d, "J");
  for (std::size_t r = 0; r < d; ++r) {
    const std::string rf = "J[" + std::to_string(r) + "]";
    const auto& row = array_of(jrows[r], d, rf);
    for (std::size_t c = 0; c < d; ++c) jm(r, c) = read_scalar(row[c], rf + "[" + std::to_string(c) + "]");
  }
  if (!squares_to_minus_identity(jm)) throw InputError("J", std::nullopt, "J*J is not -I");
  ComplexStructure j(jm);
  if (!j.is_isometric(*InnerSpace::euclidean(d))) {
    throw InputError("J", std::nullopt, "J is not orthogonal for the Euclidean tangent inner product");
  }

  BilinearMap alpha(d, d, InnerSpace::euclidean(p));
  const auto& arows = array_of(doc["alpha"], d, "alpha");
  for (std::size_t a = 0; a < d; ++a) {
    const std::string af = "alpha[" + std::to_string(a) + "]";
    const auto& row = array_of(arows[a], d, af);
    for (std::size_t b = 0; b < d; ++b) {
      const std::string bf = af + "[" + std::to_string(b) + "]";
      const auto& entry = array_of(row[b], p, bf);
      Vector v(p);
      for (std::size_t k = 0; k < p; ++k) v[k] = read_scalar(entry[k], bf + "[" + std::to_string(k) + "]");
      alpha.set(a, b, std::move(v));
    }
  }
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a + 1; b < d; ++b) {
      if (alpha.at(a, b) != alpha.at(b, a)) {
        throw InputError("alpha[" + std::to_string(a) + "][" + std::to_string(b) + "]", std::nullopt,
                         "alpha is not symmetric (differs from alpha[" + std::to_string(b) + "][" +
                             std::to_string(a) + "])");
      }
    }
  }
  try {
    return KaehlerPoint::make(n, p, std::move(j), std::move(alpha));
  } catch (const std::invalid_argument& e) {
    throw InputError("", std::nullopt, e.what());
  }
}

KaehlerPoint read_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("", std::nullopt, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

Json scalar_json(const Scalar& s) {
  if (s.get_den() == 1 && s.get_num().fits_slong_p()) return Json(s.get_num().get_si());
  return Json(format_scalar(s));
}

namespace {

std::string scalar_text(const Scalar& s) { return scalar_json(s).dump(); }

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(scalar_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string serialize_instance(const KaehlerPoint& kp) {
  const std::size_t d = 2 * kp.n();
  std::ostringstream os;
  os << "{\n  \"version\": " << kInstanceVersion << ",\n  \"n\": " << kp.n() << ",\n  \"p\": " << kp.p()
     << ",\n  \"J\": [\n";
  for (std::size_t r = 0; r < d; ++r) {
    os << "    [";
    for (std::size_t c = 0; c < d; ++c) os << (c ? ", " : "") << scalar_text(kp.j().matrix()(r, c));
    os << "]" << (r + 1 < d ? "," : "") << "\n";
  }
  os << "  ],\n  \"alpha\": [\n";
  for (std::size_t a = 0; a < d; ++a) {
    os << "    [";
    for (std::size_t b = 0; b < d; ++b) {
      os << (b ? ", " : "") << "[";
      const Vector& v = kp.alpha().at(a, b);
      for (std::size_t k = 0; k < v.size(); ++k) os << (k ? ", " : "") << scalar_text(v[k]);
      os << "]";
    }
    os << "]" << (a + 1 < d ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

Json check_json(const Check& c) {
  Json j{{"name", c.name}, {"status", to_string(c.status)}};
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

Json input_error_json(const InputError& e) {
  Json err{{"message", e.message()}};
  err["field"] = e.field().empty() ? Json(nullptr) : Json(e.field());
  err["line"] = e.line() ? Json(*e.line()) : Json(nullptr);
  return Json{{"verdict", to_string(Verdict::input_invalid)}, {"error", std::move(err)}};
}

namespace {

Json form_json(const FormSummary& f) {
  Json cert{{"vector", Json::array()},
            {"kappa", f.kappa.kappa},
            {"tau", f.kappa.tau_at_x},
            {"sigma", f.kappa.sigma_at_x},
            {"candidates", f.kappa.candidates}};
  for (const auto& x : f.kappa.vector) cert["vector"].push_back(scalar_json(x));
  return Json{{"image_dim", f.image_dim}, {"nullity_dim", f.nullity_dim}, {"radical_dim", f.radical_dim},
              {"flat", f.flat},           {"null", f.null},               {"symmetric", f.symmetric},
              {"regular_element", std::move(cert)}};
}

}  // namespace

Json report_json(const Analysis& a, Verdict verdict, double analysis_millis,
                 const std::optional<OracleOutcome>& oracle_run) {
  const StructureReport& r = a.report;
  Json out;
  out["verdict"] = to_string(verdict);
  out["seed"] = a.seed;
  out["n"] = r.n;
  out["p"] = r.p;

  Json s;
  s["first_normal_dim"] = r.q;
  s["nu_c"] = r.nu_c;
  s["alpha_nullity"] = a.alpha_nullity;
  s["hypothesis_ok"] = r.hypothesis_ok;
  s["s_gamma_degenerate"] = r.s_gamma_degenerate;
  s["l"] = r.q_dim;
  s["Q_basis"] = r.q_basis ? matrix_json(r.q_basis->basis()) : Json(nullptr);
  s["J_Q"] = r.j_matrix ? matrix_json(r.j_matrix->matrix()) : Json(nullptr);
  s["P_dim"] = r.p_dim;
  s["nu_c_alpha_P"] = r.p_part_nullity;
  s["bound"] = r.bound;
  s["bound_ok"] = r.bound_ok;
  s["gamma_P_flat"] = r.gamma_p_flat;
  s["s_gamma_P_nondegenerate"] = r.s_gamma_p_nondegenerate;
  out["structure"] = std::move(s);

  out["pluriharmonic"] = a.pluriharmonic;
  out["compatible"] = a.compatible;
  out["u1_dim"] = a.u1_dim ? Json(*a.u1_dim) : Json(nullptr);
  out["forms"] = Json{{"gamma", form_json(a.gamma)}, {"beta", form_json(a.beta)}, {"theta", form_json(a.theta)}};
  if (a.diagonalization) {
    const auto& dg = *a.diagonalization;
    Json dj{{"status", to_string(dg.status)},
            {"kappa", dg.kappa},
            {"nullity_dim", dg.nullity.dim()},
            {"unit_scaling", dg.unit_scaling},
            {"nullity_split", dg.nullity_split},
            {"cross_terms_zero", dg.cross_terms_zero},
            {"gram_ok", dg.gram_ok}};
    dj["float_witness_error"] = dg.float_witness_error ? Json(*dg.float_witness_error) : Json(nullptr);
    if (!dg.detail.empty()) dj["detail"] = dg.detail;
    out["diagonalization"] = std::move(dj);
  } else {
    out["diagonalization"] = nullptr;
  }

  Json checks = Json::array();
  std::size_t counts[4] = {0, 0, 0, 0};
  for (const Check& c : a.checks) {
    checks.push_back(check_json(c));
    ++counts[static_cast<int>(c.status)];
  }
  out["checks"] = std::move(checks);
  out["check_counts"] = Json{{"pass", counts[0]}, {"fail", counts[1]}, {"skipped", counts[2]}, {"flagged", counts[3]}};

  Json timing{{"analysis_ms", analysis_millis}};
  if (oracle_run) {
    Json oj;
    if (oracle_run->comparison) {
      oj["agreement"] = oracle_run->comparison->agreement;
      Json oc = Json::array();
      for (const Check& c : oracle_run->comparison->checks) oc.push_back(check_json(c));
      oj["checks"] = std::move(oc);
    } else {
      oj["agreement"] = nullptr;
      oj["note"] = oracle_run->note;
    }
    out["oracle_agreement"] = oj["agreement"];
    out["oracle"] = std::move(oj);
    timing["oracle_ms"] = oracle_run->millis;
  } else {
    out["oracle_agreement"] = nullptr;
  }
  out["timing"] = std::move(timing);
  return out;
}

}  // namespace flatform::cli
