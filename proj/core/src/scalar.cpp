#include "flatform/scalar.hpp"

#include <cctype>
#include <stdexcept>

namespace flatform {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void bad(std::string_view text) {
  throw std::invalid_argument("malformed scalar '" + std::string(text) + "'");
}

Scalar parse_decimal(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = body.substr(e + 1);
    body = body.substr(0, e);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) bad(text);
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
  }
  std::string digits;
  if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view whole = body.substr(0, dot);
    std::string_view frac = body.substr(dot + 1);
    if (whole.empty() && frac.empty()) bad(text);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac))) bad(text);
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!all_digits(body)) bad(text);
    digits = std::string(body);
  }
  mpz_class mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Scalar out = exponent < 0 ? Scalar(mantissa, scale) : Scalar(mantissa * scale);
  out.canonicalize();
  return out;
}

}  // namespace

Scalar parse_scalar(std::string_view text) {
  if (text.empty()) bad(text);
  if (text.find_first_of(".eE") != std::string_view::npos) return parse_decimal(text);

  std::string_view num = text;
  std::string_view den = "1";
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
  }
  std::string_view num_digits = num;
  if (!num_digits.empty() && (num_digits.front() == '-' || num_digits.front() == '+')) {
    num_digits.remove_prefix(1);
  }
  if (!all_digits(num_digits) || !all_digits(den)) bad(text);

  mpz_class n(std::string(num_digits), 10);
  if (num.front() == '-') n = -n;
  mpz_class d(std::string(den), 10);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Scalar out(n, d);
  out.canonicalize();
  return out;
}

std::string format_scalar(const Scalar& value) {
  Scalar canonical = value;
  canonical.canonicalize();
  return canonical.get_str(10);
}

}  // namespace flatform
