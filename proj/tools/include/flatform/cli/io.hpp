#pragma once

#include "flatform/kaehler.hpp"
#include "flatform/oracle.hpp"
#include "flatform/structure.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace flatform::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kInstanceVersion = 1;

/// Malformed instance file. `field` is a JSON path such as "alpha[3][1][0]";
/// `line` is set for syntax errors.
class InputError : public std::invalid_argument {
 public:
  InputError(std::string field, std::optional<std::size_t> line, const std::string& message);

  const std::string& field() const { return field_; }
  std::optional<std::size_t> line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  std::string field_;
  std::optional<std::size_t> line_;
  std::string message_;
};

/// Parses and validates an instance document. JSON numbers with a fraction or
/// exponent are converted exactly from their text; strings must hold an
/// integer or a reduced fraction "a/b".
KaehlerPoint parse_instance(std::string_view text);
KaehlerPoint read_instance(const std::string& path);

/// Deterministic text form; parse_instance(serialize_instance(kp)) == kp and
/// re-serializing gives the same bytes.
std::string serialize_instance(const KaehlerPoint& kp);

/// Integers that fit in 64 bits become JSON numbers, everything else a string.
Json scalar_json(const Scalar& s);

struct OracleOutcome {
  std::optional<oracle::Comparison> comparison;
  std::string note;  // why the oracle did not run
  double millis = 0;
};

Json report_json(const Analysis& analysis, Verdict verdict, double analysis_millis,
                 const std::optional<OracleOutcome>& oracle_run);
Json check_json(const Check& c);
Json input_error_json(const InputError& e);

}  // namespace flatform::cli
