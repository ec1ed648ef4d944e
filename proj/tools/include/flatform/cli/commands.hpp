#pragma once

#include "flatform/cli/io.hpp"
#include "flatform/instance_gen.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace flatform::cli {

/// FLATFORM_SEED if set and numeric, otherwise 0.
std::uint64_t default_seed();

struct Evaluation {
  Verdict verdict = Verdict::input_invalid;
  Json report;
};

/// analyze() plus, when requested, the oracle comparison. An oracle
/// disagreement turns the verdict into violation_candidate unless the
/// instance is outside the theorem's scope.
Evaluation evaluate(const KaehlerPoint& kp, std::uint64_t seed, bool with_oracle);

struct FuzzOptions {
  std::size_t trials = 100;
  std::size_t n = 4;
  std::size_t p = 2;
  std::uint64_t seed = 0;
  std::vector<Family> families;  // empty: all families feasible for (n, p)
  bool with_oracle = true;
};

/// Summary of a generate -> analyze -> oracle campaign. Trial i uses seed
/// seed + i and cycles through the feasible families.
Json fuzz(const FuzzOptions& options);

/// Entry point of the `flatform` executable.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace flatform::cli
