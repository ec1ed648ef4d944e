#pragma once

#include "flatform/kaehler.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace flatform {

enum class Family { hypersurface_product, holomorphic, composition, padded, random_filtered };

std::string to_string(Family f);
/// Throws std::invalid_argument for unknown names.
Family parse_family(const std::string& name);
const std::vector<Family>& all_families();

struct FamilySpec {
  Family family = Family::composition;
  std::size_t n = 1;
  std::size_t p = 1;
  std::uint64_t seed = 0;
  long coefficient_bound = 2;
};

/// Maximum number of sub-seeds tried by gen().
inline constexpr std::size_t kRetryCap = 1024;

class GenerationError : public std::runtime_error {
 public:
  GenerationError(std::string code, const std::string& what) : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct Generated {
  KaehlerPoint kp;
  std::size_t attempts = 0;  // sub-seeds consumed, >= 1
  /// Normal directions carried by the holomorphic block (holomorphic and
  /// composition families, and padded instances built on them).
  std::size_t holomorphic_dim = 0;
  /// Number of hypersurface factors.
  std::size_t factors = 0;
  std::optional<Family> base;  // padded only
};

/// Throws std::invalid_argument if the (family, n, p) combination cannot be
/// realized, and GenerationError("retry_cap_exceeded") when no sub-seed
/// produced an instance passing flat gamma, flat beta and compatibility.
Generated gen(const FamilySpec& spec);

/// Whether gen() can realize the family for these dimensions.
bool feasible(Family family, std::size_t n, std::size_t p);

/// Flat gamma, flat beta and compatibility.
bool passes_verification(const KaehlerPoint& kp);

}  // namespace flatform
