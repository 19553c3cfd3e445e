#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace acbench::features {

enum class Domain { Time, Frequency, TimeFrequency };

/// How a feature responds to a positive rescaling of the waveform.
enum class Scaling {
  /// Unchanged up to rounding.
  Invariant,
  /// Changes with the amplitude.
  Dependent,
  /// Invariant in exact arithmetic but computed through a threshold, bin
  /// assignment or absolute floor, so rounding can move it.
  Approximate,
};

struct FeatureInfo {
  std::size_t id;
  std::string_view name;
  Domain domain;
  Scaling scaling;
  std::string_view description;
};

inline constexpr std::size_t kFeatureCount = 127;
inline constexpr std::size_t kTimeCount = 35;
inline constexpr std::size_t kFrequencyCount = 45;
inline constexpr std::size_t kTimeFrequencyCount = 47;
inline constexpr std::size_t kFrequencyOffset = kTimeCount;
inline constexpr std::size_t kTimeFrequencyOffset = kTimeCount + kFrequencyCount;

/// Bumped whenever a feature is added, removed, reordered or redefined.
inline constexpr std::string_view kRegistryVersion = "acbench-features-1.0";

/// The canonical ordered feature list.
std::span<const FeatureInfo> registry();

std::optional<std::size_t> find_feature(std::string_view name);
/// Like find_feature but throws InvalidArgument for unknown names.
std::size_t feature_index(std::string_view name);

std::string_view to_string(Domain d);
std::string_view to_string(Scaling s);
Domain parse_domain(std::string_view text);

/// Versioned CSV: a `# registry_version=...` line, then
/// `id,name,domain,scaling,description` rows.
std::string registry_csv();

}  // namespace acbench::features
