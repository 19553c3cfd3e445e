#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "acbench/matrix.hpp"

namespace acbench {

/// Feature matrix with integer class labels and where the rows came from.
struct Dataset {
  /// [n x 127] once features are extracted; may be empty before that.
  Matrix features;
  std::vector<int> labels;
  /// One entry per row: a seed for synthetic data, 0 for loaded files.
  std::vector<std::uint64_t> seeds;
  /// One entry per row: source file or synthetic sample id.
  std::vector<std::string> sources;
  /// Free-form description of how the dataset was produced.
  std::string provenance;
  int class_count = 0;

  std::size_t size() const noexcept { return labels.size(); }

  /// Rows in the given order; labels, seeds and sources follow.
  Dataset subset(const std::vector<std::size_t>& rows) const;
};

}  // namespace acbench
