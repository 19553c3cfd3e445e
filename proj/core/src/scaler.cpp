#include <cmath>
#include <istream>
#include <ostream>

#include "acbench/csv.hpp"
#include "acbench/error.hpp"
#include "acbench/features.hpp"

namespace acbench {

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
  Dataset out;
  if (!features.empty()) out.features = features.select_rows(rows);
  out.provenance = provenance;
  out.class_count = class_count;
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) {
    out.labels.push_back(labels.at(r));
    if (!seeds.empty()) out.seeds.push_back(seeds.at(r));
    if (!sources.empty()) out.sources.push_back(sources.at(r));
  }
  return out;
}

}  // namespace acbench

namespace acbench::features {

Scaler Scaler::fit(const Matrix& x) {
  if (x.rows() == 0) throw InvalidArgument("Scaler::fit: empty training matrix");
  Scaler s;
  const std::size_t d = x.cols();
  const double n = static_cast<double>(x.rows());
  s.mean_.assign(d, 0.0);
  s.scale_.assign(d, 1.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < d; ++c) s.mean_[c] += x(r, c);
  }
  for (double& m : s.mean_) m /= n;
  std::vector<double> var(d, 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const double dv = x(r, c) - s.mean_[c];
      var[c] += dv * dv;
    }
  }
  for (std::size_t c = 0; c < d; ++c) {
    const double sd = std::sqrt(var[c] / n);
    // Spread at rounding level counts as zero spread.
    if (sd > 1e-12 * std::max(1.0, std::abs(s.mean_[c]))) s.scale_[c] = sd;
  }
  return s;
}

std::vector<double> Scaler::transform(std::span<const double> row) const {
  if (row.size() != mean_.size()) throw InvalidArgument("Scaler: feature count mismatch");
  std::vector<double> out(row.size());
  for (std::size_t c = 0; c < row.size(); ++c) out[c] = (row[c] - mean_[c]) / scale_[c];
  return out;
}

Matrix Scaler::transform(const Matrix& x) const {
  if (x.cols() != mean_.size() && x.rows() != 0) {
    throw InvalidArgument("Scaler: feature count mismatch");
  }
  Matrix out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) out(r, c) = (x(r, c) - mean_[c]) / scale_[c];
  }
  return out;
}

Standardized standardize(const Dataset& train, const Dataset& apply_to) {
  if (train.size() == 0) throw InvalidArgument("standardize: training set is empty");
  Standardized out{train, apply_to, Scaler::fit(train.features)};
  out.train.features = out.scaler.transform(train.features);
  out.apply_to.features = out.scaler.transform(apply_to.features);
  return out;
}

void write_features_csv(std::ostream& out, const Dataset& data) {
  if (data.features.cols() != kFeatureCount) {
    throw InvalidArgument("write_features_csv: dataset has no extracted features");
  }
  out << "# registry_version=" << kRegistryVersion << '\n';
  std::vector<std::string> header{"source", "label"};
  for (const auto& f : registry()) header.emplace_back(f.name);
  write_csv_row(out, header);
  for (std::size_t r = 0; r < data.size(); ++r) {
    std::vector<std::string> row;
    row.reserve(header.size());
    row.push_back(r < data.sources.size() ? data.sources[r] : std::to_string(r));
    row.push_back(std::to_string(data.labels[r]));
    for (double v : data.features.row(r)) row.push_back(format_exact(v));
    write_csv_row(out, row);
  }
}

Dataset read_features_csv(std::istream& in, const std::string& name) {
  const CsvTable table = read_csv(in, name);
  const std::size_t source_col = table.column("source");
  const std::size_t label_col = table.column("label");
  std::vector<std::size_t> cols;
  for (const auto& f : registry()) cols.push_back(table.column(f.name));

  Dataset data;
  data.provenance = "features CSV " + name;
  data.features = Matrix(table.rows.size(), kFeatureCount);
  int max_label = -1;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    data.sources.push_back(row[source_col]);
    try {
      data.labels.push_back(std::stoi(row[label_col]));
      for (std::size_t c = 0; c < kFeatureCount; ++c) data.features(r, c) = std::stod(row[cols[c]]);
    } catch (const std::logic_error&) {
      throw FormatError(name + ": malformed number in row " + std::to_string(r + 1));
    }
    if (data.labels.back() < 0) throw FormatError(name + ": negative label in row " + std::to_string(r + 1));
    max_label = std::max(max_label, data.labels.back());
  }
  data.class_count = max_label + 1;
  data.seeds.assign(data.labels.size(), 0);
  return data;
}

}  // namespace acbench::features
