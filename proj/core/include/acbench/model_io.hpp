#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acbench/classifier.hpp"
#include "acbench/matrix.hpp"

namespace acbench::learn {

// Text model format, version 1 (see docs/model_format.md):
//
//   acbench-model 1
//   kind <knn|svm|rf|gbt|mlp|ensemble>
//   classes <C>
//   registry <feature registry version>
//   <kind-specific body>
//   end
//
// Bodies are whitespace-separated `key value...` records. Reals are written
// as C99 hexadecimal floats so a reload reproduces predictions bit for bit.

class ModelWriter {
 public:
  explicit ModelWriter(std::ostream& out) : out_(out) {}

  void key(std::string_view k);
  void value(double v);
  void value(std::int64_t v);
  void value(std::string_view v);
  void newline();

  void field(std::string_view k, double v);
  void field(std::string_view k, std::int64_t v);
  void field(std::string_view k, std::string_view v);
  void vector(std::string_view k, std::span<const double> v);
  void vector(std::string_view k, std::span<const int> v);
  void matrix(std::string_view k, const Matrix& m);

 private:
  std::ostream& out_;
};

class ModelReader {
 public:
  explicit ModelReader(std::istream& in) : in_(in) {}

  std::string token();
  void expect(std::string_view k);
  double real();
  std::int64_t integer();

  double field_real(std::string_view k);
  std::int64_t field_int(std::string_view k);
  std::string field_string(std::string_view k);
  std::vector<double> vector_real(std::string_view k);
  std::vector<int> vector_int(std::string_view k);
  Matrix matrix(std::string_view k);

 private:
  std::istream& in_;
};

struct LoadedModel {
  std::shared_ptr<const Classifier> model;
  std::string registry_version;
};

void save_model(std::ostream& out, const Classifier& model, std::string_view registry_version);
void save_model(const std::filesystem::path& path, const Classifier& model,
                std::string_view registry_version);
LoadedModel load_model(std::istream& in);
LoadedModel load_model(const std::filesystem::path& path);

/// Reads a kind-specific body; used by load_model and for nested ensembles.
std::shared_ptr<const Classifier> load_body(ModelKind kind, int class_count, ModelReader& in);

}  // namespace acbench::learn
