#include "acbench/model_io.hpp"

#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "acbench/ensemble.hpp"
#include "acbench/error.hpp"
#include "acbench/forest.hpp"
#include "acbench/gbt.hpp"
#include "acbench/knn.hpp"
#include "acbench/mlp.hpp"
#include "acbench/svm.hpp"

namespace acbench::learn {

void ModelWriter::key(std::string_view k) { out_ << k; }
void ModelWriter::value(double v) { out_ << ' ' << fmt::format("{:a}", v); }
void ModelWriter::value(std::int64_t v) { out_ << ' ' << v; }
void ModelWriter::value(std::string_view v) { out_ << ' ' << v; }
void ModelWriter::newline() { out_ << '\n'; }

void ModelWriter::field(std::string_view k, double v) {
  key(k);
  value(v);
  newline();
}
void ModelWriter::field(std::string_view k, std::int64_t v) {
  key(k);
  value(v);
  newline();
}
void ModelWriter::field(std::string_view k, std::string_view v) {
  key(k);
  value(v);
  newline();
}

void ModelWriter::vector(std::string_view k, std::span<const double> v) {
  key(k);
  value(static_cast<std::int64_t>(v.size()));
  for (double x : v) value(x);
  newline();
}

void ModelWriter::vector(std::string_view k, std::span<const int> v) {
  key(k);
  value(static_cast<std::int64_t>(v.size()));
  for (int x : v) value(static_cast<std::int64_t>(x));
  newline();
}

void ModelWriter::matrix(std::string_view k, const Matrix& m) {
  key(k);
  value(static_cast<std::int64_t>(m.rows()));
  value(static_cast<std::int64_t>(m.cols()));
  for (double x : m.data()) value(x);
  newline();
}

std::string ModelReader::token() {
  std::string t;
  if (!(in_ >> t)) throw FormatError("model file: unexpected end of input");
  return t;
}

void ModelReader::expect(std::string_view k) {
  const std::string t = token();
  if (t != k) throw FormatError("model file: expected '" + std::string(k) + "', found '" + t + "'");
}

double ModelReader::real() {
  const std::string t = token();
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end == t.c_str() || *end != '\0') throw FormatError("model file: bad real '" + t + "'");
  return v;
}

std::int64_t ModelReader::integer() {
  const std::string t = token();
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (end == t.c_str() || *end != '\0') throw FormatError("model file: bad integer '" + t + "'");
  return v;
}

double ModelReader::field_real(std::string_view k) {
  expect(k);
  return real();
}

std::int64_t ModelReader::field_int(std::string_view k) {
  expect(k);
  return integer();
}

std::string ModelReader::field_string(std::string_view k) {
  expect(k);
  return token();
}

std::vector<double> ModelReader::vector_real(std::string_view k) {
  expect(k);
  const auto n = integer();
  if (n < 0) throw FormatError("model file: negative length");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = real();
  return v;
}

std::vector<int> ModelReader::vector_int(std::string_view k) {
  expect(k);
  const auto n = integer();
  if (n < 0) throw FormatError("model file: negative length");
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int& x : v) x = static_cast<int>(integer());
  return v;
}

Matrix ModelReader::matrix(std::string_view k) {
  expect(k);
  const auto r = integer();
  const auto c = integer();
  if (r < 0 || c < 0) throw FormatError("model file: negative matrix shape");
  Matrix m(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  for (double& x : m.data()) x = real();
  return m;
}

void save_model(std::ostream& out, const Classifier& model, std::string_view registry_version) {
  ModelWriter w(out);
  w.field("acbench-model", std::int64_t{1});
  w.field("kind", to_string(model.kind()));
  w.field("classes", static_cast<std::int64_t>(model.class_count()));
  w.field("registry", registry_version.empty() ? std::string_view("none") : registry_version);
  model.save_body(w);
  w.key("end");
  w.newline();
  if (!out) throw FormatError("save_model: stream error");
}

void save_model(const std::filesystem::path& path, const Classifier& model,
                std::string_view registry_version) {
  std::ofstream out(path);
  if (!out) throw FormatError(path.string() + ": cannot open for writing");
  save_model(out, model, registry_version);
}

std::shared_ptr<const Classifier> load_body(ModelKind kind, int class_count, ModelReader& in) {
  switch (kind) {
    case ModelKind::KNN:
      return KnnModel::load(in, class_count);
    case ModelKind::SVM:
      return SvmModel::load(in, class_count);
    case ModelKind::RF:
      return ForestModel::load(in, class_count);
    case ModelKind::GBT:
      return BoostedModel::load(in, class_count);
    case ModelKind::MLP:
      return MlpModel::load(in, class_count);
    case ModelKind::Ensemble:
      return EnsembleModel::load(in, class_count);
  }
  throw FormatError("model file: unknown kind");
}

LoadedModel load_model(std::istream& in) {
  ModelReader r(in);
  if (r.field_int("acbench-model") != 1) throw FormatError("model file: unsupported version");
  const ModelKind kind = parse_model_kind(r.field_string("kind"));
  const auto classes = static_cast<int>(r.field_int("classes"));
  if (classes < 1) throw FormatError("model file: class count must be positive");
  LoadedModel out;
  out.registry_version = r.field_string("registry");
  out.model = load_body(kind, classes, r);
  r.expect("end");
  return out;
}

LoadedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path.string() + ": cannot open file");
  return load_model(in);
}

}  // namespace acbench::learn
