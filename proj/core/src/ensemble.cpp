#include "acbench/ensemble.hpp"

#include <cmath>
#include <string>

#include "acbench/error.hpp"
#include "acbench/model_io.hpp"

namespace acbench::learn {

namespace {

void check_members(std::span<const std::shared_ptr<const Classifier>> members, std::span<const double> weights) {
  if (members.empty()) throw InvalidArgument("ensemble: no members");
  if (weights.size() != members.size()) throw InvalidArgument("ensemble: one weight per member required");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("ensemble: weights must be finite and >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw InvalidArgument("ensemble: weights must not all be zero");
  const int classes = members.front()->class_count();
  for (const auto& m : members) {
    if (!m) throw InvalidArgument("ensemble: null member");
    if (m->class_count() != classes) {
      throw InvalidArgument("ensemble: member class counts differ (" + std::to_string(classes) + " vs " +
                            std::to_string(m->class_count()) + ")");
    }
  }
}

}  // namespace

std::vector<double> ensemble_predict_proba(std::span<const std::shared_ptr<const Classifier>> members,
                                           std::span<const double> weights, std::span<const double> x) {
  check_members(members, weights);
  std::vector<double> out(static_cast<std::size_t>(members.front()->class_count()), 0.0);
  for (std::size_t m = 0; m < members.size(); ++m) {
    if (weights[m] == 0.0) continue;
    const auto p = members[m]->predict_proba(x);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += weights[m] * p[c];
  }
  double total = 0.0;
  for (double v : out) total += v;
  for (double& v : out) v /= total;
  return out;
}

EnsembleModel::EnsembleModel(std::vector<std::shared_ptr<const Classifier>> members, std::vector<double> weights)
    : members_(std::move(members)), weights_(std::move(weights)) {
  if (weights_.empty()) weights_.assign(members_.size(), 1.0);
  check_members(members_, weights_);
  class_count_ = members_.front()->class_count();
}

std::vector<double> EnsembleModel::predict_proba(std::span<const double> x) const {
  return ensemble_predict_proba(members_, weights_, x);
}

void EnsembleModel::save_body(ModelWriter& out) const {
  out.vector("weights", weights_);
  for (const auto& m : members_) {
    out.field("member", to_string(m->kind()));
    m->save_body(out);
    out.key("end_member");
    out.newline();
  }
}

std::shared_ptr<const EnsembleModel> EnsembleModel::load(ModelReader& in, int class_count) {
  auto weights = in.vector_real("weights");
  std::vector<std::shared_ptr<const Classifier>> members;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const auto kind = parse_model_kind(in.field_string("member"));
    members.push_back(load_body(kind, class_count, in));
    in.expect("end_member");
  }
  return std::make_shared<EnsembleModel>(std::move(members), std::move(weights));
}

}  // namespace acbench::learn
