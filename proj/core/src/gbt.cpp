#include "acbench/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "acbench/error.hpp"
#include "acbench/model_io.hpp"

namespace acbench::learn {

double RegressionTree::predict(std::span<const double> x) const {
  std::size_t i = 0;
  while (nodes[i].feature >= 0) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return nodes[i].value;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const RegressionNode& n) { return n.feature < 0; }));
}

double RegressionTree::penalty(double gamma, double lambda) const {
  double s = 0.0;
  std::size_t leaves = 0;
  for (const auto& n : nodes) {
    if (n.feature >= 0) continue;
    ++leaves;
    s += n.value * n.value;
  }
  return gamma * static_cast<double>(leaves) + 0.5 * lambda * s;
}

std::vector<std::vector<std::size_t>> presort_columns(const Matrix& x) {
  std::vector<std::vector<std::size_t>> sorted(x.cols(), std::vector<std::size_t>(x.rows()));
  for (std::size_t f = 0; f < x.cols(); ++f) {
    auto& idx = sorted[f];
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x(a, f) < x(b, f); });
  }
  return sorted;
}

namespace {

struct NodeStats {
  double G = 0.0;
  double H = 0.0;
  int node = 0;
  // Best split found so far.
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
  // Running sums for the current feature scan.
  double gl = 0.0;
  double hl = 0.0;
  bool seen = false;
  double last = 0.0;
};

double score(double G, double H, double lambda) { return G * G / (H + lambda); }

}  // namespace

RegressionTree fit_regression_tree(const Matrix& x, const std::vector<std::vector<std::size_t>>& sorted,
                                   std::span<const double> g, std::span<const double> h,
                                   const GbtParams& p, double scale) {
  const std::size_t n = x.rows();
  RegressionTree tree;
  tree.nodes.emplace_back();
  // Active slot of each sample at the current level, or -1 once its node is final.
  std::vector<int> slot(n, 0);
  std::vector<NodeStats> active(1);
  active[0].node = 0;
  for (std::size_t i = 0; i < n; ++i) {
    active[0].G += g[i];
    active[0].H += h[i];
  }

  const auto leaf_value = [&](double G, double H) { return -G / (H + p.lambda) * scale; };
  tree.nodes[0].value = leaf_value(active[0].G, active[0].H);

  for (int depth = 0; depth < p.max_depth && !active.empty(); ++depth) {
    for (std::size_t f = 0; f < x.cols(); ++f) {
      for (auto& a : active) {
        a.gl = a.hl = 0.0;
        a.seen = false;
      }
      for (std::size_t i : sorted[f]) {
        if (slot[i] < 0) continue;
        auto& a = active[static_cast<std::size_t>(slot[i])];
        const double v = x(i, f);
        if (a.seen && v != a.last) {
          const double hr = a.H - a.hl;
          if (a.hl >= p.min_child_weight && hr >= p.min_child_weight) {
            const double gain = 0.5 * (score(a.gl, a.hl, p.lambda) + score(a.G - a.gl, hr, p.lambda) -
                                       score(a.G, a.H, p.lambda)) -
                                p.gamma;
            if (gain > a.gain) {
              a.gain = gain;
              a.feature = static_cast<int>(f);
              a.threshold = 0.5 * (a.last + v);
              if (!(a.threshold < v)) a.threshold = a.last;
            }
          }
        }
        a.gl += g[i];
        a.hl += h[i];
        a.last = v;
        a.seen = true;
      }
    }

    std::vector<NodeStats> next;
    std::vector<int> remap(active.size() * 2, -1);
    for (std::size_t s = 0; s < active.size(); ++s) {
      const auto& a = active[s];
      if (a.feature < 0) continue;
      const auto l = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      auto& parent = tree.nodes[static_cast<std::size_t>(a.node)];
      parent.feature = a.feature;
      parent.threshold = a.threshold;
      parent.left = l;
      parent.right = l + 1;
      parent.value = 0.0;
      for (int side = 0; side < 2; ++side) {
        remap[2 * s + static_cast<std::size_t>(side)] = static_cast<int>(next.size());
        NodeStats child;
        child.node = l + side;
        next.push_back(child);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (slot[i] < 0) continue;
      const auto s = static_cast<std::size_t>(slot[i]);
      const auto& a = active[s];
      if (a.feature < 0) {
        slot[i] = -1;
        continue;
      }
      const bool left = x(i, static_cast<std::size_t>(a.feature)) <= a.threshold;
      slot[i] = remap[2 * s + (left ? 0 : 1)];
      auto& c = next[static_cast<std::size_t>(slot[i])];
      c.G += g[i];
      c.H += h[i];
    }
    for (const auto& c : next) tree.nodes[static_cast<std::size_t>(c.node)].value = leaf_value(c.G, c.H);
    active = std::move(next);
  }
  return tree;
}

BoostedModel::BoostedModel(std::vector<std::vector<RegressionTree>> trees, int class_count,
                           double gamma, double lambda, std::vector<double> objective_history)
    : trees_(std::move(trees)), class_count_(class_count), gamma_(gamma), lambda_(lambda),
      history_(std::move(objective_history)) {}

std::vector<double> BoostedModel::scores(std::span<const double> x) const {
  std::vector<double> s(static_cast<std::size_t>(class_count_), 0.0);
  for (const auto& round : trees_) {
    for (std::size_t k = 0; k < round.size(); ++k) s[k] += round[k].predict(x);
  }
  return s;
}

namespace {

void softmax_inplace(std::span<double> s) {
  const double m = *std::max_element(s.begin(), s.end());
  double z = 0.0;
  for (double& v : s) {
    v = std::exp(v - m);
    z += v;
  }
  for (double& v : s) v /= z;
}

}  // namespace

std::vector<double> BoostedModel::predict_proba(std::span<const double> x) const {
  auto s = scores(x);
  softmax_inplace(s);
  return s;
}

double softmax_cross_entropy(const Matrix& scores, std::span<const int> y) {
  double loss = 0.0;
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    const auto row = scores.row(i);
    const double m = *std::max_element(row.begin(), row.end());
    double z = 0.0;
    for (double v : row) z += std::exp(v - m);
    loss += m + std::log(z) - row[static_cast<std::size_t>(y[i])];
  }
  return loss;
}

void BoostedModel::save_body(ModelWriter& out) const {
  out.field("gamma", gamma_);
  out.field("lambda", lambda_);
  out.vector("objective", history_);
  out.field("rounds", static_cast<std::int64_t>(trees_.size()));
  for (const auto& round : trees_) {
    for (const auto& t : round) {
      out.field("nodes", static_cast<std::int64_t>(t.nodes.size()));
      for (const auto& n : t.nodes) {
        out.value(static_cast<std::int64_t>(n.feature));
        out.value(n.threshold);
        out.value(static_cast<std::int64_t>(n.left));
        out.value(static_cast<std::int64_t>(n.right));
        out.value(n.value);
        out.newline();
      }
    }
  }
}

std::shared_ptr<const BoostedModel> BoostedModel::load(ModelReader& in, int class_count) {
  const double gamma = in.field_real("gamma");
  const double lambda = in.field_real("lambda");
  auto history = in.vector_real("objective");
  const auto rounds = in.field_int("rounds");
  if (rounds < 0) throw FormatError("gbt model: negative round count");
  std::vector<std::vector<RegressionTree>> trees(static_cast<std::size_t>(rounds),
                                                 std::vector<RegressionTree>(static_cast<std::size_t>(class_count)));
  for (auto& round : trees) {
    for (auto& t : round) {
      const auto n = in.field_int("nodes");
      if (n < 1) throw FormatError("gbt model: empty tree");
      t.nodes.resize(static_cast<std::size_t>(n));
      for (auto& node : t.nodes) {
        node.feature = static_cast<int>(in.integer());
        node.threshold = in.real();
        node.left = static_cast<int>(in.integer());
        node.right = static_cast<int>(in.integer());
        node.value = in.real();
        if (node.feature >= 0 && (node.left <= 0 || node.right <= 0 || node.left >= n || node.right >= n)) {
          throw FormatError("gbt model: inconsistent node");
        }
      }
    }
  }
  return std::make_shared<BoostedModel>(std::move(trees), class_count, gamma, lambda, std::move(history));
}

std::shared_ptr<const BoostedModel> gbt_train(const Matrix& x, std::span<const int> y,
                                              const GbtParams& params, int class_count) {
  if (class_count == 0) class_count = infer_class_count(y);
  check_training_data(x, y, class_count);
  if (params.n_rounds < 1) throw InvalidArgument("gbt: n_rounds must be >= 1");
  if (!(params.learning_rate > 0.0 && params.learning_rate <= 1.0)) {
    throw InvalidArgument("gbt: learning_rate must lie in (0, 1]");
  }
  if (params.max_depth < 0) throw InvalidArgument("gbt: max_depth must be >= 0");
  if (params.lambda < 0.0 || params.gamma < 0.0 || params.min_child_weight < 0.0) {
    throw InvalidArgument("gbt: gamma, lambda and min_child_weight must be non-negative");
  }

  const std::size_t n = x.rows();
  const auto K = static_cast<std::size_t>(class_count);
  const auto sorted = presort_columns(x);
  Matrix scores(n, K, 0.0);
  Matrix prob(n, K);
  std::vector<double> g(n);
  std::vector<double> h(n);

  std::vector<std::vector<RegressionTree>> trees;
  std::vector<double> history{softmax_cross_entropy(scores, y)};
  double penalty = 0.0;
  for (int r = 0; r < params.n_rounds; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      auto row = prob.row(i);
      const auto s = scores.row(i);
      std::copy(s.begin(), s.end(), row.begin());
      softmax_inplace(row);
    }
    std::vector<RegressionTree> round(K);
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const double p = prob(i, k);
        g[i] = p - (static_cast<std::size_t>(y[i]) == k ? 1.0 : 0.0);
        h[i] = p * (1.0 - p);
      }
      round[k] = fit_regression_tree(x, sorted, g, h, params, params.learning_rate);
      penalty += round[k].penalty(params.gamma, params.lambda);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < K; ++k) scores(i, k) += round[k].predict(x.row(i));
    }
    trees.push_back(std::move(round));
    history.push_back(softmax_cross_entropy(scores, y) + penalty);
  }
  return std::make_shared<BoostedModel>(std::move(trees), class_count, params.gamma, params.lambda,
                                        std::move(history));
}

}  // namespace acbench::learn
