#include "acbench/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "acbench/error.hpp"
#include "acbench/model_io.hpp"
#include "acbench/random.hpp"

namespace acbench::learn {

int default_mtry(std::size_t n_features) noexcept {
  auto m = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n_features))));
  // Guard against sqrt rounding just below an exact square.
  while (static_cast<std::size_t>(m + 1) * static_cast<std::size_t>(m + 1) <= n_features) ++m;
  return std::max(m, 1);
}

int DecisionTree::predict(std::span<const double> x) const {
  std::size_t i = 0;
  while (nodes[i].feature >= 0) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return nodes[i].label;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.feature < 0; }));
}

int DecisionTree::depth() const {
  std::vector<int> d(nodes.size(), 0);
  int best = 0;
  // Children are always appended after their parent.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    best = std::max(best, d[i]);
    if (nodes[i].feature >= 0) {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return best;
}

namespace {

double gini_sum(std::span<const double> counts, double n) {
  // n * gini = n - sum(c^2) / n
  if (n <= 0.0) return 0.0;
  double s = 0.0;
  for (double c : counts) s += c * c;
  return n - s / n;
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gain = -1.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const int> y, int class_count, const ForestParams& p,
              std::uint64_t seed)
      : x_(x), y_(y), k_(static_cast<std::size_t>(class_count)), p_(p), rng_(make_rng(seed)),
        mtry_(p.mtry > 0 ? std::min<std::size_t>(static_cast<std::size_t>(p.mtry), x.cols())
                         : static_cast<std::size_t>(default_mtry(x.cols()))),
        order_(x.cols()) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    fit_.impurity_decrease.assign(x.cols(), 0.0);
  }

  TreeFit build(std::vector<std::size_t> rows) {
    grow(std::move(rows), 0);
    return std::move(fit_);
  }

 private:
  int grow(std::vector<std::size_t> rows, int depth) {
    const auto id = static_cast<int>(fit_.tree.nodes.size());
    fit_.tree.nodes.emplace_back();
    std::vector<double> counts(k_, 0.0);
    for (auto r : rows) counts[static_cast<std::size_t>(y_[r])] += 1.0;
    fit_.tree.nodes[static_cast<std::size_t>(id)].label = argmax(counts);

    const auto n = static_cast<double>(rows.size());
    const double impurity = gini_sum(counts, n);
    const bool pure = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0; }) <= 1;
    if (pure || rows.size() < static_cast<std::size_t>(std::max(p_.min_samples_split, 2)) ||
        (p_.max_depth > 0 && depth >= p_.max_depth)) {
      return id;
    }

    const Split best = find_split(rows, counts, impurity);
    if (best.feature < 0) return id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    const auto f = static_cast<std::size_t>(best.feature);
    for (auto r : rows) (x_(r, f) <= best.threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    fit_.impurity_decrease[f] += best.gain;

    const int l = grow(std::move(left), depth + 1);
    const int r = grow(std::move(right), depth + 1);
    auto& node = fit_.tree.nodes[static_cast<std::size_t>(id)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  Split find_split(const std::vector<std::size_t>& rows, const std::vector<double>& counts,
                   double impurity) {
    std::shuffle(order_.begin(), order_.end(), rng_);
    Split best;
    std::size_t evaluated = 0;
    std::vector<std::pair<double, int>> col(rows.size());
    std::vector<double> left(k_);
    std::vector<double> right(k_);
    const auto min_leaf = static_cast<std::size_t>(std::max(p_.min_samples_leaf, 1));
    for (std::size_t f : order_) {
      if (evaluated >= mtry_) break;
      for (std::size_t i = 0; i < rows.size(); ++i) col[i] = {x_(rows[i], f), y_[rows[i]]};
      std::sort(col.begin(), col.end());
      if (col.front().first == col.back().first) continue;
      ++evaluated;

      std::fill(left.begin(), left.end(), 0.0);
      right = counts;
      for (std::size_t i = 0; i + 1 < col.size(); ++i) {
        const auto c = static_cast<std::size_t>(col[i].second);
        left[c] += 1.0;
        right[c] -= 1.0;
        if (col[i].first == col[i + 1].first) continue;
        const std::size_t nl = i + 1;
        const std::size_t nr = col.size() - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double gain = impurity - gini_sum(left, static_cast<double>(nl)) -
                            gini_sum(right, static_cast<double>(nr));
        if (gain > best.gain) {
          best.gain = gain;
          best.feature = static_cast<int>(f);
          best.threshold = 0.5 * (col[i].first + col[i + 1].first);
          // Midpoint can round onto the upper value; keep the split strict.
          if (!(best.threshold < col[i + 1].first)) best.threshold = col[i].first;
        }
      }
    }
    if (best.feature >= 0) best.gain = std::max(best.gain, 0.0);
    return best;
  }

  const Matrix& x_;
  std::span<const int> y_;
  std::size_t k_;
  const ForestParams& p_;
  Rng rng_;
  std::size_t mtry_;
  std::vector<std::size_t> order_;
  TreeFit fit_;
};

}  // namespace

TreeFit grow_tree(const Matrix& x, std::span<const int> y, int class_count,
                  std::span<const std::size_t> rows, const ForestParams& params,
                  std::uint64_t seed) {
  TreeBuilder builder(x, y, class_count, params, seed);
  return builder.build(std::vector<std::size_t>(rows.begin(), rows.end()));
}

ForestModel::ForestModel(std::vector<DecisionTree> trees, std::vector<double> importance,
                         int class_count)
    : trees_(std::move(trees)), importance_(std::move(importance)), class_count_(class_count) {}

std::vector<double> ForestModel::predict_proba(std::span<const double> x) const {
  std::vector<double> p(static_cast<std::size_t>(class_count_), 0.0);
  for (const auto& t : trees_) p[static_cast<std::size_t>(t.predict(x))] += 1.0;
  for (double& v : p) v /= static_cast<double>(trees_.size());
  return p;
}

void ForestModel::save_body(ModelWriter& out) const {
  out.vector("importance", importance_);
  out.field("trees", static_cast<std::int64_t>(trees_.size()));
  for (const auto& t : trees_) {
    out.field("nodes", static_cast<std::int64_t>(t.nodes.size()));
    for (const auto& n : t.nodes) {
      out.value(static_cast<std::int64_t>(n.feature));
      out.value(n.threshold);
      out.value(static_cast<std::int64_t>(n.left));
      out.value(static_cast<std::int64_t>(n.right));
      out.value(static_cast<std::int64_t>(n.label));
      out.newline();
    }
  }
}

std::shared_ptr<const ForestModel> ForestModel::load(ModelReader& in, int class_count) {
  auto importance = in.vector_real("importance");
  const auto count = in.field_int("trees");
  if (count < 1) throw FormatError("forest model: no trees");
  std::vector<DecisionTree> trees(static_cast<std::size_t>(count));
  for (auto& t : trees) {
    const auto n = in.field_int("nodes");
    if (n < 1) throw FormatError("forest model: empty tree");
    t.nodes.resize(static_cast<std::size_t>(n));
    for (auto& node : t.nodes) {
      node.feature = static_cast<int>(in.integer());
      node.threshold = in.real();
      node.left = static_cast<int>(in.integer());
      node.right = static_cast<int>(in.integer());
      node.label = static_cast<int>(in.integer());
      const bool leaf = node.feature < 0;
      if (node.label < 0 || node.label >= class_count ||
          (!leaf && (node.left <= 0 || node.right <= 0 || node.left >= n || node.right >= n))) {
        throw FormatError("forest model: inconsistent node");
      }
    }
  }
  return std::make_shared<ForestModel>(std::move(trees), std::move(importance), class_count);
}

std::shared_ptr<const ForestModel> rf_train(const Matrix& x, std::span<const int> y,
                                            const ForestParams& params, int class_count) {
  if (class_count == 0) class_count = infer_class_count(y);
  check_training_data(x, y, class_count);
  if (params.n_trees < 1) throw InvalidArgument("rf: n_trees must be >= 1");
  if (params.max_depth < 0) throw InvalidArgument("rf: max_depth must be >= 0");
  if (params.mtry < 0) throw InvalidArgument("rf: mtry must be >= 0");

  const auto n_trees = static_cast<std::size_t>(params.n_trees);
  std::vector<TreeFit> fits(n_trees);
  const auto fit_one = [&](std::size_t t) {
    const auto seed = derive_seed(params.seed, t);
    std::vector<std::size_t> rows(x.rows());
    if (params.bootstrap) {
      Rng rng = make_rng(derive_seed(seed, 0xB007));
      std::uniform_int_distribution<std::size_t> pick(0, x.rows() - 1);
      for (auto& r : rows) r = pick(rng);
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    fits[t] = grow_tree(x, y, class_count, rows, params, seed);
  };

  const auto workers = static_cast<std::size_t>(std::clamp(params.threads, 1, params.n_trees));
  if (workers == 1) {
    for (std::size_t t = 0; t < n_trees; ++t) fit_one(t);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < n_trees; t += workers) fit_one(t);
      });
    }
  }

  std::vector<double> importance(x.cols(), 0.0);
  std::vector<DecisionTree> trees;
  trees.reserve(n_trees);
  for (auto& fit : fits) {
    const double total = std::accumulate(fit.impurity_decrease.begin(), fit.impurity_decrease.end(), 0.0);
    if (total > 0.0) {
      for (std::size_t f = 0; f < importance.size(); ++f) importance[f] += fit.impurity_decrease[f] / total;
    }
    trees.push_back(std::move(fit.tree));
  }
  const double sum = std::accumulate(importance.begin(), importance.end(), 0.0);
  for (double& v : importance) v = sum > 0.0 ? v / sum : 1.0 / static_cast<double>(importance.size());
  return std::make_shared<ForestModel>(std::move(trees), std::move(importance), class_count);
}

}  // namespace acbench::learn
