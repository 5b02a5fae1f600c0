#include "specex/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "specex/errors.hpp"
#include "specex/rng.hpp"

namespace specex {
namespace {

constexpr double kProbFloor = 1e-12;

std::vector<std::size_t> layer_dims(const MlpModel& model) {
  std::vector<std::size_t> dims;
  dims.push_back(FeatureVector::kSize);
  for (const auto& b : model.biases) dims.push_back(b.size());
  return dims;
}

void softmax_inplace(std::vector<double>& z) {
  const double zmax = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - zmax);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

std::array<double, FeatureVector::kSize> standardized(const MlpModel& model,
                                                      const FeatureVector& x) {
  const auto raw = x.values();
  std::array<double, FeatureVector::kSize> out{};
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = (raw[i] - model.feature_means[i]) / model.feature_stds[i];
  return out;
}

// Forward pass keeping pre- and post-activation values for backprop.
struct ForwardTrace {
  std::vector<std::vector<double>> activations;  // a[0] = standardized input
  std::vector<std::vector<double>> pre;          // z per layer
};

std::vector<double> run_forward(const MlpModel& model, const FeatureVector& x,
                                ForwardTrace* trace) {
  const auto x0 = standardized(model, x);
  std::vector<double> a(x0.begin(), x0.end());
  if (trace) trace->activations.push_back(a);

  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    const Matrix& w = model.weights[l];
    std::vector<double> z(w.rows);
    for (std::size_t r = 0; r < w.rows; ++r) {
      double acc = model.biases[l][r];
      auto row = w.row(r);
      for (std::size_t c = 0; c < w.cols; ++c) acc += row[c] * a[c];
      z[r] = acc;
    }
    if (trace) trace->pre.push_back(z);
    const bool output_layer = l + 1 == model.weights.size();
    if (output_layer) {
      softmax_inplace(z);
    } else {
      for (double& v : z) v = std::max(v, 0.0);
    }
    a = std::move(z);
    if (trace && !output_layer) trace->activations.push_back(a);
  }
  return a;
}

void shuffle(std::vector<std::size_t>& v, Xorshift64Star& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[rng.below(i)]);
}

}  // namespace

std::vector<double> MlpModel::forward(const FeatureVector& x) const {
  return run_forward(*this, x, nullptr);
}

std::pair<std::array<double, FeatureVector::kSize>,
          std::array<double, FeatureVector::kSize>>
standardize_fit(const FeatureTable& table,
                std::span<const std::size_t> row_indices) {
  if (row_indices.size() < 2)
    throw Error("TooFewRows", "standardization needs at least 2 rows");

  std::array<double, FeatureVector::kSize> mean{}, var{};
  for (std::size_t idx : row_indices) {
    const auto v = table.rows[idx].values();
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += v[i];
  }
  const double n = static_cast<double>(row_indices.size());
  for (double& m : mean) m /= n;
  for (std::size_t idx : row_indices) {
    const auto v = table.rows[idx].values();
    for (std::size_t i = 0; i < var.size(); ++i) {
      const double d = v[i] - mean[i];
      var[i] += d * d;
    }
  }
  std::array<double, FeatureVector::kSize> stds{};
  for (std::size_t i = 0; i < stds.size(); ++i) {
    stds[i] = std::sqrt(var[i] / n);
    if (stds[i] == 0.0) stds[i] = 1.0;
  }
  return {mean, stds};
}

std::pair<double, Gradients> loss_and_grad(const MlpModel& model,
                                           const FeatureTable& table,
                                           std::span<const std::size_t> batch) {
  if (batch.empty()) throw Error("InvalidParams", "empty batch");

  Gradients g;
  for (const auto& w : model.weights) g.weights.emplace_back(w.rows, w.cols);
  for (const auto& b : model.biases) g.biases.emplace_back(b.size(), 0.0);

  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;

  for (std::size_t idx : batch) {
    ForwardTrace trace;
    std::vector<double> probs = run_forward(model, table.rows[idx], &trace);
    const int label = table.labels[idx];
    loss += -std::log(std::max(probs[static_cast<std::size_t>(label)], kProbFloor));

    // dL/dz at the output for softmax + cross-entropy.
    std::vector<double> dz = probs;
    dz[static_cast<std::size_t>(label)] -= 1.0;
    for (double& v : dz) v *= inv_batch;

    for (std::size_t l = model.weights.size(); l-- > 0;) {
      const Matrix& w = model.weights[l];
      const auto& a_prev = trace.activations[l];
      for (std::size_t r = 0; r < w.rows; ++r) {
        auto grow = g.weights[l].row(r);
        for (std::size_t c = 0; c < w.cols; ++c) grow[c] += dz[r] * a_prev[c];
        g.biases[l][r] += dz[r];
      }
      if (l == 0) break;
      std::vector<double> da(w.cols, 0.0);
      for (std::size_t r = 0; r < w.rows; ++r) {
        auto row = w.row(r);
        for (std::size_t c = 0; c < w.cols; ++c) da[c] += row[c] * dz[r];
      }
      // ReLU subgradient: zero at z <= 0.
      dz.assign(w.cols, 0.0);
      for (std::size_t c = 0; c < w.cols; ++c)
        if (trace.pre[l - 1][c] > 0.0) dz[c] = da[c];
    }
  }
  return {loss * inv_batch, std::move(g)};
}

AdamState AdamState::like(const MlpModel& model) {
  AdamState s;
  for (const auto& w : model.weights) {
    s.m_w.emplace_back(w.rows, w.cols);
    s.v_w.emplace_back(w.rows, w.cols);
  }
  for (const auto& b : model.biases) {
    s.m_b.emplace_back(b.size(), 0.0);
    s.v_b.emplace_back(b.size(), 0.0);
  }
  return s;
}

void adam_step(MlpModel& model, AdamState& state, const Gradients& grads,
               const TrainConfig& cfg) {
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);

  const auto update = [&](double& param, double& m, double& v, double grad) {
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad * grad;
    const double mhat = m / bc1;
    const double vhat = v / bc2;
    param -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
  };

  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    auto& w = model.weights[l].data;
    for (std::size_t i = 0; i < w.size(); ++i)
      update(w[i], state.m_w[l].data[i], state.v_w[l].data[i],
             grads.weights[l].data[i]);
    auto& b = model.biases[l];
    for (std::size_t i = 0; i < b.size(); ++i)
      update(b[i], state.m_b[l][i], state.v_b[l][i], grads.biases[l][i]);
  }
}

TrainResult train(const FeatureTable& table, double train_fraction,
                  double eval_fraction, const TrainConfig& cfg) {
  if (table.size() < 2) throw Error("TooFewRows", "need at least 2 rows");
  if (table.n_classes() < 2) throw Error("TooFewRows", "need at least 2 classes");
  if (cfg.batch_size < 1 || cfg.epochs < 1)
    throw Error("InvalidParams", "batch_size and epochs must be >= 1");
  if (!(train_fraction > 0.0) || !(eval_fraction > 0.0) ||
      train_fraction + eval_fraction > 1.0 + 1e-12)
    throw Error("DegenerateSplit", "fractions must be positive and sum to <= 1");

  // Stratified split: shuffle each class's rows, take the leading share for
  // training and the next share for evaluation.
  std::vector<std::vector<std::size_t>> per_class(table.n_classes());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const int label = table.labels[i];
    if (label < 0 || static_cast<std::size_t>(label) >= table.n_classes())
      throw Error("InvalidParams", "label index out of range");
    per_class[static_cast<std::size_t>(label)].push_back(i);
  }

  Xorshift64Star split_rng(derive_seed(cfg.seed, 1));
  TrainResult result;
  for (auto& rows : per_class) {
    if (rows.empty()) throw Error("DegenerateSplit", "class with no rows");
    shuffle(rows, split_rng);
    const auto n = static_cast<double>(rows.size());
    const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * n));
    const auto n_eval = static_cast<std::size_t>(std::llround(eval_fraction * n));
    if (n_train < 1 || n_eval < 1 || n_train + n_eval > rows.size())
      throw Error("DegenerateSplit",
                  "class of " + std::to_string(rows.size()) +
                      " rows cannot honor the requested split");
    result.train_indices.insert(result.train_indices.end(), rows.begin(),
                                rows.begin() + static_cast<std::ptrdiff_t>(n_train));
    result.eval_indices.insert(
        result.eval_indices.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_train),
        rows.begin() + static_cast<std::ptrdiff_t>(n_train + n_eval));
  }

  MlpModel& model = result.model;
  model.label_names = table.label_names;
  std::tie(model.feature_means, model.feature_stds) =
      standardize_fit(table, result.train_indices);

  // He initialization from the seeded generator.
  Xorshift64Star init_rng(derive_seed(cfg.seed, 2));
  std::vector<std::size_t> dims;
  dims.push_back(FeatureVector::kSize);
  for (std::size_t h : cfg.hidden_sizes) {
    if (h < 1) throw Error("InvalidParams", "hidden size must be >= 1");
    dims.push_back(h);
  }
  dims.push_back(table.n_classes());
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Matrix w(dims[l + 1], dims[l]);
    const double scale = std::sqrt(2.0 / static_cast<double>(dims[l]));
    for (double& v : w.data) v = scale * init_rng.normal();
    model.weights.push_back(std::move(w));
    model.biases.emplace_back(dims[l + 1], 0.0);
  }

  AdamState adam = AdamState::like(model);
  Xorshift64Star epoch_rng(derive_seed(cfg.seed, 3));
  std::vector<std::size_t> order = result.train_indices;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(order, epoch_rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t count = std::min(cfg.batch_size, order.size() - start);
      std::span<const std::size_t> batch(order.data() + start, count);
      auto [loss, grads] = loss_and_grad(model, table, batch);
      adam_step(model, adam, grads, cfg);
      loss_sum += loss * static_cast<double>(count);
    }
    EpochStats stats;
    stats.train_loss = loss_sum / static_cast<double>(order.size());
    stats.eval_accuracy = evaluate(model, table, result.eval_indices);
    result.history.push_back(stats);
  }
  return result;
}

double evaluate(const MlpModel& model, const FeatureTable& table,
                std::span<const std::size_t> row_indices) {
  if (row_indices.empty()) throw Error("EmptyEval", "no rows to evaluate");
  std::size_t correct = 0;
  for (std::size_t idx : row_indices) {
    const auto probs = model.forward(table.rows[idx]);
    const auto arg = static_cast<int>(
        std::max_element(probs.begin(), probs.end()) - probs.begin());
    correct += arg == table.labels[idx];
  }
  return static_cast<double>(correct) / static_cast<double>(row_indices.size());
}

void save_model(const MlpModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("IoError", "cannot open " + path.string() + " for writing");
  char buf[64];
  const auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };

  out << "specex-mlp 1\n";
  const auto dims = layer_dims(model);
  out << "dims";
  for (auto d : dims) out << ' ' << d;
  out << "\nlabels";
  for (const auto& name : model.label_names) out << ' ' << name;
  out << "\nmeans";
  for (double v : model.feature_means) out << ' ' << num(v);
  out << "\nstds";
  for (double v : model.feature_stds) out << ' ' << num(v);
  out << '\n';
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    out << "layer " << l << '\n';
    const Matrix& w = model.weights[l];
    for (std::size_t r = 0; r < w.rows; ++r) {
      auto row = w.row(r);
      for (std::size_t c = 0; c < w.cols; ++c)
        out << (c ? " " : "") << num(row[c]);
      out << '\n';
    }
    out << "bias";
    for (double v : model.biases[l]) out << ' ' << num(v);
    out << '\n';
  }
  if (!out) throw Error("IoError", "write failed for " + path.string());
}

MlpModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("IoError", "cannot open " + path.string());
  const auto fail = [&](const std::string& what) -> Error {
    return Error("ParseError", "model file " + path.string() + ": " + what);
  };

  std::string line, word;
  if (!std::getline(in, line) || line != "specex-mlp 1")
    throw fail("bad magic line");

  MlpModel model;
  std::vector<std::size_t> dims;
  {
    if (!std::getline(in, line)) throw fail("missing dims");
    std::istringstream ss(line);
    ss >> word;
    if (word != "dims") throw fail("missing dims");
    std::size_t d;
    while (ss >> d) dims.push_back(d);
    if (dims.size() < 2 || dims.front() != FeatureVector::kSize)
      throw fail("bad dims");
  }
  {
    if (!std::getline(in, line)) throw fail("missing labels");
    std::istringstream ss(line);
    ss >> word;
    if (word != "labels") throw fail("missing labels");
    while (ss >> word) model.label_names.push_back(word);
    if (model.label_names.size() != dims.back()) throw fail("label count");
  }
  const auto read_vec = [&](const char* key, std::size_t n,
                            std::span<double> out) {
    if (!std::getline(in, line)) throw fail(std::string("missing ") + key);
    std::istringstream ss(line);
    ss >> word;
    if (word != key) throw fail(std::string("missing ") + key);
    for (std::size_t i = 0; i < n; ++i)
      if (!(ss >> out[i])) throw fail(std::string("short ") + key);
  };
  read_vec("means", FeatureVector::kSize, model.feature_means);
  read_vec("stds", FeatureVector::kSize, model.feature_stds);

  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    if (!std::getline(in, line) || line != "layer " + std::to_string(l))
      throw fail("missing layer " + std::to_string(l));
    Matrix w(dims[l + 1], dims[l]);
    for (std::size_t r = 0; r < w.rows; ++r) {
      if (!std::getline(in, line)) throw fail("short layer");
      std::istringstream ss(line);
      auto row = w.row(r);
      for (std::size_t c = 0; c < w.cols; ++c)
        if (!(ss >> row[c])) throw fail("short weight row");
    }
    model.weights.push_back(std::move(w));
    std::vector<double> bias(dims[l + 1]);
    read_vec("bias", bias.size(), bias);
    model.biases.push_back(std::move(bias));
  }
  return model;
}

}  // namespace specex
