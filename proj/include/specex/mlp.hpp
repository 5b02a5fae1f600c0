#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "specex/features.hpp"
#include "specex/matrix.hpp"

namespace specex {

// Labeled 26-feature rows. Labels are indices into label_names.
struct FeatureTable {
  std::vector<FeatureVector> rows;
  std::vector<int> labels;
  std::vector<std::string> label_names;

  std::size_t size() const { return rows.size(); }
  std::size_t n_classes() const { return label_names.size(); }
};

struct TrainConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t batch_size = 128;
  std::size_t epochs = 100;
  std::vector<std::size_t> hidden_sizes{64, 32};
  std::uint64_t seed = 0;
};

// Feedforward net: ReLU hidden layers, softmax output, with the input
// standardization (fitted on training rows only) stored in the model.
struct MlpModel {
  std::vector<Matrix> weights;              // layer l: [out x in]
  std::vector<std::vector<double>> biases;  // layer l: [out]
  std::array<double, FeatureVector::kSize> feature_means{};
  std::array<double, FeatureVector::kSize> feature_stds{};
  std::vector<std::string> label_names;

  std::size_t n_classes() const { return biases.empty() ? 0 : biases.back().size(); }

  // Class probabilities; softmax uses max subtraction for stability.
  std::vector<double> forward(const FeatureVector& x) const;
};

// Per-column mean and population std over the rows; zero stds become 1.
std::pair<std::array<double, FeatureVector::kSize>,
          std::array<double, FeatureVector::kSize>>
standardize_fit(const FeatureTable& table, std::span<const std::size_t> row_indices);

struct Gradients {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
};

// Mean sparse-categorical cross-entropy over the batch plus backprop
// gradients; probabilities are floored at 1e-12 inside the log.
std::pair<double, Gradients> loss_and_grad(const MlpModel& model,
                                           const FeatureTable& table,
                                           std::span<const std::size_t> batch);

struct AdamState {
  std::vector<Matrix> m_w, v_w;
  std::vector<std::vector<double>> m_b, v_b;
  std::size_t step = 0;

  static AdamState like(const MlpModel& model);
};

void adam_step(MlpModel& model, AdamState& state, const Gradients& grads,
               const TrainConfig& cfg);

struct EpochStats {
  double train_loss = 0.0;
  double eval_accuracy = 0.0;
};

struct TrainResult {
  MlpModel model;
  std::vector<EpochStats> history;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> eval_indices;
};

// Stratified seeded split, He-initialized model, mini-batch Adam with a
// seeded reshuffle each epoch. Deterministic: (table, fractions, config)
// fully determine the result. Eval rows never touch standardization fitting
// or training.
TrainResult train(const FeatureTable& table, double train_fraction,
                  double eval_fraction, const TrainConfig& cfg);

// Fraction of rows whose argmax probability hits the label; ties break
// toward the lowest class index.
double evaluate(const MlpModel& model, const FeatureTable& table,
                std::span<const std::size_t> row_indices);

// Versioned text format: dims header, standardization vectors, then
// row-major weights and biases per layer, printed with %.17g so models
// round-trip exactly.
void save_model(const MlpModel& model, const std::filesystem::path& path);
MlpModel load_model(const std::filesystem::path& path);

}  // namespace specex
