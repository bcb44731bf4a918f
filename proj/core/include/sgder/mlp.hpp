#pragma once

#include <span>
#include <vector>

#include "sgder/dataset.hpp"
#include "sgder/landscape.hpp"
#include "sgder/rng.hpp"

namespace sgder {

/// Two-layer tanh classifier with softmax cross-entropy loss over a fixed
/// dataset. Parameters are packed into one flat vector in the order
/// W1 (hidden x d), b1, W2 (classes x hidden), b2. As a Landscape it exposes
/// the mean loss over the train split; batch-level entry points take an
/// explicit index set.
class MlpObjective final : public Landscape {
 public:
  MlpObjective(const SyntheticDataset& data, int hidden);

  std::size_t dim() const override;
  Eval eval(std::span<const double> theta) const override;

  Eval eval_batch(std::span<const double> theta, std::span<const int> indices) const;
  double loss(std::span<const double> theta, std::span<const int> indices) const;
  double accuracy(std::span<const double> theta, std::span<const int> indices) const;

  /// Scaled-normal initialization drawn from the given stream; biases zero.
  std::vector<double> init_params(Rng& rng) const;

  int hidden() const { return hidden_; }
  const SyntheticDataset& data() const { return *data_; }

 private:
  const SyntheticDataset* data_;
  int hidden_;
};

}  // namespace sgder
