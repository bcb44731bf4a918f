#include "sgder/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgder {

namespace {

struct Layout {
  int d, h, c;
  std::size_t w1, b1, w2, b2, total;
};

Layout layout_of(int d, int h, int c) {
  Layout l{d, h, c, 0, 0, 0, 0, 0};
  l.w1 = 0;
  l.b1 = l.w1 + static_cast<std::size_t>(h) * d;
  l.w2 = l.b1 + h;
  l.b2 = l.w2 + static_cast<std::size_t>(c) * h;
  l.total = l.b2 + c;
  return l;
}

/// Forward pass for one sample; logits buffer has size c, hidden size h.
void forward(const Layout& l, std::span<const double> theta,
             std::span<const double> x, double* hidden, double* logits) {
  for (int i = 0; i < l.h; ++i) {
    double z = theta[l.b1 + i];
    const double* w_row = theta.data() + l.w1 + static_cast<std::size_t>(i) * l.d;
    for (int j = 0; j < l.d; ++j) z += w_row[j] * x[j];
    hidden[i] = std::tanh(z);
  }
  for (int k = 0; k < l.c; ++k) {
    double z = theta[l.b2 + k];
    const double* w_row = theta.data() + l.w2 + static_cast<std::size_t>(k) * l.h;
    for (int i = 0; i < l.h; ++i) z += w_row[i] * hidden[i];
    logits[k] = z;
  }
}

/// Converts logits to probabilities in place; returns the cross-entropy for
/// the given label. Max-shifted for stability.
double softmax_ce(double* logits, int c, int label) {
  double max_z = logits[0];
  for (int k = 1; k < c; ++k) max_z = std::max(max_z, logits[k]);
  double sum = 0.0;
  for (int k = 0; k < c; ++k) {
    logits[k] = std::exp(logits[k] - max_z);
    sum += logits[k];
  }
  double loss = -std::log(logits[label] / sum);
  for (int k = 0; k < c; ++k) logits[k] /= sum;
  return loss;
}

}  // namespace

MlpObjective::MlpObjective(const SyntheticDataset& data, int hidden)
    : data_(&data), hidden_(hidden) {
  if (hidden < 1) throw std::invalid_argument("MlpObjective: hidden size must be >= 1");
  if (data.size() == 0) throw std::invalid_argument("MlpObjective: empty dataset");
}

std::size_t MlpObjective::dim() const {
  return layout_of(data_->d, hidden_, data_->classes).total;
}

Eval MlpObjective::eval(std::span<const double> theta) const {
  return eval_batch(theta, data_->train_indices);
}

Eval MlpObjective::eval_batch(std::span<const double> theta,
                              std::span<const int> indices) const {
  const Layout l = layout_of(data_->d, hidden_, data_->classes);
  if (theta.size() != l.total)
    throw std::invalid_argument("MlpObjective: parameter dimension mismatch");
  if (indices.empty()) throw std::invalid_argument("MlpObjective: empty batch");

  Eval out;
  out.grad.assign(l.total, 0.0);
  std::vector<double> hidden(l.h), logits(l.c), dhidden(l.h);

  for (const int idx : indices) {
    const auto x = data_->sample(idx);
    const int y = data_->labels[idx];
    forward(l, theta, x, hidden.data(), logits.data());
    out.value += softmax_ce(logits.data(), l.c, y);  // logits now hold probs

    // dL/dz2 = p - onehot(y)
    logits[y] -= 1.0;
    for (int k = 0; k < l.c; ++k) {
      const double dz2 = logits[k];
      out.grad[l.b2 + k] += dz2;
      double* gw_row = out.grad.data() + l.w2 + static_cast<std::size_t>(k) * l.h;
      for (int i = 0; i < l.h; ++i) gw_row[i] += dz2 * hidden[i];
    }
    for (int i = 0; i < l.h; ++i) {
      double da = 0.0;
      for (int k = 0; k < l.c; ++k)
        da += theta[l.w2 + static_cast<std::size_t>(k) * l.h + i] * logits[k];
      dhidden[i] = da * (1.0 - hidden[i] * hidden[i]);  // tanh'
    }
    for (int i = 0; i < l.h; ++i) {
      const double dz1 = dhidden[i];
      out.grad[l.b1 + i] += dz1;
      double* gw_row = out.grad.data() + l.w1 + static_cast<std::size_t>(i) * l.d;
      for (int j = 0; j < l.d; ++j) gw_row[j] += dz1 * x[j];
    }
  }

  const double inv_n = 1.0 / static_cast<double>(indices.size());
  out.value *= inv_n;
  for (auto& g : out.grad) g *= inv_n;
  return out;
}

double MlpObjective::loss(std::span<const double> theta,
                          std::span<const int> indices) const {
  const Layout l = layout_of(data_->d, hidden_, data_->classes);
  if (theta.size() != l.total)
    throw std::invalid_argument("MlpObjective: parameter dimension mismatch");
  if (indices.empty()) throw std::invalid_argument("MlpObjective: empty batch");

  std::vector<double> hidden(l.h), logits(l.c);
  double total = 0.0;
  for (const int idx : indices) {
    forward(l, theta, data_->sample(idx), hidden.data(), logits.data());
    total += softmax_ce(logits.data(), l.c, data_->labels[idx]);
  }
  return total / static_cast<double>(indices.size());
}

double MlpObjective::accuracy(std::span<const double> theta,
                              std::span<const int> indices) const {
  const Layout l = layout_of(data_->d, hidden_, data_->classes);
  if (theta.size() != l.total)
    throw std::invalid_argument("MlpObjective: parameter dimension mismatch");
  if (indices.empty()) throw std::invalid_argument("MlpObjective: empty batch");

  std::vector<double> hidden(l.h), logits(l.c);
  int correct = 0;
  for (const int idx : indices) {
    forward(l, theta, data_->sample(idx), hidden.data(), logits.data());
    int arg = 0;
    for (int k = 1; k < l.c; ++k) {
      if (logits[k] > logits[arg]) arg = k;
    }
    if (arg == data_->labels[idx]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(indices.size());
}

std::vector<double> MlpObjective::init_params(Rng& rng) const {
  const Layout l = layout_of(data_->d, hidden_, data_->classes);
  std::vector<double> theta(l.total, 0.0);
  const double s1 = 1.0 / std::sqrt(static_cast<double>(l.d));
  for (std::size_t i = l.w1; i < l.b1; ++i) theta[i] = s1 * rng.normal();
  const double s2 = 1.0 / std::sqrt(static_cast<double>(l.h));
  for (std::size_t i = l.w2; i < l.b2; ++i) theta[i] = s2 * rng.normal();
  return theta;
}

}  // namespace sgder
