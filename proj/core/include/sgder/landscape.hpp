#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sgder {

struct Eval {
  double value = 0.0;
  std::vector<double> grad;
};

/// Differentiable objective: value plus analytic gradient at a point.
/// Implementations are immutable after construction and reentrant.
class Landscape {
 public:
  virtual ~Landscape() = default;
  virtual std::size_t dim() const = 0;
  virtual Eval eval(std::span<const double> theta) const = 0;

  double value(std::span<const double> theta) const { return eval(theta).value; }
};

/// Exact quadratic f(theta) = 1/2 theta^T H theta with H given by its
/// eigen-decomposition. The saddle sits at the origin; at least one
/// eigenvalue must be strictly negative.
class QuadraticSaddle final : public Landscape {
 public:
  /// Standard-basis eigenvectors.
  explicit QuadraticSaddle(std::vector<double> eigenvalues);

  /// Explicit orthonormal basis, one eigenvector per row.
  QuadraticSaddle(std::vector<double> eigenvalues,
                  std::vector<std::vector<double>> basis);

  std::size_t dim() const override { return eigenvalues_.size(); }
  Eval eval(std::span<const double> theta) const override;

  /// Magnitude of the most negative eigenvalue.
  double gamma() const { return -eigenvalues_[unstable_index_]; }

  /// Gradient Lipschitz constant: max |eigenvalue|.
  double smoothness() const { return smoothness_; }

  /// Eigenvector of the most negative eigenvalue. If that eigenvalue is
  /// repeated, the first matching basis vector is chosen deterministically
  /// and degenerate_unstable() reports the tie.
  const std::vector<double>& unstable_direction() const {
    return basis_[unstable_index_];
  }
  bool degenerate_unstable() const { return degenerate_; }

  /// Component of the displacement from the saddle along the unstable
  /// direction.
  double project_unstable(std::span<const double> theta) const;

  const std::vector<double>& eigenvalues() const { return eigenvalues_; }

 private:
  void validate();

  std::vector<double> eigenvalues_;
  std::vector<std::vector<double>> basis_;
  std::size_t unstable_index_ = 0;
  double smoothness_ = 0.0;
  bool degenerate_ = false;
};

/// Sum of negative Gaussian wells: f(x) = sum_i -d_i exp(-|x-c_i|^2 / 2w_i^2).
/// A desk-scale stand-in for rugged multi-modal objectives; 1-D or 2-D.
class MultiBasin final : public Landscape {
 public:
  struct Well {
    std::vector<double> center;
    double depth = 1.0;
    double width = 1.0;
  };

  explicit MultiBasin(std::vector<Well> wells);

  std::size_t dim() const override { return dim_; }
  Eval eval(std::span<const double> theta) const override;

  const std::vector<Well>& wells() const { return wells_; }

 private:
  std::vector<Well> wells_;
  std::size_t dim_ = 0;
};

/// Central finite differences per coordinate; the oracle implementations are
/// checked against.
std::vector<double> fd_gradient(const Landscape& f, std::span<const double> theta,
                                double h);

}  // namespace sgder
