#include "sgder/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sgder {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_dim(std::size_t expected, std::size_t got, const char* who) {
  if (expected != got)
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

}  // namespace

QuadraticSaddle::QuadraticSaddle(std::vector<double> eigenvalues)
    : eigenvalues_(std::move(eigenvalues)) {
  basis_.resize(eigenvalues_.size());
  for (std::size_t i = 0; i < eigenvalues_.size(); ++i) {
    basis_[i].assign(eigenvalues_.size(), 0.0);
    basis_[i][i] = 1.0;
  }
  validate();
}

QuadraticSaddle::QuadraticSaddle(std::vector<double> eigenvalues,
                                 std::vector<std::vector<double>> basis)
    : eigenvalues_(std::move(eigenvalues)), basis_(std::move(basis)) {
  validate();
}

void QuadraticSaddle::validate() {
  const std::size_t d = eigenvalues_.size();
  if (d == 0) throw std::invalid_argument("QuadraticSaddle: empty spectrum");
  if (basis_.size() != d)
    throw std::invalid_argument("QuadraticSaddle: basis/spectrum size mismatch");
  constexpr double kOrthoTol = 1e-10;
  for (std::size_t i = 0; i < d; ++i) {
    if (basis_[i].size() != d)
      throw std::invalid_argument("QuadraticSaddle: basis vector has wrong dimension");
    for (std::size_t j = 0; j <= i; ++j) {
      const double g = dot(basis_[i], basis_[j]);
      const double want = i == j ? 1.0 : 0.0;
      if (std::abs(g - want) > kOrthoTol)
        throw std::invalid_argument("QuadraticSaddle: basis is not orthonormal");
    }
  }

  double min_eig = eigenvalues_[0];
  unstable_index_ = 0;
  smoothness_ = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    smoothness_ = std::max(smoothness_, std::abs(eigenvalues_[i]));
    if (eigenvalues_[i] < min_eig) {
      min_eig = eigenvalues_[i];
      unstable_index_ = i;
    }
  }
  if (!(min_eig < 0.0))
    throw std::invalid_argument(
        "QuadraticSaddle: strict saddle needs a negative eigenvalue");
  degenerate_ = std::count(eigenvalues_.begin(), eigenvalues_.end(), min_eig) > 1;
}

Eval QuadraticSaddle::eval(std::span<const double> theta) const {
  check_dim(dim(), theta.size(), "QuadraticSaddle::eval");
  Eval out;
  out.grad.assign(dim(), 0.0);
  for (std::size_t i = 0; i < eigenvalues_.size(); ++i) {
    const double c = dot(theta, basis_[i]);
    out.value += 0.5 * eigenvalues_[i] * c * c;
    const double scale = eigenvalues_[i] * c;
    for (std::size_t j = 0; j < dim(); ++j) out.grad[j] += scale * basis_[i][j];
  }
  return out;
}

double QuadraticSaddle::project_unstable(std::span<const double> theta) const {
  check_dim(dim(), theta.size(), "QuadraticSaddle::project_unstable");
  return dot(theta, basis_[unstable_index_]);
}

MultiBasin::MultiBasin(std::vector<Well> wells) : wells_(std::move(wells)) {
  if (wells_.empty()) throw std::invalid_argument("MultiBasin: needs at least one well");
  dim_ = wells_[0].center.size();
  if (dim_ != 1 && dim_ != 2)
    throw std::invalid_argument("MultiBasin: dimensionality must be 1 or 2");
  for (const auto& w : wells_) {
    if (w.center.size() != dim_)
      throw std::invalid_argument("MultiBasin: inconsistent well dimensions");
    if (!(w.depth > 0.0) || !(w.width > 0.0))
      throw std::invalid_argument("MultiBasin: depth and width must be positive");
  }
}

Eval MultiBasin::eval(std::span<const double> theta) const {
  check_dim(dim_, theta.size(), "MultiBasin::eval");
  Eval out;
  out.grad.assign(dim_, 0.0);
  for (const auto& w : wells_) {
    double r2 = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      const double d = theta[j] - w.center[j];
      r2 += d * d;
    }
    const double w2 = w.width * w.width;
    const double e = w.depth * std::exp(-r2 / (2.0 * w2));
    out.value -= e;
    for (std::size_t j = 0; j < dim_; ++j) {
      out.grad[j] += e * (theta[j] - w.center[j]) / w2;
    }
  }
  return out;
}

std::vector<double> fd_gradient(const Landscape& f, std::span<const double> theta,
                                double h) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_gradient: step must be positive");
  check_dim(f.dim(), theta.size(), "fd_gradient");
  std::vector<double> point(theta.begin(), theta.end());
  std::vector<double> grad(theta.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    const double saved = point[i];
    point[i] = saved + h;
    const double fp = f.value(point);
    point[i] = saved - h;
    const double fm = f.value(point);
    point[i] = saved;
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

}  // namespace sgder
