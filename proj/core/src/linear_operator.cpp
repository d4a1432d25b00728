#include "wffp/linear_operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wffp/error.hpp"

namespace wffp {

void IdentityOperator::apply(std::span<const double> in, std::span<double> out) const {
  if (in.size() != n_ || out.size() != n_) throw ShapeError("identity: size mismatch");
  std::copy(in.begin(), in.end(), out.begin());
}

ProductOperator::ProductOperator(std::vector<std::shared_ptr<const LinearOperator>> ops)
    : ops_(std::move(ops)), n_(0) {
  if (ops_.empty()) throw ShapeError("product of zero operators");
  n_ = ops_.front()->size();
  for (const auto& op : ops_)
    if (!op || op->size() != n_) throw ShapeError("product operator: factor sizes differ");
}

void ProductOperator::apply(std::span<const double> in, std::span<double> out) const {
  if (ops_.size() == 1) {
    ops_.front()->apply(in, out);
    return;
  }
  Vector a(in.begin(), in.end());
  Vector b(n_);
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
    (*it)->apply(a, b);
    a.swap(b);
  }
  std::copy(a.begin(), a.end(), out.begin());
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ShapeError("dot: length mismatch");
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void remove_mean(std::span<double> x) {
  if (x.empty()) return;
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  for (auto& v : x) v -= mean;
}

}  // namespace wffp
