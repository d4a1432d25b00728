#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace wffp {

using Vector = std::vector<double>;

/// Square real operator known only through its action on vectors.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual std::size_t size() const = 0;

  /// out = Op(in). `in` and `out` must not alias.
  virtual void apply(std::span<const double> in, std::span<double> out) const = 0;

  Vector operator()(std::span<const double> in) const {
    Vector out(size());
    apply(in, out);
    return out;
  }
};

/// Adapts a callable to the LinearOperator contract.
class FunctionOperator final : public LinearOperator {
 public:
  using Fn = std::function<void(std::span<const double>, std::span<double>)>;

  FunctionOperator(std::size_t n, Fn fn) : n_(n), fn_(std::move(fn)) {}

  std::size_t size() const override { return n_; }
  void apply(std::span<const double> in, std::span<double> out) const override { fn_(in, out); }

 private:
  std::size_t n_;
  Fn fn_;
};

/// The identity on R^n.
class IdentityOperator final : public LinearOperator {
 public:
  explicit IdentityOperator(std::size_t n) : n_(n) {}
  std::size_t size() const override { return n_; }
  void apply(std::span<const double> in, std::span<double> out) const override;

 private:
  std::size_t n_;
};

/// Composition first ∘ second ∘ ... applied right to left: ops = {A, B, C} gives A(B(C v)).
class ProductOperator final : public LinearOperator {
 public:
  explicit ProductOperator(std::vector<std::shared_ptr<const LinearOperator>> ops);
  std::size_t size() const override { return n_; }
  void apply(std::span<const double> in, std::span<double> out) const override;

 private:
  std::vector<std::shared_ptr<const LinearOperator>> ops_;
  std::size_t n_;
};

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);

/// Subtracts the mean from x in place.
void remove_mean(std::span<double> x);

}  // namespace wffp
