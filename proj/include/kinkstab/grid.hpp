#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>
#include <cmath>

namespace kinkstab {

/// Raised when two grid functions that must share a mesh do not.
class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure cannot deliver its contract
/// (non-decaying antiderivative, failed shooting, non-convergence...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform symmetric mesh x_j = -L + j h on [-L, L] with an odd number of
/// nodes, so that x = 0 is always the middle node.
class Grid {
 public:
  Grid(double half_width, std::size_t n_points);

  /// Grid with the given spacing; L must be an integer multiple of h.
  static Grid with_spacing(double half_width, double spacing);

  double half_width() const { return half_width_; }
  std::size_t size() const { return n_points_; }
  double spacing() const { return spacing_; }
  std::size_t center() const { return (n_points_ - 1) / 2; }
  double x(std::size_t j) const {
    return -half_width_ + static_cast<double>(j) * spacing_;
  }
  std::vector<double> nodes() const;

  bool operator==(const Grid& other) const;

 private:
  double half_width_;
  std::size_t n_points_;
  double spacing_;
};

enum class Parity { none, even, odd };

const char* to_string(Parity p);

template <typename T>
class BasicGridFunction {
 public:
  using value_type = T;

  BasicGridFunction(Grid grid, std::vector<T> values, Parity parity = Parity::none)
      : grid_(grid), values_(std::move(values)), parity_(parity) {
    if (values_.size() != grid_.size()) {
      throw GridMismatch("grid function length does not match grid");
    }
  }

  explicit BasicGridFunction(Grid grid, Parity parity = Parity::none)
      : BasicGridFunction(grid, std::vector<T>(grid.size(), T{}), parity) {}

  static BasicGridFunction sample(const Grid& grid, const std::function<T(double)>& fn,
                                  Parity parity = Parity::none) {
    std::vector<T> v(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) v[j] = fn(grid.x(j));
    return BasicGridFunction(grid, std::move(v), parity);
  }

  const Grid& grid() const { return grid_; }
  Parity parity() const { return parity_; }
  void set_parity(Parity p) { parity_ = p; }
  std::size_t size() const { return values_.size(); }

  std::span<const T> values() const { return values_; }
  std::span<T> values() { return values_; }
  const T& operator[](std::size_t j) const { return values_[j]; }
  T& operator[](std::size_t j) { return values_[j]; }

  /// Largest |f(x) - s f(-x)| with s = +1 (even) or -1 (odd).
  double parity_defect(Parity p) const;

  /// Projects onto the requested symmetry class (f(x) -> (f(x) +- f(-x))/2).
  void symmetrize(Parity p);

  BasicGridFunction& operator+=(const BasicGridFunction& o) {
    check_same(o);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += o.values_[j];
    parity_ = parity_ == o.parity_ ? parity_ : Parity::none;
    return *this;
  }
  BasicGridFunction& operator-=(const BasicGridFunction& o) {
    check_same(o);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= o.values_[j];
    parity_ = parity_ == o.parity_ ? parity_ : Parity::none;
    return *this;
  }
  BasicGridFunction& operator*=(T c) {
    for (auto& v : values_) v *= c;
    return *this;
  }

  friend BasicGridFunction operator+(BasicGridFunction a, const BasicGridFunction& b) {
    return a += b;
  }
  friend BasicGridFunction operator-(BasicGridFunction a, const BasicGridFunction& b) {
    return a -= b;
  }
  friend BasicGridFunction operator*(T c, BasicGridFunction a) { return a *= c; }

  /// Pointwise product; parity follows the usual product rule.
  friend BasicGridFunction operator*(const BasicGridFunction& a, const BasicGridFunction& b) {
    a.check_same(b);
    std::vector<T> v(a.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = a.values_[j] * b.values_[j];
    return BasicGridFunction(a.grid_, std::move(v), product_parity(a.parity_, b.parity_));
  }

  void check_same(const BasicGridFunction& o) const {
    if (!(grid_ == o.grid_)) throw GridMismatch("grid functions live on different grids");
  }

 private:
  static Parity product_parity(Parity a, Parity b) {
    if (a == Parity::none || b == Parity::none) return Parity::none;
    return a == b ? Parity::even : Parity::odd;
  }

  Grid grid_;
  std::vector<T> values_;
  Parity parity_;
};

template <typename T>
double BasicGridFunction<T>::parity_defect(Parity p) const {
  if (p == Parity::none) return 0.0;
  const double s = p == Parity::even ? 1.0 : -1.0;
  const std::size_t n = values_.size();
  double worst = 0.0;
  for (std::size_t j = 0; j < n / 2 + 1; ++j) {
    const double d = std::abs(values_[j] - s * values_[n - 1 - j]);
    if (d > worst) worst = d;
  }
  return worst;
}

template <typename T>
void BasicGridFunction<T>::symmetrize(Parity p) {
  if (p == Parity::none) return;
  const double s = p == Parity::even ? 1.0 : -1.0;
  const std::size_t n = values_.size();
  for (std::size_t j = 0; j < n / 2; ++j) {
    const T a = 0.5 * (values_[j] + s * values_[n - 1 - j]);
    values_[j] = a;
    values_[n - 1 - j] = s * a;
  }
  if (p == Parity::odd) values_[n / 2] = T{};
  parity_ = p;
}

using GridFunction = BasicGridFunction<double>;
using ComplexGridFunction = BasicGridFunction<std::complex<double>>;

enum class QuadratureRule { trapezoid, simpson };

/// Composite quadrature of F*G over [-L, L].
double inner(const GridFunction& f, const GridFunction& g,
             QuadratureRule rule = QuadratureRule::trapezoid);
std::complex<double> inner(const ComplexGridFunction& f, const GridFunction& g,
                           QuadratureRule rule = QuadratureRule::trapezoid);

/// Quadrature of raw samples on the grid.
double integrate(const Grid& grid, std::span<const double> values,
                 QuadratureRule rule = QuadratureRule::trapezoid);
std::complex<double> integrate(const Grid& grid, std::span<const std::complex<double>> values,
                               QuadratureRule rule = QuadratureRule::trapezoid);

/// Result of an inner product together with a truncation estimate for the
/// part of the integral beyond [-L, L].
struct InnerWithTail {
  double value;
  double tail_bound;
};

/// Inner product when both integrands are known to decay like e^{-rate |x|}
/// at infinity; the tail bound assumes |F G| <= |F G|(±L) e^{-(rate_f+rate_g)(|x|-L)}.
InnerWithTail inner_with_tail(const GridFunction& f, double decay_rate_f, const GridFunction& g,
                              double decay_rate_g, QuadratureRule rule = QuadratureRule::trapezoid);

enum class StencilOrder { second = 2, fourth = 4 };

/// Centered first derivative; one-sided stencils of matching order at the ends.
GridFunction derivative(const GridFunction& f, StencilOrder order = StencilOrder::fourth);

/// Centered second derivative with zero extension past the ends (homogeneous
/// Dirichlet ghost values). Requires at least 5 nodes.
GridFunction second_derivative(const GridFunction& f, StencilOrder order = StencilOrder::fourth);
ComplexGridFunction second_derivative(const ComplexGridFunction& f,
                                      StencilOrder order = StencilOrder::fourth);

/// Value of the derivative at the center node x = 0.
double derivative_at_center(const GridFunction& f, StencilOrder order = StencilOrder::fourth);

struct WeightedNorms {
  double h1_omega = 0.0;  ///< ∫ (v1_x^2 + v1^2) sech(x/(2√2))
  double l2_omega = 0.0;  ///< ∫ v2^2 sech(x/(2√2))
  double total() const { return h1_omega + l2_omega; }
};

/// The local weight sech(x/(2√2)).
double local_weight(double x);

WeightedNorms weighted_norms(const GridFunction& v1, const GridFunction& v2,
                             StencilOrder order = StencilOrder::fourth);

/// Even antiderivative of an odd, decaying function: υ(x) = ∫_{-L}^x ξ.
/// Throws NumericalError if |υ(L)| exceeds `tail_tolerance`.
GridFunction antiderivative_even(const GridFunction& xi, double tail_tolerance = 1e-8);

/// Cumulative trapezoid ∫_{-L}^{x_j} of complex samples.
std::vector<std::complex<double>> cumulative_integral(const Grid& grid,
                                                      std::span<const std::complex<double>> values);

/// Cubic (Catmull-Rom) interpolation of a grid function at arbitrary x;
/// outside [-L, L] returns 0.
double interpolate(const GridFunction& f, double x);

/// Resamples onto another grid. Nodes outside the source interval get 0.
GridFunction resample(const GridFunction& f, const Grid& target);

/// CSV with header "x,value".
void write_csv(std::ostream& os, const GridFunction& f);
/// CSV with header "x,re,im".
void write_csv(std::ostream& os, const ComplexGridFunction& f);

/// Shortest round-trip decimal representation used in every emitted file.
std::string format_double(double v);

}  // namespace kinkstab
