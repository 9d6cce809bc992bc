#include "kinkstab/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

namespace kinkstab {

Grid::Grid(double half_width, std::size_t n_points)
    : half_width_(half_width), n_points_(n_points), spacing_(0.0) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw std::invalid_argument("grid half width must be positive and finite");
  }
  if (n_points < 3 || n_points % 2 == 0) {
    throw std::invalid_argument("grid needs an odd number of points (at least 3)");
  }
  spacing_ = 2.0 * half_width / static_cast<double>(n_points - 1);
}

Grid Grid::with_spacing(double half_width, double spacing) {
  const double intervals = 2.0 * half_width / spacing;
  const auto n = static_cast<std::size_t>(std::llround(intervals));
  if (std::abs(intervals - static_cast<double>(n)) > 1e-9 * intervals) {
    throw std::invalid_argument("2L must be an integer multiple of the spacing");
  }
  return Grid(half_width, n + 1);
}

std::vector<double> Grid::nodes() const {
  std::vector<double> xs(n_points_);
  for (std::size_t j = 0; j < n_points_; ++j) xs[j] = x(j);
  return xs;
}

bool Grid::operator==(const Grid& other) const {
  return n_points_ == other.n_points_ && half_width_ == other.half_width_;
}

const char* to_string(Parity p) {
  switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    case Parity::none: break;
  }
  return "none";
}

namespace {

template <typename T>
T integrate_impl(const Grid& grid, std::span<const T> v, QuadratureRule rule) {
  if (v.size() != grid.size()) throw GridMismatch("sample count does not match grid");
  const double h = grid.spacing();
  const std::size_t n = v.size();
  if (rule == QuadratureRule::trapezoid) {
    T s = 0.5 * (v[0] + v[n - 1]);
    for (std::size_t j = 1; j + 1 < n; ++j) s += v[j];
    return h * s;
  }
  // n is odd, so the number of intervals is even.
  T s = v[0] + v[n - 1];
  for (std::size_t j = 1; j + 1 < n; ++j) s += (j % 2 == 1 ? 4.0 : 2.0) * v[j];
  return (h / 3.0) * s;
}

}  // namespace

double integrate(const Grid& grid, std::span<const double> values, QuadratureRule rule) {
  return integrate_impl<double>(grid, values, rule);
}

std::complex<double> integrate(const Grid& grid, std::span<const std::complex<double>> values,
                               QuadratureRule rule) {
  return integrate_impl<std::complex<double>>(grid, values, rule);
}

double inner(const GridFunction& f, const GridFunction& g, QuadratureRule rule) {
  f.check_same(g);
  std::vector<double> p(f.size());
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = f[j] * g[j];
  return integrate(f.grid(), p, rule);
}

std::complex<double> inner(const ComplexGridFunction& f, const GridFunction& g,
                           QuadratureRule rule) {
  if (!(f.grid() == g.grid())) throw GridMismatch("grid functions live on different grids");
  std::vector<std::complex<double>> p(f.size());
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = f[j] * g[j];
  return integrate(f.grid(), p, rule);
}

InnerWithTail inner_with_tail(const GridFunction& f, double decay_rate_f, const GridFunction& g,
                              double decay_rate_g, QuadratureRule rule) {
  const double rate = decay_rate_f + decay_rate_g;
  if (!(rate > 0.0)) throw std::invalid_argument("decay rates must sum to a positive number");
  const std::size_t n = f.size();
  const double ends = std::abs(f[0] * g[0]) + std::abs(f[n - 1] * g[n - 1]);
  return {inner(f, g, rule), ends / rate};
}

namespace {

void require_stencil(std::size_t n) {
  if (n < 5) throw std::invalid_argument("grid too coarse for the difference stencil");
}

template <typename T>
std::vector<T> second_derivative_impl(std::span<const T> f, double h, StencilOrder order) {
  const std::size_t n = f.size();
  require_stencil(n);
  auto at = [&](std::ptrdiff_t j) -> T {
    return (j < 0 || j >= static_cast<std::ptrdiff_t>(n)) ? T{} : f[static_cast<std::size_t>(j)];
  };
  std::vector<T> out(n);
  const double h2 = h * h;
  for (std::size_t jj = 0; jj < n; ++jj) {
    const auto j = static_cast<std::ptrdiff_t>(jj);
    if (order == StencilOrder::second) {
      out[jj] = (at(j - 1) - 2.0 * at(j) + at(j + 1)) / h2;
    } else {
      out[jj] = (-at(j - 2) + 16.0 * at(j - 1) - 30.0 * at(j) + 16.0 * at(j + 1) - at(j + 2)) /
                (12.0 * h2);
    }
  }
  return out;
}

}  // namespace

GridFunction derivative(const GridFunction& f, StencilOrder order) {
  const std::size_t n = f.size();
  require_stencil(n);
  const double h = f.grid().spacing();
  std::vector<double> d(n);
  if (order == StencilOrder::second) {
    for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (f[j + 1] - f[j - 1]) / (2.0 * h);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  } else {
    for (std::size_t j = 2; j + 2 < n; ++j) {
      d[j] = (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) / (12.0 * h);
    }
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] +
                3.0 * f[n - 5]) /
               (12.0 * h);
    d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) /
               (12.0 * h);
  }
  Parity p = Parity::none;
  if (f.parity() == Parity::odd) p = Parity::even;
  if (f.parity() == Parity::even) p = Parity::odd;
  return GridFunction(f.grid(), std::move(d), p);
}

GridFunction second_derivative(const GridFunction& f, StencilOrder order) {
  return GridFunction(f.grid(), second_derivative_impl<double>(f.values(), f.grid().spacing(), order),
                      f.parity());
}

ComplexGridFunction second_derivative(const ComplexGridFunction& f, StencilOrder order) {
  return ComplexGridFunction(
      f.grid(), second_derivative_impl<std::complex<double>>(f.values(), f.grid().spacing(), order),
      f.parity());
}

double derivative_at_center(const GridFunction& f, StencilOrder order) {
  const std::size_t c = f.grid().center();
  const double h = f.grid().spacing();
  if (c < 2) throw std::invalid_argument("grid too coarse for the difference stencil");
  if (order == StencilOrder::second) return (f[c + 1] - f[c - 1]) / (2.0 * h);
  return (f[c - 2] - 8.0 * f[c - 1] + 8.0 * f[c + 1] - f[c + 2]) / (12.0 * h);
}

double local_weight(double x) { return 1.0 / std::cosh(x / (2.0 * std::sqrt(2.0))); }

WeightedNorms weighted_norms(const GridFunction& v1, const GridFunction& v2, StencilOrder order) {
  v1.check_same(v2);
  const GridFunction d = derivative(v1, order);
  const Grid& g = v1.grid();
  std::vector<double> a(g.size()), b(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double w = local_weight(g.x(j));
    a[j] = (d[j] * d[j] + v1[j] * v1[j]) * w;
    b[j] = v2[j] * v2[j] * w;
  }
  return {integrate(g, a), integrate(g, b)};
}

std::vector<std::complex<double>> cumulative_integral(const Grid& grid,
                                                      std::span<const std::complex<double>> v) {
  if (v.size() != grid.size()) throw GridMismatch("sample count does not match grid");
  std::vector<std::complex<double>> out(v.size());
  const double half_h = 0.5 * grid.spacing();
  out[0] = 0.0;
  for (std::size_t j = 1; j < v.size(); ++j) out[j] = out[j - 1] + half_h * (v[j - 1] + v[j]);
  return out;
}

GridFunction antiderivative_even(const GridFunction& xi, double tail_tolerance) {
  const Grid& g = xi.grid();
  std::vector<double> u(g.size());
  const double half_h = 0.5 * g.spacing();
  u[0] = 0.0;
  for (std::size_t j = 1; j < u.size(); ++j) u[j] = u[j - 1] + half_h * (xi[j - 1] + xi[j]);
  if (std::abs(u.back()) > tail_tolerance) {
    throw NumericalError("antiderivative does not return to zero at x = L (input not odd or not decaying)");
  }
  GridFunction out(g, std::move(u), Parity::none);
  out.symmetrize(Parity::even);
  return out;
}

double interpolate(const GridFunction& f, double x) {
  const Grid& g = f.grid();
  const double L = g.half_width();
  if (x < -L || x > L) return 0.0;
  const double s = (x + L) / g.spacing();
  const auto n = static_cast<std::ptrdiff_t>(g.size());
  auto j = static_cast<std::ptrdiff_t>(std::floor(s));
  j = std::clamp<std::ptrdiff_t>(j, 0, n - 2);
  const double t = s - static_cast<double>(j);
  auto at = [&](std::ptrdiff_t k) {
    // Linear extrapolation for the ghost points at the ends.
    if (k < 0) return 2.0 * f[0] - f[1];
    if (k >= n) return 2.0 * f[static_cast<std::size_t>(n - 1)] - f[static_cast<std::size_t>(n - 2)];
    return f[static_cast<std::size_t>(k)];
  };
  const double p0 = at(j - 1), p1 = at(j), p2 = at(j + 1), p3 = at(j + 2);
  return p1 + 0.5 * t *
                  (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + t * (3.0 * (p1 - p2) + p3 - p0)));
}

GridFunction resample(const GridFunction& f, const Grid& target) {
  if (f.grid() == target) return f;
  std::vector<double> v(target.size());
  for (std::size_t j = 0; j < target.size(); ++j) v[j] = interpolate(f, target.x(j));
  GridFunction out(target, std::move(v), Parity::none);
  if (f.parity() != Parity::none) out.symmetrize(f.parity());
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const GridFunction& f) {
  os << "x,value\n";
  for (std::size_t j = 0; j < f.size(); ++j) {
    os << format_double(f.grid().x(j)) << ',' << format_double(f[j]) << '\n';
  }
}

void write_csv(std::ostream& os, const ComplexGridFunction& f) {
  os << "x,re,im\n";
  for (std::size_t j = 0; j < f.size(); ++j) {
    os << format_double(f.grid().x(j)) << ',' << format_double(f[j].real()) << ','
       << format_double(f[j].imag()) << '\n';
  }
}

}  // namespace kinkstab
