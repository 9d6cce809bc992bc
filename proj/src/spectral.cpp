#include "kinkstab/spectral.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "kinkstab/closed_forms.hpp"

namespace kinkstab {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Odd functions on [-L, L] represented by their values at x_i = i h,
// i = 1..n (x_0 = 0 carries w = 0). The end x_n = L is left free. All
// quadratic forms are full-line integrals, i.e. twice the half-line ones.
struct HalfLine {
  int n;
  double h;
  VectorXd x;
  VectorXd weight;  // full-line lumped quadrature weights for even integrands

  HalfLine(double L, double step) : n(static_cast<int>(std::lround(L / step))), h(step) {
    if (n < 4) throw std::invalid_argument("coercivity mesh too coarse");
    x.resize(n);
    weight.resize(n);
    for (int i = 0; i < n; ++i) {
      x(i) = (i + 1) * h;
      weight(i) = 2.0 * h;
    }
    weight(n - 1) = h;
  }

  // ∫ w_x² over the line.
  MatrixXd stiffness() const {
    MatrixXd K = MatrixXd::Zero(n, n);
    const double c = 2.0 / h;
    // element [x_{i-1}, x_i] for i = 0..n-1, with w(x_{-1}) = w(0) = 0
    K(0, 0) += c;
    for (int i = 1; i < n; ++i) {
      K(i - 1, i - 1) += c;
      K(i, i) += c;
      K(i - 1, i) -= c;
      K(i, i - 1) -= c;
    }
    return K;
  }

  // ∫ p w² over the line.
  template <typename P>
  MatrixXd mass(P&& p) const {
    MatrixXd M = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) M(i, i) = weight(i) * p(x(i));
    return M;
  }

  // Vector m with mᵀw = ∫ w φ over the line, φ odd.
  template <typename P>
  VectorXd pairing(P&& phi) const {
    VectorXd m(n);
    for (int i = 0; i < n; ++i) m(i) = weight(i) * phi(x(i));
    return m;
  }
};

// Smallest eigenvalue of A v = κ B v restricted to {v : Cᵀv = 0}.
double constrained_min(const MatrixXd& A, const MatrixXd& B, const MatrixXd& C) {
  const Eigen::Index n = A.rows();
  MatrixXd P;
  if (C.cols() == 0) {
    P = MatrixXd::Identity(n, n);
  } else {
    Eigen::HouseholderQR<MatrixXd> qr(C);
    const MatrixXd Q = qr.householderQ();
    P = Q.rightCols(n - C.cols());
  }
  const MatrixXd Ar = P.transpose() * A * P;
  const MatrixXd Br = P.transpose() * B * P;
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(Ar, Br, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("generalized eigen-solve did not converge");
  return es.eigenvalues()(0);
}

MatrixXd no_constraint(int n) { return MatrixXd(n, 0); }

struct SharpForms {
  HalfLine mesh;
  MatrixXd K;
  MatrixXd B;   // ∫w_x² − V w²
  VectorXd z1;  // ⟨w, Z₁⟩
};

SharpForms sharp_forms(const CoercivityOptions& opts) {
  HalfLine mesh(opts.half_width, opts.spacing);
  MatrixXd K = mesh.stiffness();
  MatrixXd B = K - mesh.mass([&](double x) { return sharp_potential(opts.potential, x); });
  VectorXd z1 = mesh.pairing([](double x) { return cf::z1(x); });
  return {std::move(mesh), std::move(K), std::move(B), std::move(z1)};
}

}  // namespace

FgrReport fgr_constants(const Grid& grid) {
  const std::size_t n = grid.size();
  const double c = hy1_sq_y1_projection();
  std::vector<double> basic(n), modified(n), psi_f(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid.x(j);
    const double imk = cf::jost(x).imag();
    const double y1 = cf::internal_mode(x);
    const double hy = cf::kink(x) * y1 * y1;
    const double s = cf::sech(x / (8.0 * kSqrt2));
    basic[j] = imk * hy;
    modified[j] = imk * (hy - c * y1) * s * s;
    psi_f[j] = imk * cf::psi_prime(x) * cf::forcing_f(x);
  }
  auto both = [&](const std::vector<double>& v, double& err) {
    const double s = integrate(grid, v, QuadratureRule::simpson);
    err = std::abs(s - integrate(grid, v, QuadratureRule::trapezoid));
    return s;
  };
  FgrReport r{};
  r.fgr_basic = both(basic, r.err_basic);
  r.fgr_modified = both(modified, r.err_modified);
  r.psi_f_imk = both(psi_f, r.err_psi_f_imk);
  r.a = compute_a(grid).a;
  return r;
}

DominationReport check_potential_domination(double x_max, double step) {
  DominationReport r{};
  r.x_max = x_max;
  r.step = step;
  r.margin = INFINITY;
  r.max_ratio = -INFINITY;
  r.v2_max = -INFINITY;
  const auto n = static_cast<long>(std::lround(x_max / step));
  for (long i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i) * step;
    const double s = cf::sech(0.5 * x);
    const double bound = 2.1 * s * s;
    const double v2 = cf::virial_potential_v2(x);
    if (bound - v2 < r.margin) {
      r.margin = bound - v2;
      r.margin_x = x;
    }
    if (v2 / bound > r.max_ratio) {
      r.max_ratio = v2 / bound;
      r.max_ratio_x = x;
    }
    if (v2 > r.v2_max) {
      r.v2_max = v2;
      r.v2_argmax = x;
    }
  }
  const double lambda = ModelConstants::lambda_virial;
  r.tail_prefactor = 12.0 * lambda / 2.1;
  r.tail_rate = kSqrt2 - 2.0 / (lambda * kSqrt2) - 1.0;
  r.tail_ratio_bound = r.tail_prefactor * std::exp(-r.tail_rate * x_max);
  r.certified = r.margin > 0.0 && r.max_ratio < 1.0 && r.tail_rate > 0.0 && r.tail_ratio_bound < 1.0;
  return r;
}

MinOverNu min_over_nu(const Grid& grid) {
  const GridFunction A = antiderivative_even(sample(FunctionId::tildeY1, grid));
  const GridFunction B = antiderivative_even(sample(FunctionId::Z1, grid));
  MinOverNu r{};
  r.int_A2 = inner(A, A, QuadratureRule::simpson);
  r.int_B2 = inner(B, B, QuadratureRule::simpson);
  if (r.int_B2 <= 0.0) throw NumericalError("min_over_nu: antiderivative of Z1 vanishes");
  const double ab = inner(A, B, QuadratureRule::simpson);
  r.nu_star = ab / r.int_B2;
  r.min_value = r.int_A2 - ab * ab / r.int_B2;
  return r;
}

CoercivityReport coercivity_B_sharp(const CoercivityOptions& opts) {
  const SharpForms f = sharp_forms(opts);
  CoercivityReport r;
  r.form_id = "B_sharp";
  r.constrained_min = constrained_min(f.B, f.K, f.z1);
  r.unconstrained_min = constrained_min(f.B, f.K, no_constraint(f.mesh.n));
  r.constraint_set = std::string("odd, <w,Z1>=0, potential ") + to_string(opts.potential);
  r.half_width = opts.half_width;
  r.spacing = opts.spacing;
  return r;
}

DSharpReport coercivity_D_sharp(double a, double b, double f_g, double hsharp_h,
                                const CoercivityOptions& opts) {
  const SharpForms f = sharp_forms(opts);
  const int n = f.mesh.n;
  const VectorXd zf = f.mesh.pairing([](double x) { return cf::zeta(x) * cf::forcing_f(x); });

  // Unknowns (w_1..w_n, α).
  MatrixXd D = MatrixXd::Zero(n + 1, n + 1);
  D.topLeftCorner(n, n) = f.B;
  D.block(0, n, n, 1) = 0.5 * a * zf;
  D.block(n, 0, 1, n) = 0.5 * a * zf.transpose();
  D(n, n) = f_g;
  MatrixXd N = MatrixXd::Zero(n + 1, n + 1);
  N.topLeftCorner(n, n) = f.K;
  N(n, n) = 1.0;
  MatrixXd C = MatrixXd::Zero(n + 1, 1);
  C.topRows(n) = f.z1;

  DSharpReport r{};
  r.joint.form_id = "D_sharp";
  r.joint.constrained_min = constrained_min(D, N, C);
  r.joint.unconstrained_min = constrained_min(D, N, no_constraint(n + 1));
  r.joint.constraint_set = std::string("odd w, alpha real, <w,Z1>=0, potential ") +
                           to_string(opts.potential);
  r.joint.half_width = opts.half_width;
  r.joint.spacing = opts.spacing;
  r.alpha0_slice_min = constrained_min(D.topLeftCorner(n, n), N.topLeftCorner(n, n), f.z1);

  // Decomposition route: discrete h♯ from (K − M_V) h♯ = M h on this mesh.
  const auto hfun = h_function(a, b);
  const VectorXd hm = f.mesh.pairing(hfun);  // M h
  const VectorXd hs = f.B.ldlt().solve(hm);
  r.hsharp_h_discrete = hs.dot(hm);

  r.f_g = f_g;
  r.hsharp_h = hsharp_h;
  r.det_2x2 = f_g * hsharp_h - 0.25 * hsharp_h * hsharp_h;
  const double tr = hsharp_h + f_g;
  r.min_eig_2x2 = 0.5 * (tr - std::sqrt(tr * tr - 4.0 * r.det_2x2));
  r.reduced_positive = hsharp_h > 0.0 && r.det_2x2 > 0.0 && r.hsharp_h_discrete > 0.0 &&
                       r.hsharp_h_discrete < 4.0 * f_g;
  if (!r.reduced_positive) {
    throw NumericalError("d_sharp_reduced_form: 2x2 form in (c, alpha) is not positive definite");
  }
  return r;
}

CoercivityReport energy_lower_bound_check(const CoercivityOptions& opts) {
  const HalfLine mesh(opts.half_width, opts.spacing);
  const MatrixXd K = mesh.stiffness();
  const MatrixXd A = K + mesh.mass([](double x) { return cf::linearized_potential(x); });
  const MatrixXd B = K + mesh.mass([](double) { return 1.0; });
  CoercivityReport r;
  r.form_id = "L_energy";
  r.constrained_min = constrained_min(A, B, no_constraint(mesh.n));
  r.unconstrained_min = r.constrained_min;
  r.constraint_set = "odd (hence <w,Y0>=0)";
  r.half_width = opts.half_width;
  r.spacing = opts.spacing;
  return r;
}

double energy_quotient(const GridFunction& w) {
  const GridFunction d = derivative(w);
  const Grid& g = w.grid();
  std::vector<double> num(g.size()), den(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    num[j] = d[j] * d[j] + cf::linearized_potential(g.x(j)) * w[j] * w[j];
    den[j] = d[j] * d[j] + w[j] * w[j];
  }
  return integrate(g, num, QuadratureRule::simpson) / integrate(g, den, QuadratureRule::simpson);
}

double refinement_change(double coarse, double fine) {
  return std::abs(fine - coarse) / std::abs(coarse);
}

}  // namespace kinkstab
