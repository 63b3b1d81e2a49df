#include "qhqr/closed_forms.hpp"
#include "qhqr/quadrature.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cassert>
#include <cfloat>
#include <cmath>
#include <numbers>

namespace qhqr {

GammaValue GammaValue::of(double x) {
  int sign = 1;
  const double lg = boost::math::lgamma(x, &sign);
  return {lg, sign};
}

double GammaValue::value() const { return sign * std::exp(log_magnitude); }

double log_gamma(double x) {
  assert(x > 0.0);
  return boost::math::lgamma(x);
}

namespace {

constexpr double kLn2 = std::numbers::ln2;
const double kLnPi = std::log(std::numbers::pi);

void check_index(const DomainSpec &d, const MultiIndex &a) {
  if (a.size() != d.n())
    throw DomainError("multi-index " + a.to_string() + " has length " +
                      std::to_string(a.size()) + ", expected n = " +
                      std::to_string(d.n()));
}

double weighted_sum(const DomainSpec &d, const MultiIndex &a) {
  double s = 0.0;
  for (std::size_t j = 0; j < d.n(); ++j)
    s += (a[j] + 1.0) / d.p(j);
  return s;
}

double log_p_product(const DomainSpec &d) {
  double s = 0.0;
  for (int pj : d.exponents())
    s += std::log(static_cast<double>(pj));
  return s;
}

/// A_j = sum_{t in block j} (alpha_t + shift_t + 1) / p_t
std::vector<double> block_sums(const DomainSpec &d, const Partition &part,
                               const MultiIndex &alpha,
                               const MultiIndex *shift = nullptr) {
  std::vector<double> out(part.blocks(), 0.0);
  for (std::size_t j = 0; j < part.blocks(); ++j)
    for (std::size_t t = part.begin(j); t < part.end(j); ++t)
      out[j] += (alpha[t] + (shift ? (*shift)[t] : 0) + 1.0) / d.p(t);
  return out;
}

double total(const std::vector<double> &v) {
  double s = 0.0;
  for (double x : v)
    s += x;
  return s;
}

/// prefactor * int a(r) prod_j r_j^(e_j - 1) dr by simplex quadrature.
SpectralCoefficient radial_quadrature(const QuasiRadialSymbol &a,
                                      double log_prefactor,
                                      const std::vector<double> &e,
                                      int degree) {
  auto integrand = [&](std::span<const double> r) { return a(r); };
  const double pre = std::exp(log_prefactor);
  const double fine = pre * integrate_simplex_weighted(e, degree, integrand);
  const double coarse =
      pre * integrate_simplex_weighted(e, std::max(1, degree / 2), integrand);
  const double err =
      std::max({std::abs(fine - coarse), DBL_EPSILON * std::abs(fine), DBL_MIN});
  return {fine, CoefficientMethod::quadrature, err};
}

bool use_quadrature(const QuasiRadialSymbol &a, RadialPath path) {
  if (path == RadialPath::quadrature)
    return true;
  if (!a.has_closed_form()) {
    if (path == RadialPath::closed_form)
      throw DomainError("opaque radial symbol has no closed form");
    return true;
  }
  return false;
}

void check_symbol_args(const QuasiRadialSymbol &a, const DomainSpec &d,
                       const Partition &part, const MultiIndex &alpha) {
  part.check_compatible(d);
  check_index(d, alpha);
  a.check_blocks(part.blocks());
}

} // namespace

double log_monomial_norm_sq(const DomainSpec &d, const MultiIndex &alpha) {
  check_index(d, alpha);
  double lg = d.n() * kLnPi - log_p_product(d);
  for (std::size_t j = 0; j < d.n(); ++j)
    lg += log_gamma((alpha[j] + 1.0) / d.p(j));
  return lg - log_gamma(weighted_sum(d, alpha) + 1.0);
}

double monomial_inner_product(const DomainSpec &d, const MultiIndex &alpha,
                              const MultiIndex &beta) {
  check_index(d, beta);
  if (!(alpha == beta))
    return 0.0;
  return std::exp(log_monomial_norm_sq(d, alpha));
}

double domain_volume(const DomainSpec &d) {
  return monomial_inner_product(d, MultiIndex::zeros(d.n()),
                                MultiIndex::zeros(d.n()));
}

double basis_norm_const(const DomainSpec &d, const MultiIndex &alpha) {
  return std::exp(-0.5 * log_monomial_norm_sq(d, alpha));
}

double sphere_monomial_integral(const DomainSpec &d, const MultiIndex &alpha,
                                const MultiIndex &beta, bool normalized) {
  check_index(d, alpha);
  check_index(d, beta);
  if (!(alpha == beta))
    return 0.0;
  const double A = weighted_sum(d, alpha);
  if (normalized) {
    // Grouped so that alpha = 0 cancels term by term to exactly zero.
    const double P = weighted_sum(d, MultiIndex::zeros(d.n()));
    double lg = log_gamma(P) - log_gamma(A);
    for (std::size_t j = 0; j < d.n(); ++j)
      lg += log_gamma((alpha[j] + 1.0) / d.p(j)) - log_gamma(1.0 / d.p(j));
    return std::exp(lg);
  }
  double lg = kLn2 + d.n() * kLnPi - log_p_product(d) - log_gamma(A);
  for (std::size_t j = 0; j < d.n(); ++j)
    lg += log_gamma((alpha[j] + 1.0) / d.p(j));
  return std::exp(lg);
}

double sphere_volume(const DomainSpec &d) {
  return 2.0 * d.inverse_exponent_sum() * domain_volume(d);
}

double log_dirichlet_simplex_moment(std::span<const double> b) {
  if (b.empty())
    throw DomainError("simplex moment needs at least one block");
  double lg = -static_cast<double>(b.size()) * kLn2;
  double half_sum = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (!(b[j] > 0.0))
      throw DomainError("simplex moment exponent b_" + std::to_string(j + 1) +
                        " must be positive");
    lg += log_gamma(0.5 * b[j]);
    half_sum += 0.5 * b[j];
  }
  return lg - log_gamma(half_sum + 1.0);
}

double dirichlet_simplex_moment(std::span<const double> b) {
  return std::exp(log_dirichlet_simplex_moment(b));
}

SpectralCoefficient gamma_radial(const QuasiRadialSymbol &a, const DomainSpec &d,
                                 const Partition &part, const MultiIndex &alpha,
                                 const CoefficientOptions &opts) {
  check_symbol_args(a, d, part, alpha);
  const auto A = block_sums(d, part, alpha);
  const double Atot = total(A);
  const std::size_t s = part.blocks();

  if (use_quadrature(a, opts.path)) {
    double lp = s * kLn2 + log_gamma(Atot + 1.0);
    std::vector<double> e(s);
    for (std::size_t j = 0; j < s; ++j) {
      lp -= log_gamma(A[j]);
      e[j] = 2.0 * A[j];
    }
    return radial_quadrature(a, lp, e, opts.quadrature_degree);
  }

  // Prefactor times the Dirichlet moment with b_j = 2 A_j + c_j; the powers
  // of two cancel and the Gamma factors pair up.
  double value = 0.0;
  for (const auto &term : a.terms(s)) {
    double half_c = 0.0;
    double lg = 0.0;
    for (std::size_t j = 0; j < s; ++j) {
      half_c += 0.5 * term.exponents[j];
      lg += log_gamma(A[j] + 0.5 * term.exponents[j]) - log_gamma(A[j]);
    }
    lg += log_gamma(Atot + 1.0) - log_gamma(Atot + half_c + 1.0);
    value += term.coefficient * std::exp(lg);
  }
  return {value, CoefficientMethod::closed_form, 0.0};
}

SpectralCoefficient gamma_qh(const QuasiRadialSymbol &a, const DomainSpec &d,
                             const Partition &part, const MultiIndex &nu,
                             const MultiIndex &mu, const MultiIndex &alpha,
                             const CoefficientOptions &opts) {
  check_symbol_args(a, d, part, alpha);
  check_index(d, nu);
  check_index(d, mu);
  if (dot(nu, mu) != 0)
    throw DomainError("quasi-homogeneous factor requires orthogonal exponents");
  const auto beta = shifted(alpha, nu, mu);
  if (!beta)
    return {0.0, CoefficientMethod::closed_form, 0.0};

  const std::size_t s = part.blocks();
  const auto Aa = block_sums(d, part, alpha);
  const auto Ab = block_sums(d, part, *beta);
  const auto B = block_sums(d, part, alpha, &nu);
  const double Aa_tot = total(Aa), Ab_tot = total(Ab);

  // Per-coordinate sphere-moment ratio Gamma((alpha+nu+1)/p) / Gamma((beta+1)/p).
  double coord = 0.0;
  for (std::size_t t = 0; t < d.n(); ++t)
    coord += log_gamma((alpha[t] + nu[t] + 1.0) / d.p(t)) -
             log_gamma(((*beta)[t] + 1.0) / d.p(t));

  if (use_quadrature(a, opts.path)) {
    double lp = s * kLn2 + coord + log_gamma(Ab_tot + 1.0);
    std::vector<double> e(s);
    for (std::size_t j = 0; j < s; ++j) {
      lp -= log_gamma(B[j]);
      e[j] = Aa[j] + Ab[j];
    }
    return radial_quadrature(a, lp, e, opts.quadrature_degree);
  }

  double value = 0.0;
  for (const auto &term : a.terms(s)) {
    double c_tot = 0.0;
    double lg = coord;
    for (std::size_t j = 0; j < s; ++j) {
      c_tot += term.exponents[j];
      lg += log_gamma(0.5 * (Aa[j] + Ab[j] + term.exponents[j])) - log_gamma(B[j]);
    }
    lg += log_gamma(Ab_tot + 1.0) - log_gamma(0.5 * (Aa_tot + Ab_tot + c_tot) + 1.0);
    value += term.coefficient * std::exp(lg);
  }
  return {value, CoefficientMethod::closed_form, 0.0};
}

SpectralCoefficient gamma_qh_reduced(const QuasiRadialSymbol &a,
                                     const DomainSpec &d, const Partition &part,
                                     const MultiIndex &nu, const MultiIndex &mu,
                                     const MultiIndex &alpha,
                                     const CoefficientOptions &opts) {
  check_symbol_args(a, d, part, alpha);
  check_index(d, nu);
  check_index(d, mu);
  if (dot(nu, mu) != 0)
    throw DomainError("quasi-homogeneous factor requires orthogonal exponents");
  if (!all_true(comm_condition(d, part, nu, mu)))
    throw DomainError("reduction requires per-block condition");
  const auto beta = shifted(alpha, nu, mu);
  if (!beta)
    return {0.0, CoefficientMethod::closed_form, 0.0};

  const auto Aa = block_sums(d, part, alpha);
  const auto B = block_sums(d, part, alpha, &nu);
  double lg = 0.0;
  for (std::size_t t = 0; t < d.n(); ++t)
    lg += log_gamma((alpha[t] + nu[t] + 1.0) / d.p(t)) -
          log_gamma(((*beta)[t] + 1.0) / d.p(t));
  for (std::size_t j = 0; j < part.blocks(); ++j)
    lg += log_gamma(Aa[j]) - log_gamma(B[j]);
  const double ratio = std::exp(lg);
  const auto radial = gamma_radial(a, d, part, alpha, opts);
  return {ratio * radial.value, radial.method, ratio * radial.error_estimate};
}

} // namespace qhqr
