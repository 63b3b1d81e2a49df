#pragma once

#include "qhqr/domain.hpp"
#include "qhqr/symbol.hpp"

#include <span>

namespace qhqr {

/// Gamma(x) held as (log|Gamma(x)|, sign).
struct GammaValue {
  double log_magnitude = 0.0;
  int sign = 1;

  static GammaValue of(double x);
  double value() const;
};

/// log Gamma(x) for x > 0. Thread-safe.
double log_gamma(double x);

enum class CoefficientMethod { closed_form, quadrature };

struct SpectralCoefficient {
  double value = 0.0;
  CoefficientMethod method = CoefficientMethod::closed_form;
  double error_estimate = 0.0; ///< zero only for closed_form
};

/// <z^alpha, z^beta> in L^2(dV), dV the unnormalized Lebesgue measure.
double monomial_inner_product(const DomainSpec &d, const MultiIndex &alpha,
                              const MultiIndex &beta);
/// log <z^alpha, z^alpha>
double log_monomial_norm_sq(const DomainSpec &d, const MultiIndex &alpha);

/// Lebesgue volume of the domain.
double domain_volume(const DomainSpec &d);

/// <z^alpha, z^alpha>^(-1/2): scales z^alpha to a unit vector.
double basis_norm_const(const DomainSpec &d, const MultiIndex &alpha);

/// Integral of xi^alpha conj(xi)^beta over the p-sphere, against the
/// probability measure (normalized) or the surface measure dS.
double sphere_monomial_integral(const DomainSpec &d, const MultiIndex &alpha,
                                const MultiIndex &beta, bool normalized);

/// Surface measure of the p-sphere, S(1) = 2 (sum_j 1/p_j) V(1).
double sphere_volume(const DomainSpec &d);

/// Integral over {r_j > 0, sum r_j^2 < 1} of prod_j r_j^(b_j - 1):
///
///   2^(-s) prod_j Gamma(b_j / 2) / Gamma(sum_j b_j / 2 + 1)
///
/// (substitute u_j = r_j^2 and apply the Dirichlet integral). Throws
/// DomainError unless every b_j > 0.
double dirichlet_simplex_moment(std::span<const double> b);
double log_dirichlet_simplex_moment(std::span<const double> b);

enum class RadialPath { automatic, closed_form, quadrature };

struct CoefficientOptions {
  RadialPath path = RadialPath::automatic;
  int quadrature_degree = 32; ///< see simplex_quadrature
};

/// Eigenvalue of T_a on z^alpha for a quasi-radial a:
///
///   gamma(alpha) = 2^s Gamma(|A| + 1) / prod_j Gamma(A_j)
///                  * int a(r) prod_j r_j^(2 A_j - 1) dr,
///
/// with A_j = sum_{t in block j} (alpha_t + 1) / p_t and |A| = sum_j A_j.
/// The constant makes gamma identically one for a = 1. Closed-form symbols
/// use the Dirichlet moment; opaque ones (or path = quadrature) use
/// simplex quadrature with error estimated against half the degree.
SpectralCoefficient gamma_radial(const QuasiRadialSymbol &a, const DomainSpec &d,
                                 const Partition &part, const MultiIndex &alpha,
                                 const CoefficientOptions &opts = {});

/// Coefficient of T_{a xi^nu conj(xi)^mu} z^alpha = gamma~(alpha) z^beta,
/// beta = alpha + nu - mu; zero when beta leaves N^n. Throws DomainError
/// when nu and mu are not orthogonal.
SpectralCoefficient gamma_qh(const QuasiRadialSymbol &a, const DomainSpec &d,
                             const Partition &part, const MultiIndex &nu,
                             const MultiIndex &mu, const MultiIndex &alpha,
                             const CoefficientOptions &opts = {});

/// gamma~ rewritten as a Gamma ratio times gamma_radial(alpha); valid only
/// when the per-block condition holds (throws DomainError otherwise).
SpectralCoefficient gamma_qh_reduced(const QuasiRadialSymbol &a,
                                     const DomainSpec &d, const Partition &part,
                                     const MultiIndex &nu, const MultiIndex &mu,
                                     const MultiIndex &alpha,
                                     const CoefficientOptions &opts = {});

inline SpectralCoefficient gamma_qh(const QHQRSymbol &sym, const DomainSpec &d,
                                    const MultiIndex &alpha,
                                    const CoefficientOptions &opts = {}) {
  return gamma_qh(sym.radial, d, sym.part, sym.factor.nu, sym.factor.mu, alpha,
                  opts);
}

} // namespace qhqr
