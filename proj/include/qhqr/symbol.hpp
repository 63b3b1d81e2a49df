#pragma once

#include "qhqr/domain.hpp"

#include <functional>
#include <string>
#include <vector>

namespace qhqr {

/// c * prod_j r_j^(e_j). An empty exponent list stands for all zeros.
struct RadialTerm {
  double coefficient = 1.0;
  std::vector<double> exponents;

  bool operator==(const RadialTerm &) const = default;
};

/// Function of the grouped radii (r_1, ..., r_s) only.
class QuasiRadialSymbol {
public:
  enum class Kind { constant, radial_monomial, linear_combination, opaque };
  using Function = std::function<double(std::span<const double>)>;

  static QuasiRadialSymbol constant(double c);
  static QuasiRadialSymbol monomial(std::vector<double> exponents,
                                    double coefficient = 1.0);
  static QuasiRadialSymbol combination(std::vector<RadialTerm> terms);
  /// `sup_bound` must bound |f| on the radial simplex; only the quadrature
  /// paths can integrate opaque symbols.
  static QuasiRadialSymbol opaque(Function f, double sup_bound,
                                  std::string label = "opaque");

  Kind kind() const { return kind_; }
  bool has_closed_form() const { return kind_ != Kind::opaque; }
  const std::string &label() const { return label_; }

  /// Terms of a closed-form symbol with exponents expanded to length s.
  std::vector<RadialTerm> terms(std::size_t s) const;
  /// Throws DomainError when the exponent count does not match s.
  void check_blocks(std::size_t s) const;

  double operator()(std::span<const double> r) const;
  /// Upper bound of |a| on {r_j >= 0, sum r_j^2 <= 1}.
  double sup_bound() const;

private:
  Kind kind_ = Kind::constant;
  std::vector<RadialTerm> terms_;
  Function fn_;
  double sup_ = 0.0;
  std::string label_;
};

/// xi^nu conj(xi)^mu with xi taken block-wise in p-polar form.
struct QuasiHomogeneousFactor {
  MultiIndex nu;
  MultiIndex mu;

  static QuasiHomogeneousFactor trivial(std::size_t n) {
    return {MultiIndex::zeros(n), MultiIndex::zeros(n)};
  }
  bool orthogonal() const { return dot(nu, mu) == 0; }
  bool is_trivial() const { return nu.is_zero() && mu.is_zero(); }
  /// Degree change |nu| - |mu| of the induced shift on monomials.
  int degree_shift() const { return nu.degree() - mu.degree(); }

  bool operator==(const QuasiHomogeneousFactor &) const = default;
};

/// a(r_1, ..., r_s) * xi^nu conj(xi)^mu over a fixed partition.
struct QHQRSymbol {
  QHQRSymbol(Partition part, QuasiRadialSymbol radial,
             QuasiHomogeneousFactor factor, std::string name = {});
  /// Purely quasi-radial symbol (nu = mu = 0).
  QHQRSymbol(Partition part, QuasiRadialSymbol radial, std::string name = {});

  Partition part;
  QuasiRadialSymbol radial;
  QuasiHomogeneousFactor factor;
  std::string name;

  bool is_quasi_radial() const { return factor.is_trivial(); }
};

/// a(r) * prod_j xi_(j)^nu_(j) conj(xi_(j))^mu_(j). Throws DomainError
/// ("symbol undefined on stratum") when a block with nonzero exponents
/// vanishes.
Complex eval_symbol(const QHQRSymbol &sym, std::span<const Complex> z,
                    const DomainSpec &d);

/// True when eval_symbol is defined at z.
bool symbol_defined_at(const QHQRSymbol &sym, std::span<const Complex> z,
                       const DomainSpec &d);

/// Per block j: sum_{t in block j} Lambda(p)_t (nu_t - mu_t) == 0, evaluated
/// in integer arithmetic.
std::vector<bool> comm_condition(const DomainSpec &d, const Partition &part,
                                 const MultiIndex &nu, const MultiIndex &mu);

inline bool all_true(const std::vector<bool> &v) {
  for (bool b : v)
    if (!b)
      return false;
  return true;
}

struct ClassParams {
  std::vector<int> h;

  /// Throws DomainError unless 1 <= h_j <= k_j - 1 for every block.
  void check(const Partition &part) const;
};

enum class AkhReason {
  ok,
  invalid_class_params,
  partition_mismatch,
  not_orthogonal,
  comm_condition_failed,
  nu_support,
  mu_support,
};

/// Human-readable description.
std::string to_string(AkhReason r);
/// Stable identifier matching the enumerator name, e.g. "nu_support".
std::string reason_code(AkhReason r);

struct AkhVerdict {
  bool ok = false;
  AkhReason reason = AkhReason::ok;
  std::string detail;
};

/// Membership in the commuting class A_{k,h}. Never throws; the first
/// violated clause is reported.
AkhVerdict validate_akh(const DomainSpec &d, const Partition &part,
                        const ClassParams &params, const QHQRSymbol &sym);

class HypothesisError : public DomainError {
public:
  using DomainError::DomainError;
};

/// Decides whether T_{a xi^nu conj(xi)^mu} and T_{b xi^sigma conj(xi)^eta}
/// commute. Requires nu ⊥ mu, sigma ⊥ eta and the per-block condition for
/// both pairs; throws HypothesisError otherwise.
bool pair_commutes(const DomainSpec &d, const Partition &part,
                   const MultiIndex &nu, const MultiIndex &mu,
                   const MultiIndex &sigma, const MultiIndex &eta);

/// Decides whether T_{a1} and T_{a2 xi^nu conj(xi)^mu} commute for all
/// quasi-radial a1, a2. Requires nu ⊥ mu.
bool radial_pair_commutes(const DomainSpec &d, const Partition &part,
                          const MultiIndex &nu, const MultiIndex &mu);

} // namespace qhqr
