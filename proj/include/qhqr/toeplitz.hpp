#pragma once

#include "qhqr/closed_forms.hpp"
#include "qhqr/domain.hpp"
#include "qhqr/quadrature.hpp"
#include "qhqr/symbol.hpp"

#include <Eigen/Dense>

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace qhqr {

/// Monomials z^alpha with |alpha| <= degree in graded-lex order, with the
/// constants that make them orthonormal in the Bergman space.
class TruncatedBasis {
public:
  TruncatedBasis(DomainSpec d, int degree);

  static std::shared_ptr<const TruncatedBasis> make(DomainSpec d, int degree) {
    return std::make_shared<const TruncatedBasis>(std::move(d), degree);
  }

  const DomainSpec &domain() const { return d_; }
  int degree() const { return degree_; }
  std::size_t size() const { return indices_.size(); }
  const std::vector<MultiIndex> &indices() const { return indices_; }
  const std::vector<double> &norms() const { return norms_; }
  const MultiIndex &index(std::size_t i) const { return indices_[i]; }
  std::optional<std::size_t> position(const MultiIndex &alpha) const;

  bool operator==(const TruncatedBasis &o) const {
    return d_ == o.d_ && degree_ == o.degree_;
  }

private:
  DomainSpec d_;
  int degree_;
  std::vector<MultiIndex> indices_;
  std::vector<double> norms_;
  std::map<MultiIndex, std::size_t, GradedLess> lookup_;
};

using BasisPtr = std::shared_ptr<const TruncatedBasis>;

enum class MatrixMethod { closed_form, oracle };

/// Matrix of a Toeplitz operator in the orthonormal monomial basis;
/// entry (row beta, column alpha) = <T e_alpha, e_beta>.
struct OperatorMatrix {
  BasisPtr basis;
  Eigen::MatrixXcd entries;
  MatrixMethod method = MatrixMethod::closed_form;
  std::optional<Eigen::MatrixXd> entry_errors;
  /// Columns alpha whose image alpha + nu - mu exceeds the degree bound.
  std::vector<std::size_t> truncation_loss;

  std::size_t size() const { return static_cast<std::size_t>(entries.rows()); }
};

OperatorMatrix toeplitz_matrix_closed(const QHQRSymbol &sym, BasisPtr basis,
                                      const CoefficientOptions &opts = {});

/// Every entry estimated by Monte Carlo integration of
/// sym * z^alpha * conj(z^beta), scaled by the basis constants.
OperatorMatrix toeplitz_matrix_oracle(const QHQRSymbol &sym, BasisPtr basis,
                                      const MCConfig &cfg);

/// A * B, skipping structural zeros of B. Throws DomainError on basis
/// mismatch.
OperatorMatrix product(const OperatorMatrix &a, const OperatorMatrix &b);
/// AB - BA
OperatorMatrix commutator(const OperatorMatrix &a, const OperatorMatrix &b);

enum class NormKind { frobenius, max_abs };
double op_norm(const OperatorMatrix &m, NormKind which);

/// Degree budget that keeps every intermediate index of a product of the
/// given factors inside the basis: sum_i max(0, |nu_i| - |mu_i|).
int max_shift(std::span<const QuasiHomogeneousFactor> factors);

/// Columns alpha with |alpha| <= N - maxshift (a leading block in graded
/// order) of a degree-N matrix, every row kept. With maxshift from
/// max_shift, each product term of these columns stays inside the basis, so
/// the entries equal those of the untruncated operator.
struct RestrictedMatrix {
  BasisPtr rows;
  BasisPtr columns;
  Eigen::MatrixXcd entries;
  std::optional<Eigen::MatrixXd> entry_errors;
};

/// Throws DomainError when maxshift > N or < 0.
RestrictedMatrix interior_restriction(const OperatorMatrix &m, int maxshift);
RestrictedMatrix interior_restriction(const OperatorMatrix &m,
                                      std::span<const QuasiHomogeneousFactor> factors);
double op_norm(const RestrictedMatrix &m, NormKind which);

} // namespace qhqr
