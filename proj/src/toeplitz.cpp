#include "qhqr/toeplitz.hpp"

#include <cmath>

namespace qhqr {

TruncatedBasis::TruncatedBasis(DomainSpec d, int degree)
    : d_(std::move(d)), degree_(degree), indices_(enumerate_basis(d_, degree)) {
  norms_.reserve(indices_.size());
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    norms_.push_back(basis_norm_const(d_, indices_[i]));
    lookup_.emplace(indices_[i], i);
  }
}

std::optional<std::size_t> TruncatedBasis::position(const MultiIndex &alpha) const {
  auto it = lookup_.find(alpha);
  if (it == lookup_.end())
    return std::nullopt;
  return it->second;
}

namespace {

void check_symbol_domain(const QHQRSymbol &sym, const TruncatedBasis &basis) {
  sym.part.check_compatible(basis.domain());
  if (!sym.factor.orthogonal())
    throw DomainError("quasi-homogeneous factor requires orthogonal exponents");
}

void check_same_basis(const OperatorMatrix &a, const OperatorMatrix &b) {
  if (!a.basis || !b.basis || !(*a.basis == *b.basis))
    throw DomainError("operator matrices are over different bases");
}

double norm_of(const Eigen::MatrixXcd &e, NormKind which) {
  if (e.size() == 0)
    return 0.0;
  switch (which) {
  case NormKind::frobenius:
    return e.norm();
  case NormKind::max_abs:
    return e.cwiseAbs().maxCoeff();
  }
  return 0.0;
}

} // namespace

OperatorMatrix toeplitz_matrix_closed(const QHQRSymbol &sym, BasisPtr basis,
                                      const CoefficientOptions &opts) {
  check_symbol_domain(sym, *basis);
  const auto &d = basis->domain();
  const std::size_t dim = basis->size();
  OperatorMatrix m{basis, Eigen::MatrixXcd::Zero(dim, dim), MatrixMethod::closed_form,
                   std::nullopt, {}};
  for (std::size_t col = 0; col < dim; ++col) {
    const auto &alpha = basis->index(col);
    const auto beta = shifted(alpha, sym.factor.nu, sym.factor.mu);
    if (!beta)
      continue; // the operator kills z^alpha
    const auto row = basis->position(*beta);
    if (!row) {
      m.truncation_loss.push_back(col);
      continue;
    }
    const auto g = gamma_qh(sym, d, alpha, opts);
    m.entries(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) =
        g.value * (basis->norms()[col] / basis->norms()[*row]);
  }
  return m;
}

OperatorMatrix toeplitz_matrix_oracle(const QHQRSymbol &sym, BasisPtr basis,
                                      const MCConfig &cfg) {
  check_symbol_domain(sym, *basis);
  const auto &d = basis->domain();
  const std::size_t dim = basis->size();
  const auto &idx = basis->indices();

  auto integrand = [&](std::span<const Complex> z, std::span<Complex> out) {
    const std::size_t n = z.size();
    std::vector<double> la(n), ar(n);
    for (std::size_t j = 0; j < n; ++j) {
      la[j] = std::log(std::abs(z[j]));
      ar[j] = std::arg(z[j]);
    }
    const Complex f =
        symbol_defined_at(sym, z, d) ? eval_symbol(sym, z, d) : Complex{};
    std::vector<Complex> mono(dim);
    for (std::size_t i = 0; i < dim; ++i)
      mono[i] = monomial_value(la, ar, idx[i]);
    // Column-major: output (row, col) at row + col * dim.
    for (std::size_t col = 0; col < dim; ++col) {
      const Complex fa = f * mono[col];
      for (std::size_t row = 0; row < dim; ++row)
        out[row + col * dim] = fa * std::conj(mono[row]);
    }
  };
  const auto est = oracle_integrate(d, dim * dim, integrand, cfg);

  OperatorMatrix m{basis, Eigen::MatrixXcd::Zero(dim, dim), MatrixMethod::oracle,
                   Eigen::MatrixXd::Zero(dim, dim), {}};
  const auto &w = basis->norms();
  for (std::size_t col = 0; col < dim; ++col)
    for (std::size_t row = 0; row < dim; ++row) {
      const double s = w[col] * w[row];
      const auto &e = est[row + col * dim];
      const auto r = static_cast<Eigen::Index>(row), c = static_cast<Eigen::Index>(col);
      m.entries(r, c) = s * e.value;
      (*m.entry_errors)(r, c) = s * e.std_error;
    }
  return m;
}

OperatorMatrix product(const OperatorMatrix &a, const OperatorMatrix &b) {
  check_same_basis(a, b);
  const Eigen::Index dim = a.entries.rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index k = 0; k < dim; ++k) {
      const Complex bkj = b.entries(k, j);
      if (bkj != Complex{})
        out.col(j) += bkj * a.entries.col(k);
    }
  const auto method = (a.method == MatrixMethod::closed_form &&
                       b.method == MatrixMethod::closed_form)
                          ? MatrixMethod::closed_form
                          : MatrixMethod::oracle;
  return {a.basis, std::move(out), method, std::nullopt, {}};
}

OperatorMatrix commutator(const OperatorMatrix &a, const OperatorMatrix &b) {
  auto ab = product(a, b);
  const auto ba = product(b, a);
  ab.entries -= ba.entries;
  return ab;
}

double op_norm(const OperatorMatrix &m, NormKind which) {
  return norm_of(m.entries, which);
}

int max_shift(std::span<const QuasiHomogeneousFactor> factors) {
  int s = 0;
  for (const auto &f : factors)
    s += std::max(0, f.degree_shift());
  return s;
}

RestrictedMatrix interior_restriction(const OperatorMatrix &m, int maxshift) {
  const int N = m.basis->degree();
  if (maxshift < 0 || maxshift > N)
    throw DomainError("shift budget " + std::to_string(maxshift) +
                      " exceeds degree bound " + std::to_string(N));
  auto cols = maxshift == 0 ? m.basis : TruncatedBasis::make(m.basis->domain(), N - maxshift);
  const auto k = static_cast<Eigen::Index>(cols->size());
  RestrictedMatrix out{m.basis, cols, m.entries.leftCols(k), std::nullopt};
  if (m.entry_errors)
    out.entry_errors = m.entry_errors->leftCols(k);
  return out;
}

RestrictedMatrix interior_restriction(const OperatorMatrix &m,
                                      std::span<const QuasiHomogeneousFactor> factors) {
  return interior_restriction(m, max_shift(factors));
}

double op_norm(const RestrictedMatrix &m, NormKind which) {
  return norm_of(m.entries, which);
}

} // namespace qhqr
