#include "qhqr/symbol.hpp"

#include <cmath>

namespace qhqr {

namespace {

void check_term(const RadialTerm &t) {
  if (!std::isfinite(t.coefficient))
    throw DomainError("radial coefficient must be finite");
  for (double e : t.exponents)
    if (!std::isfinite(e) || e < 0.0)
      throw DomainError("radial exponents must be finite and nonnegative "
                        "(symbol must be bounded)");
}

Complex int_power(Complex x, int k) {
  Complex out{1.0, 0.0};
  for (int i = 0; i < k; ++i)
    out *= x;
  return out;
}

} // namespace

QuasiRadialSymbol QuasiRadialSymbol::constant(double c) {
  QuasiRadialSymbol a;
  a.kind_ = Kind::constant;
  a.terms_ = {RadialTerm{c, {}}};
  check_term(a.terms_.front());
  a.sup_ = std::abs(c);
  a.label_ = "constant";
  return a;
}

QuasiRadialSymbol QuasiRadialSymbol::monomial(std::vector<double> exponents,
                                              double coefficient) {
  QuasiRadialSymbol a;
  a.kind_ = Kind::radial_monomial;
  a.terms_ = {RadialTerm{coefficient, std::move(exponents)}};
  check_term(a.terms_.front());
  a.sup_ = std::abs(coefficient);
  a.label_ = "radial_monomial";
  return a;
}

QuasiRadialSymbol QuasiRadialSymbol::combination(std::vector<RadialTerm> terms) {
  if (terms.empty())
    throw DomainError("linear combination needs at least one term");
  QuasiRadialSymbol a;
  a.kind_ = Kind::linear_combination;
  for (const auto &t : terms) {
    check_term(t);
    a.sup_ += std::abs(t.coefficient);
  }
  a.terms_ = std::move(terms);
  a.label_ = "linear_combination";
  return a;
}

QuasiRadialSymbol QuasiRadialSymbol::opaque(Function f, double sup_bound,
                                            std::string label) {
  if (!f)
    throw DomainError("opaque symbol needs a callable");
  if (!std::isfinite(sup_bound) || sup_bound < 0.0)
    throw DomainError("opaque symbol needs a finite bound");
  QuasiRadialSymbol a;
  a.kind_ = Kind::opaque;
  a.fn_ = std::move(f);
  a.sup_ = sup_bound;
  a.label_ = std::move(label);
  return a;
}

std::vector<RadialTerm> QuasiRadialSymbol::terms(std::size_t s) const {
  if (!has_closed_form())
    throw DomainError("opaque symbol has no closed-form terms");
  check_blocks(s);
  std::vector<RadialTerm> out = terms_;
  for (auto &t : out)
    if (t.exponents.empty())
      t.exponents.assign(s, 0.0);
  return out;
}

void QuasiRadialSymbol::check_blocks(std::size_t s) const {
  for (const auto &t : terms_)
    if (!t.exponents.empty() && t.exponents.size() != s)
      throw DomainError("radial term has " + std::to_string(t.exponents.size()) +
                        " exponents, partition has " + std::to_string(s) +
                        " blocks");
}

double QuasiRadialSymbol::operator()(std::span<const double> r) const {
  if (kind_ == Kind::opaque)
    return fn_(r);
  double v = 0.0;
  for (const auto &t : terms_) {
    double m = t.coefficient;
    for (std::size_t j = 0; j < t.exponents.size(); ++j)
      if (t.exponents[j] != 0.0)
        m *= std::pow(r[j], t.exponents[j]);
    v += m;
  }
  return v;
}

double QuasiRadialSymbol::sup_bound() const { return sup_; }

QHQRSymbol::QHQRSymbol(Partition part_, QuasiRadialSymbol radial_,
                       QuasiHomogeneousFactor factor_, std::string name_)
    : part(std::move(part_)), radial(std::move(radial_)),
      factor(std::move(factor_)), name(std::move(name_)) {
  radial.check_blocks(part.blocks());
  if (factor.nu.size() != part.total() || factor.mu.size() != part.total())
    throw DomainError("quasi-homogeneous exponents must have length " +
                      std::to_string(part.total()));
}

QHQRSymbol::QHQRSymbol(Partition part_, QuasiRadialSymbol radial_,
                       std::string name_)
    : QHQRSymbol(part_, std::move(radial_),
                 QuasiHomogeneousFactor::trivial(part_.total()),
                 std::move(name_)) {}

bool symbol_defined_at(const QHQRSymbol &sym, std::span<const Complex> z,
                       const DomainSpec &d) {
  const auto r = group_radii(z, d, sym.part);
  for (std::size_t j = 0; j < sym.part.blocks(); ++j) {
    if (r[j] > 0.0)
      continue;
    for (std::size_t t = sym.part.begin(j); t < sym.part.end(j); ++t)
      if (sym.factor.nu[t] != 0 || sym.factor.mu[t] != 0)
        return false;
  }
  return true;
}

Complex eval_symbol(const QHQRSymbol &sym, std::span<const Complex> z,
                    const DomainSpec &d) {
  const auto r = group_radii(z, d, sym.part);
  Complex phi{1.0, 0.0};
  for (std::size_t j = 0; j < sym.part.blocks(); ++j) {
    for (std::size_t t = sym.part.begin(j); t < sym.part.end(j); ++t) {
      const int nu = sym.factor.nu[t], mu = sym.factor.mu[t];
      if (nu == 0 && mu == 0)
        continue;
      if (r[j] == 0.0)
        throw DomainError("symbol undefined on stratum: block " +
                          std::to_string(j + 1) + " vanishes");
      const Complex xi = z[t] / std::pow(r[j], 1.0 / d.p(t));
      phi *= int_power(xi, nu) * int_power(std::conj(xi), mu);
    }
  }
  return sym.radial(r) * phi;
}

std::vector<bool> comm_condition(const DomainSpec &d, const Partition &part,
                                 const MultiIndex &nu, const MultiIndex &mu) {
  part.check_compatible(d);
  if (nu.size() != d.n() || mu.size() != d.n())
    throw DomainError("multi-index length does not match n");
  const MultiIndex lam = lambda_p(d);
  std::vector<bool> out(part.blocks());
  for (std::size_t j = 0; j < part.blocks(); ++j) {
    long acc = 0;
    for (std::size_t t = part.begin(j); t < part.end(j); ++t)
      acc += static_cast<long>(lam[t]) * (nu[t] - mu[t]);
    out[j] = (acc == 0);
  }
  return out;
}

void ClassParams::check(const Partition &part) const {
  if (h.size() != part.blocks())
    throw DomainError("class parameter h has " + std::to_string(h.size()) +
                      " entries, partition has " +
                      std::to_string(part.blocks()) + " blocks");
  for (std::size_t j = 0; j < h.size(); ++j)
    if (h[j] < 1 || h[j] > part.size(j) - 1)
      throw DomainError("h_" + std::to_string(j + 1) + " = " +
                        std::to_string(h[j]) + " outside [1, k_j - 1] = [1, " +
                        std::to_string(part.size(j) - 1) + "]");
}

std::string to_string(AkhReason r) {
  switch (r) {
  case AkhReason::ok:
    return "ok";
  case AkhReason::invalid_class_params:
    return "invalid class parameters h";
  case AkhReason::partition_mismatch:
    return "symbol partition differs from class partition";
  case AkhReason::not_orthogonal:
    return "ν·μ ≠ 0";
  case AkhReason::comm_condition_failed:
    return "per-block condition Λ(p)_(j)·(ν_(j) − μ_(j)) = 0 fails";
  case AkhReason::nu_support:
    return "ν_(j) nonzero at a position > h_j";
  case AkhReason::mu_support:
    return "μ_(j) nonzero at a position ≤ h_j";
  }
  return "unknown";
}

std::string reason_code(AkhReason r) {
  switch (r) {
  case AkhReason::ok:
    return "ok";
  case AkhReason::invalid_class_params:
    return "invalid_class_params";
  case AkhReason::partition_mismatch:
    return "partition_mismatch";
  case AkhReason::not_orthogonal:
    return "not_orthogonal";
  case AkhReason::comm_condition_failed:
    return "comm_condition_failed";
  case AkhReason::nu_support:
    return "nu_support";
  case AkhReason::mu_support:
    return "mu_support";
  }
  return "unknown";
}

AkhVerdict validate_akh(const DomainSpec &d, const Partition &part,
                        const ClassParams &params, const QHQRSymbol &sym) {
  try {
    params.check(part);
  } catch (const DomainError &e) {
    return {false, AkhReason::invalid_class_params, e.what()};
  }
  // Clause (1): the symbol has the form a xi^nu conj(xi)^mu over k.
  if (part.total() != d.n())
    return {false, AkhReason::partition_mismatch,
            "|k| = " + std::to_string(part.total()) + ", n = " + std::to_string(d.n())};
  if (!(sym.part == part))
    return {false, AkhReason::partition_mismatch, "symbol uses a different partition"};
  const auto &nu = sym.factor.nu;
  const auto &mu = sym.factor.mu;
  if (nu.size() != d.n() || mu.size() != d.n())
    return {false, AkhReason::partition_mismatch, "exponent length differs from n"};
  if (!sym.factor.orthogonal())
    return {false, AkhReason::not_orthogonal,
            "ν = " + nu.to_string() + ", μ = " + mu.to_string()};
  const auto cc = comm_condition(d, part, nu, mu);
  for (std::size_t j = 0; j < cc.size(); ++j)
    if (!cc[j])
      return {false, AkhReason::comm_condition_failed,
              "block " + std::to_string(j + 1)};
  auto where = [](std::size_t j, int local) {
    return "block " + std::to_string(j + 1) + ", position " + std::to_string(local);
  };
  for (std::size_t j = 0; j < part.blocks(); ++j)
    for (std::size_t t = part.begin(j); t < part.end(j); ++t) {
      const int local = static_cast<int>(t - part.begin(j)) + 1;
      if (local > params.h[j] && nu[t] != 0)
        return {false, AkhReason::nu_support, where(j, local)};
    }
  for (std::size_t j = 0; j < part.blocks(); ++j)
    for (std::size_t t = part.begin(j); t < part.end(j); ++t) {
      const int local = static_cast<int>(t - part.begin(j)) + 1;
      if (local <= params.h[j] && mu[t] != 0)
        return {false, AkhReason::mu_support, where(j, local)};
    }
  return {true, AkhReason::ok, {}};
}

bool pair_commutes(const DomainSpec &d, const Partition &part,
                   const MultiIndex &nu, const MultiIndex &mu,
                   const MultiIndex &sigma, const MultiIndex &eta) {
  if (dot(nu, mu) != 0)
    throw HypothesisError("hypothesis ν ⊥ μ violated");
  if (dot(sigma, eta) != 0)
    throw HypothesisError("hypothesis σ ⊥ η violated");
  if (!all_true(comm_condition(d, part, nu, mu)))
    throw HypothesisError("per-block condition fails for (ν, μ)");
  if (!all_true(comm_condition(d, part, sigma, eta)))
    throw HypothesisError("per-block condition fails for (σ, η)");
  for (std::size_t s = 0; s < d.n(); ++s) {
    const bool c1 = nu[s] == 0 && mu[s] == 0;
    const bool c2 = sigma[s] == 0 && eta[s] == 0;
    const bool c3 = nu[s] == 0 && sigma[s] == 0;
    const bool c4 = mu[s] == 0 && eta[s] == 0;
    if (!(c1 || c2 || c3 || c4))
      return false;
  }
  return true;
}

bool radial_pair_commutes(const DomainSpec &d, const Partition &part,
                          const MultiIndex &nu, const MultiIndex &mu) {
  if (dot(nu, mu) != 0)
    throw HypothesisError("hypothesis ν ⊥ μ violated");
  return all_true(comm_condition(d, part, nu, mu));
}

} // namespace qhqr
