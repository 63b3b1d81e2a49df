#include "qhqr/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace qhqr {

void MCConfig::check() const {
  if (sample_count < 1000)
    throw DomainError("sample_count must be at least 1000");
  if (batch_size == 0)
    throw DomainError("batch_size must be positive");
}

DomainSampler::DomainSampler(DomainSpec d, std::uint64_t seed)
    : d_(std::move(d)), rng_(seed) {}

bool DomainSampler::propose(std::uint64_t i, std::span<Complex> z) const {
  const std::size_t n = d_.n();
  const std::uint64_t base = 2 * n * i;
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double rad = std::sqrt(rng_.uniform(base + 2 * j));
    const double ang = 2.0 * std::numbers::pi * rng_.uniform(base + 2 * j + 1);
    z[j] = std::polar(rad, ang);
    s += std::pow(rad * rad, d_.p(j));
  }
  return s < 1.0;
}

namespace {

std::optional<std::string> acceptance_warning(double rate) {
  if (rate >= 1e-3)
    return std::nullopt;
  std::ostringstream os;
  os << "degenerate acceptance rate " << rate;
  return os.str();
}

std::string describe_point(std::uint64_t i, std::span<const Complex> z) {
  std::ostringstream os;
  os.precision(17);
  os << "proposal " << i << " z = (";
  for (std::size_t j = 0; j < z.size(); ++j)
    os << (j ? ", " : "") << z[j].real() << (z[j].imag() < 0 ? "" : "+")
       << z[j].imag() << "i";
  os << ")";
  return os.str();
}

} // namespace

SampleSet mc_sample_domain(const DomainSpec &d, const MCConfig &cfg) {
  cfg.check();
  DomainSampler sampler(d, cfg.seed);
  SampleSet out;
  ComplexVector z(d.n());
  for (std::uint64_t i = 0; i < cfg.sample_count; ++i)
    if (sampler.propose(i, z))
      out.points.push_back(z);
  out.proposals = cfg.sample_count;
  out.acceptance_rate =
      static_cast<double>(out.points.size()) / static_cast<double>(out.proposals);
  out.warning = acceptance_warning(out.acceptance_rate);
  return out;
}

SampleSet draw_domain_points(const DomainSpec &d, std::uint64_t count,
                             std::uint64_t seed) {
  DomainSampler sampler(d, seed);
  SampleSet out;
  out.points.reserve(count);
  ComplexVector z(d.n());
  std::uint64_t i = 0;
  for (; out.points.size() < count; ++i)
    if (sampler.propose(i, z))
      out.points.push_back(z);
  out.proposals = i;
  out.acceptance_rate = i ? static_cast<double>(count) / static_cast<double>(i) : 0.0;
  out.warning = acceptance_warning(out.acceptance_rate);
  return out;
}

namespace {

struct BatchSums {
  std::vector<double> re, im, re2, im2;
  explicit BatchSums(std::size_t k) : re(k), im(k), re2(k), im2(k) {}
};

} // namespace

std::vector<Estimate> oracle_integrate(const DomainSpec &d, std::size_t outputs,
                                       const VectorIntegrand &f,
                                       const MCConfig &cfg) {
  cfg.check();
  const DomainSampler sampler(d, cfg.seed);
  const std::uint64_t total = cfg.sample_count;
  const std::uint64_t nbatch = (total + cfg.batch_size - 1) / cfg.batch_size;
  std::vector<BatchSums> sums(nbatch, BatchSums(outputs));

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    ComplexVector z(d.n());
    std::vector<Complex> val(outputs);
    for (std::uint64_t b = next++; b < nbatch; b = next++) {
      BatchSums &acc = sums[b];
      const std::uint64_t lo = b * cfg.batch_size;
      const std::uint64_t hi = std::min(total, lo + cfg.batch_size);
      try {
        for (std::uint64_t i = lo; i < hi; ++i) {
          if (!sampler.propose(i, z))
            continue;
          f(z, val);
          for (std::size_t k = 0; k < outputs; ++k) {
            const double x = val[k].real(), y = val[k].imag();
            if (std::isnan(x) || std::isnan(y))
              throw DomainError("integrand is NaN at " + describe_point(i, z));
            acc.re[k] += x;
            acc.im[k] += y;
            acc.re2[k] += x * x;
            acc.im2[k] += y * y;
          }
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
        next = nbatch;
        return;
      }
    }
  };

  unsigned threads = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(nbatch)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back(worker);
    for (auto &th : pool)
      th.join();
  }
  if (failure)
    std::rethrow_exception(failure);

  BatchSums tot(outputs);
  for (const auto &b : sums)
    for (std::size_t k = 0; k < outputs; ++k) {
      tot.re[k] += b.re[k];
      tot.im[k] += b.im[k];
      tot.re2[k] += b.re2[k];
      tot.im2[k] += b.im2[k];
    }

  const double N = static_cast<double>(total);
  const double scale = std::pow(std::numbers::pi, static_cast<double>(d.n()));
  std::vector<Estimate> out(outputs);
  for (std::size_t k = 0; k < outputs; ++k) {
    const double mre = tot.re[k] / N, mim = tot.im[k] / N;
    const double vre = std::max(0.0, (tot.re2[k] - N * mre * mre) / (N - 1.0));
    const double vim = std::max(0.0, (tot.im2[k] - N * mim * mim) / (N - 1.0));
    out[k].value = scale * Complex(mre, mim);
    out[k].std_error = scale * std::sqrt((vre + vim) / N);
    out[k].samples_used = total;
  }
  return out;
}

Complex monomial_value(std::span<const double> log_abs,
                       std::span<const double> arg, const MultiIndex &alpha) {
  double lm = 0.0, ph = 0.0;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (alpha[j] == 0)
      continue;
    lm += alpha[j] * log_abs[j];
    ph += alpha[j] * arg[j];
  }
  return std::polar(std::exp(lm), ph);
}

Estimate oracle_inner(const ScalarFunction &f, const MultiIndex &alpha,
                      const MultiIndex &beta, const DomainSpec &d,
                      const MCConfig &cfg) {
  if (alpha.size() != d.n() || beta.size() != d.n())
    throw DomainError("multi-index length does not match n");
  auto integrand = [&](std::span<const Complex> z, std::span<Complex> out) {
    std::vector<double> la(z.size()), ar(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
      la[j] = std::log(std::abs(z[j]));
      ar[j] = std::arg(z[j]);
    }
    out[0] = f(z) * monomial_value(la, ar, alpha) *
             std::conj(monomial_value(la, ar, beta));
  };
  return oracle_integrate(d, 1, integrand, cfg).front();
}

Estimate oracle_inner(const QHQRSymbol &sym, const MultiIndex &alpha,
                      const MultiIndex &beta, const DomainSpec &d,
                      const MCConfig &cfg) {
  sym.part.check_compatible(d);
  return oracle_inner(
      [&](std::span<const Complex> z) {
        // Undefined strata have measure zero.
        if (!symbol_defined_at(sym, z, d))
          return Complex{};
        return eval_symbol(sym, z, d);
      },
      alpha, beta, d, cfg);
}

GaussRule gauss_legendre(int points) {
  if (points < 1 || points > 256)
    throw DomainError("Gauss-Legendre point count out of range");
  const int n = points;
  GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1, 1] -> [0, 1].
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

GaussRule gauss_jacobi(int points, double a, double b) {
  if (points < 1 || points > 256)
    throw DomainError("Gauss-Jacobi point count out of range");
  if (!(a > -1.0) || !(b > -1.0))
    throw DomainError("Gauss-Jacobi exponents must exceed -1");
  // Golub-Welsch on [-1, 1] with weight (1 - t)^al (1 + t)^be, x = (1 + t) / 2.
  const double al = b, be = a;
  const int n = points;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  J(0, 0) = (be - al) / (al + be + 2.0);
  for (int k = 1; k < n; ++k) {
    const double ab = 2.0 * k + al + be;
    J(k, k) = (be * be - al * al) / (ab * (ab + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double ab = 2.0 * k + al + be;
    double b2;
    if (k == 1)
      b2 = 4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + al + be) * (2.0 + al + be) * (3.0 + al + be));
    else
      b2 = 4.0 * k * (k + al) * (k + be) * (k + al + be) /
           (ab * ab * (ab + 1.0) * (ab - 1.0));
    J(k, k - 1) = J(k - 1, k) = std::sqrt(b2);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  // Total mass of x^a (1 - x)^b on [0, 1].
  const double mass = std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                               std::lgamma(a + b + 2.0));
  GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = 0.5 * (1.0 + eig.eigenvalues()(i));
    const double v = eig.eigenvectors()(0, i);
    rule.weights[i] = mass * v * v;
  }
  return rule;
}

namespace {

// Angles carry cos/sin powers; eight extra points bring monomials of degree
// <= 2 degree to round-off.
int angular_rule_points(int degree) { return degree + 8; }

void check_simplex_args(std::size_t s, int degree) {
  if (s < 1 || s > 4)
    throw DomainError("simplex quadrature supports 1 <= s <= 4, got s = " +
                      std::to_string(s));
  if (degree < 1 || degree > 64)
    throw DomainError("simplex quadrature supports 1 <= degree <= 64, got " +
                      std::to_string(degree));
}

/// Hyperspherical product rule for prod_j r_j^(e_j - 1) dr. With
/// r = R (cos t_1, sin t_1 cos t_2, ..., sin t_1 ... sin t_{s-1}) the weight
/// is R^(|e| - 1) dR times, per angle, cos^(e_i - 1) t_i sin^(e_{i+1} + ... - 1) t_i.
/// The radius gets a Gauss-Jacobi rule for R^(|e| - 1); angle t = pi phi / 2
/// gets one for phi^(sin exp) (1 - phi)^(cos exp), leaving the analytic
/// factors (cos t / (1 - phi))^. (sin t / phi)^. in the integrand.
template <class Visit>
void visit_simplex_nodes(std::span<const double> e, int degree, Visit &&visit) {
  const std::size_t s = e.size();
  check_simplex_args(s, degree);
  double total = 0.0;
  for (double x : e) {
    if (!(x > 0.0))
      throw DomainError("simplex weight exponents must be positive");
    total += x;
  }
  const GaussRule radius = gauss_jacobi(degree + 1, total - 1.0, 0.0);
  const int angular_points = angular_rule_points(degree);
  struct Angle {
    std::vector<double> cos_t, sin_t, w;
  };
  std::vector<Angle> angles(s - 1);
  const double half_pi = 0.5 * std::numbers::pi;
  double tail = total;
  for (std::size_t i = 0; i + 1 < s; ++i) {
    tail -= e[i];
    const double ce = e[i] - 1.0, se = tail - 1.0;
    const GaussRule g = gauss_jacobi(angular_points, se, ce);
    auto &a = angles[i];
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
      const double phi = g.nodes[k];
      const double t = half_pi * phi;
      const double c = std::cos(t), sn = std::sin(t);
      // (cos t / (1 - phi))^ce (sin t / phi)^se, both ratios analytic.
      const double rc = (1.0 - phi) > 0 ? c / (1.0 - phi) : half_pi;
      const double rs = phi > 0 ? sn / phi : half_pi;
      a.cos_t.push_back(c);
      a.sin_t.push_back(sn);
      a.w.push_back(half_pi * g.weights[k] * std::pow(rc, ce) * std::pow(rs, se));
    }
  }

  std::vector<std::size_t> idx(s, 0);
  std::vector<std::size_t> size(s, static_cast<std::size_t>(angular_points));
  size[0] = static_cast<std::size_t>(degree + 1);
  std::vector<double> r(s);
  while (true) {
    const double R = radius.nodes[idx[0]];
    double w = radius.weights[idx[0]];
    double sin_prod = R;
    for (std::size_t i = 0; i + 1 < s; ++i) {
      const auto &a = angles[i];
      const std::size_t k = idx[i + 1];
      w *= a.w[k];
      r[i] = sin_prod * a.cos_t[k];
      sin_prod *= a.sin_t[k];
    }
    r[s - 1] = sin_prod;
    visit(std::span<const double>(r), w);

    std::size_t k = 0;
    while (k < s && ++idx[k] == size[k])
      idx[k++] = 0;
    if (k == s)
      break;
  }
}

} // namespace

std::vector<SimplexNode> simplex_quadrature(int s, int degree) {
  if (s < 1 || s > 4)
    check_simplex_args(static_cast<std::size_t>(std::max(s, 0)), degree);
  const std::vector<double> ones(static_cast<std::size_t>(s), 1.0);
  std::vector<SimplexNode> out;
  visit_simplex_nodes(ones, degree, [&](std::span<const double> r, double w) {
    out.push_back({std::vector<double>(r.begin(), r.end()), w});
  });
  return out;
}

double integrate_simplex(int s, int degree,
                         const std::function<double(std::span<const double>)> &f) {
  if (s < 1 || s > 4)
    check_simplex_args(static_cast<std::size_t>(std::max(s, 0)), degree);
  const std::vector<double> ones(static_cast<std::size_t>(s), 1.0);
  return integrate_simplex_weighted(ones, degree, f);
}

double integrate_simplex_weighted(std::span<const double> e, int degree,
                                  const std::function<double(std::span<const double>)> &f) {
  double acc = 0.0;
  visit_simplex_nodes(e, degree,
                      [&](std::span<const double> r, double w) { acc += w * f(r); });
  return acc;
}

} // namespace qhqr
