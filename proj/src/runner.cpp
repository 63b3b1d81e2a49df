#include "qhqr/runner.hpp"
#include "qhqr/closed_forms.hpp"
#include "qhqr/symmetry.hpp"
#include "qhqr/toeplitz.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>
#include <yaml-cpp/yaml.h>

#include <chrono>
#include <cmath>
#include <limits>

namespace qhqr {

namespace {

constexpr std::uint64_t kMatrixStream = 1ULL << 32;
constexpr std::uint64_t kSubgroupStream = 2ULL << 32;
constexpr std::uint64_t kPointStream = 3ULL << 32;
constexpr std::uint64_t kGenericStream = 4ULL << 32;

struct Context {
  const ExperimentConfig &cfg;
  DomainSpec d;
  Partition part;
  BasisPtr basis;
  std::vector<QHQRSymbol> symbols;
  std::vector<std::optional<OperatorMatrix>> closed; // lazily filled

  explicit Context(const ExperimentConfig &c)
      : cfg(c), d(c.domain()), part(c.partition()),
        basis(TruncatedBasis::make(d, c.degree)) {
    for (const auto &s : c.symbols)
      symbols.push_back(s.build(part));
    closed.resize(symbols.size());
  }

  const OperatorMatrix &closed_matrix(std::size_t i) {
    if (!closed[i])
      closed[i] = toeplitz_matrix_closed(symbols[i], basis);
    return *closed[i];
  }

  MCConfig mc(std::uint64_t stream) const {
    MCConfig m;
    m.sample_count = cfg.oracle.samples;
    m.seed = derive_seed(cfg.seed, stream);
    m.batch_size = cfg.oracle.batch_size;
    m.threads = cfg.oracle.threads;
    return m;
  }
};

struct Output {
  AssertionLog log;
  std::vector<std::filesystem::path> sidecars;
  YAML::Node timing{YAML::NodeType::Map};
};

YAML::Node flow(std::span<const int> v) {
  YAML::Node n(YAML::NodeType::Sequence);
  for (int x : v)
    n.push_back(x);
  n.SetStyle(YAML::EmitterStyle::Flow);
  return n;
}

YAML::Node flow(const MultiIndex &a) { return flow(a.entries()); }

bool rel_close(double a, double b, double tol) {
  return a == b || std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

double rel_dev(double a, double b) {
  if (a == b)
    return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

bool is_scalar(const SymbolSpec &s) {
  return s.radial.form == RadialSpec::Form::constant && s.nu.is_zero() && s.mu.is_zero();
}

struct Decision {
  std::optional<bool> commutes;
  std::string rule;
};

/// What the theory predicts for [T_a, T_b] over every admissible radial part.
Decision decide(const Context &ctx, std::size_t i, std::size_t j) {
  const auto &a = ctx.cfg.symbols[i];
  const auto &b = ctx.cfg.symbols[j];
  if (is_scalar(a) || is_scalar(b))
    return {true, "scalar"};
  try {
    if (a.nu.is_zero() && a.mu.is_zero())
      return {radial_pair_commutes(ctx.d, ctx.part, b.nu, b.mu), "radial_pair"};
    if (b.nu.is_zero() && b.mu.is_zero())
      return {radial_pair_commutes(ctx.d, ctx.part, a.nu, a.mu), "radial_pair"};
    return {pair_commutes(ctx.d, ctx.part, a.nu, a.mu, b.nu, b.mu), "pair"};
  } catch (const HypothesisError &e) {
    return {std::nullopt, std::string("undecided: ") + e.what()};
  }
}

std::string pair_name(const Context &ctx, std::size_t i, std::size_t j) {
  return ctx.cfg.symbols[i].name + "," + ctx.cfg.symbols[j].name;
}

template <class F> double timed(F &&f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

YAML::Node run_gamma(Context &ctx, Output &out) {
  const auto &tol = ctx.cfg.tol;
  const CoefficientOptions closed{RadialPath::closed_form, 32};
  const CoefficientOptions quad{RadialPath::quadrature, 32};
  YAML::Node res(YAML::NodeType::Sequence);
  for (std::size_t i = 0; i < ctx.symbols.size(); ++i) {
    const auto &sym = ctx.symbols[i];
    const auto &entry = ctx.cfg.symbols[i];
    const bool reducible = all_true(comm_condition(ctx.d, ctx.part, entry.nu, entry.mu));
    YAML::Node node;
    node["symbol"] = entry.name;
    node["reduction_applies"] = reducible;
    double worst_quad = 0.0, worst_red = 0.0;
    YAML::Node rows(YAML::NodeType::Sequence);
    for (const auto &alpha : ctx.basis->indices()) {
      const auto c = gamma_qh(sym, ctx.d, alpha, closed);
      const auto q = gamma_qh(sym, ctx.d, alpha, quad);
      const auto beta = shifted(alpha, entry.nu, entry.mu);
      YAML::Node row;
      row["alpha"] = flow(alpha);
      row["beta"] = beta ? flow(*beta) : YAML::Node(YAML::NodeType::Null);
      row["closed_form"] = c.value;
      row["quadrature"] = q.value;
      row["quadrature_error"] = q.error_estimate;
      worst_quad = std::max(worst_quad, rel_dev(c.value, q.value));
      out.log.check(rel_close(c.value, q.value, tol.quadrature),
                    "gamma.quadrature",
                    fmt::format("{} alpha={} closed={:.17g} quadrature={:.17g}", entry.name,
                                alpha.to_string(), c.value, q.value));
      if (reducible) {
        const auto r = gamma_qh_reduced(sym.radial, ctx.d, ctx.part, entry.nu, entry.mu,
                                        alpha, closed);
        row["reduced"] = r.value;
        worst_red = std::max(worst_red, rel_dev(c.value, r.value));
        out.log.check(rel_close(c.value, r.value, tol.identity), "gamma.reduced",
                      fmt::format("{} alpha={} full={:.17g} reduced={:.17g}", entry.name,
                                  alpha.to_string(), c.value, r.value));
      }
      if (is_scalar(entry)) {
        const double k = entry.radial.terms.at(0).coefficient;
        out.log.check(rel_close(c.value, k, tol.identity), "gamma.constant",
                      fmt::format("{} alpha={} gamma={:.17g} constant={:.17g}", entry.name,
                                  alpha.to_string(), c.value, k));
      }
      rows.push_back(row);
    }
    node["max_rel_dev_quadrature"] = worst_quad;
    if (reducible)
      node["max_rel_dev_reduced"] = worst_red;
    node["rows"] = rows;
    res.push_back(node);
  }
  return res;
}

YAML::Node run_matrix(Context &ctx, Output &out) {
  const auto &cfg = ctx.cfg;
  const auto dir = std::filesystem::path(cfg.out_dir);
  YAML::Node res(YAML::NodeType::Sequence);
  for (std::size_t i = 0; i < ctx.symbols.size(); ++i) {
    const auto &entry = cfg.symbols[i];
    spdlog::debug("matrix {}: dimension {}, {} samples", entry.name, ctx.basis->size(),
                 cfg.oracle.samples);
    const auto &closed = ctx.closed_matrix(i);
    const auto oracle = toeplitz_matrix_oracle(ctx.symbols[i], ctx.basis,
                                               ctx.mc(kMatrixStream + i));
    const auto stem = cfg.report_name + "." + entry.name;
    const auto closed_file = stem + ".closed.csv";
    const auto oracle_file = stem + ".oracle.csv";
    write_file_atomic(dir / closed_file, matrix_csv(closed));
    write_file_atomic(dir / oracle_file, matrix_csv(oracle));
    out.sidecars.push_back(dir / closed_file);
    out.sidecars.push_back(dir / oracle_file);

    double max_dev = 0.0, max_ratio = 0.0;
    int outside = 0;
    bool structure_ok = true;
    const auto dim = static_cast<Eigen::Index>(ctx.basis->size());
    for (Eigen::Index c = 0; c < dim; ++c) {
      const auto beta = shifted(ctx.basis->index(static_cast<std::size_t>(c)), entry.nu,
                                entry.mu);
      const auto target = beta ? ctx.basis->position(*beta) : std::nullopt;
      for (Eigen::Index r = 0; r < dim; ++r) {
        const bool on_shift = target && static_cast<Eigen::Index>(*target) == r;
        if (!on_shift && closed.entries(r, c) != Complex{})
          structure_ok = false;
        const double dev = std::abs(closed.entries(r, c) - oracle.entries(r, c));
        const double se = (*oracle.entry_errors)(r, c);
        max_dev = std::max(max_dev, dev);
        const double ratio = se > 0.0 ? dev / se
                             : dev > 0.0 ? std::numeric_limits<double>::infinity()
                                         : 0.0;
        max_ratio = std::max(max_ratio, ratio);
        if (!(dev <= cfg.tol.sigma * se)) {
          ++outside;
          out.log.check(false, "matrix.oracle",
                        fmt::format("{} entry ({}, {}) off by {:.3g} standard errors",
                                    entry.name, r, c, ratio));
        }
      }
    }
    if (outside == 0)
      out.log.check(true, "matrix.oracle");
    out.log.check(structure_ok, "matrix.structure",
                  entry.name + ": closed-form entry off the shift pattern");

    YAML::Node node;
    node["symbol"] = entry.name;
    node["dimension"] = ctx.basis->size();
    node["closed_csv"] = closed_file;
    node["oracle_csv"] = oracle_file;
    node["oracle_seed"] = ctx.mc(kMatrixStream + i).seed;
    node["max_abs_dev"] = max_dev;
    node["max_dev_in_std_errors"] = max_ratio;
    node["entries_outside_tolerance"] = outside;
    YAML::Node loss(YAML::NodeType::Sequence);
    for (auto c : closed.truncation_loss)
      loss.push_back(c);
    loss.SetStyle(YAML::EmitterStyle::Flow);
    node["truncation_loss_columns"] = loss;
    res.push_back(node);
  }
  return res;
}

struct PairMeasure {
  std::optional<double> max_abs;
  double frobenius = 0.0;
  int restricted_degree = 0;
};

PairMeasure measure_pair(Context &ctx, std::size_t i, std::size_t j) {
  const std::vector<QuasiHomogeneousFactor> f{ctx.symbols[i].factor, ctx.symbols[j].factor};
  const int budget = max_shift(f);
  if (budget > ctx.cfg.degree)
    return {};
  const auto comm = commutator(ctx.closed_matrix(i), ctx.closed_matrix(j));
  const auto r = interior_restriction(comm, budget);
  return {op_norm(r, NormKind::max_abs), op_norm(r, NormKind::frobenius),
          ctx.cfg.degree - budget};
}

/// Checks the measured norm against the predicted verdict; returns agreement.
std::optional<bool> check_dichotomy(const Context &ctx, Output &out, std::size_t i,
                                    std::size_t j, const Decision &dec,
                                    const PairMeasure &m, const char *id) {
  const auto name = pair_name(ctx, i, j);
  if (!m.max_abs) {
    out.log.check(false, std::string(id) + ".budget",
                  name + ": shift budget exceeds the degree; raise degree");
    return std::nullopt;
  }
  if (!dec.commutes)
    return std::nullopt;
  const bool ok = *dec.commutes ? *m.max_abs <= ctx.cfg.tol.commutator
                                : *m.max_abs >= ctx.cfg.tol.separation;
  out.log.check(ok, id,
                fmt::format("{}: predicted {}, restricted max_abs {:.17g}", name,
                            *dec.commutes ? "commuting" : "non-commuting", *m.max_abs));
  return ok;
}

YAML::Node run_pairs(Context &ctx, Output &out, bool verdict_view) {
  const char *id = verdict_view ? "check_pair" : "commutator";
  YAML::Node res(YAML::NodeType::Sequence);
  const auto n = ctx.symbols.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto dec = decide(ctx, i, j);
      const auto m = measure_pair(ctx, i, j);
      const auto agree = check_dichotomy(ctx, out, i, j, dec, m, id);
      YAML::Node node;
      node["pair"] = pair_name(ctx, i, j);
      if (verdict_view) {
        node["verdict"] = dec.commutes ? YAML::Node(*dec.commutes)
                                       : YAML::Node(YAML::NodeType::Null);
        node["rule"] = dec.rule;
      }
      if (m.max_abs) {
        node["restricted_degree"] = m.restricted_degree;
        node["max_abs"] = *m.max_abs;
        node["frobenius"] = m.frobenius;
      } else {
        node["max_abs"] = YAML::Node(YAML::NodeType::Null);
      }
      if (!verdict_view)
        node["predicted_commuting"] = dec.commutes ? YAML::Node(*dec.commutes)
                                                   : YAML::Node(YAML::NodeType::Null);
      node["agrees"] = agree ? YAML::Node(*agree) : YAML::Node(YAML::NodeType::Null);
      res.push_back(node);
    }
  return res;
}

YAML::Node run_check_akh(Context &ctx, Output &out) {
  const ClassParams params{*ctx.cfg.h};
  YAML::Node verdicts(YAML::NodeType::Sequence);
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < ctx.symbols.size(); ++i) {
    const auto &entry = ctx.cfg.symbols[i];
    const auto v = validate_akh(ctx.d, ctx.part, params, ctx.symbols[i]);
    YAML::Node node;
    node["symbol"] = entry.name;
    node["in_class"] = v.ok;
    node["reason"] = reason_code(v.reason);
    node["reason_text"] = to_string(v.reason);
    if (!v.detail.empty())
      node["detail"] = v.detail;
    if (entry.expect_akh) {
      node["expected"] = *entry.expect_akh;
      out.log.check(v.ok == *entry.expect_akh, "check_akh.expected",
                    fmt::format("{}: expected {}, got {} ({})", entry.name,
                                *entry.expect_akh, v.ok, reason_code(v.reason)));
    }
    if (v.ok)
      members.push_back(i);
    verdicts.push_back(node);
  }

  YAML::Node pairs(YAML::NodeType::Sequence);
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      const auto i = members[a], j = members[b];
      const auto dec = decide(ctx, i, j);
      out.log.check(dec.commutes && *dec.commutes, "check_akh.pair_verdict",
                    pair_name(ctx, i, j) + ": class members not predicted to commute (" +
                        dec.rule + ")");
      const auto m = measure_pair(ctx, i, j);
      YAML::Node node;
      node["pair"] = pair_name(ctx, i, j);
      node["rule"] = dec.rule;
      if (m.max_abs) {
        node["max_abs"] = *m.max_abs;
        out.log.check(*m.max_abs <= ctx.cfg.tol.commutator, "check_akh.commutator",
                      fmt::format("{}: restricted max_abs {:.17g}", pair_name(ctx, i, j),
                                  *m.max_abs));
      } else {
        node["max_abs"] = YAML::Node(YAML::NodeType::Null);
        out.log.check(false, "check_akh.budget",
                      pair_name(ctx, i, j) + ": shift budget exceeds the degree");
      }
      pairs.push_back(node);
    }

  YAML::Node res;
  res["class_h"] = flow(*ctx.cfg.h);
  res["symbols"] = verdicts;
  res["member_pairs"] = pairs;
  return res;
}

YAML::Node run_invariance(Context &ctx, Output &out) {
  const auto &cfg = ctx.cfg;
  const auto n = ctx.d.n();
  const auto s = ctx.part.blocks();
  const int G = cfg.invariance.group_samples;
  const auto points = cfg.invariance.points;
  const auto point_seed = derive_seed(cfg.seed, kPointStream);
  // At least 99% of generic draws must behave generically.
  const int generic_needed = G - G / 100;

  std::vector<TorusElement> subgroup, generic;
  int members = 0, generic_members = 0;
  for (int i = 0; i < G; ++i) {
    const auto w = TorusElement::random(s, derive_seed(cfg.seed, kSubgroupStream + i));
    subgroup.push_back(pi_p(embed_tks(w.angles(), ctx.part), ctx.d));
    members += membership_tkp(subgroup.back(), ctx.d, ctx.part, cfg.tol.membership);
    generic.push_back(TorusElement::random(n, derive_seed(cfg.seed, kGenericStream + i)));
    generic_members += membership_tkp(generic.back(), ctx.d, ctx.part, cfg.tol.membership);
  }
  out.log.check(members == G, "invariance.membership",
                fmt::format("{} of {} subgroup images pass the membership test", members, G));
  out.log.check(G - generic_members >= generic_needed, "invariance.generic_membership",
                fmt::format("{} of {} generic elements pass the membership test",
                            generic_members, G));

  YAML::Node syms(YAML::NodeType::Sequence);
  for (std::size_t i = 0; i < ctx.symbols.size(); ++i) {
    const auto &entry = cfg.symbols[i];
    const auto &sym = ctx.symbols[i];
    const bool invariant = all_true(comm_condition(ctx.d, ctx.part, entry.nu, entry.mu));
    spdlog::debug("invariance {}: {} group samples x {} points", entry.name, G, points);
    YAML::Node devs(YAML::NodeType::Sequence);
    double worst = 0.0;
    for (const auto &g : subgroup) {
      const double dev = invariance_max_dev(sym, g, ctx.d, ctx.part, points, point_seed);
      devs.push_back(dev);
      worst = std::max(worst, dev);
    }
    devs.SetStyle(YAML::EmitterStyle::Flow);
    YAML::Node node;
    node["symbol"] = entry.name;
    node["invariant_expected"] = invariant;
    node["subgroup_max_dev"] = worst;
    node["subgroup_devs"] = devs;
    if (invariant)
      out.log.check(worst <= cfg.tol.invariance, "invariance.subgroup",
                    fmt::format("{}: deviation {:.17g}", entry.name, worst));
    // Only nu = mu = 0 is fixed by the whole torus.
    if (!entry.nu.is_zero() || !entry.mu.is_zero()) {
      int moved = 0;
      double least = std::numeric_limits<double>::infinity();
      for (const auto &g : generic) {
        const double dev = invariance_max_dev(sym, g, ctx.d, ctx.part, points, point_seed);
        least = std::min(least, dev);
        moved += dev > cfg.tol.separation;
      }
      node["generic_moved"] = moved;
      node["generic_min_dev"] = least;
      out.log.check(moved >= generic_needed, "invariance.generic",
                    fmt::format("{}: {} of {} generic elements move the symbol", entry.name,
                                moved, G));
    }
    syms.push_back(node);
  }
  YAML::Node res;
  res["group_samples"] = G;
  res["points"] = points;
  res["subgroup_members"] = members;
  res["generic_members"] = generic_members;
  res["symbols"] = syms;
  return res;
}

void require_class(const ExperimentConfig &cfg, Command cmd) {
  if (!cfg.h)
    throw ConfigError({"config: command '" + to_string(cmd) + "' requires class_h"});
}

} // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return CounterRng(seed).bits(stream);
}

std::optional<Command> parse_command(std::string_view name) {
  for (auto c : {Command::gamma, Command::matrix, Command::commutator, Command::check_akh,
                 Command::check_pair, Command::invariance, Command::validate_all})
    if (to_string(c) == name)
      return c;
  return std::nullopt;
}

std::string to_string(Command c) {
  switch (c) {
  case Command::gamma:
    return "gamma";
  case Command::matrix:
    return "matrix";
  case Command::commutator:
    return "commutator";
  case Command::check_akh:
    return "check-akh";
  case Command::check_pair:
    return "check-pair";
  case Command::invariance:
    return "invariance";
  case Command::validate_all:
    return "validate-all";
  }
  return "?";
}

RunResult run(Command cmd, const ExperimentConfig &cfg) {
  if (cmd == Command::check_akh)
    require_class(cfg, cmd);
  Context ctx(cfg);
  Output out;
  YAML::Node results;

  auto section = [&](Command c, auto &&body) {
    const auto key = to_string(c);
    spdlog::debug("running {}", key);
    out.timing[key] = timed([&] { results[key] = body(); });
  };
  auto wants = [&](Command c) { return cmd == c || cmd == Command::validate_all; };

  if (wants(Command::gamma))
    section(Command::gamma, [&] { return run_gamma(ctx, out); });
  if (wants(Command::matrix))
    section(Command::matrix, [&] { return run_matrix(ctx, out); });
  if (wants(Command::commutator))
    section(Command::commutator, [&] { return run_pairs(ctx, out, false); });
  if (wants(Command::check_pair))
    section(Command::check_pair, [&] { return run_pairs(ctx, out, true); });
  if (cmd == Command::check_akh || (cmd == Command::validate_all && cfg.h))
    section(Command::check_akh, [&] { return run_check_akh(ctx, out); });
  if (wants(Command::invariance))
    section(Command::invariance, [&] { return run_invariance(ctx, out); });

  YAML::Node doc;
  doc["command"] = to_string(cmd);
  doc["seed"] = cfg.seed;
  doc["config"] = YAML::Load(config_to_yaml(cfg));
  doc["basis_size"] = ctx.basis->size();
  doc["results"] = results;
  YAML::Node asserts;
  asserts["total"] = out.log.total();
  asserts["failed"] = out.log.failed();
  YAML::Node fails(YAML::NodeType::Sequence);
  for (const auto &f : out.log.failures()) {
    YAML::Node e;
    e["check"] = f.check;
    e["detail"] = f.detail;
    fails.push_back(e);
  }
  asserts["failures"] = fails;
  doc["assertions"] = asserts;
  doc["status"] = out.log.passed() ? "pass" : "fail";
  YAML::Node timing;
  timing["sections_seconds"] = out.timing;
  doc["timing"] = timing;

  YAML::Emitter em;
  em.SetDoublePrecision(17);
  em << doc;

  RunResult r;
  r.command = cmd;
  r.report = std::string(em.c_str()) + "\n";
  r.report_path = std::filesystem::path(cfg.out_dir) / (cfg.report_name + ".yaml");
  write_file_atomic(r.report_path, r.report);
  r.sidecars = std::move(out.sidecars);
  r.assertions = std::move(out.log);
  return r;
}

} // namespace qhqr
