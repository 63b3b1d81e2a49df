#include "qhqr/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qhqr {

namespace {

std::string join_lines(const std::vector<std::string> &lines) {
  std::string out = "invalid config";
  for (const auto &l : lines)
    out += "\n  " + l;
  return out;
}

/// Collects diagnostics keyed by source position.
class Diagnostics {
public:
  explicit Diagnostics(std::string source) : source_(std::move(source)) {}

  void add(const YAML::Mark &m, const std::string &msg) {
    std::ostringstream s;
    s << source_ << ':';
    if (m.is_null())
      s << "?:?";
    else
      s << m.line + 1 << ':' << m.column + 1;
    s << ": " << msg;
    lines_.push_back(s.str());
  }
  bool empty() const { return lines_.empty(); }
  std::vector<std::string> take() { return std::move(lines_); }

private:
  std::string source_;
  std::vector<std::string> lines_;
};

class Reader {
public:
  explicit Reader(Diagnostics &diag) : diag_(diag) {}

  /// Flags keys of `map` outside `allowed`; false when `map` is not a map.
  bool check_map(const YAML::Node &map, const std::string &where,
                 std::initializer_list<const char *> allowed) {
    if (!map.IsMap()) {
      diag_.add(map.Mark(), where + " must be a mapping");
      return false;
    }
    for (const auto &kv : map) {
      const auto key = kv.first.Scalar();
      bool ok = false;
      for (const char *a : allowed)
        ok = ok || key == a;
      if (!ok)
        diag_.add(kv.first.Mark(), "unknown key '" + key + "' in " + where);
    }
    return true;
  }

  template <class T>
  std::optional<T> scalar(const YAML::Node &node, const std::string &what) {
    if (!node.IsScalar()) {
      diag_.add(node.Mark(), what + " must be a scalar");
      return std::nullopt;
    }
    try {
      return node.as<T>();
    } catch (const YAML::Exception &) {
      diag_.add(node.Mark(), what + ": cannot read '" + node.Scalar() + "' as " +
                                 type_name<T>());
      return std::nullopt;
    }
  }

  std::optional<double> finite(const YAML::Node &node, const std::string &what) {
    auto v = scalar<double>(node, what);
    if (v && !std::isfinite(*v)) {
      diag_.add(node.Mark(), what + " must be finite");
      return std::nullopt;
    }
    return v;
  }

  template <class T>
  std::optional<std::vector<T>> list(const YAML::Node &node, const std::string &what) {
    if (!node.IsSequence()) {
      diag_.add(node.Mark(), what + " must be a list");
      return std::nullopt;
    }
    std::vector<T> out;
    bool ok = true;
    for (std::size_t i = 0; i < node.size(); ++i) {
      auto v = scalar<T>(node[i], what + "[" + std::to_string(i) + "]");
      if (v)
        out.push_back(*v);
      else
        ok = false;
    }
    if (!ok)
      return std::nullopt;
    return out;
  }

  void error(const YAML::Node &node, const std::string &msg) { diag_.add(node.Mark(), msg); }

private:
  template <class T> static const char *type_name() {
    if constexpr (std::is_same_v<T, double>)
      return "a real number";
    else if constexpr (std::is_same_v<T, bool>)
      return "a boolean";
    else if constexpr (std::is_same_v<T, std::string>)
      return "a string";
    else if constexpr (std::is_unsigned_v<T>)
      return "a nonnegative integer";
    else
      return "an integer";
  }

  Diagnostics &diag_;
};

std::optional<RadialSpec> read_radial(Reader &rd, const YAML::Node &node,
                                      const std::string &where) {
  if (!rd.check_map(node, where, {"constant", "monomial", "coefficient", "terms"}))
    return std::nullopt;
  const int forms = (node["constant"] ? 1 : 0) + (node["monomial"] ? 1 : 0) +
                    (node["terms"] ? 1 : 0);
  if (forms != 1) {
    rd.error(node, where + " needs exactly one of constant, monomial, terms");
    return std::nullopt;
  }
  RadialSpec r;
  if (node["constant"]) {
    if (node["coefficient"])
      rd.error(node["coefficient"], "coefficient applies to monomial only");
    auto c = rd.finite(node["constant"], where + ".constant");
    if (!c)
      return std::nullopt;
    r.form = RadialSpec::Form::constant;
    r.terms = {{*c, {}}};
    return r;
  }
  if (node["monomial"]) {
    auto e = rd.list<double>(node["monomial"], where + ".monomial");
    double c = 1.0;
    if (node["coefficient"]) {
      auto cv = rd.finite(node["coefficient"], where + ".coefficient");
      if (!cv)
        return std::nullopt;
      c = *cv;
    }
    if (!e)
      return std::nullopt;
    r.form = RadialSpec::Form::monomial;
    r.terms = {{c, *e}};
    return r;
  }
  if (node["coefficient"])
    rd.error(node["coefficient"], "coefficient applies to monomial only");
  const auto &terms = node["terms"];
  if (!terms.IsSequence() || terms.size() == 0) {
    rd.error(terms, where + ".terms must be a nonempty list");
    return std::nullopt;
  }
  r.form = RadialSpec::Form::combination;
  bool ok = true;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto w = where + ".terms[" + std::to_string(i) + "]";
    const auto &t = terms[i];
    if (!rd.check_map(t, w, {"coefficient", "exponents"})) {
      ok = false;
      continue;
    }
    if (!t["coefficient"] || !t["exponents"]) {
      rd.error(t, w + " needs coefficient and exponents");
      ok = false;
      continue;
    }
    auto c = rd.finite(t["coefficient"], w + ".coefficient");
    auto e = rd.list<double>(t["exponents"], w + ".exponents");
    if (c && e)
      r.terms.push_back({*c, *e});
    else
      ok = false;
  }
  if (!ok)
    return std::nullopt;
  return r;
}

std::optional<MultiIndex> read_index(Reader &rd, const YAML::Node &node,
                                     const std::string &what) {
  auto v = rd.list<int>(node, what);
  if (!v)
    return std::nullopt;
  for (int x : *v)
    if (x < 0) {
      rd.error(node, what + " entries must be nonnegative");
      return std::nullopt;
    }
  return MultiIndex(*v);
}

ExperimentConfig parse_node(const YAML::Node &root, Diagnostics &diag) {
  Reader rd(diag);
  ExperimentConfig cfg;
  if (!rd.check_map(root, "config",
                    {"seed", "domain", "partition", "class_h", "degree", "oracle",
                     "tolerances", "invariance", "symbols", "output"}))
    throw ConfigError(diag.take());

  if (!root["seed"])
    rd.error(root, "missing required key 'seed'");
  else if (auto s = rd.scalar<std::uint64_t>(root["seed"], "seed"))
    cfg.seed = *s;

  bool have_p = false;
  std::optional<std::size_t> declared_n;
  if (!root["domain"]) {
    rd.error(root, "missing required key 'domain'");
  } else if (rd.check_map(root["domain"], "domain", {"n", "p"})) {
    const auto &dom = root["domain"];
    if (dom["n"])
      if (auto n = rd.scalar<int>(dom["n"], "domain.n")) {
        if (*n < 1)
          rd.error(dom["n"], "domain.n must be positive");
        else
          declared_n = static_cast<std::size_t>(*n);
      }
    if (!dom["p"]) {
      rd.error(dom, "missing required key 'domain.p'");
    } else if (auto p = rd.list<int>(dom["p"], "domain.p")) {
      have_p = true;
      if (p->empty()) {
        rd.error(dom["p"], "domain.p must be nonempty");
        have_p = false;
      }
      for (int x : *p)
        if (x < 1) {
          rd.error(dom["p"], "domain.p entries must be positive integers");
          have_p = false;
          break;
        }
      cfg.p = *p;
      if (have_p && declared_n && *declared_n != p->size())
        rd.error(dom["n"], "domain.n = " + std::to_string(*declared_n) +
                               " but p has " + std::to_string(p->size()) + " entries");
    }
  }
  const std::size_t n = cfg.p.size();

  bool have_k = false;
  if (!root["partition"]) {
    if (have_p) {
      cfg.k = {static_cast<int>(n)};
      have_k = true;
    }
  } else if (auto k = rd.list<int>(root["partition"], "partition")) {
    have_k = !k->empty();
    int sum = 0;
    for (int x : *k) {
      if (x < 1)
        have_k = false;
      sum += x;
    }
    if (!have_k)
      rd.error(root["partition"], "partition entries must be positive");
    else if (have_p && static_cast<std::size_t>(sum) != n) {
      rd.error(root["partition"], "partition sums to " + std::to_string(sum) +
                                      ", expected n = " + std::to_string(n));
      have_k = false;
    }
    cfg.k = *k;
  }
  const std::size_t s = have_k ? cfg.k.size() : 0;

  if (root["class_h"])
    if (auto h = rd.list<int>(root["class_h"], "class_h")) {
      if (have_k) {
        if (h->size() != s)
          rd.error(root["class_h"], "class_h has " + std::to_string(h->size()) +
                                        " entries, expected one per block (" +
                                        std::to_string(s) + ")");
        else
          for (std::size_t j = 0; j < s; ++j)
            if ((*h)[j] < 1 || (*h)[j] > cfg.k[j] - 1)
              rd.error(root["class_h"],
                       "class_h[" + std::to_string(j) + "] = " +
                           std::to_string((*h)[j]) + " outside [1, " +
                           std::to_string(cfg.k[j] - 1) + "]");
      }
      cfg.h = *h;
    }

  if (!root["degree"])
    rd.error(root, "missing required key 'degree'");
  else if (auto N = rd.scalar<int>(root["degree"], "degree")) {
    if (*N < 0 || *N > 40)
      rd.error(root["degree"], "degree must lie in [0, 40]");
    cfg.degree = *N;
  }

  if (root["oracle"] &&
      rd.check_map(root["oracle"], "oracle", {"samples", "batch_size", "threads"})) {
    const auto &o = root["oracle"];
    if (o["samples"])
      if (auto v = rd.scalar<std::uint64_t>(o["samples"], "oracle.samples")) {
        if (*v < 1000)
          rd.error(o["samples"], "oracle.samples must be at least 1000");
        cfg.oracle.samples = *v;
      }
    if (o["batch_size"])
      if (auto v = rd.scalar<std::uint64_t>(o["batch_size"], "oracle.batch_size")) {
        if (*v < 1)
          rd.error(o["batch_size"], "oracle.batch_size must be positive");
        cfg.oracle.batch_size = *v;
      }
    if (o["threads"])
      if (auto v = rd.scalar<unsigned>(o["threads"], "oracle.threads"))
        cfg.oracle.threads = *v;
  }

  if (root["tolerances"] &&
      rd.check_map(root["tolerances"], "tolerances",
                   {"identity", "quadrature", "sigma", "commutator", "separation",
                    "invariance", "membership"})) {
    const auto &t = root["tolerances"];
    auto read = [&](const char *key, double &slot) {
      if (!t[key])
        return;
      if (auto v = rd.finite(t[key], std::string("tolerances.") + key)) {
        if (!(*v > 0.0))
          rd.error(t[key], std::string("tolerances.") + key + " must be positive");
        slot = *v;
      }
    };
    read("identity", cfg.tol.identity);
    read("quadrature", cfg.tol.quadrature);
    read("sigma", cfg.tol.sigma);
    read("commutator", cfg.tol.commutator);
    read("separation", cfg.tol.separation);
    read("invariance", cfg.tol.invariance);
    read("membership", cfg.tol.membership);
  }

  if (root["invariance"] &&
      rd.check_map(root["invariance"], "invariance", {"group_samples", "points"})) {
    const auto &iv = root["invariance"];
    if (iv["group_samples"])
      if (auto v = rd.scalar<int>(iv["group_samples"], "invariance.group_samples")) {
        if (*v < 1)
          rd.error(iv["group_samples"], "invariance.group_samples must be positive");
        cfg.invariance.group_samples = *v;
      }
    if (iv["points"])
      if (auto v = rd.scalar<std::uint64_t>(iv["points"], "invariance.points")) {
        if (*v < 1)
          rd.error(iv["points"], "invariance.points must be positive");
        cfg.invariance.points = *v;
      }
  }

  if (root["output"] && rd.check_map(root["output"], "output", {"dir", "report"})) {
    const auto &o = root["output"];
    if (o["dir"])
      if (auto v = rd.scalar<std::string>(o["dir"], "output.dir"))
        cfg.out_dir = *v;
    if (o["report"])
      if (auto v = rd.scalar<std::string>(o["report"], "output.report")) {
        if (v->empty() || v->find('/') != std::string::npos)
          rd.error(o["report"], "output.report must be a plain file stem");
        cfg.report_name = *v;
      }
  }

  if (!root["symbols"]) {
    rd.error(root, "missing required key 'symbols'");
  } else if (!root["symbols"].IsSequence()) {
    rd.error(root["symbols"], "symbols must be a list");
  } else {
    std::set<std::string> names;
    const auto &list = root["symbols"];
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto &node = list[i];
      const auto where = "symbols[" + std::to_string(i) + "]";
      if (!rd.check_map(node, where, {"name", "radial", "nu", "mu", "expect_akh"}))
        continue;
      SymbolSpec sym;
      bool ok = true;
      if (node["name"]) {
        if (auto v = rd.scalar<std::string>(node["name"], where + ".name"))
          sym.name = *v;
      } else {
        sym.name = "s" + std::to_string(i + 1);
      }
      if (!names.insert(sym.name).second)
        rd.error(node, "duplicate symbol name '" + sym.name + "'");

      if (!node["radial"]) {
        sym.radial = {RadialSpec::Form::constant, {{1.0, {}}}};
      } else if (auto r = read_radial(rd, node["radial"], where + ".radial")) {
        sym.radial = *r;
        if (have_k)
          for (const auto &t : r->terms)
            if (!t.exponents.empty() && t.exponents.size() != s) {
              rd.error(node["radial"], where + ".radial has " +
                                           std::to_string(t.exponents.size()) +
                                           " exponents, expected one per block (" +
                                           std::to_string(s) + ")");
              break;
            }
      } else {
        ok = false;
      }

      auto read_exp = [&](const char *key) -> std::optional<MultiIndex> {
        if (!node[key])
          return have_p ? std::optional(MultiIndex::zeros(n)) : std::nullopt;
        auto v = read_index(rd, node[key], where + "." + key);
        if (v && have_p && v->size() != n) {
          rd.error(node[key], where + "." + key + " has length " +
                                  std::to_string(v->size()) + ", expected n = " +
                                  std::to_string(n));
          return std::nullopt;
        }
        return v;
      };
      auto nu = read_exp("nu");
      auto mu = read_exp("mu");
      if (nu && mu) {
        sym.nu = *nu;
        sym.mu = *mu;
        if (nu->size() == mu->size() && dot(*nu, *mu) != 0)
          rd.error(node, where + ": nu and mu are not orthogonal");
      } else {
        ok = false;
      }
      if (node["expect_akh"])
        if (auto v = rd.scalar<bool>(node["expect_akh"], where + ".expect_akh"))
          sym.expect_akh = *v;
      if (ok)
        cfg.symbols.push_back(std::move(sym));
    }
    if (list.size() == 0)
      rd.error(list, "symbols must be nonempty");
  }

  if (!diag.empty())
    throw ConfigError(diag.take());
  return cfg;
}

YAML::Node parse_text(const std::string &text, const std::string &source) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException &e) {
    Diagnostics diag(source);
    diag.add(e.mark, e.msg);
    throw ConfigError(diag.take());
  }
}

void emit_ints(YAML::Emitter &out, std::span<const int> v) {
  out << YAML::Flow << YAML::BeginSeq;
  for (int x : v)
    out << x;
  out << YAML::EndSeq;
}

void emit_doubles(YAML::Emitter &out, const std::vector<double> &v) {
  out << YAML::Flow << YAML::BeginSeq;
  for (double x : v)
    out << x;
  out << YAML::EndSeq;
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> diagnostics)
    : std::runtime_error(join_lines(diagnostics)), diagnostics_(std::move(diagnostics)) {}

QuasiRadialSymbol RadialSpec::build() const {
  switch (form) {
  case Form::constant:
    return QuasiRadialSymbol::constant(terms.at(0).coefficient);
  case Form::monomial:
    return QuasiRadialSymbol::monomial(terms.at(0).exponents, terms.at(0).coefficient);
  case Form::combination:
    break;
  }
  return QuasiRadialSymbol::combination(terms);
}

QHQRSymbol SymbolSpec::build(const Partition &part) const {
  return QHQRSymbol(part, radial.build(), QuasiHomogeneousFactor{nu, mu}, name);
}

ExperimentConfig parse_config_string(const std::string &text, const std::string &source) {
  Diagnostics diag(source);
  return parse_node(parse_text(text, source), diag);
}

ExperimentConfig parse_config_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError({path + ": cannot open file"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_string(buf.str(), path);
}

std::string config_to_yaml(const ExperimentConfig &cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "seed" << YAML::Value << cfg.seed;
  out << YAML::Key << "domain" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "n" << YAML::Value << cfg.p.size();
  out << YAML::Key << "p" << YAML::Value;
  emit_ints(out, cfg.p);
  out << YAML::EndMap;
  out << YAML::Key << "partition" << YAML::Value;
  emit_ints(out, cfg.k);
  if (cfg.h) {
    out << YAML::Key << "class_h" << YAML::Value;
    emit_ints(out, *cfg.h);
  }
  out << YAML::Key << "degree" << YAML::Value << cfg.degree;
  out << YAML::Key << "oracle" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "samples" << YAML::Value << cfg.oracle.samples;
  out << YAML::Key << "batch_size" << YAML::Value << cfg.oracle.batch_size;
  out << YAML::Key << "threads" << YAML::Value << cfg.oracle.threads;
  out << YAML::EndMap;
  out << YAML::Key << "tolerances" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "identity" << YAML::Value << cfg.tol.identity;
  out << YAML::Key << "quadrature" << YAML::Value << cfg.tol.quadrature;
  out << YAML::Key << "sigma" << YAML::Value << cfg.tol.sigma;
  out << YAML::Key << "commutator" << YAML::Value << cfg.tol.commutator;
  out << YAML::Key << "separation" << YAML::Value << cfg.tol.separation;
  out << YAML::Key << "invariance" << YAML::Value << cfg.tol.invariance;
  out << YAML::Key << "membership" << YAML::Value << cfg.tol.membership;
  out << YAML::EndMap;
  out << YAML::Key << "invariance" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "group_samples" << YAML::Value << cfg.invariance.group_samples;
  out << YAML::Key << "points" << YAML::Value << cfg.invariance.points;
  out << YAML::EndMap;
  out << YAML::Key << "symbols" << YAML::Value << YAML::BeginSeq;
  for (const auto &sym : cfg.symbols) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << sym.name;
    out << YAML::Key << "radial" << YAML::Value << YAML::BeginMap;
    switch (sym.radial.form) {
    case RadialSpec::Form::constant:
      out << YAML::Key << "constant" << YAML::Value << sym.radial.terms.at(0).coefficient;
      break;
    case RadialSpec::Form::monomial:
      out << YAML::Key << "monomial" << YAML::Value;
      emit_doubles(out, sym.radial.terms.at(0).exponents);
      out << YAML::Key << "coefficient" << YAML::Value
          << sym.radial.terms.at(0).coefficient;
      break;
    case RadialSpec::Form::combination:
      out << YAML::Key << "terms" << YAML::Value << YAML::BeginSeq;
      for (const auto &t : sym.radial.terms) {
        out << YAML::Flow << YAML::BeginMap;
        out << YAML::Key << "coefficient" << YAML::Value << t.coefficient;
        out << YAML::Key << "exponents" << YAML::Value;
        emit_doubles(out, t.exponents);
        out << YAML::EndMap;
      }
      out << YAML::EndSeq;
      break;
    }
    out << YAML::EndMap;
    out << YAML::Key << "nu" << YAML::Value;
    emit_ints(out, sym.nu.entries());
    out << YAML::Key << "mu" << YAML::Value;
    emit_ints(out, sym.mu.entries());
    if (sym.expect_akh)
      out << YAML::Key << "expect_akh" << YAML::Value << *sym.expect_akh;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dir" << YAML::Value << cfg.out_dir;
  out << YAML::Key << "report" << YAML::Value << cfg.report_name;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

} // namespace qhqr
