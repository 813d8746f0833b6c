#include "amen/experiment.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "amen/constructions.hpp"
#include "amen/lifts.hpp"
#include "amen/linalg.hpp"
#include "amen/spaces.hpp"
#include "amen/tensor.hpp"

namespace amen {

namespace {

// ---------------------------------------------------------------------------
// Canonical JSON writer: insertion-ordered keys, all floats at 17 significant
// digits, so identical configs give byte-identical reports.
// ---------------------------------------------------------------------------
class JsonWriter {
 public:
  std::string str() const { return out_.str(); }

  JsonWriter& begin_object() {
    comma();
    out_ << '{';
    stack_.push_back(0);
    return *this;
  }
  JsonWriter& end_object() {
    out_ << '}';
    stack_.pop_back();
    bump();
    return *this;
  }
  JsonWriter& begin_array() {
    comma();
    out_ << '[';
    stack_.push_back(0);
    return *this;
  }
  JsonWriter& end_array() {
    out_ << ']';
    stack_.pop_back();
    bump();
    return *this;
  }
  JsonWriter& key(const std::string& k) {
    comma();
    write_string(k);
    out_ << ':';
    pending_value_ = true;
    return *this;
  }
  JsonWriter& value(const std::string& v) {
    comma();
    write_string(v);
    bump();
    return *this;
  }
  JsonWriter& value(const char* v) { return value(std::string(v)); }
  JsonWriter& value(bool v) {
    comma();
    out_ << (v ? "true" : "false");
    bump();
    return *this;
  }
  JsonWriter& value(int v) {
    comma();
    out_ << v;
    bump();
    return *this;
  }
  JsonWriter& value(std::uint64_t v) {
    comma();
    out_ << v;
    bump();
    return *this;
  }
  JsonWriter& value(std::size_t v) { return value(static_cast<std::uint64_t>(v)); }
  JsonWriter& value(double v) {
    comma();
    if (!std::isfinite(v)) {
      out_ << "null";
    } else {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out_ << buf;
    }
    bump();
    return *this;
  }

 private:
  void comma() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!stack_.empty() && stack_.back() > 0) out_ << ',';
  }
  void bump() {
    if (!stack_.empty()) ++stack_.back();
  }
  void write_string(const std::string& s) {
    out_ << '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ << "\\\""; break;
        case '\\': out_ << "\\\\"; break;
        case '\n': out_ << "\\n"; break;
        case '\t': out_ << "\\t"; break;
        default: out_ << c;
      }
    }
    out_ << '"';
  }

  std::ostringstream out_;
  std::vector<int> stack_;
  bool pending_value_ = false;
};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_config_body(JsonWriter& w, const ExperimentConfig& c) {
  w.begin_object();
  w.key("command").value(c.command);
  w.key("host").begin_object();
  w.key("kind").value(c.host_kind);
  w.key("p").value(c.p);
  w.key("dim").value(c.dim);
  w.key("weights").begin_array();
  for (double x : c.weights) w.value(x);
  w.end_array();
  w.end_object();
  w.key("group").begin_object();
  w.key("kind").value(c.group_kind);
  w.key("n").value(c.n);
  w.key("spec").value(c.group_spec);
  w.end_object();
  w.key("construct").begin_object();
  w.key("model").value(c.model);
  w.key("m").value(c.m);
  w.key("k").value(c.k);
  w.key("a").value(c.a);
  w.key("b").value(c.b);
  w.end_object();
  w.key("operator").value(c.operator_kind);
  w.key("schedule").begin_array();
  for (int v : c.schedule) w.value(v);
  w.end_array();
  w.key("seed").value(c.seed);
  w.key("tolerance").value(c.tolerance);
  w.key("output").value(c.output);
  w.key("format").value(c.format);
  w.end_object();
}

HostSpace host_from_config(const ExperimentConfig& c) {
  if (c.dim <= 0) throw ConfigError("host dim must be positive");
  if (c.host_kind == "lp") {
    if (!c.weights.empty()) return HostSpace::weighted_lp(c.dim, c.p, c.weights);
    return HostSpace::lp(c.dim, c.p);
  }
  if (c.host_kind == "lorentz") {
    std::vector<double> w = c.weights;
    if (w.empty()) {
      w.resize(c.dim);
      for (int i = 0; i < c.dim; ++i) w[i] = 1.0 / std::sqrt(static_cast<double>(i + 1));
    }
    return HostSpace::lorentz(w, c.p);
  }
  if (c.host_kind == "dissection") {
    std::vector<double> w = c.weights;
    if (w.empty()) w.assign(c.dim, 1.0 / c.dim);
    return HostSpace::weighted_lp(c.dim, c.p, w);
  }
  throw ConfigError("unknown host kind: " + c.host_kind);
}

}  // namespace

std::string config_to_json(const ExperimentConfig& c) {
  JsonWriter w;
  write_config_body(w, c);
  return w.str();
}

ExperimentConfig config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig c;
  try {
    c.command = j.value("command", "");
    if (j.contains("host")) {
      const auto& h = j["host"];
      c.host_kind = h.value("kind", c.host_kind);
      c.p = h.value("p", c.p);
      c.dim = h.value("dim", c.dim);
      if (h.contains("weights")) c.weights = h["weights"].get<std::vector<double>>();
    }
    if (j.contains("group")) {
      const auto& g = j["group"];
      c.group_kind = g.value("kind", c.group_kind);
      c.n = g.value("n", c.n);
      c.group_spec = g.value("spec", c.group_spec);
    }
    if (j.contains("construct")) {
      const auto& k = j["construct"];
      c.model = k.value("model", c.model);
      c.m = k.value("m", c.m);
      c.k = k.value("k", c.k);
      c.a = k.value("a", c.a);
      c.b = k.value("b", c.b);
    }
    c.operator_kind = j.value("operator", c.operator_kind);
    if (j.contains("schedule")) c.schedule = j["schedule"].get<std::vector<int>>();
    c.seed = j.value("seed", c.seed);
    c.tolerance = j.value("tolerance", c.tolerance);
    c.output = j.value("output", c.output);
    c.format = j.value("format", c.format);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  return c;
}

MatrixGroup group_spec_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("group spec parse error: ") + e.what());
  }
  if (!j.contains("n") || !j.contains("generators"))
    throw ConfigError("group spec requires fields n and generators");
  const int n = j["n"].get<int>();
  std::vector<SignedPermutation> gens;
  for (const auto& g : j["generators"]) {
    SignedPermutation sp;
    for (int v : g["perm"].get<std::vector<int>>()) sp.perm.push_back(v - 1);  // file is 1-based
    for (int v : g["signs"].get<std::vector<int>>())
      sp.signs.push_back(static_cast<std::int8_t>(v));
    if (sp.n() != n) throw ConfigError("group spec generator length mismatch");
    try {
      validate_signed_permutation(sp);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("group spec: ") + e.what());
    }
    gens.push_back(std::move(sp));
  }
  if (gens.empty()) throw ConfigError("group spec has no generators");
  return make_closure_group(n, gens);
}

MatrixGroup load_group_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open group spec file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return group_spec_from_json(ss.str());
}

MatrixGroup choose_group(const std::string& kind, int n, const std::string& spec_path) {
  if (kind == "monomial") return make_monomial_group(n);
  if (kind == "cyclic-monomial") return make_cyclic_monomial_group(n);
  if (kind == "transitive" || kind == "closure") {
    if (spec_path.empty()) throw ConfigError("group kind " + kind + " requires a spec file");
    MatrixGroup g = load_group_spec_file(spec_path);
    if (g.degree() != n) throw ConfigError("group spec degree does not match n");
    return g;
  }
  if (kind == "auto") {
    const double order = std::ldexp(static_cast<double>(n), n);  // 2^n * n
    if (order <= static_cast<double>(kGroupOrderCap)) return make_cyclic_monomial_group(n);
    // tensor factorization keeps the order manageable for large composite n
    for (int a = static_cast<int>(std::sqrt(static_cast<double>(n))); a >= 2; --a) {
      if (n % a == 0) {
        const int b = n / a;
        return make_tensor_group(make_cyclic_monomial_group(b), make_cyclic_monomial_group(a));
      }
    }
    throw ConfigError("auto group selection failed: no factorization under the order cap");
  }
  throw ConfigError("unknown group kind: " + kind);
}

namespace {

// ---------------------------------------------------------------------------
// command implementations
// ---------------------------------------------------------------------------

struct Artifact {
  bool pass = true;
  JsonWriter json;
  std::string csv;
};

void begin_report(JsonWriter& w, const ExperimentConfig& c) {
  w.begin_object();
  w.key("command").value(c.command);
  w.key("config");
  write_config_body(w, c);
}

void end_report(JsonWriter& w, bool pass) {
  w.key("verdict").value(pass ? "pass" : "fail");
  w.end_object();
}

Artifact run_verify_diagonal(const ExperimentConfig& c) {
  if (c.n < 1) throw ConfigError("verify-diagonal requires --n >= 1");
  const MatrixGroup g = choose_group(c.group_kind, c.n, c.group_spec);
  const RationalTensor dg = group_diagonal(g);
  const bool exact_equal = coordinates_equal(dg, canonical_diagonal(c.n));
  const bool diag_std = is_diagonal(dg, DiagonalKind::algebra);
  const bool diag_op = is_diagonal(dg, DiagonalKind::opposite);

  Artifact art;
  art.pass = exact_equal && diag_std && diag_op;
  begin_report(art.json, c);
  art.json.key("rows").begin_array();
  art.json.begin_object();
  art.json.key("n").value(c.n);
  art.json.key("group_order").value(g.order());
  art.json.key("exact_equal").value(exact_equal);
  art.json.key("diagonal_std").value(diag_std);
  art.json.key("diagonal_op").value(diag_op);
  art.json.end_object();
  art.json.end_array();
  end_report(art.json, art.pass);
  return art;
}

Artifact run_irreducible(const ExperimentConfig& c) {
  if (c.n < 1) throw ConfigError("irreducible requires --n >= 1");
  const MatrixGroup g = choose_group(c.group_kind, c.n, c.group_spec);
  const std::size_t rank = rank_of_span(g.dense_elements());
  const std::size_t full = static_cast<std::size_t>(c.n) * c.n;

  Artifact art;
  art.pass = rank == full;
  begin_report(art.json, c);
  art.json.key("rows").begin_array();
  art.json.begin_object();
  art.json.key("n").value(c.n);
  art.json.key("group_order").value(g.order());
  art.json.key("rank").value(rank);
  art.json.key("full_rank").value(full);
  art.json.key("irreducible").value(art.pass);
  art.json.end_object();
  art.json.end_array();
  end_report(art.json, art.pass);
  return art;
}

void write_probe_arrays(JsonWriter& w, const CertificateReport& rep) {
  w.key("probes").begin_object();
  w.key("seed").value(rep.seed);
  w.key("vectors").begin_array();
  for (const auto& v : rep.probe_vectors) {
    w.begin_array();
    for (double x : v) w.value(x);
    w.end_array();
  }
  w.end_array();
  w.key("functionals").begin_array();
  for (const auto& v : rep.probe_functionals) {
    w.begin_array();
    for (double x : v) w.value(x);
    w.end_array();
  }
  w.end_array();
  w.end_object();
}

Artifact run_certify(const ExperimentConfig& c) {
  if (c.schedule.empty()) throw ConfigError("certify-a requires --schedule");
  const HostSpace host = host_from_config(c);

  std::vector<std::pair<NumericSystem, MatrixGroup>> schedule;
  if (c.host_kind == "lp") {
    for (int n : c.schedule)
      schedule.emplace_back(lp_truncation_system(host, n), choose_group(c.group_kind, n, c.group_spec));
  } else if (c.host_kind == "lorentz") {
    for (int n : c.schedule)
      schedule.emplace_back(lorentz_system(host, n), choose_group(c.group_kind, n, c.group_spec));
  } else if (c.host_kind == "dissection") {
    int max_cells = 0;
    for (int n : c.schedule) max_cells = std::max(max_cells, n);
    const auto chain = dissection_chain(c.dim, host.weights, max_cells);
    for (int n : c.schedule) {
      const Dissection* found = nullptr;
      for (const auto& d : chain)
        if (d.size() == n) found = &d;
      if (!found)
        throw ConfigError("dissection chain has no dissection of size " + std::to_string(n));
      schedule.emplace_back(dissection_system(host, *found),
                            choose_group(c.group_kind, n, c.group_spec));
    }
  } else {
    throw ConfigError("unknown host kind: " + c.host_kind);
  }

  CertifyOptions opts;
  opts.seed = c.seed;
  opts.tolerance = c.tolerance;
  opts.norm.seed = c.seed;

  const auto probes = default_probe_vectors(host, c.seed);
  const auto probe_functionals =
      default_probe_vectors(host.kind == HostKind::weighted_lp ? dual_host(host) : host,
                            c.seed + 1);
  const CertificateReport rep = certify_schedule(schedule, host, probes, probe_functionals, opts);

  Artifact art;
  art.pass = rep.pass;
  begin_report(art.json, c);
  art.json.key("host").value(rep.host_description);
  art.json.key("rows").begin_array();
  for (const auto& r : rep.rows) {
    art.json.begin_object();
    art.json.key("n").value(r.n);
    art.json.key("projection_residual").value(r.projection_residual);
    art.json.key("adjoint_residual").value(r.adjoint_residual);
    art.json.key("adjoint_certified").value(r.adjoint_certified);
    art.json.key("group_bound_upper").value(r.group_bound_has_upper ? r.group_bound_upper
                                                                    : std::nan(""));
    art.json.key("group_bound_lower").value(r.group_bound_lower);
    art.json.key("trace_defect").value(r.trace_defect);
    art.json.end_object();
  }
  art.json.end_array();
  art.json.key("group_sup").value(rep.group_sup);
  art.json.key("group_sup_is_upper").value(rep.group_sup_is_upper);
  if (rep.structural_upper) {
    art.json.key("structural_upper").value(*rep.structural_upper);
    art.json.key("unconditional_constant").value(rep.unconditional_constant);
    art.json.key("subsymmetry_constant").value(*rep.subsymmetry_constant);
  }
  art.json.key("adjoint_certified").value(rep.adjoint_certified);
  write_probe_arrays(art.json, rep);
  end_report(art.json, art.pass);

  std::ostringstream csv;
  csv << "n,projection_residual,adjoint_residual,group_bound_upper,group_bound_lower,trace_defect\n";
  for (const auto& r : rep.rows) {
    csv << r.n << ',' << format_double(r.projection_residual) << ','
        << format_double(r.adjoint_residual) << ','
        << (r.group_bound_has_upper ? format_double(r.group_bound_upper) : "") << ','
        << format_double(r.group_bound_lower) << ',' << format_double(r.trace_defect) << '\n';
  }
  art.csv = csv.str();
  return art;
}

RealMatrix probe_from_config(const ExperimentConfig& c) {
  if (c.operator_kind == "harmonic-diag") return probe_harmonic_diagonal(c.dim);
  if (c.operator_kind == "compact-decay") return probe_compact_decay(c.dim, c.seed);
  const std::string trunc_prefix = "truncation:";
  if (c.operator_kind.rfind(trunc_prefix, 0) == 0) {
    const int m = std::stoi(c.operator_kind.substr(trunc_prefix.size()));
    return probe_truncation(c.dim, m);
  }
  throw ConfigError("unknown operator kind: " + c.operator_kind);
}

Artifact run_converge(const ExperimentConfig& c) {
  if (c.schedule.empty()) throw ConfigError("converge requires --schedule");
  if (c.host_kind != "lp") throw ConfigError("converge runs on lp hosts");
  const HostSpace host = host_from_config(c);
  const RealMatrix f = probe_from_config(c);

  OpNormOptions norm_opts;
  norm_opts.seed = c.seed;

  std::vector<DefectReport> rows;
  for (int n : c.schedule) {
    const NumericSystem system = lp_truncation_system(host, n);
    const MatrixGroup group = choose_group(c.group_kind, n, c.group_spec);
    const RealTensor d = lifted_group_diagonal(system, group);
    DefectReport rep = defects(d, f, host, norm_opts);
    rep.n = n;
    rows.push_back(rep);
  }

  bool nonincreasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].pi_defect > rows[i - 1].pi_defect + c.tolerance) nonincreasing = false;
    if (rows[i].commutator_bound > rows[i - 1].commutator_bound + c.tolerance)
      nonincreasing = false;
  }

  Artifact art;
  art.pass = nonincreasing;
  begin_report(art.json, c);
  art.json.key("rows").begin_array();
  for (const auto& r : rows) {
    art.json.begin_object();
    art.json.key("n").value(r.n);
    art.json.key("pi_defect").value(r.pi_defect);
    art.json.key("commutator_bound").value(r.commutator_bound);
    art.json.key("commutator_rep_bound").value(r.commutator_rep_bound);
    art.json.key("diag_norm_bound").value(r.diag_norm_bound);
    art.json.key("compression_defect").value(r.compression_defect);
    art.json.end_object();
  }
  art.json.end_array();
  art.json.key("norm_seed").value(norm_opts.seed);
  end_report(art.json, art.pass);

  std::ostringstream csv;
  csv << "n,pi_defect,commutator_bound,commutator_rep_bound,diag_norm_bound,compression_defect\n";
  for (const auto& r : rows) {
    csv << r.n << ',' << format_double(r.pi_defect) << ',' << format_double(r.commutator_bound)
        << ',' << format_double(r.commutator_rep_bound) << ','
        << format_double(r.diag_norm_bound) << ',' << format_double(r.compression_defect)
        << '\n';
  }
  art.csv = csv.str();
  return art;
}

Artifact run_construct(const ExperimentConfig& c) {
  Artifact art;
  begin_report(art.json, c);
  art.json.key("rows").begin_array();
  art.json.begin_object();

  if (c.model == "direct-sum") {
    if (c.m < 1 || c.k < 0) throw ConfigError("direct-sum requires --m >= 1 and --k >= 0");
    const std::size_t n = static_cast<std::size_t>(c.m + c.k);
    const RationalTensor d11 = embed_tensor(canonical_diagonal(c.m), 0, n);
    const RationalTensor corner = standard_corner_element(c.m, c.k);
    const RationalTensor out = direct_sum_diagonal(c.m, c.k, d11, corner);
    const bool diag = is_diagonal(out, DiagonalKind::algebra);
    const bool pi_ok = pi(out) == RationalMatrix::identity(n);
    art.pass = diag && pi_ok;
    art.json.key("model").value(c.model);
    art.json.key("m").value(c.m);
    art.json.key("k").value(c.k);
    art.json.key("diagonal_std").value(diag);
    art.json.key("pi_is_identity").value(pi_ok);
    art.json.key("terms").value(out.term_count());
    if (c.m == 1 && c.k == 1) art.json.key("note").value("hyperplane model X + scalar line");
  } else if (c.model == "cutdown") {
    if (c.m < 1 || c.k < 0) throw ConfigError("cutdown requires --m >= 1 and --k >= 0");
    const RationalTensor out = cutdown_diagonal(canonical_diagonal(c.m + c.k), c.m, c.k,
                                                standard_corner_element(c.m, c.k));
    const bool diag = is_diagonal(out, DiagonalKind::algebra);
    const bool pi_ok = pi(out) == RationalMatrix::identity(c.m);
    art.pass = diag && pi_ok;
    art.json.key("model").value(c.model);
    art.json.key("m").value(c.m);
    art.json.key("k").value(c.k);
    art.json.key("diagonal_std").value(diag);
    art.json.key("pi_is_identity").value(pi_ok);
    art.json.key("terms").value(out.term_count());
  } else if (c.model == "ideal") {
    if (c.a < 1 || c.b < 1) throw ConfigError("ideal requires --a >= 1 and --b >= 1");
    const std::size_t n = static_cast<std::size_t>(c.a + c.b);
    const RationalTensor d_alg = embed_tensor(canonical_diagonal(c.a), 0, n) +
                                 embed_tensor(canonical_diagonal(c.b), c.a, n);
    const RationalMatrix e = block_projection(n, 0, c.a);
    const RationalTensor out = ideal_diagonal(d_alg, e);
    std::vector<RationalMatrix> ideal_basis;
    for (int i = 0; i < c.a; ++i)
      for (int j = 0; j < c.a; ++j) ideal_basis.push_back(RationalMatrix::unit(n, i, j));
    const bool diag = is_diagonal_relative(out, ideal_basis, e);
    art.pass = diag;
    art.json.key("model").value(c.model);
    art.json.key("a").value(c.a);
    art.json.key("b").value(c.b);
    art.json.key("diagonal_relative").value(diag);
    art.json.key("terms").value(out.term_count());
  } else {
    throw ConfigError("unknown construct model: " + c.model);
  }

  art.json.end_object();
  art.json.end_array();
  end_report(art.json, art.pass);
  return art;
}

}  // namespace

RunResult run(const ExperimentConfig& c) {
  Artifact art;
  if (c.command == "verify-diagonal") {
    art = run_verify_diagonal(c);
  } else if (c.command == "irreducible") {
    art = run_irreducible(c);
  } else if (c.command == "certify-a") {
    art = run_certify(c);
  } else if (c.command == "converge") {
    art = run_converge(c);
  } else if (c.command == "construct") {
    art = run_construct(c);
  } else {
    throw ConfigError("unknown command: " + c.command);
  }
  RunResult res;
  res.exit_code = art.pass ? 0 : 1;
  res.json = art.json.str();
  res.csv = art.csv;
  return res;
}

int run_and_write(const ExperimentConfig& c) {
  try {
    const RunResult res = run(c);
    const bool want_json = c.format == "json" || c.format == "both";
    const bool want_csv = c.format == "csv" || c.format == "both";
    if (want_csv && res.csv.empty())
      throw ConfigError("command " + c.command + " does not produce CSV curves");
    if (c.output.empty()) {
      if (want_json) std::cout << res.json << "\n";
      if (want_csv) std::cout << res.csv;
    } else {
      if (want_json) {
        std::ofstream out(c.output);
        if (!out) throw ConfigError("cannot write output file: " + c.output);
        out << res.json << "\n";
      }
      if (want_csv) {
        std::string path = c.output;
        const auto dot = path.rfind('.');
        path = (dot == std::string::npos ? path : path.substr(0, dot)) + ".csv";
        std::ofstream out(path);
        if (!out) throw ConfigError("cannot write output file: " + path);
        out << res.csv;
      }
    }
    return res.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace amen
