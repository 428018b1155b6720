#include "momentdet/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "momentdet/distributions.hpp"
#include "momentdet/jacobi.hpp"
#include "momentdet/recurrence.hpp"
#include "momentdet/sc.hpp"
#include "momentdet/spectral.hpp"

namespace momentdet {

namespace {

struct CliConfig {
  std::string family;
  std::optional<double> q, p, c;
  std::string file;
  std::string moments_inline;
  int max_terms = 500;
  double tol = 1e-10;
  std::string mode = "float";
  std::string format;
  std::string out_path;
  int m = -1;
  std::string parity;
  int n_moments = -1;
};

void add_sequence_flags(CLI::App* cmd, CliConfig& cfg) {
  cmd->add_option("--family", cfg.family,
                  "sequence family: qgauss-pos, qgauss-neg, power, constant, explicit");
  cmd->add_option("--q", cfg.q, "q parameter (qgauss families)");
  cmd->add_option("--p", cfg.p, "exponent for the power family");
  cmd->add_option("--c", cfg.c, "value for the constant family");
  cmd->add_option("--file", cfg.file, "JSON sequence (or moments) file");
}

void add_common_flags(CLI::App* cmd, CliConfig& cfg) {
  cmd->add_option("--max-terms", cfg.max_terms, "number of sequence terms to use");
  cmd->add_option("--tol", cfg.tol, "numeric tolerance in (0,1)");
  cmd->add_option("--mode", cfg.mode, "arithmetic backend: float or exact");
  cmd->add_option("--format", cfg.format, "output format: json or csv (trace only)");
  cmd->add_option("--out", cfg.out_path, "write output to this path instead of stdout");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string normalized_family(std::string f) {
  for (auto& ch : f)
    if (ch == '-') ch = '_';
  return f;
}

JacobiSequence sequence_from_config(const CliConfig& cfg) {
  const bool has_family = !cfg.family.empty();
  const bool has_file = !cfg.file.empty();
  if (has_family == has_file)
    throw InvalidParameter("exactly one sequence source required: --family or --file");
  if (has_file) return sequence_from_json_text(slurp(cfg.file));

  const std::string fam = normalized_family(cfg.family);
  if (fam == "qgauss_pos") {
    if (!cfg.q) throw InvalidParameter("--q required for qgauss-pos");
    return JacobiSequence::q_gaussian_pos(*cfg.q);
  }
  if (fam == "qgauss_neg") {
    if (!cfg.q) throw InvalidParameter("--q required for qgauss-neg");
    return JacobiSequence::q_gaussian_neg(*cfg.q);
  }
  if (fam == "power") {
    if (!cfg.p) throw InvalidParameter("--p required for power");
    return JacobiSequence::power(*cfg.p);
  }
  if (fam == "constant") {
    if (!cfg.c) throw InvalidParameter("--c required for constant");
    return JacobiSequence::constant(*cfg.c);
  }
  if (fam == "explicit")
    throw InvalidParameter("explicit sequences are provided through --file");
  throw InvalidParameter("unknown family '" + cfg.family + "'");
}

void validate_common(const CliConfig& cfg) {
  if (cfg.max_terms < 4) throw InvalidParameter("--max-terms must be >= 4");
  if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) throw InvalidParameter("--tol must lie in (0, 1)");
  mode_from_string(cfg.mode);
}

void emit(const CliConfig& cfg, const std::string& payload, std::ostream& out) {
  if (cfg.out_path.empty()) {
    out << payload;
    if (!payload.empty() && payload.back() != '\n') out << '\n';
    return;
  }
  std::ofstream f(cfg.out_path);
  if (!f) throw InvalidParameter("cannot write to '" + cfg.out_path + "'");
  f << payload;
  if (!payload.empty() && payload.back() != '\n') f << '\n';
}

int cmd_analyze(const CliConfig& cfg, std::ostream& out) {
  validate_common(cfg);
  const auto seq = sequence_from_config(cfg);
  const auto report = decide_sc(seq, cfg.max_terms, cfg.tol);
  emit(cfg, report_to_json_text(report), out);
  return report.verdict == Verdict::Inconclusive ? kExitInconclusive : kExitOk;
}

int cmd_trace(const CliConfig& cfg, std::ostream& out) {
  validate_common(cfg);
  const auto seq = sequence_from_config(cfg);
  const auto trace = run_trace(seq, cfg.max_terms, mode_from_string(cfg.mode));
  std::ostringstream payload;
  if (cfg.format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (int m = 1; m <= trace.m_max(); ++m) {
      rows.push_back({{"m", m},
                      {"omega_m", trace.omega[m]},
                      {"C_m", trace.c[m]},
                      {"iG_m", trace.ig[m]},
                      {"delta_m", trace.delta[m]},
                      {"sumC_m", trace.sum_c[m]},
                      {"log_prod_m", trace.log_prod[m]}});
    }
    payload << nlohmann::json{{"schema", 1}, {"trace", rows}}.dump();
  } else {
    write_trace_csv(payload, trace);
  }
  emit(cfg, payload.str(), out);
  return kExitOk;
}

int cmd_measure(const CliConfig& cfg, std::ostream& out) {
  validate_common(cfg);
  const auto seq = sequence_from_config(cfg);
  if (cfg.m < 1) throw InvalidParameter("--m (truncation level) must be >= 1");
  if (cfg.m > 2000) throw InvalidParameter("--m exceeds the eigensolver budget (2000)");

  if (cfg.parity == "both") {
    const auto pair = extremal_measure_pair(seq, cfg.m, cfg.tol);
    nlohmann::json j;
    j["schema"] = 1;
    j["mu_even"] = nlohmann::json::parse(measure_to_json_text(pair.mu_even));
    j["mu_odd"] = nlohmann::json::parse(measure_to_json_text(pair.mu_odd));
    j["stieltjes_gap"] = pair.stieltjes_gap;
    j["not_indeterminate_warning"] = pair.not_indeterminate_warning;
    emit(cfg, j.dump(), out);
    return kExitOk;
  }
  if (!cfg.parity.empty()) {
    const bool want_odd = cfg.parity == "odd";
    if (!want_odd && cfg.parity != "even")
      throw InvalidParameter("--parity must be even, odd, or both");
    if ((cfg.m % 2 != 0) != want_odd)
      throw InvalidParameter("--m has parity " + std::string(cfg.m % 2 ? "odd" : "even") +
                             ", which contradicts --parity " + cfg.parity);
  }
  const auto mu = quadrature_measure(make_truncation(seq, cfg.m));
  emit(cfg, measure_to_json_text(mu), out);
  return kExitOk;
}

int cmd_convert(const CliConfig& cfg, std::ostream& out) {
  validate_common(cfg);
  const Mode mode = mode_from_string(cfg.mode);

  // moments -> sequence (inline array or moments file)
  std::optional<MomentSequence> moments;
  if (!cfg.moments_inline.empty()) {
    const auto arr = nlohmann::json::parse(cfg.moments_inline);
    moments = MomentSequence{arr.get<std::vector<double>>()};
  } else if (!cfg.file.empty()) {
    const auto j = nlohmann::json::parse(slurp(cfg.file));
    if (j.contains("even_moments")) moments = MomentSequence{j["even_moments"].get<std::vector<double>>()};
  }

  if (moments) {
    std::vector<double> omega;
    if (mode == Mode::Exact) {
      std::vector<Rational> exact;
      exact.reserve(moments->even_moments.size());
      for (double v : moments->even_moments) exact.push_back(exact_rational(v));
      for (const auto& w : jacobi_from_moments_exact(exact)) omega.push_back(to_double(w));
    } else {
      omega = jacobi_from_moments(*moments);
    }
    emit(cfg, sequence_to_json_text(JacobiSequence::explicit_terms(omega)), out);
    return kExitOk;
  }

  // sequence -> moments
  const auto seq = sequence_from_config(cfg);
  if (cfg.n_moments < 0)
    throw InvalidParameter("--n-moments required when converting a sequence to moments");
  MomentSequence result;
  if (mode == Mode::Exact) {
    const auto omega = seq.exact_prefix(std::max(1, cfg.n_moments));
    for (const auto& v : moments_from_jacobi_exact(omega, cfg.n_moments))
      result.even_moments.push_back(to_double(v));
  } else {
    result = moments_from_jacobi(seq, cfg.n_moments);
  }
  emit(cfg, moments_to_json_text(result), out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "momentdet: determinacy analysis for symmetric moment problems via Jacobi sequences"};
  app.require_subcommand(1);
  CliConfig cfg;

  auto* analyze = app.add_subcommand(
      "analyze", "decide determinacy of the moment problem for a Jacobi sequence");
  add_sequence_flags(analyze, cfg);
  add_common_flags(analyze, cfg);

  auto* trace = app.add_subcommand("trace", "emit the continued-fraction recurrence trace");
  add_sequence_flags(trace, cfg);
  add_common_flags(trace, cfg);

  auto* measure =
      app.add_subcommand("measure", "spectral measure of a finite truncation (or the even/odd pair)");
  add_sequence_flags(measure, cfg);
  add_common_flags(measure, cfg);
  measure->add_option("--m", cfg.m, "truncation level (matrix size m+1)");
  measure->add_option("--parity", cfg.parity, "even, odd, or both (extremal pair)");

  auto* convert = app.add_subcommand("convert", "convert between moments and Jacobi sequences");
  add_sequence_flags(convert, cfg);
  add_common_flags(convert, cfg);
  convert->add_option("--moments", cfg.moments_inline, "inline JSON array [M_0, M_2, ...]");
  convert->add_option("--n-moments", cfg.n_moments, "number of even moments to produce");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(cfg, out);
    if (trace->parsed()) return cmd_trace(cfg, out);
    if (measure->parsed()) return cmd_measure(cfg, out);
    if (convert->parsed()) return cmd_convert(cfg, out);
    err << "error: no subcommand\n";
    return kExitInvalidInput;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const NonPositiveOmega& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const InsufficientTerms& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const NotPositiveDefinite& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const IndexError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const ParityMismatch& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const Error& e) {
    err << "compute error: " << e.what() << "\n";
    return kExitComputeError;
  } catch (const std::exception& e) {
    err << "compute error: " << e.what() << "\n";
    return kExitComputeError;
  }
}

}  // namespace momentdet
