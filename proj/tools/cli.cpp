#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "mspe/certification.hpp"
#include "mspe/generate.hpp"
#include "mspe/graph.hpp"
#include "mspe/parser.hpp"
#include "mspe/ppda.hpp"
#include "mspe/solvers.hpp"
#include "mspe/transforms.hpp"

namespace mspe::cli {

namespace {

using nlohmann::ordered_json;

enum class InputKind { mspe, ppda, backbutton };

struct Loaded {
  Msp system;
  InputKind kind;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

InputKind detect_kind(const std::string& path, const std::string& text) {
  if (ends_with(path, ".ppda")) return InputKind::ppda;
  if (ends_with(path, ".bb")) return InputKind::backbutton;
  if (ends_with(path, ".mspe")) return InputKind::mspe;
  std::istringstream words(text);
  std::string line;
  while (std::getline(words, line)) {
    std::istringstream first(line);
    std::string word;
    if (!(first >> word) || word[0] == '#') continue;
    if (word == "rule") return InputKind::ppda;
    if (word == "page" || word == "link") return InputKind::backbutton;
    break;
  }
  return InputKind::mspe;
}

Loaded load(const std::string& path) {
  const std::string text = read_file(path);
  const InputKind kind = detect_kind(path, text);
  switch (kind) {
    case InputKind::ppda:
      return {termination_mspe(parse_ppda(text)).system, kind};
    case InputKind::backbutton:
      return {backbutton_mspe(parse_backbutton(text)), kind};
    case InputKind::mspe:
      break;
  }
  return {parse_mspe(text), kind};
}

// Like parse_rational, plus scientific notation such as 1e-12.
Rational parse_number(const std::string& text) {
  const auto e = text.find_first_of("eE");
  if (e == std::string::npos) return parse_rational(text);
  Rational value = parse_rational(text.substr(0, e));
  const long exponent = std::stol(text.substr(e + 1));
  Rational scale = pow(Rational(10), static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  return exponent < 0 ? Rational(value / scale) : Rational(value * scale);
}

std::string decimal(const Rational& q) { return to_decimal_string(q, 12); }

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string scc_names(const Msp& f, const std::vector<VarIndex>& scc) {
  std::string out;
  for (VarIndex v : scc) {
    if (!out.empty()) out += " ";
    out += f.variable(v);
  }
  return out;
}

// --- info ------------------------------------------------------------------

int cmd_info(const std::string& path, const std::string& output, std::ostream& out) {
  const Loaded in = load(path);
  const Msp& f = in.system;
  const auto dag = scc_decompose(f);
  const auto [cmin, m] = cmin_mbits(f);
  const bool bounded_by_one = check_upper(f, NumVec<Rational>(f.size(), Rational(1)));

  if (output == "json") {
    ordered_json doc;
    doc["variables"] = f.variables();
    doc["origin"] = std::string(to_string(f.origin()));
    doc["clean"] = f.is_clean();
    doc["quadratic"] = f.is_quadratic();
    doc["strongly_connected"] = f.is_strongly_connected();
    doc["f_of_one_at_most_one"] = bounded_by_one;
    doc["cmin"] = to_fraction_string(cmin);
    doc["m"] = m;
    ordered_json sccs = ordered_json::array();
    for (std::size_t s = 0; s < dag->size(); ++s) {
      std::vector<std::string> names;
      for (VarIndex v : dag->sccs[s]) names.push_back(f.variable(v));
      sccs.push_back({{"variables", names}, {"depth", dag->depth[s]}});
    }
    doc["sccs"] = sccs;
    doc["height"] = dag->height;
    doc["width"] = dag->width;
    out << doc.dump(2) << "\n";
    return ok;
  }

  out << "variables: " << f.size() << "\n";
  out << "origin: " << to_string(f.origin()) << "\n";
  out << "clean: " << yes_no(f.is_clean()) << "\n";
  out << "quadratic: " << yes_no(f.is_quadratic()) << "\n";
  out << "strongly connected: " << yes_no(f.is_strongly_connected()) << "\n";
  out << "f(1) <= 1: " << yes_no(bounded_by_one) << "\n";
  out << "cmin: " << to_plain_string(cmin) << "\n";
  out << "m: " << m << "\n";
  out << "sccs: " << dag->size() << "\n";
  out << "h: " << dag->height << "\n";
  out << "w: " << dag->width << "\n";
  for (std::size_t s = 0; s < dag->size(); ++s) {
    out << "scc " << s << " depth " << dag->depth[s] << ": " << scc_names(f, dag->sccs[s]) << "\n";
  }
  return ok;
}

// --- solve -----------------------------------------------------------------

struct SolveConfig {
  std::string scheme = "newton";
  std::string mode = "exact";
  long float_precision = 53;
  std::optional<std::size_t> max_iterations;
  std::optional<std::string> residual_eps;
  std::optional<std::size_t> target_bits;
  std::size_t j = 1;
  std::string output = "text";
  bool parallel_sccs = false;
  bool early_exit = false;
  std::size_t precision_budget = 256;
};

// Valid bits of x measured against a reference; not a certificate.
long empirical_bits(const NumVec<Rational>& x, const NumVec<Rational>& reference) {
  long bits = 100000;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (reference[j] == 0) continue;
    Rational rel = abs(reference[j] - x[j]) / reference[j];
    if (rel == 0) continue;
    bits = std::min(bits, floor_neg_log2(rel));
  }
  return bits;
}

template <Scalar T>
int report_solve(const Msp& f, const IterationTrace<T>& trace, const SolveConfig& cfg,
                 const std::optional<Certificate>& certificate, std::optional<long> dnm_bits,
                 std::optional<std::size_t> reference_j, std::ostream& out) {
  const NumVec<Rational> x = to_rational(trace.final_iterate);
  const Rational res = ScalarTraits<T>::to_rational(residual_norm(f, trace.final_iterate));
  std::shared_ptr<const SccDag> dag;
  if (trace.scheme == SchemeKind::dnm) dag = scc_decompose(f);

  if (cfg.output == "json") {
    ordered_json doc;
    doc["scheme"] = std::string(to_string(trace.scheme));
    doc["mode"] = cfg.mode;
    doc["steps"] = trace.steps();
    doc["residual"] = to_fraction_string(res);
    ordered_json iterate = ordered_json::object();
    for (std::size_t i = 0; i < f.size(); ++i) iterate[f.variable(i)] = to_fraction_string(x[i]);
    doc["iterate"] = iterate;
    if (dag) {
      ordered_json per = ordered_json::array();
      for (std::size_t s = 0; s < dag->size(); ++s) {
        std::vector<std::string> names;
        for (VarIndex v : dag->sccs[s]) names.push_back(f.variable(v));
        per.push_back({{"variables", names}, {"depth", dag->depth[s]}, {"steps", trace.per_scc_steps[s]}});
      }
      doc["per_scc_steps"] = per;
    }
    if (dnm_bits) {
      doc["empirical_bits"] = *dnm_bits;
      doc["empirical_bits_reference"] = "dnm with j=" + std::to_string(*reference_j) + " (not certified)";
    }
    if (certificate) doc["certified_bits"] = certificate->bits;
    out << doc.dump(2) << "\n";
    return ok;
  }

  out << "scheme: " << to_string(trace.scheme) << "\n";
  out << "mode: " << cfg.mode << "\n";
  out << "steps: " << trace.steps() << "\n";
  out << "residual: " << decimal(res) << "\n";
  if (dag) {
    for (std::size_t s = 0; s < dag->size(); ++s) {
      out << "scc " << s << " depth " << dag->depth[s] << " steps " << trace.per_scc_steps[s] << ": "
          << scc_names(f, dag->sccs[s]) << "\n";
    }
  }
  if (dnm_bits) {
    out << "empirical bits: " << *dnm_bits << " (against dnm with j=" << *reference_j << "; not certified)\n";
  }
  if (certificate) {
    out << "certified bits: " << certificate->bits << " (threshold " << to_string(certificate->threshold.method)
        << ")\n";
  }
  for (std::size_t i = 0; i < f.size(); ++i) out << f.variable(i) << " = " << decimal(x[i]) << "\n";
  return ok;
}

template <Scalar T>
int run_solve(const Msp& input, const SolveConfig& cfg, std::ostream& out, std::ostream& err) {
  SolverOptions options;
  options.precision_budget = cfg.precision_budget;
  options.parallel_sccs = cfg.parallel_sccs;
  options.early_exit = cfg.early_exit;

  const int rules = (cfg.max_iterations ? 1 : 0) + (cfg.residual_eps ? 1 : 0) + (cfg.target_bits ? 1 : 0);
  if (rules > 1) {
    err << "error: give at most one of --max-iterations, --residual-eps, --target-bits\n";
    return usage;
  }

  if (cfg.scheme == "dnm") {
    if (rules > 0) err << "note: dnm runs the fixed j * 2^depth schedule; stop rules are ignored\n";
    Msp f = input;
    if (!f.is_quadratic()) {
      f = quadratize(f).system;
      err << "note: system was quadratized (auxiliary variables added)\n";
    }
    IterationTrace<T> trace = dnm_solve<T>(f, cfg.j, options);
    const std::size_t reference_j = cfg.j + 8;
    IterationTrace<Rational> reference = dnm_solve<Rational>(f, reference_j, options);
    long bits = empirical_bits(to_rational(trace.final_iterate), reference.final_iterate);
    return report_solve(f, trace, cfg, std::nullopt, bits, reference_j, out);
  }

  StopRule stop = StopRule::max_iterations(cfg.max_iterations.value_or(20));
  if (cfg.residual_eps) stop = StopRule::residual_below(parse_number(*cfg.residual_eps));

  if (cfg.scheme == "kleene") {
    if (cfg.target_bits) {
      err << "error: --target-bits needs --scheme newton\n";
      return usage;
    }
    return report_solve(input, kleene_solve<T>(input, stop, options), cfg, std::nullopt, std::nullopt,
                        std::nullopt, out);
  }

  if (cfg.target_bits) {
    if constexpr (std::is_same_v<T, Rational>) {
      Msp f = input;
      if (!f.is_quadratic()) {
        f = quadratize(f).system;
        err << "note: system was quadratized (auxiliary variables added)\n";
      }
      if (!f.is_strongly_connected()) {
        err << "error: certified bit targets need a strongly connected system; "
               "use solve --scheme dnm for decomposed systems\n";
        return not_certifiable;
      }
      CertifiedRun run = certify_newton(f, 0, *cfg.target_bits, {}, options);
      return report_solve(f, run.trace, cfg, run.certificate, std::nullopt, std::nullopt, out);
    } else {
      err << "error: --target-bits needs --mode exact\n";
      return usage;
    }
  }
  return report_solve(input, newton_solve<T>(input, stop, options), cfg, std::nullopt, std::nullopt,
                      std::nullopt, out);
}

// --- certify ---------------------------------------------------------------

struct CertifyConfig {
  std::optional<std::size_t> iterations;
  std::optional<std::size_t> target_bits;
  std::string method = "auto";
  std::string upper = "auto";
  bool prove_below_one = false;
  std::string output = "json";
  std::size_t precision_budget = 256;
};

int cmd_certify(const std::string& path, const CertifyConfig& cfg, std::ostream& out, std::ostream& err) {
  Msp f = load(path).system;
  if (!f.is_quadratic()) {
    f = quadratize(f).system;
    err << "note: system was quadratized (auxiliary variables added); the certificate covers the new system\n";
  }
  if (!f.is_strongly_connected()) {
    err << "error: certificates are only issued for strongly connected systems; "
           "use 'solve --scheme dnm' for an uncertified decomposed solve\n";
    return not_certifiable;
  }

  CertifyOptions options;
  if (cfg.method != "auto") {
    options.method = parse_threshold_method(cfg.method);
    if (!options.method) {
      err << "error: unknown threshold method '" << cfg.method << "'\n";
      return usage;
    }
  }
  if (cfg.upper == "auto") {
    options.upper = UpperBoundMode::automatic;
  } else if (cfg.upper == "one") {
    options.upper = UpperBoundMode::one;
  } else if (cfg.upper == "none") {
    options.upper = UpperBoundMode::none;
  } else {
    options.upper = UpperBoundMode::given;
    std::istringstream list(cfg.upper);
    std::string item;
    while (std::getline(list, item, ',')) options.given_upper.push_back(parse_rational(item));
    if (options.given_upper.size() != f.size()) throw DimensionMismatch(f.size(), options.given_upper.size());
  }

  SolverOptions solver;
  solver.precision_budget = cfg.precision_budget;
  std::size_t iterations = cfg.iterations.value_or(0);
  std::size_t target = cfg.target_bits.value_or(cfg.iterations ? 0 : 16);
  CertifiedRun run = certify_newton(f, iterations, target, options, solver);
  const Certificate& c = run.certificate;
  const bool below_one = proves_below_one(c);

  if (cfg.output == "json") {
    std::string doc = to_json(c);
    if (cfg.prove_below_one) {
      auto parsed = ordered_json::parse(doc);
      parsed["below_one_verdict"] = below_one ? "YES" : "NO";
      doc = parsed.dump(2);
    }
    out << doc << "\n";
  } else {
    out << "iterations: " << c.iterations << "\n";
    out << "bits: " << c.bits << "\n";
    out << "threshold: " << to_string(c.threshold.method) << " = " << to_decimal_string(c.threshold.value, 8) << "\n";
    for (const auto& alt : c.alternatives) {
      out << "  also: " << to_string(alt.method) << " = " << to_decimal_string(alt.value, 8) << "\n";
    }
    out << "cmin: " << to_plain_string(c.bounds.cmin) << "\n";
    out << "m: " << c.bounds.m_bits << "\n";
    out << "mu_lower_min: " << decimal(c.bounds.mu_lower_min()) << "\n";
    if (auto hi = c.bounds.mu_upper_max()) out << "mu_upper_max: " << decimal(*hi) << "\n";
    for (std::size_t j = 0; j < f.size(); ++j) {
      out << f.variable(j) << " in [" << decimal(c.enclosure[j].first) << ", " << decimal(c.enclosure[j].second)
          << "]\n";
    }
    if (cfg.prove_below_one) out << "below one: " << (below_one ? "YES" : "NO") << "\n";
  }
  return ok;
}

// --- convert / generate ----------------------------------------------------

int cmd_convert(const std::string& path, const std::string& target, const std::string& output_path,
                std::ostream& out, std::ostream& err) {
  const Loaded in = load(path);
  std::string text;
  if (target == "mspe") {
    text = format_mspe(in.system);
  } else if (target == "quadratize") {
    QuadratizeResult q = quadratize(in.system);
    if (q.auxiliaries > 0) err << "note: " << q.auxiliaries << " auxiliary variable(s) added\n";
    text = format_mspe(q.system);
  } else if (target == "clean") {
    CleanResult c = clean(in.system);
    for (const auto& name : c.removed) err << "note: removed unproductive variable " << name << "\n";
    text = format_mspe(c.system);
  } else {
    err << "error: unknown conversion target '" << target << "' (mspe, quadratize, clean)\n";
    return usage;
  }
  if (output_path.empty()) {
    out << text;
  } else {
    std::ofstream file(output_path, std::ios::binary);
    if (!file) throw InputError("cannot write '" + output_path + "'");
    file << text;
  }
  return ok;
}

int cmd_generate(const GenerateOptions& options, const std::string& format, std::ostream& out) {
  Ppda p = generate_ppda(options);
  if (format == "ppda") {
    out << format_ppda(p);
  } else {
    out << format_mspe(termination_mspe(p).system);
  }
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Least fixed points of monotone polynomial systems: solve, analyze, certify."};
  app.require_subcommand(1);

  std::string file;
  std::string info_output = "text";
  auto* info = app.add_subcommand("info", "Structure report: SCCs, depths, h, w, cmin, m");
  info->add_option("file", file, "Input (.mspe, .ppda or .bb)")->required();
  info->add_option("--output", info_output, "text or json")->check(CLI::IsMember({"text", "json"}));

  SolveConfig solve_cfg;
  auto* solve = app.add_subcommand("solve", "Approximate the least fixed point");
  solve->add_option("file", file, "Input (.mspe, .ppda or .bb)")->required();
  solve->add_option("--scheme", solve_cfg.scheme, "kleene, newton or dnm")
      ->check(CLI::IsMember({"kleene", "newton", "dnm"}));
  solve->add_option("-j", solve_cfg.j, "DNM schedule parameter (j * 2^depth steps per SCC)")
      ->check(CLI::PositiveNumber);
  solve->add_option("--mode", solve_cfg.mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  solve->add_option("--float-precision", solve_cfg.float_precision, "Float mode precision in bits")
      ->check(CLI::Range(2L, 100000L));
  solve->add_option("--max-iterations", solve_cfg.max_iterations, "Stop after this many steps (default 20)");
  solve->add_option("--residual-eps", solve_cfg.residual_eps, "Stop once max|f(x) - x| <= eps");
  solve->add_option("--target-bits", solve_cfg.target_bits, "Newton until this many bits are certified");
  solve->add_option("--output", solve_cfg.output, "text or json")->check(CLI::IsMember({"text", "json"}));
  solve->add_flag("--parallel-sccs", solve_cfg.parallel_sccs, "Solve SCCs of equal depth concurrently");
  solve->add_flag("--early-exit", solve_cfg.early_exit, "DNM: stop an SCC once it reaches its fixed point");
  solve->add_option("--precision-budget", solve_cfg.precision_budget,
                    "Exact mode: bit size above which iterates are safely rounded (0 = never)");

  CertifyConfig cert_cfg;
  auto* certify_cmd = app.add_subcommand("certify", "Newton with a valid-bits certificate (JSON)");
  certify_cmd->add_option("file", file, "Input (.mspe, .ppda or .bb)")->required();
  certify_cmd->add_option("--iterations", cert_cfg.iterations, "Run exactly this many Newton steps");
  certify_cmd->add_option("--target-bits", cert_cfg.target_bits,
                          "Iterate until this many bits are certified (default 16 without --iterations)");
  certify_cmd->add_option("--method", cert_cfg.method, "auto, scc, size, ppda, strict or cone");
  certify_cmd->add_option("--upper-bound", cert_cfg.upper, "auto, one, none or a list u1,u2,...");
  certify_cmd->add_flag("--prove-below-one", cert_cfg.prove_below_one, "Report whether every mu_i < 1 is proven");
  certify_cmd->add_option("--output", cert_cfg.output, "json or text")->check(CLI::IsMember({"text", "json"}));
  certify_cmd->add_option("--precision-budget", cert_cfg.precision_budget,
                          "Bit size above which iterates are safely rounded (0 = never)");

  std::string target;
  std::string output_path;
  auto* convert = app.add_subcommand("convert", "Compile or transform a system and print it as MSPE text");
  convert->add_option("file", file, "Input (.mspe, .ppda or .bb)")->required();
  convert->add_option("target", target, "mspe, quadratize or clean")->required();
  convert->add_option("-o,--out", output_path, "Write to a file instead of stdout");

  GenerateOptions gen;
  std::string gen_format = "mspe";
  auto* generate = app.add_subcommand("generate", "Random pPDA and its termination system");
  generate->add_option("--states", gen.n_states, "Number of control states")->check(CLI::PositiveNumber);
  generate->add_option("--symbols", gen.n_symbols, "Number of stack symbols")->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen.seed, "Random seed");
  generate->add_option("--max-rules", gen.max_rules, "Rules per (state, symbol)")->check(CLI::PositiveNumber);
  generate->add_flag("--strict", gen.strict, "Pop to every state from every (state, symbol)");
  generate->add_option("--format", gen_format, "mspe or ppda")->check(CLI::IsMember({"mspe", "ppda"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    if (*info) return cmd_info(file, info_output, out);
    if (*solve) {
      if (solve_cfg.mode == "float") {
        Msp f = load(file).system;
        Float::set_default_precision(solve_cfg.float_precision);
        return run_solve<Float>(f, solve_cfg, out, err);
      }
      return run_solve<Rational>(load(file).system, solve_cfg, out, err);
    }
    if (*certify_cmd) return cmd_certify(file, cert_cfg, out, err);
    if (*convert) return cmd_convert(file, target, output_path, out, err);
    if (*generate) return cmd_generate(gen, gen_format, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return parse_error;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return parse_error;
  } catch (const InfeasibleSuspected& e) {
    err << "infeasible: " << e.what() << "\n";
    return infeasible;
  } catch (const CertificationError& e) {
    err << "not certifiable: " << e.what() << "\n";
    return not_certifiable;
  } catch (const Error& e) {
    err << "solver error: " << e.what() << "\n";
    return solver_error;
  }
  return usage;
}

}  // namespace mspe::cli
