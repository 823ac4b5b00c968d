/**
 * census -- command-line front end for subtree counting, sampling,
 * generating-function moments, singularity constants and the Monte Carlo
 * CLT harness.
 *
 * Subcommands: count, sample, moments, mixed, singularities, sizelaw,
 * clt, mu, verify. Every run echoes its resolved configuration into the
 * output header; identical argv + seed give byte-identical output files.
 *
 * Exit codes: 0 success, 2 validation error, 3 numeric failure (for
 * example a demanded square-root branch that does not exist).
 */

#include "CLI11.hpp"
#include "json.hpp"

#include "census/acceptance.hpp"
#include "census/models.hpp"
#include "census/montecarlo.hpp"
#include "census/sampler.hpp"
#include "census/series.hpp"
#include "census/singularity.hpp"
#include "census/tree.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace {

using json = nlohmann::json;
using namespace census;

struct RunConfig {
  std::string subcommand;
  std::string model_spec = "binary-full";
  std::string tree_text;
  int size = 1001;
  long long count = 10000;
  int max_m = 3;
  int max_n = 101;
  int m = 1;
  int ell = 0;
  unsigned long long seed = 1;
  double tol = 1e-12;
  std::string format = "auto";  // auto resolves to json for clt/mu, csv otherwise
  std::string out_path;        // empty = stdout
  int threads = 0;             // 0 = all cores
  int mu_cutoff = 13;          // mu subcommand: exact enumeration cutoff
  int mu_size_cap = 4096;      // mu subcommand: censoring cap

  std::vector<std::pair<std::string, std::string>> echo() const {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("subcommand", subcommand);
    kv.emplace_back("model", model_spec);
    if (!tree_text.empty()) kv.emplace_back("tree", tree_text);
    kv.emplace_back("size", std::to_string(subcommand == "mu" ? mu_size_cap : size));
    kv.emplace_back("count", std::to_string(count));
    kv.emplace_back("max-m", std::to_string(max_m));
    kv.emplace_back("max-n", std::to_string(subcommand == "mu" ? mu_cutoff : max_n));
    kv.emplace_back("m", std::to_string(m));
    kv.emplace_back("ell", std::to_string(ell));
    kv.emplace_back("seed", std::to_string(seed));
    kv.emplace_back("tol", [this] {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%g", tol);
      return std::string(buf);
    }());
    kv.emplace_back("format", format);
    kv.emplace_back("out", out_path.empty() ? "-" : out_path);
    kv.emplace_back("threads", std::to_string(threads));
    return kv;
  }
};

std::string fmt6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string fmtg(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

/// Output sink: stdout or --out file, with the config-echo header.
struct Output {
  std::unique_ptr<std::ofstream> file;
  std::ostream* os = &std::cout;

  explicit Output(const RunConfig& cfg) {
    if (!cfg.out_path.empty()) {
      file = std::make_unique<std::ofstream>(cfg.out_path);
      if (!file->good()) {
        throw DomainError("cannot open output file: " + cfg.out_path);
      }
      os = file.get();
    }
  }
  std::ostream& stream() { return *os; }
};

void write_csv_header(std::ostream& os, const RunConfig& cfg) {
  for (const auto& [k, v] : cfg.echo()) os << "# " << k << " = " << v << "\n";
}

json config_json(const RunConfig& cfg) {
  json j;
  for (const auto& [k, v] : cfg.echo()) j[k] = v;
  return j;
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int cmd_count(const RunConfig& cfg) {
  OrderedTree t = OrderedTree::parse(cfg.tree_text);
  BigInt r = count_root_subtrees(t);
  BigInt s = count_subtrees(t);
  Output out(cfg);
  if (cfg.format == "json") {
    json j;
    j["config"] = config_json(cfg);
    j["r"] = r.str();
    j["s"] = s.str();
    out.stream() << j.dump(2) << "\n";
  } else {
    write_csv_header(out.stream(), cfg);
    out.stream() << "r,s\n" << r.str() << "," << s.str() << "\n";
  }
  return 0;
}

int cmd_sample(const RunConfig& cfg) {
  OffspringModel model = parse_model(cfg.model_spec);
  if (cfg.size < 1 || (cfg.size - 1) % model.span != 0) {
    throw DomainError("no trees of size " + std::to_string(cfg.size) +
                      " exist (span " + std::to_string(model.span) + ")");
  }
  std::vector<std::string> lines(static_cast<size_t>(cfg.count));
  census::detail::parallel_samples(cfg.count, cfg.threads, [&](int64_t i) {
    RngStream rng(cfg.seed, static_cast<uint64_t>(i));
    lines[static_cast<size_t>(i)] = sample_conditioned(model, cfg.size, rng).to_text();
  });
  Output out(cfg);
  if (cfg.format == "json") {
    json j;
    j["config"] = config_json(cfg);
    j["trees"] = lines;
    out.stream() << j.dump(2) << "\n";
  } else {
    write_csv_header(out.stream(), cfg);
    for (const auto& l : lines) out.stream() << l << "\n";
  }
  return 0;
}

/// Rows of n, m, ell, moment, ratio_to_asymptote for the requested orders.
int emit_moment_rows(const RunConfig& cfg,
                     const std::vector<std::pair<int, int>>& orders) {
  OffspringModel model = parse_model(cfg.model_spec);
  int top = 0;
  for (auto [mm, ll] : orders) top = std::max(top, mm + ll);
  auto reports = analyze_singularities(model, top);
  bool branch_ok = static_cast<int>(reports.size()) == top + 1 &&
                   reports.back().square_root();

  auto fam = compute_F_family<LogDouble>(model, top, cfg.max_n);
  bool need_mixed = false;
  for (auto [mm, ll] : orders) need_mixed = need_mixed || mm > 0;
  MixedFamily<LogDouble> mix;
  MixedConstants mc;
  if (need_mixed) {
    mix = compute_G_family<LogDouble>(fam, top, cfg.max_n);
    if (branch_ok) mc = mixed_constants(model, reports);
  }

  struct Row {
    int n, m, ell;
    double moment, ratio;
  };
  std::vector<Row> rows;
  for (auto [mm, ll] : orders) {
    // interpretation: mm general-subtree marks, ll root marks; the pure
    // moments subcommand passes mm = 0
    const auto& rep = reports[static_cast<size_t>(std::min<int>(mm + ll, reports.size() - 1))];
    for (int n = 1; n <= cfg.max_n; n += model.span) {
      LogDouble mv = mm == 0 ? exact_moment(fam, ll, n)
                             : exact_mixed_moment(mix, fam, mm, ll, n);
      double ratio = std::numeric_limits<double>::quiet_NaN();
      if (branch_ok && rep.square_root()) {
        double constant = mm == 0 ? rep.gamma : mc.gamma_prime(ll, mm);
        ratio = std::exp(mv.log_value() - std::log(constant) -
                         n * std::log(rep.tau));
      }
      rows.push_back(Row{n, mm, ll, mv.value(), ratio});
    }
  }

  Output out(cfg);
  if (cfg.format == "json") {
    json j;
    j["config"] = config_json(cfg);
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"n", r.n},
                     {"m", r.m},
                     {"ell", r.ell},
                     {"moment", r.moment},
                     {"ratio_to_asymptote", r.ratio}});
    }
    j["rows"] = arr;
    out.stream() << j.dump(2) << "\n";
  } else {
    write_csv_header(out.stream(), cfg);
    out.stream() << "n,m,ell,moment,ratio_to_asymptote\n";
    for (const auto& r : rows) {
      out.stream() << r.n << "," << r.m << "," << r.ell << "," << fmtg(r.moment)
                   << "," << fmt6(r.ratio) << "\n";
    }
  }
  if (!branch_ok) {
    std::cerr << "census: no square-root branch at the demanded order; "
                 "asymptote column is nan\n";
    return 3;
  }
  return 0;
}

int cmd_moments(const RunConfig& cfg) {
  std::vector<std::pair<int, int>> orders;
  for (int k = 0; k <= cfg.max_m; ++k) orders.emplace_back(0, k);
  return emit_moment_rows(cfg, orders);
}

int cmd_mixed(const RunConfig& cfg) {
  return emit_moment_rows(cfg, {{cfg.m, cfg.ell}});
}

int cmd_singularities(const RunConfig& cfg) {
  OffspringModel model = parse_model(cfg.model_spec);
  auto reports = analyze_singularities(model, cfg.max_m);
  Output out(cfg);
  if (cfg.format == "json") {
    json j;
    j["config"] = config_json(cfg);
    json arr = json::array();
    for (const auto& r : reports) {
      json row;
      row["m"] = r.m;
      row["rho"] = r.rho;
      row["s"] = r.s;
      row["tau"] = r.tau;
      row["lambda"] = r.lambda;
      row["gamma"] = r.gamma;
      row["branch"] = r.square_root() ? "square-root"
                                      : "no-branch-point(" + r.reason + ")";
      arr.push_back(row);
    }
    j["rows"] = arr;
    out.stream() << j.dump(2) << "\n";
  } else {
    write_csv_header(out.stream(), cfg);
    out.stream() << "m,rho,s,tau,lambda,gamma,branch\n";
    for (const auto& r : reports) {
      if (r.square_root()) {
        out.stream() << r.m << "," << fmt6(r.rho) << "," << fmt6(r.s) << ","
                     << fmt6(r.tau) << "," << fmt6(r.lambda) << ","
                     << fmt6(r.gamma) << ",square-root\n";
      } else {
        out.stream() << r.m << "," << fmt6(r.rho) << ",nan,nan,nan,nan,"
                     << "no-branch-point(" << r.reason << ")\n";
      }
    }
  }
  // max-m demands a square-root branch through that order
  if (static_cast<int>(reports.size()) != cfg.max_m + 1 ||
      !reports.back().square_root()) {
    std::cerr << "census: no square-root branch point at some m <= "
              << cfg.max_m << "\n";
    return 3;
  }
  return 0;
}

int cmd_sizelaw(const RunConfig& cfg) {
  OffspringModel model = parse_model(cfg.model_spec);
  auto reports = analyze_singularities(model, 1);
  if (reports.size() < 2 || !reports[1].square_root()) {
    std::cerr << "census: size law needs the m = 1 branch point\n";
    return 3;
  }
  SizeLaw law = size_law(model, reports[1]);
  Output out(cfg);
  if (cfg.format == "json") {
    json j;
    j["config"] = config_json(cfg);
    j["d1"] = law.d1;
    j["d2"] = law.d2;
    j["d3"] = law.d3;
    j["mu_x"] = law.mu_x;
    j["sigma2_x"] = law.sigma2_x;
    out.stream() << j.dump(2) << "\n";
  } else {
    write_csv_header(out.stream(), cfg);
    out.stream() << "d1,d2,d3,mu_x,sigma2_x\n";
    out.stream() << fmt6(law.d1) << "," << fmt6(law.d2) << "," << fmt6(law.d3)
                 << "," << fmt6(law.mu_x) << "," << fmt6(law.sigma2_x) << "\n";
  }
  return 0;
}

int cmd_clt(const RunConfig& cfg) {
  OffspringModel model = parse_model(cfg.model_spec);
  CltReport rep =
      run_clt_experiment(model, cfg.size, cfg.count, cfg.seed, cfg.threads);
  Output out(cfg);
  json j;
  j["config"] = config_json(cfg);
  j["n"] = rep.n;
  j["samples"] = rep.samples;
  j["mean_logR"] = rep.mean_logR;
  j["var_logR"] = rep.var_logR;
  j["mean_logS"] = rep.mean_logS;
  j["var_logS"] = rep.var_logS;
  j["mu_hat"] = rep.mu_hat;
  j["sigma2_hat"] = rep.sigma2_hat;
  j["skewness"] = rep.skewness;
  j["excess_kurtosis"] = rep.excess_kurtosis;
  j["ks_statistic"] = rep.ks_statistic;
  j["bound_violations"] = rep.bound_violations;
  j["pass"] = rep.pass;
  if (cfg.format == "csv") {
    write_csv_header(out.stream(), cfg);
    out.stream() << "n,samples,mean_logR,var_logR,mean_logS,var_logS,mu_hat,"
                    "sigma2_hat,skewness,excess_kurtosis,ks_statistic,pass\n"
                 << rep.n << "," << rep.samples << "," << fmtg(rep.mean_logR)
                 << "," << fmtg(rep.var_logR) << "," << fmtg(rep.mean_logS)
                 << "," << fmtg(rep.var_logS) << "," << fmtg(rep.mu_hat) << ","
                 << fmtg(rep.sigma2_hat) << "," << fmtg(rep.skewness) << ","
                 << fmtg(rep.excess_kurtosis) << "," << fmtg(rep.ks_statistic)
                 << "," << (rep.pass ? "true" : "false") << "\n";
  } else {
    out.stream() << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_mu(const RunConfig& cfg) {
  OffspringModel model = parse_model(cfg.model_spec);
  // --max-n is the enumeration cutoff; --size the censoring cap
  MuEstimate est = estimate_mu(model, cfg.mu_cutoff, cfg.count,
                               static_cast<size_t>(cfg.mu_size_cap), cfg.seed,
                               cfg.threads);
  Output out(cfg);
  json j;
  j["config"] = config_json(cfg);
  j["mu_exact_part"] = est.mu_exact_part;
  j["mu_mc_part"] = est.mu_mc_part;
  j["mu_total"] = est.mu_total;
  j["sigma2_estimate"] = est.sigma2_estimate;
  j["std_error"] = est.std_error;
  j["enum_cutoff"] = est.enum_cutoff;
  j["mc_samples"] = est.mc_samples;
  j["size_cap"] = est.size_cap;
  j["censored_count"] = est.censored_count;
  j["censored_tail_bound"] = est.censored_tail_bound;
  if (cfg.format == "csv") {
    write_csv_header(out.stream(), cfg);
    out.stream() << "mu_exact_part,mu_mc_part,mu_total,sigma2_estimate,"
                    "std_error,censored_count,censored_tail_bound\n"
                 << fmtg(est.mu_exact_part) << "," << fmtg(est.mu_mc_part) << ","
                 << fmtg(est.mu_total) << "," << fmtg(est.sigma2_estimate) << ","
                 << fmtg(est.std_error) << "," << est.censored_count << ","
                 << fmtg(est.censored_tail_bound) << "\n";
  } else {
    out.stream() << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg, const char* argv0) {
  Output out(cfg);
  auto results = acceptance::run_all(cfg.threads, argv0);
  bool ok = acceptance::print_results(out.stream(), results);
  out.stream() << (ok ? "acceptance: ALL PASS" : "acceptance: FAILURES") << "\n";
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"subtree census: counts, samplers, moments and singularity "
               "constants for simply generated trees"};
  app.set_config("--config", "", "config file with `key = value` lines; flags override");

  app.add_option("--model", cfg.model_spec, "model spec: binary-full | catalan | poisson | zeta4:a=<d> | weights:w0,w1,...");
  app.add_option("--seed", cfg.seed, "RNG seed");
  app.add_option("--tol", cfg.tol, "numeric tolerance (informational echo)");
  app.add_option("--format", cfg.format,
                 "output format: csv | json (default: json for clt/mu, csv otherwise)")
      ->check(CLI::IsMember({"auto", "csv", "json"}));
  app.add_option("--out", cfg.out_path, "output path (default stdout)");
  app.add_option("--threads", cfg.threads, "worker threads (0 = all cores)");

  auto add_sub = [&](const char* name, const char* desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->fallthrough();
    return sub;
  };

  CLI::App* c_count = add_sub("count", "exact R(T), S(T) of one tree");
  c_count->add_option("--tree", cfg.tree_text, "preorder degree sequence, e.g. 2,0,0")
      ->required();

  CLI::App* c_sample = add_sub("sample", "conditioned trees, one degree sequence per line");
  c_sample->add_option("--size", cfg.size, "tree size n");
  c_sample->add_option("--count", cfg.count, "number of samples");

  CLI::App* c_moments = add_sub("moments", "exact moments E R^m with asymptote ratios");
  c_moments->add_option("--max-m", cfg.max_m, "largest moment order");
  c_moments->add_option("--max-n", cfg.max_n, "largest tree size");

  CLI::App* c_mixed = add_sub("mixed", "exact mixed moments E[S^m R^ell]");
  c_mixed->add_option("--m", cfg.m, "general-subtree exponent");
  c_mixed->add_option("--ell", cfg.ell, "root-subtree exponent");
  c_mixed->add_option("--max-n", cfg.max_n, "largest tree size");

  CLI::App* c_sing = add_sub("singularities", "rho_m, s_m, tau_m, lambda_m, gamma_m");
  c_sing->add_option("--max-m", cfg.max_m, "largest moment order");

  add_sub("sizelaw", "root-subtree size-law constants");

  CLI::App* c_clt = add_sub("clt", "Monte Carlo CLT screen for log R, log S");
  c_clt->add_option("--size", cfg.size, "tree size n");
  c_clt->add_option("--count", cfg.count, "number of samples");

  CLI::App* c_mu = add_sub("mu", "estimate mu = E f(T) and sigma^2");
  c_mu->add_option("--max-n", cfg.mu_cutoff, "exact enumeration cutoff");
  c_mu->add_option("--count", cfg.count, "Monte Carlo samples");
  c_mu->add_option("--size", cfg.mu_size_cap, "censoring size cap");

  add_sub("verify", "run the acceptance suite");

  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    for (const auto* sub : app.get_subcommands()) {
      cfg.subcommand = sub->get_name();
    }
    if (cfg.format == "auto") {
      cfg.format = (cfg.subcommand == "clt" || cfg.subcommand == "mu") ? "json" : "csv";
    }
    if (cfg.subcommand == "count") return cmd_count(cfg);
    if (cfg.subcommand == "sample") return cmd_sample(cfg);
    if (cfg.subcommand == "moments") return cmd_moments(cfg);
    if (cfg.subcommand == "mixed") return cmd_mixed(cfg);
    if (cfg.subcommand == "singularities") return cmd_singularities(cfg);
    if (cfg.subcommand == "sizelaw") return cmd_sizelaw(cfg);
    if (cfg.subcommand == "clt") return cmd_clt(cfg);
    if (cfg.subcommand == "mu") return cmd_mu(cfg);
    if (cfg.subcommand == "verify") return cmd_verify(cfg, argv[0]);
    std::cerr << "census: unknown subcommand\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "census: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "census: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "census: " << e.what() << "\n";
    return 3;
  }
}
