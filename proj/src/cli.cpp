#include "hdpmean/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "hdpmean/audit.hpp"
#include "hdpmean/bounds.hpp"
#include "hdpmean/config.hpp"
#include "hdpmean/csv.hpp"
#include "hdpmean/experiments.hpp"

#ifndef HDPMEAN_VERSION
#define HDPMEAN_VERSION "0.0.0"
#endif
#ifndef HDPMEAN_GIT_REV
#define HDPMEAN_GIT_REV "untracked"
#endif

namespace hdpmean {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 12345;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("HDP_MEAN_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      // fall through to the built-in default
    }
  }
  return kDefaultSeed;
}

int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min(hw == 0 ? 1u : hw, 8u));
}

double parse_level(const std::string& tok) {
  if (tok == "inf") return kInf;
  std::size_t pos = 0;
  const double v = std::stod(tok, &pos);
  if (pos != tok.size()) throw std::invalid_argument("bad level: " + tok);
  return v;
}

std::vector<double> read_eps_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open eps file: " + path);
  std::vector<double> levels;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // trim
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string tok = line.substr(b, e - b + 1);
    try {
      const double v = parse_level(tok);
      if (std::isnan(v) || v < 0.0) throw std::invalid_argument("negative");
      levels.push_back(v);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad level at " + path + ":" +
                                  std::to_string(lineno) + ": " + tok);
    }
  }
  if (levels.empty()) throw std::invalid_argument("eps file is empty: " + path);
  return levels;
}

json double_or_string(double v) {
  if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
  if (std::isnan(v)) return json("nan");
  return json(v);
}

struct OutputTarget {
  std::string path;  // empty = stdout

  void write(std::ostream& fallback, const std::string& text) const {
    if (path.empty()) {
      fallback << text;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + path);
    f << text;
  }
};

// --- shared profile/levels flag block --------------------------------------

struct PrivacyArgs {
  double eps1 = -1.0, eps2 = -1.0, f = -1.0;
  long n = 0;
  std::string eps1_tok, eps2_tok;
  std::string eps_file;

  bool has_profile() const { return !eps1_tok.empty(); }
  bool has_file() const { return !eps_file.empty(); }

  TwoGroupProfile profile() const {
    return TwoGroupProfile(parse_level(eps1_tok), parse_level(eps2_tok), n, f);
  }
  PrivacyVector levels() const { return PrivacyVector(read_eps_file(eps_file)); }

  void validate() const {
    if (has_profile() == has_file())
      throw CLI::ValidationError(
          "privacy", "supply either --eps1/--eps2/--n/--f or --eps-file");
    if (has_profile() && (eps2_tok.empty() || n < 1 || f < 0.0 || f > 1.0))
      throw CLI::ValidationError("privacy",
                                 "--eps1 needs --eps2, --n >= 1, --f in [0,1]");
  }
};

void add_privacy_flags(CLI::App* cmd, PrivacyArgs& args) {
  cmd->add_option("--eps1", args.eps1_tok, "group-1 privacy level (or 'inf')");
  cmd->add_option("--eps2", args.eps2_tok, "group-2 privacy level (or 'inf')");
  cmd->add_option("--n", args.n, "population size");
  cmd->add_option("--f", args.f, "fraction of users in group 1");
  cmd->add_option("--eps-file", args.eps_file,
                  "file with one privacy level per line ('inf' allowed)");
}

std::vector<MechanismKind> parse_mechanisms(const std::string& token) {
  if (token == "all")
    return {MechanismKind::kAdpm, MechanismKind::kUni,     MechanismKind::kSm,
            MechanismKind::kPropDpm, MechanismKind::kLdpe, MechanismKind::kStretch};
  std::vector<MechanismKind> kinds;
  std::stringstream ss(token);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto kind = mechanism_from_name(item);
    if (!kind) throw CLI::ValidationError("mechanism", "unknown mechanism: " + item);
    kinds.push_back(*kind);
  }
  if (kinds.empty()) throw CLI::ValidationError("mechanism", "no mechanism given");
  return kinds;
}

DistributionSpec parse_dist(const std::string& token) {
  const auto d = distribution_from_name(token);
  if (!d) throw CLI::ValidationError("dist", "unknown distribution: " + token);
  return *d;
}

// --- weights ----------------------------------------------------------------

int cmd_weights(const PrivacyArgs& priv, const std::string& format,
                const OutputTarget& target, std::ostream& out) {
  json doc;
  std::vector<double> weights;
  double eta = 0.0, objective = 0.0;
  bool degenerate = false;
  std::vector<double> declared;

  if (priv.has_profile()) {
    const TwoGroupProfile p = priv.profile();
    const TwoGroupSolution s = solve_two_group(p);
    weights = {s.w1, s.w2};
    declared = {p.eps1, p.eps2};
    eta = s.eta;
    objective = s.objective;
    degenerate = s.degenerate;
    doc["regime"] = regime_name(s.regime);
    doc["saturation_ratio"] = double_or_string(saturation_ratio(p));
    doc["saturation_eps2"] = double_or_string(saturation_eps2(p));
    doc["weight_ratio"] = double_or_string(s.weight_ratio());
    doc["profile"] = {{"eps1", double_or_string(p.eps1)},
                      {"eps2", double_or_string(p.eps2)},
                      {"n", p.n},
                      {"f", p.f}};
  } else {
    const PrivacyVector eps = priv.levels();
    const WeightSolution s = solve_general(eps);
    weights = s.weights;
    declared = eps.levels();
    eta = s.eta;
    objective = s.objective;
    degenerate = s.degenerate;
  }

  std::vector<double> eff(weights.size());
  std::vector<bool> ok(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = degenerate ? 0.0 : weights[i];
    eff[i] = effective_level(w, eta);
    ok[i] = eff[i] <= declared[i] * (1.0 + 1e-12);
  }

  if (format == "json") {
    doc["weights"] = json::array();
    for (double w : weights) doc["weights"].push_back(double_or_string(w));
    doc["eta"] = double_or_string(eta);
    doc["objective"] = double_or_string(objective);
    doc["degenerate"] = degenerate;
    doc["effective_levels"] = json::array();
    for (double e : eff) doc["effective_levels"].push_back(double_or_string(e));
    doc["satisfied"] = ok;
    target.write(out, doc.dump(2) + "\n");
  } else {
    std::ostringstream csv_text;
    CsvWriter csv(csv_text);
    const std::vector<std::string> head = {"index",     "declared_eps", "weight",
                                           "eta",       "objective",    "degenerate",
                                           "effective", "satisfied"};
    csv.header(head);
    for (std::size_t i = 0; i < weights.size(); ++i) {
      csv.row(std::vector<std::string>{
          format_int(static_cast<long>(i)), format_double(declared[i]),
          format_double(weights[i]), format_double(eta), format_double(objective),
          degenerate ? "true" : "false", format_double(eff[i]),
          ok[i] ? "true" : "false"});
    }
    target.write(out, csv_text.str());
  }
  return 0;
}

// --- bounds -----------------------------------------------------------------

int cmd_bounds(const PrivacyArgs& priv, const std::string& sweep,
               const OutputTarget& target, std::ostream& out) {
  std::vector<double> eps2_values;
  const TwoGroupProfile base = priv.profile();
  if (sweep.empty()) {
    eps2_values.push_back(base.eps2);
  } else {
    // --sweep eps2:lo:hi:steps
    std::stringstream ss(sweep);
    std::string axis, lo_s, hi_s, steps_s;
    if (!std::getline(ss, axis, ':') || axis != "eps2" ||
        !std::getline(ss, lo_s, ':') || !std::getline(ss, hi_s, ':') ||
        !std::getline(ss, steps_s, ':'))
      throw CLI::ValidationError("sweep", "expected --sweep eps2:lo:hi:steps");
    const double lo = parse_level(lo_s), hi = parse_level(hi_s);
    const long steps = std::stol(steps_s);
    if (steps < 2 || !(hi > lo))
      throw CLI::ValidationError("sweep", "need steps >= 2 and hi > lo");
    for (long i = 0; i < steps; ++i)
      eps2_values.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                     static_cast<double>(steps - 1));
  }

  std::ostringstream csv_text;
  CsvWriter csv(csv_text);
  csv.header(std::vector<std::string>{"eps1", "eps2", "n", "f", "upper", "lower",
                                      "regime", "saturation_eps2"});
  for (double e2 : eps2_values) {
    const TwoGroupProfile p(base.eps1, std::max(e2, base.eps1), base.n, base.f);
    const BoundReport r = bound_report(p);
    csv.row(std::vector<std::string>{
        format_double(p.eps1), format_double(p.eps2), format_int(p.n),
        format_double(p.f), format_double(r.upper), format_double(r.lower),
        regime_name(r.regime), format_double(r.saturation_eps2)});
  }
  target.write(out, csv_text.str());
  return 0;
}

// --- simulate ----------------------------------------------------------------

const std::vector<std::string> kSimulateHeader = {
    "mechanism", "n",    "f",      "eps1", "eps2",        "dist",
    "trials",    "seed", "mse",    "stderr", "analytic_mse", "upper_bound",
    "reason"};

int cmd_simulate(const PrivacyArgs& priv, const std::string& mechanisms,
                 const std::string& dist_token, long trials, std::uint64_t seed,
                 int threads, bool clamp, const OutputTarget& target,
                 std::ostream& out) {
  const std::vector<MechanismKind> kinds = parse_mechanisms(mechanisms);
  const DistributionSpec dist = parse_dist(dist_token);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::ostringstream csv_text;
  CsvWriter csv(csv_text);
  csv.header(kSimulateHeader);

  std::uint64_t tag = 0;
  for (MechanismKind kind : kinds) {
    MechanismSpec spec;
    spec.kind = kind;
    spec.clamp = clamp;
    double eps1 = nan, eps2 = nan, f = nan, upper = nan;
    long n = 0;
    if (priv.has_profile()) {
      const TwoGroupProfile p = priv.profile();
      spec.profile = p;
      eps1 = p.eps1;
      eps2 = p.eps2;
      f = p.f;
      n = p.n;
      upper = upper_bound(p);
    } else {
      const PrivacyVector eps = priv.levels();
      n = static_cast<long>(eps.size());
      if (kind == MechanismKind::kLdpe) {
        // two-group structure required; report the infeasible row
        csv.row(std::vector<std::string>{
            mechanism_name(kind), format_int(n), "nan", "nan", "nan",
            dist.name(), format_int(trials), format_uint(seed), "inf", "nan",
            "inf", "nan", "ldpe requires a two-group profile"});
        continue;
      }
      spec.levels = eps;
    }

    const std::uint64_t row_seed = derive_seed(seed, tag++);
    const SimResult sim = estimate_mse(spec, dist, trials, row_seed, threads);
    csv.row(std::vector<std::string>{
        mechanism_name(kind), format_int(n), format_double(f),
        format_double(eps1), format_double(eps2), dist.name(),
        format_int(trials), format_uint(row_seed), format_double(sim.mse),
        format_double(sim.std_error), format_double(sim.analytic_ref.total()),
        format_double(upper), sim.reason});
  }
  target.write(out, csv_text.str());
  return 0;
}

// --- audit --------------------------------------------------------------------

int cmd_audit(const PrivacyArgs& priv, const std::string& mechanism, long draws,
              std::uint64_t seed, const OutputTarget& target, std::ostream& out) {
  const auto kind = mechanism_from_name(mechanism);
  if (!kind) throw CLI::ValidationError("mechanism", "unknown mechanism: " + mechanism);

  MechanismSpec spec;
  spec.kind = *kind;
  PrivacyVector declared = priv.has_profile() ? two_group_levels(priv.profile())
                                              : priv.levels();
  if (*kind == MechanismKind::kLdpe) {
    if (!priv.has_profile())
      throw InfeasibleMechanism("ldpe requires a two-group profile");
    spec.profile = priv.profile();
  } else {
    spec.levels = declared;
  }

  const PreparedMechanism mech = prepare_mechanism(spec);
  const MechanismCertificate cert = mechanism_certificate(mech, declared);

  json doc;
  doc["mechanism"] = mechanism_name(*kind);
  doc["analytic_certificate"] = cert.analytic;
  doc["all_satisfied"] = cert.all_satisfied();
  doc["draws"] = draws;
  doc["seed"] = seed;
  doc["classes"] = json::array();
  bool all_passed = true;
  for (std::size_t user : audit_classes(cert)) {
    const RatioAuditResult res = histogram_ratio_audit(
        mech, declared.size(), user, cert.effective_levels[user], draws,
        derive_seed(seed, user));
    all_passed = all_passed && res.passed;
    doc["classes"].push_back(
        {{"user", user},
         {"declared", double_or_string(declared[user])},
         {"effective", double_or_string(cert.effective_levels[user])},
         {"satisfied", static_cast<bool>(cert.satisfied[user])},
         {"empirical_max_z", res.max_z},
         {"bins_checked", res.bins_checked},
         {"passed", res.passed}});
  }
  doc["all_passed"] = all_passed;
  target.write(out, doc.dump(2) + "\n");
  return cert.all_satisfied() && all_passed ? 0 : 1;
}

// --- reproduce ----------------------------------------------------------------

std::string join_path(const std::string& dir, const std::string& file) {
  if (dir.empty() || dir == ".") return file;
  return dir.back() == '/' ? dir + file : dir + "/" + file;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file: " + path);
  f << text;
}

json base_manifest(const std::string& target, std::uint64_t seed, long trials) {
  json m;
  m["target"] = target;
  m["version"] = version_string();
  m["seed"] = seed;
  m["trials"] = trials;
  m["csv_schema"] = 1;
  return m;
}

int cmd_reproduce(const std::string& target, const std::string& outdir,
                  long trials_override, std::uint64_t seed, int threads,
                  std::ostream& out) {
  if (target == "fig1a") {
    const long trials = trials_override > 0 ? trials_override : 200000;
    const std::vector<long> n_values = {250, 500, 1000, 2000, 4000};
    const std::vector<MechanismKind> kinds = {
        MechanismKind::kAdpm, MechanismKind::kLdpe, MechanismKind::kSm,
        MechanismKind::kUni};
    const auto rows = sweep_n(0.1, 0.15, 0.5, DistributionSpec::uniform(),
                              n_values, kinds, trials, seed, threads);
    std::ostringstream csv_text;
    CsvWriter csv(csv_text);
    csv.header(std::vector<std::string>{"mechanism", "n", "f", "realized_f",
                                        "eps1", "eps2", "dist", "trials", "seed",
                                        "mse", "stderr", "transform",
                                        "analytic_mse", "upper_bound", "reason"});
    for (const auto& r : rows)
      csv.row(std::vector<std::string>{
          r.mechanism, format_int(r.n), format_double(r.f),
          format_double(r.realized_f), format_double(r.eps1),
          format_double(r.eps2), "uniform", format_int(r.trials),
          format_uint(r.seed), format_double(r.mse), format_double(r.std_error),
          format_double(r.transform), format_double(r.analytic_total),
          format_double(r.upper), r.reason});
    write_file(join_path(outdir, "fig1a.csv"), csv_text.str());
    json m = base_manifest(target, seed, trials);
    m["config"] = {{"eps1", 0.1}, {"eps2", 0.15}, {"f", 0.5},
                   {"dist", "uniform"}, {"n_values", n_values}};
    m["transform"] = "(mse - 1/(12n)) * n^2";
    write_file(join_path(outdir, "fig1a_manifest.json"), m.dump(2) + "\n");
    out << "wrote " << join_path(outdir, "fig1a.csv") << "\n";
    return 0;
  }
  if (target == "fig1b") {
    const long trials = trials_override > 0 ? trials_override : 200000;
    const TwoGroupProfile base(0.1, 1.0, 1000, 0.7);
    const double sat = saturation_eps2(base);
    const std::vector<double> eps2_values = {0.1,       0.15, sat,  0.3,
                                             2.0 * sat, 0.45, 3.0 * sat,
                                             4.0 * sat, 1.0,  1.5};
    const std::vector<MechanismKind> kinds = {
        MechanismKind::kAdpm, MechanismKind::kPropDpm, MechanismKind::kLdpe,
        MechanismKind::kSm, MechanismKind::kUni};
    const auto rows =
        sweep_eps2(0.1, 1000, 0.7, DistributionSpec::rademacher_half(),
                   eps2_values, kinds, trials, seed, threads);
    std::ostringstream csv_text;
    CsvWriter csv(csv_text);
    csv.header(std::vector<std::string>{
        "mechanism", "eps2", "eps1", "n", "f", "realized_f", "dist", "trials",
        "seed", "mse", "stderr", "mse_x1e4", "analytic_mse", "upper_bound",
        "saturation_eps2", "weight_ratio", "reason"});
    for (const auto& r : rows)
      csv.row(std::vector<std::string>{
          r.mechanism, format_double(r.eps2), format_double(r.eps1),
          format_int(r.n), format_double(r.f), format_double(r.realized_f),
          "rademacher", format_int(r.trials), format_uint(r.seed),
          format_double(r.mse), format_double(r.std_error),
          format_double(r.mse_x1e4), format_double(r.analytic_total),
          format_double(r.upper), format_double(r.saturation_eps2),
          format_double(r.weight_ratio), r.reason});
    write_file(join_path(outdir, "fig1b.csv"), csv_text.str());
    json m = base_manifest(target, seed, trials);
    m["config"] = {{"eps1", 0.1}, {"n", 1000}, {"f", 0.7}, {"dist", "rademacher"}};
    m["saturation_eps2"] = sat;
    write_file(join_path(outdir, "fig1b_manifest.json"), m.dump(2) + "\n");
    out << "wrote " << join_path(outdir, "fig1b.csv") << "\n";
    return 0;
  }
  if (target == "weight-ratio") {
    std::vector<double> eps2_values;
    for (int i = 0; i < 60; ++i)
      eps2_values.push_back(0.01 * std::pow(100.0, i / 59.0));
    const auto rows = weight_ratio_sweep(0.01, 10000, 0.5, eps2_values);
    std::ostringstream csv_text;
    CsvWriter csv(csv_text);
    csv.header(std::vector<std::string>{"eps2", "r", "R", "w2_over_w1"});
    for (const auto& r : rows)
      csv.row(std::vector<std::string>{
          format_double(r.eps2), format_double(r.r),
          format_double(r.saturation_ratio), format_double(r.ratio)});
    write_file(join_path(outdir, "weight_ratio.csv"), csv_text.str());
    json m = base_manifest(target, seed, 0);
    m["config"] = {{"eps1", 0.01}, {"n", 10000}, {"f", 0.5}};
    m["note"] = "ratio saturates at min(r, R)";
    write_file(join_path(outdir, "weight_ratio_manifest.json"), m.dump(2) + "\n");
    out << "wrote " << join_path(outdir, "weight_ratio.csv") << "\n";
    return 0;
  }
  if (target == "table2") {
    const long trials = trials_override > 0 ? trials_override : 20000;
    const Table2Result res =
        table2_experiment(1000, {-3.0, -2.0}, {-4.0, 2.0}, trials, seed, threads);
    std::ostringstream csv_text;
    CsvWriter csv(csv_text);
    csv.header(std::vector<std::string>{"regime", "mechanism", "ln_mse", "mse",
                                        "stderr", "analytic_mse", "reason"});
    for (const auto& r : res.rows)
      csv.row(std::vector<std::string>{
          r.regime, r.mechanism, format_double(r.ln_mse), format_double(r.mse),
          format_double(r.std_error), format_double(r.analytic_total), r.reason});
    write_file(join_path(outdir, "table2.csv"), csv_text.str());
    json m = base_manifest(target, seed, trials);
    m["config"] = {{"n", 1000},
                   {"low_log_range", {-3.0, -2.0}},
                   {"high_log_range", {-4.0, 2.0}},
                   {"dist", "beta23"},
                   {"log_base", "natural"}};
    m["excluded"] = json::array(
        {{{"mechanism", "fme"}, {"reason", "out of scope for this artifact"}}});
    write_file(join_path(outdir, "table2_manifest.json"), m.dump(2) + "\n");
    out << "wrote " << join_path(outdir, "table2.csv") << "\n";
    return 0;
  }
  throw CLI::ValidationError(
      "target", "unknown target (use fig1a|fig1b|weight-ratio|table2)");
}

}  // namespace

std::string version_string() {
  return std::string("hdpmean ") + HDPMEAN_VERSION + " (" + HDPMEAN_GIT_REV + ")";
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Mean estimation under per-user differential privacy"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);
  app.fallthrough();  // --seed/--threads may follow the subcommand

  std::uint64_t seed = default_seed();
  int threads = default_threads();
  app.add_option("--seed", seed, "random seed (env HDP_MEAN_SEED overrides default)");
  app.add_option("--threads", threads, "worker thread cap")->check(CLI::Range(1, 256));

  // weights
  auto* weights_cmd = app.add_subcommand("weights", "optimal affine weights");
  PrivacyArgs weights_priv;
  add_privacy_flags(weights_cmd, weights_priv);
  std::string weights_format = "json";
  std::string weights_output;
  weights_cmd->add_option("--format", weights_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  weights_cmd->add_option("--output", weights_output, "output file (default stdout)");

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "minimax upper/lower bounds");
  PrivacyArgs bounds_priv;
  add_privacy_flags(bounds_cmd, bounds_priv);
  std::string bounds_sweep, bounds_output;
  bounds_cmd->add_option("--sweep", bounds_sweep, "eps2:lo:hi:steps");
  bounds_cmd->add_option("--output", bounds_output, "output file (default stdout)");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo MSE");
  PrivacyArgs sim_priv;
  add_privacy_flags(sim_cmd, sim_priv);
  std::string sim_mechanism = "all";
  std::string sim_dist = "uniform";
  std::string sim_output, sim_config;
  long sim_trials = 200000;
  bool sim_clamp = false;
  sim_cmd->add_option("--mechanism", sim_mechanism,
                      "adpm|uni|sm|propdpm|ldpe|stretch|all or comma list");
  sim_cmd->add_option("--dist", sim_dist,
                      "uniform|rademacher|beta23|point:<v>|lecam:<d>[:+-]");
  sim_cmd->add_option("--trials", sim_trials, "Monte Carlo trials")
      ->check(CLI::Range(100L, 100000000L));
  sim_cmd->add_flag("--clamp", sim_clamp, "clamp outputs to [-0.5, 0.5]");
  sim_cmd->add_option("--output", sim_output, "output file (default stdout)");
  sim_cmd->add_option("--config", sim_config, "JSON config file (flags win)");

  // audit
  auto* audit_cmd = app.add_subcommand("audit", "DP certificate + empirical ratio test");
  PrivacyArgs audit_priv;
  add_privacy_flags(audit_cmd, audit_priv);
  std::string audit_mechanism = "adpm";
  std::string audit_output;
  long audit_draws = 1000000;
  audit_cmd->add_option("--mechanism", audit_mechanism, "mechanism to audit");
  audit_cmd->add_option("--draws", audit_draws, "draws per neighboring dataset")
      ->check(CLI::Range(10000L, 100000000L));
  audit_cmd->add_option("--output", audit_output, "output file (default stdout)");

  // reproduce
  auto* rep_cmd = app.add_subcommand("reproduce", "figure/table data bundles");
  std::string rep_target, rep_outdir = ".";
  long rep_trials = 0;
  rep_cmd->add_option("target", rep_target, "fig1a|fig1b|weight-ratio|table2")
      ->required();
  rep_cmd->add_option("--outdir", rep_outdir, "output directory");
  rep_cmd->add_option("--trials", rep_trials, "trial override");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("hdpmean");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());

    if (*weights_cmd) {
      weights_priv.validate();
      return cmd_weights(weights_priv, weights_format, {weights_output}, out);
    }
    if (*bounds_cmd) {
      bounds_priv.validate();
      if (!bounds_priv.has_profile())
        throw CLI::ValidationError("bounds", "bounds needs a two-group profile");
      return cmd_bounds(bounds_priv, bounds_sweep, {bounds_output}, out);
    }
    if (*sim_cmd) {
      if (!sim_config.empty()) {
        std::ifstream f(sim_config);
        if (!f) throw std::invalid_argument("cannot open config: " + sim_config);
        std::stringstream buf;
        buf << f.rdbuf();
        const ExperimentConfig cfg = ExperimentConfig::from_json(buf.str());
        if (sim_cmd->count("--mechanism") == 0 && !cfg.mechanisms.empty()) {
          sim_mechanism.clear();
          for (const auto& mname : cfg.mechanisms) {
            if (!sim_mechanism.empty()) sim_mechanism += ',';
            sim_mechanism += mname;
          }
        }
        if (sim_cmd->count("--dist") == 0) sim_dist = cfg.dist;
        if (sim_cmd->count("--trials") == 0) sim_trials = cfg.trials;
        if (app.count("--seed") == 0 && cfg.seed != 0) seed = cfg.seed;
        if (sim_cmd->count("--eps1") == 0 && cfg.eps1) {
          sim_priv.eps1_tok = format_double(*cfg.eps1);
          sim_priv.eps2_tok = cfg.eps2 ? format_double(*cfg.eps2) : "";
          sim_priv.n = cfg.n.value_or(0);
          sim_priv.f = cfg.f.value_or(-1.0);
        }
        if (sim_cmd->count("--eps-file") == 0 && cfg.eps_file)
          sim_priv.eps_file = *cfg.eps_file;
      }
      sim_priv.validate();
      return cmd_simulate(sim_priv, sim_mechanism, sim_dist, sim_trials, seed,
                          threads, sim_clamp, {sim_output}, out);
    }
    if (*audit_cmd) {
      audit_priv.validate();
      return cmd_audit(audit_priv, audit_mechanism, audit_draws, seed,
                       {audit_output}, out);
    }
    if (*rep_cmd) {
      return cmd_reproduce(rep_target, rep_outdir, rep_trials, seed, threads, out);
    }
    return 2;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help / --version
      std::ostringstream help;
      const int code = app.exit(e, help, help);
      out << help.str();
      return code;
    }
    err << json{{"error", e.what()}, {"code", 2}}.dump() << "\n";
    return 2;
  } catch (const InfeasibleMechanism& e) {
    err << json{{"error", e.what()}, {"code", 1}}.dump() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << json{{"error", e.what()}, {"code", 1}}.dump() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    err << json{{"error", e.what()}, {"code", 1}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << json{{"error", e.what()}, {"code", 1}}.dump() << "\n";
    return 1;
  }
}

}  // namespace hdpmean
