// klconc command line: simulate, bounds, figure1, check, plot.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "klconc/klconc.h"
#include "svg.hpp"
#include "table.hpp"

namespace {

using klconc::cli::format_number;
using klconc::cli::format_optional;
using klconc::cli::Table;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr std::uint64_t kMaxQuantileReps = 10'000'000;

struct Exit {
  int code;
  std::string message;
};

[[noreturn]] void usage_error(const std::string& msg) { throw Exit{kExitUsage, msg}; }
[[noreturn]] void runtime_error(const std::string& msg) { throw Exit{kExitFailure, msg}; }

// Usage code for bad arguments, failure code for everything else.
void check_status(klc_status s) {
  if (s == KLC_OK) return;
  if (s == KLC_INVALID_ARGUMENT) usage_error(klc_last_error());
  runtime_error(klc_last_error());
}

void check_status_runtime(klc_status s) {
  if (s != KLC_OK) runtime_error(klc_last_error());
}

struct PmfDeleter {
  void operator()(klc_pmf* p) const { klc_pmf_destroy(p); }
};
struct ReportDeleter {
  void operator()(klc_report* r) const { klc_report_destroy(r); }
};

unsigned threads_from(std::optional<unsigned> flag) {
  if (flag) return *flag;
  const char* env = std::getenv("KLCONC_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (*end != '\0' || v > 4096) usage_error(std::string("KLCONC_THREADS is not a thread count: ") + env);
  return static_cast<unsigned>(v);
}

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) usage_error("--delta must lie in (0, 1)");
}

char separator(const std::string& format) { return format == "tsv" ? '\t' : ','; }

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) runtime_error("write to '" + path + "' failed");
}

void emit_table(const Table& t, const std::string& path, const std::string& format) {
  std::ostringstream os;
  klconc::cli::write_table(os, t, separator(format));
  write_text(path, os.str());
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) runtime_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string dist = "uniform";
  std::optional<std::uint64_t> k;
  std::uint64_t n = 0;
  std::uint64_t reps = 0;
  std::uint64_t seed = 1;
  double t = 1.0;
  std::optional<double> delta;
  double zipf_s = 1.0;
  double mass = 0.99;
  std::string out;
  std::string format = "csv";
  std::optional<unsigned> threads;
};

int cmd_simulate(const SimulateArgs& a) {
  const bool from_file = a.dist.rfind("file:", 0) == 0;
  if (!a.k && !from_file) usage_error("--k is required");
  if (!from_file && *a.k == 0) usage_error("--k must be >= 1");
  if (a.n == 0) usage_error("--n must be >= 1");
  if (a.reps == 0) usage_error("--reps must be >= 1");
  if (!(a.t >= 0.0)) usage_error("--t must be >= 0");
  if (a.delta) require_delta(*a.delta);

  klc_pmf* raw = nullptr;
  const klc_status s = klc_pmf_by_name(a.dist.c_str(), a.k.value_or(0), a.zipf_s, a.mass, &raw);
  if (s == KLC_INVALID_ARGUMENT && !from_file) usage_error(klc_last_error());
  check_status_runtime(s);
  std::unique_ptr<klc_pmf, PmfDeleter> pmf(raw);

  klc_trial_config cfg{};
  cfg.n = a.n;
  cfg.reps = a.reps;
  cfg.seed = a.seed;
  cfg.t = a.t;
  cfg.has_delta = a.delta ? 1 : 0;
  cfg.delta = a.delta.value_or(0.0);
  cfg.quantiles = a.reps <= kMaxQuantileReps ? 1 : 0;
  cfg.threads = threads_from(a.threads);
  if (a.delta && a.reps > kMaxQuantileReps) usage_error("--delta needs --reps <= 1e7");

  klc_trial_summary r{};
  check_status_runtime(klc_run_kl_trials(pmf.get(), &cfg, &r));

  auto opt = [](int has, double v) { return has ? std::optional<double>(v) : std::nullopt; };
  Table t;
  t.header = {"k", "n", "reps", "t", "mean_kl", "var_kl", "std_kl", "q50", "q90", "q99",
              "exceed_frac", "t_delta"};
  t.rows.push_back({std::to_string(r.k), std::to_string(r.n), std::to_string(r.reps),
                    format_number(r.t), format_number(r.mean_kl), format_number(r.var_kl),
                    format_number(r.std_kl), format_optional(opt(r.has_quantiles, r.q50)),
                    format_optional(opt(r.has_quantiles, r.q90)),
                    format_optional(opt(r.has_quantiles, r.q99)),
                    format_optional(opt(r.has_delta, r.exceed_frac)),
                    format_optional(opt(r.has_delta, r.t_delta))});
  emit_table(t, a.out, a.format);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct BoundsArgs {
  std::uint64_t k = 0;
  std::uint64_t n = 0;
  double delta = 0.0;
  std::string out;
  std::string format = "csv";
};

int cmd_bounds(const BoundsArgs& a) {
  require_delta(a.delta);
  if (a.k == 0) usage_error("--k must be >= 1");
  if (a.n == 0) usage_error("--n must be >= 1");
  klc_bounds_row row{};
  check_status(klc_bounds_compute(a.k, a.n, a.delta, &row));
  auto opt = [](int has, double v) { return has ? std::optional<double>(v) : std::nullopt; };
  Table t;
  t.header = {"thm_kl_bound", "bgpv_deviation", "variance_lb", "heuristic_std", "gamma", "alpha"};
  t.rows.push_back({format_number(row.thm_kl_bound),
                    format_optional(opt(row.has_bgpv_deviation, row.bgpv_deviation)),
                    format_optional(opt(row.has_variance_lb, row.variance_lb)),
                    format_number(row.heuristic_std), format_number(row.gamma),
                    format_number(row.alpha)});
  emit_table(t, a.out, a.format);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct Figure1Args {
  std::vector<std::uint64_t> ks{2, 4, 8, 16, 32, 64};
  std::uint64_t n = 10240;
  std::uint64_t reps = 1000;
  std::uint64_t seed = 1;
  std::string out;
  std::string svg;
  std::string format = "csv";
  std::optional<unsigned> threads;
};

int cmd_figure1(const Figure1Args& a) {
  if (a.ks.empty()) usage_error("--ks must list at least one k");
  for (auto k : a.ks) {
    if (k == 0) usage_error("--ks entries must be >= 1");
  }
  if (a.n == 0) usage_error("--n must be >= 1");
  if (a.reps == 0) usage_error("--reps must be >= 1");

  std::vector<klc_figure1_row> rows(a.ks.size());
  check_status_runtime(
      klc_figure1(a.ks.data(), a.ks.size(), a.n, a.reps, a.seed, threads_from(a.threads), rows.data()));

  Table t;
  t.header = {"k", "sample_std", "heuristic_std", "ratio"};
  klconc::cli::Series sample{"sample std", {}}, heuristic{"sqrt(k/2)/n", {}};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.k), format_number(r.sample_std), format_number(r.heuristic_std),
                      r.has_ratio ? format_number(r.ratio) : std::string()});
    sample.points.emplace_back(static_cast<double>(r.k), r.sample_std);
    heuristic.points.emplace_back(static_cast<double>(r.k), r.heuristic_std);
  }
  emit_table(t, a.out, a.format);

  if (!a.svg.empty()) {
    klconc::cli::PlotOptions opts;
    opts.title = "std of KL, n = " + std::to_string(a.n);
    opts.x_label = "k";
    opts.y_label = "standard deviation";
    opts.logx = opts.logy = true;
    try {
      write_text(a.svg, klconc::cli::render_svg({sample, heuristic}, opts));
    } catch (const klconc::cli::PlotError& e) {
      runtime_error(e.what());
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CheckArgs {
  std::string suite = "all";
  std::uint64_t seed = 7;
  std::optional<std::uint64_t> k, n, reps;
  std::optional<double> delta, lambda, prob;
  std::optional<unsigned> threads;
};

int cmd_check(const CheckArgs& a) {
  klc_check_options o;
  klc_check_options_init(&o);
  o.seed = a.seed;
  o.threads = threads_from(a.threads);
  if (a.k) {
    if (*a.k == 0) usage_error("--k must be >= 1");
    o.k = *a.k;
  }
  if (a.n) {
    if (*a.n == 0) usage_error("--n must be >= 1");
    o.n = *a.n;
  }
  if (a.reps) {
    if (*a.reps == 0) usage_error("--reps must be >= 1");
    o.reps = *a.reps;
  }
  if (a.delta) {
    require_delta(*a.delta);
    o.delta = *a.delta;
  }
  if (a.lambda) {
    if (!(*a.lambda > 0.0)) usage_error("--lambda must be positive");
    o.lambda = *a.lambda;
  }
  if (a.prob) {
    if (!(*a.prob > 0.0 && *a.prob <= 1.0)) usage_error("--prob must lie in (0, 1]");
    o.prob = *a.prob;
  }

  klc_report* raw = nullptr;
  const klc_status s = klc_check_run(a.suite.c_str(), &o, &raw);
  if (s == KLC_INVALID_ARGUMENT) usage_error(klc_last_error());
  check_status_runtime(s);
  std::unique_ptr<klc_report, ReportDeleter> report(raw);

  const std::size_t count = klc_report_size(report.get());
  std::size_t passed = 0;
  for (std::size_t i = 0; i < count; ++i) {
    klc_claim c{};
    check_status_runtime(klc_report_get(report.get(), i, &c));
    passed += c.pass ? 1 : 0;
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.suite << ": " << c.anchor << '\n'
              << "       " << c.claim << '\n'
              << "       measured=" << format_number(c.measured) << " bound=" << format_number(c.bound)
              << "  " << c.detail << '\n';
  }
  const bool ok = klc_report_passed(report.get()) != 0;
  std::cout << (ok ? "PASS" : "FAIL") << ": " << passed << "/" << count << " claims hold\n";
  return ok ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------

struct PlotArgs {
  std::string in;
  std::string x;
  std::vector<std::string> ys;
  std::string out;
  std::string title;
  bool logx = false;
  bool logy = false;
};

int cmd_plot(const PlotArgs& a) {
  const std::string text = read_text(a.in);
  try {
    const Table t = klconc::cli::parse_csv(text);
    if (t.header.empty()) usage_error("CSV '" + a.in + "' is empty");
    const auto series = klconc::cli::series_from_table(t, a.x, a.ys);
    klconc::cli::PlotOptions opts;
    opts.title = a.title;
    opts.x_label = a.x;
    opts.logx = a.logx;
    opts.logy = a.logy;
    write_text(a.out, klconc::cli::render_svg(series, opts));
  } catch (const klconc::cli::TableError& e) {
    usage_error(e.what());
  } catch (const klconc::cli::PlotError& e) {
    usage_error(e.what());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo and closed-form tools for KL risk of add-constant estimators", "klconc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", klc_version());

  const std::vector<std::string> formats{"csv", "tsv"};

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Repeated trials of KL(p || add-t estimate)");
  simulate->add_option("--dist", sim.dist, "uniform, zipf, twopoint or file:PATH")->capture_default_str();
  simulate->add_option("--k", sim.k, "alphabet size (ignored for file:)");
  simulate->add_option("--n", sim.n, "sample size")->required();
  simulate->add_option("--reps", sim.reps, "number of trials")->required();
  simulate->add_option("--seed", sim.seed, "master seed")->capture_default_str();
  simulate->add_option("--t", sim.t, "add-t constant")->capture_default_str();
  simulate->add_option("--delta", sim.delta, "report t_delta and the exceedance fraction");
  simulate->add_option("--zipf-s", sim.zipf_s, "zipf exponent")->capture_default_str();
  simulate->add_option("--mass", sim.mass, "two-point heavy mass")->capture_default_str();
  simulate->add_option("--out", sim.out, "output path (default stdout)");
  simulate->add_option("--format", sim.format)->check(CLI::IsMember(formats))->capture_default_str();
  simulate->add_option("--threads", sim.threads, "worker threads (0 = all cores)");

  BoundsArgs bnd;
  auto* bounds = app.add_subcommand("bounds", "Closed-form deviation and variance bounds");
  bounds->add_option("--k", bnd.k)->required();
  bounds->add_option("--n", bnd.n)->required();
  bounds->add_option("--delta", bnd.delta)->required();
  bounds->add_option("--out", bnd.out, "output path (default stdout)");
  bounds->add_option("--format", bnd.format)->check(CLI::IsMember(formats))->capture_default_str();

  Figure1Args fig;
  auto* figure1 = app.add_subcommand("figure1", "Sample std of KL against sqrt(k/2)/n for uniform p");
  figure1->add_option("--ks", fig.ks, "comma-separated alphabet sizes")->delimiter(',')->capture_default_str();
  figure1->add_option("--n", fig.n)->capture_default_str();
  figure1->add_option("--reps", fig.reps)->capture_default_str();
  figure1->add_option("--seed", fig.seed)->capture_default_str();
  figure1->add_option("--out", fig.out, "output path (default stdout)");
  figure1->add_option("--svg", fig.svg, "also write a log-log plot");
  figure1->add_option("--format", fig.format)->check(CLI::IsMember(formats))->capture_default_str();
  figure1->add_option("--threads", fig.threads, "worker threads (0 = all cores)");

  CheckArgs chk;
  const std::vector<std::string> suites{"all",      "facts",      "variance",  "thm",
                                        "poisson-tail", "coupling", "marginals", "expectation"};
  auto* check = app.add_subcommand("check", "Run verification suites");
  check->add_option("--suite", chk.suite)->check(CLI::IsMember(suites))->capture_default_str();
  check->add_option("--seed", chk.seed)->capture_default_str();
  check->add_option("--k", chk.k);
  check->add_option("--n", chk.n);
  check->add_option("--reps", chk.reps);
  check->add_option("--delta", chk.delta);
  check->add_option("--lambda", chk.lambda);
  check->add_option("--prob", chk.prob);
  check->add_option("--threads", chk.threads, "worker threads (0 = all cores)");

  PlotArgs plt;
  auto* plot = app.add_subcommand("plot", "Render CSV columns as an SVG plot");
  plot->add_option("--in", plt.in, "input CSV")->required();
  plot->add_option("--x", plt.x, "x column")->required();
  plot->add_option("--y", plt.ys, "y columns (comma-separated)")->delimiter(',')->required();
  plot->add_option("--out", plt.out, "output SVG path")->required();
  plot->add_option("--title", plt.title);
  plot->add_flag("--logx", plt.logx);
  plot->add_flag("--logy", plt.logy);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim);
    if (*bounds) return cmd_bounds(bnd);
    if (*figure1) return cmd_figure1(fig);
    if (*check) return cmd_check(chk);
    if (*plot) return cmd_plot(plt);
  } catch (const Exit& e) {
    std::cerr << "klconc: " << e.message << '\n';
    if (e.code == kExitUsage) std::cerr << "Run with --help for more information.\n";
    return e.code;
  }
  return kExitUsage;
}
