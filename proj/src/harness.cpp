#include "klconc/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "klconc/bounds.hpp"
#include "klconc/error.hpp"
#include "klconc/losses.hpp"
#include "klconc/parallel.hpp"
#include "klconc/sampling.hpp"
#include "klconc/stats.hpp"
#include "klconc/summation.hpp"

namespace klconc {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Trial kernel shared by the buffered and streamed paths.
class KlTrialRunner {
 public:
  KlTrialRunner(const Pmf& p, std::uint64_t n, double t, std::uint64_t seed)
      : p_(p), sampler_(p), n_(n), t_(t), seed_(seed) {}

  // Scratch space is owned by the caller so each block allocates once.
  struct Scratch {
    explicit Scratch(std::size_t k) : counts(k), estimate(k) {}
    std::vector<std::uint64_t> counts;
    std::vector<double> estimate;
  };

  double operator()(std::uint64_t trial, Scratch& scratch) const {
    RngState rng = derive_trial_rng(seed_, trial);
    sampler_.sample_into(rng, n_, scratch.counts);
    add_t_estimate_into(scratch.counts, n_, t_, scratch.estimate);
    return kl_divergence(p_.probs(), scratch.estimate);
  }

 private:
  const Pmf& p_;
  MultinomialSampler sampler_;
  std::uint64_t n_;
  double t_;
  std::uint64_t seed_;
};

void validate_trial_inputs(std::uint64_t n, std::uint64_t reps, double t) {
  if (reps == 0) throw ValidationError("reps must be >= 1");
  if (n == 0) throw ValidationError("n must be >= 1");
  if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("t must be finite and >= 0");
}

}  // namespace

DistSpec DistSpec::uniform(std::uint64_t k) { return DistSpec{DistKind::Uniform, k, 1.0, 0.99, {}}; }

DistSpec DistSpec::zipf(std::uint64_t k, double s) { return DistSpec{DistKind::Zipf, k, s, 0.99, {}}; }

DistSpec DistSpec::two_point(std::uint64_t k, double mass) {
  return DistSpec{DistKind::TwoPoint, k, 1.0, mass, {}};
}

DistSpec DistSpec::file(std::string path) {
  return DistSpec{DistKind::File, 0, 1.0, 0.99, std::move(path)};
}

DistSpec DistSpec::parse(std::string_view name, std::uint64_t k, double zipf_exponent, double mass) {
  if (name == "uniform") return uniform(k);
  if (name == "zipf") return zipf(k, zipf_exponent);
  if (name == "twopoint" || name == "two-point") return two_point(k, mass);
  if (name.starts_with("file:")) return file(std::string(name.substr(5)));
  throw ValidationError("unknown distribution '" + std::string(name) +
                        "' (expected uniform, zipf, twopoint or file:PATH)");
}

Pmf DistSpec::build() const {
  switch (kind) {
    case DistKind::Uniform:
      return uniform_pmf(static_cast<std::size_t>(k));
    case DistKind::Zipf:
      return zipf_pmf(k, zipf_exponent);
    case DistKind::TwoPoint:
      return two_point_pmf(k, mass);
    case DistKind::File:
      return read_pmf_file(path);
  }
  throw ValidationError("invalid distribution kind");
}

std::string DistSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case DistKind::Uniform:
      os << "uniform(" << k << ")";
      break;
    case DistKind::Zipf:
      os << "zipf(" << k << ", " << zipf_exponent << ")";
      break;
    case DistKind::TwoPoint:
      os << "twopoint(" << k << ", " << mass << ")";
      break;
    case DistKind::File:
      os << "file(" << path << ")";
      break;
  }
  return os.str();
}

Pmf zipf_pmf(std::uint64_t k, double s) {
  if (k == 0) throw ValidationError("zipf needs k >= 1");
  if (!std::isfinite(s) || s < 0.0) throw ValidationError("zipf exponent must be finite and >= 0");
  std::vector<double> w(k);
  CompensatedSum total;
  for (std::uint64_t i = 0; i < k; ++i) {
    w[i] = std::pow(static_cast<double>(i + 1), -s);
    total.add(w[i]);
  }
  for (double& x : w) x /= total.value();
  return make_pmf(w);
}

Pmf two_point_pmf(std::uint64_t k, double mass) {
  if (k == 0) throw ValidationError("two-point needs k >= 1");
  if (!(mass >= 0.0 && mass <= 1.0)) throw ValidationError("two-point mass must lie in [0, 1]");
  if (k == 1) return uniform_pmf(1);
  std::vector<double> w(k, (1.0 - mass) / static_cast<double>(k - 1));
  w[0] = mass;
  return make_pmf(w);
}

Pmf parse_pmf_text(std::string_view text) {
  std::vector<double> weights;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    const std::string_view raw = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::string token(line);
    std::size_t used = 0;
    double w = 0.0;
    try {
      w = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) {
      throw ValidationError("line " + std::to_string(line_no) + ": not a decimal weight: '" +
                            token + "'");
    }
    weights.push_back(w);
  }
  if (weights.empty()) throw ValidationError("distribution file contains no weights");
  return make_pmf(weights);
}

Pmf read_pmf_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read distribution file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_pmf_text(buf.str());
}

std::optional<double> TrialSummary::exceed_frac() const {
  if (!exceed_count) return std::nullopt;
  return static_cast<double>(*exceed_count) / static_cast<double>(reps);
}

std::vector<double> kl_trial_losses(const Pmf& p, std::uint64_t n, std::uint64_t reps, double t,
                                    std::uint64_t master_seed, unsigned threads) {
  validate_trial_inputs(n, reps, t);
  if (reps > kMaxBufferedReps) throw ValidationError("at most 1e7 trials can be buffered");
  const KlTrialRunner runner(p, n, t, master_seed);
  std::vector<double> losses(reps);
  run_blocks(reps, threads, [&](std::uint64_t begin, std::uint64_t end) {
    KlTrialRunner::Scratch scratch(p.size());
    for (std::uint64_t i = begin; i < end; ++i) losses[i] = runner(i, scratch);
    return 0;
  });
  return losses;
}

TrialSummary run_kl_trials(const ExperimentConfig& cfg) { return run_kl_trials(cfg.dist.build(), cfg); }

TrialSummary run_kl_trials(const Pmf& p, const ExperimentConfig& cfg) {
  validate_trial_inputs(cfg.n, cfg.reps, cfg.t);
  if (cfg.delta && !(*cfg.delta > 0.0 && *cfg.delta < 1.0)) {
    throw ValidationError("delta must lie in (0, 1)");
  }
  const auto start = std::chrono::steady_clock::now();

  TrialSummary s;
  s.k = p.size();
  s.n = cfg.n;
  s.reps = cfg.reps;
  s.t = cfg.t;

  stats::Moments moments;
  std::vector<double> losses;
  const bool buffered = cfg.quantiles || cfg.delta.has_value();
  if (buffered) {
    losses = kl_trial_losses(p, cfg.n, cfg.reps, cfg.t, cfg.master_seed, cfg.threads);
    moments = stats::moments_of(losses, kTrialBlock);
  } else {
    const KlTrialRunner runner(p, cfg.n, cfg.t, cfg.master_seed);
    const auto parts = run_blocks(cfg.reps, cfg.threads, [&](std::uint64_t begin, std::uint64_t end) {
      KlTrialRunner::Scratch scratch(p.size());
      stats::Moments m;
      for (std::uint64_t i = begin; i < end; ++i) m.push(runner(i, scratch));
      return m;
    });
    moments = stats::merge_pairwise(parts);
  }
  s.mean_kl = moments.mean;
  s.var_kl = moments.variance();
  s.std_kl = std::sqrt(s.var_kl);

  if (cfg.delta) {
    s.t_delta = bounds::thm_kl_bound(bounds::BoundInputs::make(s.k, s.n, *cfg.delta));
    const double threshold = s.mean_kl + *s.t_delta;
    std::uint64_t exceed = 0;
    for (double x : losses) exceed += x > threshold ? 1 : 0;
    s.exceed_count = exceed;
  }
  if (cfg.quantiles) {
    Quantiles q;
    q.q50 = stats::exact_quantile(losses, 0.5);
    q.q90 = stats::exact_quantile(losses, 0.9);
    q.q99 = stats::exact_quantile(losses, 0.99);
    s.quantiles = q;
  }
  s.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

std::vector<Figure1Row> figure1_experiment(std::span<const std::uint64_t> ks, std::uint64_t n,
                                           std::uint64_t reps, std::uint64_t master_seed,
                                           unsigned threads) {
  std::vector<Figure1Row> rows;
  rows.reserve(ks.size());
  for (const std::uint64_t k : ks) {
    if (k == 0) throw ValidationError("figure1 needs every k >= 1");
    ExperimentConfig cfg;
    cfg.dist = DistSpec::uniform(k);
    cfg.n = n;
    cfg.reps = reps;
    cfg.master_seed = master_seed;
    cfg.t = 1.0;
    cfg.quantiles = false;
    cfg.threads = threads;
    const auto summary = run_kl_trials(cfg);
    Figure1Row row;
    row.k = k;
    row.sample_std = summary.std_kl;
    row.heuristic_std = bounds::heuristic_std(k, n);
    if (row.sample_std > 0.0) row.ratio = row.sample_std / row.heuristic_std;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace klconc
