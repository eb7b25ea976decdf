#include "klconc/klconc.h"

#include <exception>
#include <new>
#include <string>
#include <vector>

#include "klconc/bounds.hpp"
#include "klconc/checks.hpp"
#include "klconc/dist.hpp"
#include "klconc/error.hpp"
#include "klconc/harness.hpp"
#include "klconc/losses.hpp"
#include "klconc/rng.hpp"
#include "klconc/sampling.hpp"

struct klc_pmf {
  klconc::Pmf pmf;
};

struct klc_report {
  std::vector<klconc::ClaimResult> claims;
};

namespace {

thread_local std::string g_last_error;

klc_status fail(klc_status code, const char* what) {
  g_last_error = what;
  return code;
}

// Runs fn, mapping exceptions onto status codes.
template <class Fn>
klc_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return KLC_OK;
  } catch (const klconc::PreconditionError& e) {
    return fail(KLC_PRECONDITION, e.what());
  } catch (const klconc::ValidationError& e) {
    return fail(KLC_INVALID_ARGUMENT, e.what());
  } catch (const klconc::IoError& e) {
    return fail(KLC_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(KLC_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(KLC_INTERNAL, e.what());
  } catch (...) {
    return fail(KLC_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw klconc::ValidationError(what);
}

klc_status make_handle(klconc::Pmf pmf, klc_pmf** out) {
  *out = new klc_pmf{std::move(pmf)};
  return KLC_OK;
}

}  // namespace

extern "C" {

const char* klc_last_error(void) { return g_last_error.c_str(); }

const char* klc_version(void) { return "0.1.0"; }

klc_status klc_pmf_from_weights(const double* weights, size_t k, klc_pmf** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    require(weights != nullptr || k == 0, "weights is null");
    make_handle(klconc::make_pmf(std::span<const double>(weights, k)), out);
  });
}

klc_status klc_pmf_uniform(uint64_t k, klc_pmf** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    make_handle(klconc::uniform_pmf(static_cast<std::size_t>(k)), out);
  });
}

klc_status klc_pmf_zipf(uint64_t k, double exponent, klc_pmf** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    make_handle(klconc::zipf_pmf(k, exponent), out);
  });
}

klc_status klc_pmf_two_point(uint64_t k, double mass, klc_pmf** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    make_handle(klconc::two_point_pmf(k, mass), out);
  });
}

klc_status klc_pmf_from_file(const char* path, klc_pmf** out) {
  return guarded([&] {
    require(out != nullptr && path != nullptr, "null argument");
    make_handle(klconc::read_pmf_file(path), out);
  });
}

klc_status klc_pmf_by_name(const char* name, uint64_t k, double exponent, double mass,
                           klc_pmf** out) {
  return guarded([&] {
    require(out != nullptr && name != nullptr, "null argument");
    make_handle(klconc::DistSpec::parse(name, k, exponent, mass).build(), out);
  });
}

void klc_pmf_destroy(klc_pmf* p) { delete p; }

size_t klc_pmf_size(const klc_pmf* p) { return p ? p->pmf.size() : 0; }

klc_status klc_pmf_copy_probs(const klc_pmf* p, double* out, size_t cap) {
  return guarded([&] {
    require(p != nullptr && (out != nullptr || cap == 0), "null argument");
    const auto probs = p->pmf.probs();
    for (size_t i = 0; i < cap && i < probs.size(); ++i) out[i] = probs[i];
  });
}

klc_status klc_add_t_estimate(const uint64_t* counts, size_t k, double t, double* out) {
  return guarded([&] {
    require(counts != nullptr && out != nullptr, "null argument");
    std::vector<std::uint64_t> c(counts, counts + k);
    const auto est = klconc::add_t_estimate(klconc::Counts(std::move(c)), t);
    for (size_t i = 0; i < k; ++i) out[i] = est[i];
  });
}

klc_status klc_kl_divergence(const klc_pmf* p, const double* q, size_t k, double* out) {
  return guarded([&] {
    require(p != nullptr && q != nullptr && out != nullptr, "null argument");
    *out = klconc::kl_divergence(p->pmf, klconc::Measure(std::vector<double>(q, q + k)));
  });
}

klc_status klc_kl_tilde(const klc_pmf* p, const double* q, size_t k, uint64_t n, double* out) {
  return guarded([&] {
    require(p != nullptr && q != nullptr && out != nullptr, "null argument");
    *out = klconc::kl_tilde(p->pmf, klconc::Measure(std::vector<double>(q, q + k)), n, k);
  });
}

klc_status klc_lr_distance(const klc_pmf* p, const klc_pmf* q, double r, double* out) {
  return guarded([&] {
    require(p != nullptr && q != nullptr && out != nullptr, "null argument");
    *out = klconc::lr_distance(p->pmf, q->pmf, r);
  });
}

klc_status klc_multinomial_counts(const klc_pmf* p, uint64_t n, uint64_t seed, uint64_t* out_counts) {
  return guarded([&] {
    require(p != nullptr && out_counts != nullptr, "null argument");
    klconc::RngState rng(seed);
    const auto c = klconc::multinomial_counts(rng, p->pmf, n);
    const auto values = c.counts();
    for (size_t i = 0; i < values.size(); ++i) out_counts[i] = values[i];
  });
}

klc_status klc_bounds_compute(uint64_t k, uint64_t n, double delta, klc_bounds_row* out) {
  namespace b = klconc::bounds;
  return guarded([&] {
    require(out != nullptr, "out is null");
    const auto in = b::BoundInputs::make(k, n, delta);
    klc_bounds_row row{};
    row.thm_kl_bound = b::thm_kl_bound(in);
    if (n >= 2) {
      row.bgpv_deviation = b::bgpv_deviation(in);
      row.has_bgpv_deviation = 1;
    }
    if (n >= 10 * k) {
      row.variance_lb = b::variance_lower_bound(k, n);
      row.has_variance_lb = 1;
    }
    row.heuristic_std = b::heuristic_std(k, n);
    row.gamma = b::gamma_term(k, n);
    row.alpha = b::clip_threshold_alpha(in);
    *out = row;
  });
}

klc_status klc_run_kl_trials(const klc_pmf* p, const klc_trial_config* cfg, klc_trial_summary* out) {
  return guarded([&] {
    require(p != nullptr && cfg != nullptr && out != nullptr, "null argument");
    klconc::ExperimentConfig c;
    c.n = cfg->n;
    c.reps = cfg->reps;
    c.master_seed = cfg->seed;
    c.t = cfg->t;
    if (cfg->has_delta) c.delta = cfg->delta;
    c.quantiles = cfg->quantiles != 0;
    c.threads = cfg->threads;
    const auto s = klconc::run_kl_trials(p->pmf, c);

    klc_trial_summary r{};
    r.k = s.k;
    r.n = s.n;
    r.reps = s.reps;
    r.t = s.t;
    r.mean_kl = s.mean_kl;
    r.var_kl = s.var_kl;
    r.std_kl = s.std_kl;
    if (s.quantiles) {
      r.q50 = s.quantiles->q50;
      r.q90 = s.quantiles->q90;
      r.q99 = s.quantiles->q99;
      r.has_quantiles = 1;
    }
    if (s.t_delta) {
      r.t_delta = *s.t_delta;
      r.exceed_frac = s.exceed_frac().value_or(0.0);
      r.has_delta = 1;
    }
    r.wall_seconds = s.wall_seconds;
    *out = r;
  });
}

klc_status klc_figure1(const uint64_t* ks, size_t count, uint64_t n, uint64_t reps, uint64_t seed,
                       unsigned threads, klc_figure1_row* out) {
  return guarded([&] {
    require(ks != nullptr && out != nullptr, "null argument");
    require(count > 0, "figure1 needs at least one k");
    const auto rows = klconc::figure1_experiment(std::span<const std::uint64_t>(ks, count), n, reps,
                                                 seed, threads);
    for (size_t i = 0; i < rows.size(); ++i) {
      out[i] = klc_figure1_row{rows[i].k, rows[i].sample_std, rows[i].heuristic_std,
                               rows[i].ratio.value_or(0.0), rows[i].ratio ? 1 : 0};
    }
  });
}

void klc_check_options_init(klc_check_options* opts) {
  if (opts) *opts = klc_check_options{7, 0, 0, 0, 0, 0.0, 0.0, 0.0};
}

klc_status klc_check_run(const char* suite, const klc_check_options* opts, klc_report** out) {
  return guarded([&] {
    require(suite != nullptr && out != nullptr, "null argument");
    klconc::SuiteOptions o;
    if (opts) {
      o.seed = opts->seed;
      o.threads = opts->threads;
      if (opts->k) o.k = opts->k;
      if (opts->n) o.n = opts->n;
      if (opts->reps) o.reps = opts->reps;
      if (opts->delta > 0.0) o.delta = opts->delta;
      if (opts->lambda > 0.0) o.lambda = opts->lambda;
      if (opts->prob > 0.0) o.prob = opts->prob;
    }
    auto claims = klconc::run_suite(suite, o);
    *out = new klc_report{std::move(claims)};
  });
}

size_t klc_report_size(const klc_report* r) { return r ? r->claims.size() : 0; }

klc_status klc_report_get(const klc_report* r, size_t i, klc_claim* out) {
  return guarded([&] {
    require(r != nullptr && out != nullptr, "null argument");
    require(i < r->claims.size(), "claim index out of range");
    const auto& c = r->claims[i];
    *out = klc_claim{c.suite.c_str(), c.anchor.c_str(), c.claim.c_str(), c.detail.c_str(),
                     c.measured,      c.bound,          c.pass ? 1 : 0};
  });
}

int klc_report_passed(const klc_report* r) {
  if (!r) return 0;
  for (const auto& c : r->claims) {
    if (!c.pass) return 0;
  }
  return 1;
}

void klc_report_destroy(klc_report* r) { delete r; }

}  // extern "C"
