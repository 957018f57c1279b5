#include "tfswap/acceptance.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <thread>

#include <omp.h>

#include "tfswap/experiments.hpp"
#include "tfswap/measurement.hpp"
#include "tfswap/phasematch.hpp"
#include "tfswap/units.hpp"

namespace tfswap {

namespace {

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double peak_rss_gb() {
  rusage u{};
  getrusage(RUSAGE_SELF, &u);
  return static_cast<double>(u.ru_maxrss) * 1024.0 / 1073741824.0;  // ru_maxrss is in KiB on Linux
}

bool within(double x, double target, double rel) { return std::abs(x - target) <= rel * std::abs(target); }

// Shared between criteria: the default sweep is expensive, so it runs once.
struct Sweep {
  std::vector<SwapResult> results;
  double seconds = 0.0;
  double peak_rss_gb = 0.0;
  std::size_t n_b1 = 0, n_b2 = 0, sfg_nodes = 0;
};

struct Context {
  const SimConfig& config;
  std::optional<Sweep> sweep;

  const Sweep& get_sweep() {
    if (sweep) return *sweep;
    Sweep s;
    const auto t0 = std::chrono::steady_clock::now();
    const Design d = make_design(config);
    const SourceRun src = build_source(config, d);
    for (double L : config.L_SFG_sweep_mm) s.results.push_back(evaluate_swap(config, d, src, L));
    s.seconds = seconds_since(t0);
    s.peak_rss_gb = peak_rss_gb();
    s.n_b1 = src.grids.grid_i.count;
    s.n_b2 = src.grids.grid_s.count;
    s.sfg_nodes = static_cast<std::size_t>(config.N_bins * config.Q);
    sweep = std::move(s);
    return *sweep;
  }

  const SwapResult* design_point() {
    for (const auto& r : get_sweep().results)
      if (r.L_SFG_mm == config.L_SFG_mm) return &r;
    return nullptr;
  }
};

using Check = std::function<CriterionResult(Context&)>;

CriterionResult toy_exactness(Context&) {
  CriterionResult r{1, "toy-model negativity equals (N-1) eta / 2", true, ""};
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (std::size_t n = 2; n <= 17; ++n)
    for (int e = 1; e <= 10; ++e) {
      const double eta = 0.1 * e;
      worst = std::max(worst, std::abs(toy_state_negativity(n, eta, false) - 0.5 * static_cast<double>(n - 1) * eta));
    }
  const double t = seconds_since(t0);
  r.passed = worst <= 1e-9 && t < 10.0;
  r.detail = fmt("max |error| %.2e (limit 1e-9), %.2f s (limit 10 s)", worst, t);
  return r;
}

CriterionResult bell_product(Context&) {
  CriterionResult r{2, "Bell states 1/2, product states 0", true, ""};
  const double h = 1.0 / std::sqrt(2.0);
  const Eigen::Vector4cd bells[] = {{h, 0, 0, h}, {h, 0, 0, -h}, {0, h, h, 0}, {0, h, -h, 0}};
  double bell_err = 0.0, prod_err = 0.0;
  for (const auto& b : bells)
    bell_err = std::max(bell_err, std::abs(negativity(DensityMatrix::from_factor(Eigen::MatrixXcd(b), 2, 2, false)) - 0.5));
  // fixed fixture: ten random product states of assorted local dimensions
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> g;
  auto rnd = [&](Eigen::Index n) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index j = 0; j < n; ++j) v(j) = {g(rng), g(rng)};
    return v;
  };
  for (int t = 0; t < 10; ++t) {
    const Eigen::Index d1 = 2 + t % 5, d2 = 2 + (3 * t) % 4;
    const Eigen::VectorXcd a = rnd(d1), b = rnd(d2);
    Eigen::VectorXcd v(d1 * d2);
    for (Eigen::Index j = 0; j < d1; ++j) v.segment(j * d2, d2) = a(j) * b;
    const auto rho = DensityMatrix::from_factor(Eigen::MatrixXcd(v), static_cast<std::size_t>(d1),
                                                static_cast<std::size_t>(d2), false);
    prod_err = std::max(prod_err, std::abs(negativity(rho)));
  }
  r.passed = bell_err <= 1e-10 && prod_err <= 1e-10;
  r.detail = fmt("Bell max |N - 0.5| %.2e, product max |N| %.2e (limit 1e-10)", bell_err, prod_err);
  return r;
}

CriterionResult kappa_fit(Context& ctx) {
  CriterionResult r{3, "kappa fit and sigma_pi = kappa c / L", true, ""};
  const SimConfig& c = ctx.config;
  const Design d = make_design(c);
  const KappaFit k = fit_kappa(d.sellmeier, c.omega_p_rad_per_fs, c.omega_s_rad_per_fs, c.omega_i_rad_per_fs);
  const double sigma_fit = rad_per_fs_to_rad_per_ps(phase_matching_bandwidth(k.kappa, d.crystal.length_um));
  const double sigma_cfg = rad_per_fs_to_rad_per_ps(phase_matching_bandwidth(c.kappa, d.crystal.length_um));
  const bool fit_ok = std::abs(k.kappa - 12.8831) <= 0.01;
  const bool bw_ok = std::abs(sigma_fit - 7.7245) <= 5e-4 && std::abs(sigma_cfg - 7.7245) <= 5e-4;
  r.passed = fit_ok && bw_ok;
  r.detail = fmt("fitted kappa %.4f (kappa_x %.4f / dn_g %.4f; half-window shift %+.3f), target 12.8831 +- 0.01; "
                 "sigma_pi from fit %.4f rad/ps, from configured kappa %.4f rad/ps, target 7.7245 +- 0.0005",
                 k.kappa, k.kappa_x, k.group_index_mismatch, k.sensitivity, sigma_fit, sigma_cfg);
  return r;
}

CriterionResult source_baseline(Context& ctx) {
  CriterionResult r{4, "source purity and negativity", true, ""};
  const Design d = make_design(ctx.config);
  const SourceRun src = build_source(ctx.config, d);
  const auto low = source_density_matrix(src.jsa, 0.1, false);
  const double p = purity(low), n01 = negativity(low), n1 = negativity(source_density_matrix(src.jsa, 1.0, false));
  r.passed = std::abs(p - 0.82) <= 0.02 && std::abs(n01 - 2.89) <= 0.15 && std::abs(n1 - 28.9) <= 1.5;
  r.detail = fmt("xi^2 %.5f on %zu x %zu grid; eta=0.1: purity %.4f (0.82 +- 0.02), negativity %.4f (2.89 +- 0.15); "
                 "eta=1: negativity %.3f (28.9 +- 1.5)",
                 src.pair_probability, src.grids.grid_i.count, src.grids.grid_s.count, p, n01, n1);
  return r;
}

CriterionResult rates(Context& ctx) {
  CriterionResult r{5, "herald, false-event and multi-pair rates", true, ""};
  SwapRunOptions o;
  o.states = false;
  SimConfig c = ctx.config;
  const SwapResult s = evaluate_swap(c, c.L_SFG_mm, o);
  const double pm = multi_pair_probability(0.9, 0.1);
  // (1 - 0.9) * 0.1 is not representable exactly; allow one rounding
  const bool pm_ok = std::abs(pm - 0.01) <= 2.0 * std::numeric_limits<double>::epsilon() * 0.01;
  r.passed = within(s.herald_rate, 5.2e-3, 0.30) && within(s.false_rate, 4.10e-14, 0.60) && pm_ok;
  r.detail = fmt("L = L_SFG = %.2f mm: R_H %.4e /s (5.2e-3 +- 30%%), false %.4e /s (4.10e-14 +- 60%%), "
                 "P_multi(0.9, 0.1) = %.17g",
                 c.L_SFG_mm, s.herald_rate, s.false_rate, pm);
  return r;
}

CriterionResult resolved_figures(Context& ctx) {
  CriterionResult r{6, "resolved heralding per-bin figures of merit", true, ""};
  const SwapResult* s = ctx.design_point();
  if (!s) {
    r.passed = false;
    r.detail = "L_SFG_mm not in L_SFG_sweep_mm";
    return r;
  }
  double nmin = 1e300, nmax = -1e300, pmax = 0.0;
  bool range_ok = true, increasing = true;
  std::string list;
  for (std::size_t n = 0; n < s->bin_metrics.size(); ++n) {
    const double v = s->bin_metrics[n].negativity.negativity;
    nmin = std::min(nmin, v);
    nmax = std::max(nmax, v);
    pmax = std::max(pmax, s->bin_metrics[n].purity);
    range_ok = range_ok && v >= 8.0 && v <= 21.0;
    if (n > 0 && !(v > s->bin_metrics[n - 1].negativity.negativity)) increasing = false;
    list += fmt("%s%.2f", n ? " " : "", v);
  }
  const double span = nmax / nmin;
  r.passed = s->bin_metrics.size() == 8 && range_ok && span >= 1.8 && increasing && pmax >= 0.94 &&
             s->avg_purity > 0.82;
  r.detail = fmt("negativities [%s]: in [8, 21] %s, max/min %.3f (>= 1.8), increasing %s; best purity %.4f "
                 "(>= 0.94), weighted purity %.4f (> 0.82)",
                 list.c_str(), range_ok ? "yes" : "no", span, increasing ? "yes" : "no", pmax, s->avg_purity);
  return r;
}

CriterionResult superiority(Context& ctx) {
  CriterionResult r{7, "resolved averages beat the unresolved state", true, ""};
  for (const auto& s : ctx.get_sweep().results) {
    const bool ok = s.avg_negativity > s.unresolved.negativity.negativity && s.avg_purity > s.unresolved.purity;
    r.passed = r.passed && ok;
    r.detail += fmt("%sL_SFG %.2f: N %.3f vs %.3f, P %.4f vs %.4f", r.detail.empty() ? "" : "; ", s.L_SFG_mm,
                    s.avg_negativity, s.unresolved.negativity.negativity, s.avg_purity, s.unresolved.purity);
  }
  return r;
}

CriterionResult structural(Context& ctx) {
  CriterionResult r{8, "structural invariants of every state", true, ""};
  double herm = 0, tr = 0, agree = 0, pt_herm = 0, pt_tr = 0, spec = 0, q1 = 0;
  double pur_min = 1e300, pur_max = -1e300, neg_min = 1e300;
  std::size_t states = 0;
  auto take = [&](const StateMetrics& m) {
    ++states;
    herm = std::max(herm, m.hermiticity);
    tr = std::max(tr, std::abs(m.trace - 1.0));
    pur_min = std::min(pur_min, m.purity);
    pur_max = std::max(pur_max, m.purity);
    neg_min = std::min(neg_min, m.negativity.negativity);
    agree = std::max(agree, std::abs(m.negativity.eigen_sum - m.negativity.trace_norm_form));
    pt_herm = std::max(pt_herm, m.negativity.hermiticity_error);
    pt_tr = std::max(pt_tr, m.negativity.trace_error);
  };
  for (const auto& s : ctx.get_sweep().results) {
    for (const auto& m : s.bin_metrics) take(m);
    take(s.unresolved);
    double sum = 0.0;
    for (double p : s.spectrum) sum += p;
    spec = std::max(spec, std::abs(sum - s.Xi2) / s.Xi2);
  }
  // single-node bins at the design point
  const SimConfig& c = ctx.config;
  const Design d = make_design(c);
  const SourceRun src = build_source(c, d);
  const ThreeFreqJsa psi = build_psi(c, d, src, c.L_SFG_mm);
  const auto single = MeasurementBinning::make(psi.grid_sfg(), psi.slice_count(), 1);
  for (std::size_t l = 0; l < psi.slice_count(); ++l) {
    const auto rho = conditional_density_matrix(psi, single, l);
    q1 = std::max(q1, std::abs(purity(rho) - 1.0));
    tr = std::max(tr, std::abs(rho.trace() - 1.0));
  }
  r.passed = herm <= 1e-12 && tr <= 1e-12 && pur_min > 0.0 && pur_max <= 1.0 + 1e-12 && neg_min >= 0.0 &&
             q1 <= 1e-12 && agree <= 1e-10 && pt_herm <= 1e-12 && pt_tr <= 1e-12 && spec <= 1e-12;
  r.detail = fmt("%zu states: max |rho - rho^H| %.1e, max |tr - 1| %.1e, purity in [%.4f, %.4f], min negativity "
                 "%.3e, Q=1 max |P - 1| %.1e, eigen-sum vs trace-norm %.1e, partial transpose herm %.1e / "
                 "trace %.1e, spectrum vs Xi^2 %.1e",
                 states, herm, tr, pur_min, pur_max, neg_min, q1, agree, pt_herm, pt_tr, spec);
  return r;
}

CriterionResult convergence(Context& ctx) {
  CriterionResult r{9, "convergence in quadrature and spacing", true, ""};
  const SwapResult* base = ctx.design_point();
  if (!base) {
    r.passed = false;
    r.detail = "L_SFG_mm not in L_SFG_sweep_mm";
    return r;
  }
  const double L = ctx.config.L_SFG_mm;

  SimConfig quad = ctx.config;
  quad.integrationPoints *= 2;
  const SwapResult a = evaluate_swap(quad, L, SwapRunOptions{true, false, false, Exec::parallel});

  // halve both spacings over the same extents; bins keep their width by doubling Q
  SimConfig fine = ctx.config;
  const Design d0 = make_design(ctx.config);
  const SourceRun s0 = build_source(ctx.config, d0);
  fine.grid_half_cells = static_cast<long>(2 * s0.grids.half_cells);
  fine.delta_omega_si_rad_per_ps *= 0.5;
  fine.delta_omega_SFG_rad_per_ps *= 0.5;
  fine.Q *= 2;
  const SwapResult b = evaluate_swap(fine, L, SwapRunOptions{true, false, false, Exec::parallel});

  auto rel = [](double x, double y) { return std::abs(x - y) / std::abs(y); };
  const double qx = rel(a.Xi2, base->Xi2), qn = rel(a.avg_negativity, base->avg_negativity);
  const double hx = rel(b.Xi2, base->Xi2), hn = rel(b.avg_negativity, base->avg_negativity);
  r.passed = qx < 5e-3 && qn < 2e-2 && hx < 5e-3 && hn < 2e-2;
  r.detail = fmt("quadrature %ld -> %ld: Xi^2 %.3f%%, avg negativity %.3f%%; spacings halved (%zu x %zu grid, Q %ld): "
                 "Xi^2 %.3f%%, avg negativity %.3f%% (limits 0.5%% / 2%%)",
                 ctx.config.integrationPoints, quad.integrationPoints, 100 * qx, 100 * qn,
                 b.grids.b1.count, b.grids.b2.count, fine.Q, 100 * hx, 100 * hn);
  return r;
}

CriterionResult runtime(Context& ctx) {
  CriterionResult r{10, "full sweep runtime and memory", true, ""};
  const Sweep& s = ctx.get_sweep();
  std::size_t largest = 0;
  for (const auto& res : s.results) {
    auto dim = [](const StateMetrics& m) { return m.negativity.support_b1 * m.negativity.support_b2; };
    for (const auto& m : res.bin_metrics) largest = std::max(largest, dim(m));
    largest = std::max(largest, dim(res.unresolved));
  }
  const double full_gb = std::pow(double(s.n_b1 * s.n_b2), 2) * double(s.sfg_nodes) * 16.0 / 1073741824.0;
  const double largest_gb = double(largest) * double(largest) * 16.0 / 1073741824.0;
  const unsigned cores = std::thread::hardware_concurrency();
  r.passed = s.seconds < 1800.0 && s.peak_rss_gb < 8.0 && largest < s.n_b1 * s.n_b2;
  r.detail = fmt("%zu L_SFG values in %.1f s (limit 1800 s) on %u hardware threads, %d OpenMP threads; peak RSS "
                 "%.2f GB (limit 8); largest dense block %zu^2 (%.2f GB) vs full tensor %.0f GB",
                 s.results.size(), s.seconds, cores, omp_get_max_threads(), s.peak_rss_gb, largest, largest_gb,
                 full_gb);
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const SimConfig& c, const std::vector<int>& only, std::ostream& out) {
  apply_thread_budget(c);
  // the sweep-based criteria come first so the runtime figure is not inflated
  const std::vector<std::pair<int, Check>> order = {
      {10, runtime}, {6, resolved_figures}, {7, superiority}, {8, structural}, {1, toy_exactness},
      {2, bell_product}, {3, kappa_fit}, {4, source_baseline}, {5, rates}, {9, convergence}};
  Context ctx{c, std::nullopt};
  std::map<int, CriterionResult> done;
  for (const auto& [id, check] : order) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    CriterionResult r;
    try {
      r = check(ctx);
    } catch (const std::exception& e) {
      r = {id, "", false, std::string("error: ") + e.what()};
    }
    r.id = id;
    out << (r.passed ? "PASS" : "FAIL") << "  criterion " << id << ": " << r.name << " | " << r.detail << std::endl;
    done[id] = r;
  }
  std::vector<CriterionResult> res;
  for (auto& [id, r] : done) res.push_back(std::move(r));
  return res;
}

bool all_passed(const std::vector<CriterionResult>& r) {
  for (const auto& x : r)
    if (!x.passed) return false;
  return !r.empty();
}

}  // namespace tfswap
