#include "tfswap/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <numeric>

#include "tfswap/errors.hpp"
#include "tfswap/units.hpp"

namespace tfswap {

namespace {

// OpenMP loop that rethrows the first exception on the calling thread.
void guarded_parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::size_t i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(tfswap_guarded)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

std::string length_tag(double mm) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", mm);
  return buf;
}

StateMetrics describe(const DensityMatrix& rho, const ThreeFreqJsa& psi, bool keep_jsi) {
  StateMetrics m;
  m.trace = rho.trace();
  m.purity = purity(rho);
  const Eigen::VectorXd diag = rho.diagonal();
  m.min_diagonal = diag.minCoeff();
  // Hermiticity on a deterministic sample of entry pairs
  const std::size_t dim = rho.dim();
  double herm = 0.0;
  for (std::size_t s = 0; s < 512; ++s) {
    const std::size_t r = (s * 7919) % dim, c = (s * 104729 + 13) % dim;
    herm = std::max(herm, std::abs(rho(r, c) - std::conj(rho(c, r))));
  }
  m.hermiticity = herm;
  const Eigen::MatrixXd jsi = conditional_jsi(rho);
  double acc = 0.0, w = 0.0;
  for (Eigen::Index j = 0; j < jsi.rows(); ++j)
    for (Eigen::Index k = 0; k < jsi.cols(); ++k) {
      acc += jsi(j, k) * (psi.grid_b1()[static_cast<std::size_t>(j)] + psi.grid_b2()[static_cast<std::size_t>(k)]);
      w += jsi(j, k);
    }
  m.centroid_sum = acc / w;
  if (keep_jsi) m.jsi = jsi;
  return m;
}

}  // namespace

Design make_design(const SimConfig& c) {
  c.validate();
  Design d;
  d.sellmeier = c.sellmeier_file.empty() ? default_ktp() : load_sellmeier(c.sellmeier_file);
  d.crystal = {mm_to_um(c.L_mm), c.poling_period_um, 1};
  d.pump = {c.P_avg_W, c.R_R_GHz * 1e9, rad_per_ps_to_rad_per_fs(c.sigma_p_rad_per_ps), c.omega_p_rad_per_fs};
  d.constants = SourceConstants::from_d24(c.d24_pm_per_V, c.A_I_um2);
  d.wi0 = c.omega_i_rad_per_fs;
  d.ws0 = c.omega_s_rad_per_fs;
  d.spacing = rad_per_ps_to_rad_per_fs(c.delta_omega_si_rad_per_ps);
  d.spacing_sfg = rad_per_ps_to_rad_per_fs(c.delta_omega_SFG_rad_per_ps);
  return d;
}

SpdcSource make_source(const Design& d) { return SpdcSource(d.sellmeier, d.crystal, d.pump, d.constants); }

CrystalParams sfg_crystal(const SimConfig& c, double L_SFG_mm) { return {mm_to_um(L_SFG_mm), c.poling_period_SFG_um, 1}; }

NegativityOptions negativity_options(const SimConfig& c) {
  NegativityOptions o;
  o.support_tolerance = c.support_tolerance;
  return o;
}

std::size_t memory_budget_bytes(const SimConfig& c) { return static_cast<std::size_t>(c.memory_budget_GB * 1073741824.0); }

void apply_thread_budget(const SimConfig& c) {
  if (c.threads > 0) omp_set_num_threads(static_cast<int>(c.threads));
  set_blas_single_threaded();
}

SourceRun build_source(const SimConfig& c, const Design& d) {
  const SpdcSource src = make_source(d);
  SourceRun r;
  if (c.grid_half_cells > 0) {
    const auto h = static_cast<std::size_t>(c.grid_half_cells);
    r.grids.grid_i = FrequencyGrid::centered(d.wi0, d.spacing, h);
    r.grids.grid_s = FrequencyGrid::centered(d.ws0, d.spacing, h);
    r.grids.half_cells = h;
    r.grids.captured = std::nan("");
  } else {
    // the amplitude shape does not depend on power; size the box at 1 W if P = 0
    PumpParams p = d.pump;
    if (p.power_W == 0.0) p.power_W = 1.0;
    const SpdcSource shape(d.sellmeier, d.crystal, p, d.constants);
    r.grids = capture_grids(shape, d.wi0, d.ws0, d.spacing, c.grid_capture,
                            static_cast<std::size_t>(c.grid_reference_half_cells));
  }
  r.jsa = source_jsa(src, r.grids.grid_i, r.grids.grid_s);
  r.pair_probability = pair_probability(r.jsa);
  return r;
}

SwapGrids swap_grids(const SimConfig& c, const Design& d, const SourceRun& src) {
  SwapGrids g;
  g.b1 = src.grids.grid_i;
  g.b2 = src.grids.grid_s;
  g.a2_support = src.grids.grid_i;
  g.sfg = FrequencyGrid::symmetric(d.ws0 + d.wi0, d.spacing_sfg, static_cast<std::size_t>(c.N_bins * c.Q));
  return g;
}

ThreeFreqJsa build_psi(const SimConfig& c, const Design& d, const SourceRun& src, double L_SFG_mm, Exec exec) {
  const SpdcSource s = make_source(d);
  ThreeFreqOptions o;
  o.quadrature_points = static_cast<std::size_t>(c.integrationPoints);
  o.memory_budget_bytes = memory_budget_bytes(c) / 4;
  o.exec = exec;
  return three_freq_jsa(d.sellmeier, s, s, sfg_crystal(c, L_SFG_mm), d.constants, swap_grids(c, d, src), o);
}

SwapResult evaluate_swap(const SimConfig& c, double L_SFG_mm, const SwapRunOptions& opt) {
  const Design d = make_design(c);
  const SourceRun src = build_source(c, d);
  return evaluate_swap(c, d, src, L_SFG_mm, opt);
}

SwapResult evaluate_swap(const SimConfig& c, const Design& d, const SourceRun& src, double L_SFG_mm,
                         const SwapRunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  SwapResult r;
  r.L_SFG_mm = L_SFG_mm;
  r.xi2_source = src.pair_probability;
  const ThreeFreqJsa psi = build_psi(c, d, src, L_SFG_mm, opt.exec);
  r.grids = swap_grids(c, d, src);
  r.quadrature_points = psi.quadrature_points();
  r.Xi2 = sfg_probability(psi);
  r.herald_rate = herald_rate(r.Xi2, d.pump.rep_rate_Hz);
  r.false_rate = false_event_rate(r.Xi2, d.pump.rep_rate_Hz);
  r.multi_pair = multi_pair_probability(c.gamma, r.xi2_source);
  for (double n : psi.slice_norms()) r.slice_probability.push_back(psi.cell_measure() * n);
  r.bins = MeasurementBinning::make(psi.grid_sfg(), static_cast<std::size_t>(c.N_bins), static_cast<std::size_t>(c.Q));
  r.spectrum = herald_spectrum(psi, r.bins);

  if (opt.states) {
    const std::size_t nb = r.bins.N, ntask = nb + (opt.unresolved ? 1 : 0);
    const NegativityOptions nopt = negativity_options(c);
    std::vector<StateMetrics> m(ntask);
    std::vector<PreparedNegativity> prep(ntask);
    const int threads = opt.exec == Exec::parallel ? omp_get_max_threads() : 1;
    guarded_parallel_for(ntask, threads, [&](std::size_t t) {
      if (t < nb && r.spectrum[t] <= 0.0) return;  // herald impossible; metrics stay zero
      const DensityMatrix rho = t < nb ? conditional_density_matrix(psi, r.bins, t) : reduced_density_matrix(psi);
      m[t] = describe(rho, psi, opt.keep_jsi);
      prep[t] = prepare_negativity(rho, nopt);
    });

    // run as many dense eigensolves at once as the memory budget allows
    std::vector<std::size_t> bytes(ntask);
    for (std::size_t t = 0; t < ntask; ++t) bytes[t] = prep[t].dense_bytes();
    std::vector<std::size_t> sorted = bytes;
    std::sort(sorted.rbegin(), sorted.rend());
    const std::size_t budget = memory_budget_bytes(c);
    if (!sorted.empty() && sorted[0] * 5 / 4 > budget) {
      const std::size_t n12 = psi.grid_b1().count * psi.grid_b2().count;
      char buf[400];
      std::snprintf(buf, sizeof buf,
                    "memory budget %.2f GB too small: a heralded state has (N_b1 N_b2)^2 = %.3g elements "
                    "(%.3g over all %zu SFG nodes); its projected partial transpose needs %.2f GB. "
                    "Raise memory_budget_GB or support_tolerance.",
                    c.memory_budget_GB, double(n12) * double(n12), double(n12) * double(n12) * double(psi.slice_count()),
                    psi.slice_count(), 1.25 * double(sorted[0]) / 1073741824.0);
      throw ConfigError(buf);
    }
    int nt = std::max(1, std::min<int>(threads, static_cast<int>(ntask)));
    while (nt > 1 && std::accumulate(sorted.begin(), sorted.begin() + nt, std::size_t(0)) * 5 / 4 > budget) --nt;
    set_blas_single_threaded();
    guarded_parallel_for(ntask, nt, [&](std::size_t t) {
      if (t < nb && r.spectrum[t] <= 0.0) return;
      m[t].negativity = finish_negativity(std::move(prep[t]), nopt);
    });

    for (std::size_t n = 0; n < nb; ++n) {
      m[n].center = r.bins.centers[n];
      m[n].probability = r.spectrum[n];
    }
    r.bin_metrics.assign(m.begin(), m.begin() + static_cast<long>(nb));
    if (opt.unresolved) {
      r.unresolved = m[nb];
      r.unresolved.probability = r.Xi2;
      r.unresolved.center = psi.grid_sfg().center();
    }
    std::vector<double> pur, neg;
    for (const auto& b : r.bin_metrics) {
      pur.push_back(b.purity);
      neg.push_back(b.negativity.negativity);
    }
    r.avg_purity = weighted_average(pur, r.spectrum);
    r.avg_negativity = weighted_average(neg, r.spectrum);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

namespace {
nlohmann::json state_json(const StateMetrics& m) {
  return {{"center_rad_per_fs", m.center},
          {"p", m.probability},
          {"purity", m.purity},
          {"negativity", m.negativity.negativity},
          {"negativity_trace_norm", m.negativity.trace_norm_form},
          {"min_eigenvalue", m.negativity.min_eigenvalue},
          {"support_b1", m.negativity.support_b1},
          {"support_b2", m.negativity.support_b2},
          {"discarded_weight", m.negativity.discarded_weight},
          {"truncation_estimate", m.negativity.truncation_estimate},
          {"centroid_sum_rad_per_fs", m.centroid_sum}};
}
}  // namespace

nlohmann::json metrics_json(const SimConfig& c, const SwapResult& r) {
  nlohmann::json j;
  j["L_mm"] = c.L_mm;
  j["L_SFG_mm"] = r.L_SFG_mm;
  j["xi2_source"] = r.xi2_source;
  j["Xi2"] = r.Xi2;
  j["R_H_per_s"] = r.herald_rate;
  j["false_event_rate_per_s"] = r.false_rate;
  j["P_multi"] = r.multi_pair;
  j["bin_width_rad_per_fs"] = r.bins.width;
  nlohmann::json bins = nlohmann::json::array();
  for (const auto& b : r.bin_metrics) bins.push_back(state_json(b));
  j["bins"] = bins;
  j["unresolved"] = state_json(r.unresolved);
  j["averages"] = {{"purity", r.avg_purity}, {"negativity", r.avg_negativity}};
  j["quadrature_points"] = r.quadrature_points;
  j["support_tolerance"] = c.support_tolerance;
  return j;
}

namespace {
OutputMeta meta_for(const SimConfig& c, const std::string& kind) {
  OutputMeta m;
  m.kind = kind;
  m.config_hash = c.hash();
  return m;
}
std::string path_in(const SimConfig& c, const std::string& name) { return c.output_dir + "/" + name; }
}  // namespace

std::vector<std::string> run_source_jsi(const SimConfig& c, bool calibrate) {
  apply_thread_budget(c);
  ensure_directory(c.output_dir);
  const Design d = make_design(c);
  const SourceRun src = build_source(c, d);
  std::vector<std::string> files;
  if (c.P_avg_W == 0.0) std::cerr << "warning: P_avg_W = 0, the joint spectral amplitude is identically zero\n";

  OutputMeta meta = meta_for(c, "source_jsi");
  meta.grids = {{"omega_i", src.grids.grid_i}, {"omega_s", src.grids.grid_s}};
  meta.extra = {{"amplitude_units", "s (SI); |Phi|^2 integrates over rad/s to the pair probability"}};
  const std::string csv = path_in(c, "source_jsi.csv");
  {
    CsvWriter w(csv, meta, {"omega_i_rad_per_fs", "omega_s_rad_per_fs", "re_phi", "im_phi", "abs_phi_sq"});
    for (std::size_t j = 0; j < src.grids.grid_i.count; ++j)
      for (std::size_t k = 0; k < src.grids.grid_s.count; ++k) {
        const auto a = src.jsa.amplitude(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
        w.row({src.grids.grid_i[j], src.grids.grid_s[k], a.real(), a.imag(), std::norm(a)});
      }
    w.close();
  }
  files.push_back(csv);

  nlohmann::json rep;
  rep["pair_probability"] = src.pair_probability;
  rep["grid_half_cells"] = src.grids.half_cells;
  rep["grid_captured_fraction"] = src.grids.captured;
  rep["grid_reference_half_cells"] = src.grids.reference_half_cells;
  Eigen::Index pj = 0, pk = 0;
  src.jsa.amplitude.cwiseAbs2().maxCoeff(&pj, &pk);
  rep["peak_omega_i_rad_per_fs"] = src.grids.grid_i[static_cast<std::size_t>(pj)];
  rep["peak_omega_s_rad_per_fs"] = src.grids.grid_s[static_cast<std::size_t>(pk)];
  if (calibrate) {
    PumpParams p = d.pump;
    if (p.power_W == 0.0) p.power_W = 1.0;
    const SpdcSource s(d.sellmeier, d.crystal, p, d.constants);
    rep["calibrated_P_avg_W_for_xi2_0.1"] = calibrate_pump_power(0.1, s, src.grids.grid_i, src.grids.grid_s);
  }
  if (src.pair_probability > 0.0) {
    const NegativityOptions nopt = negativity_options(c);
    nlohmann::json base = nlohmann::json::array();
    for (double eta : {c.eta, 1.0})
      for (bool coherent : {false, true}) {
        const DensityMatrix rho = source_density_matrix(src.jsa, eta, coherent);
        base.push_back({{"eta", eta}, {"coherent", coherent}, {"purity", purity(rho)},
                        {"negativity", negativity(rho, nopt)}});
      }
    rep["baseline"] = base;
  }
  const std::string js = path_in(c, "source_report.json");
  write_json(js, meta, rep);
  files.push_back(js);
  return files;
}

std::vector<std::string> run_swap(const SimConfig& c) {
  apply_thread_budget(c);
  ensure_directory(c.output_dir);
  const Design d = make_design(c);
  const SourceRun src = build_source(c, d);
  std::vector<std::string> files;
  std::vector<SwapResult> results;
  SwapRunOptions opt;
  opt.keep_jsi = true;
  for (double L : c.L_SFG_sweep_mm) {
    SwapResult r = evaluate_swap(c, d, src, L, opt);
    const std::string tag = "swap_L" + length_tag(L) + "mm";
    OutputMeta meta = meta_for(c, "swap");
    meta.grids = {{"omega_b1", r.grids.b1}, {"omega_b2", r.grids.b2}, {"omega_SFG", r.grids.sfg}};
    meta.extra = {{"L_SFG_mm", length_tag(L)}};

    const std::string spec = path_in(c, tag + "_spectrum.csv");
    {
      CsvWriter w(spec, meta, {"bin", "center_rad_per_fs", "p", "purity", "negativity"});
      for (std::size_t n = 0; n < r.bins.N; ++n)
        w.row({double(n), r.bin_metrics[n].center, r.bin_metrics[n].probability, r.bin_metrics[n].purity,
               r.bin_metrics[n].negativity.negativity});
      w.close();
    }
    files.push_back(spec);

    const std::string slices = path_in(c, tag + "_sfg_marginal.csv");
    {
      CsvWriter w(slices, meta, {"omega_SFG_rad_per_fs", "probability"});
      for (std::size_t l = 0; l < r.slice_probability.size(); ++l) w.row({r.grids.sfg[l], r.slice_probability[l]});
      w.close();
    }
    files.push_back(slices);

    for (std::size_t n = 0; n < r.bins.N; ++n) {
      if (r.bin_metrics[n].jsi.size() == 0) continue;
      const std::string p = path_in(c, tag + "_conditional_jsi_bin" + std::to_string(n) + ".csv");
      OutputMeta m2 = meta;
      m2.kind = "conditional_jsi";
      m2.extra.push_back({"bin", std::to_string(n)});
      CsvWriter w(p, m2, {"omega_b1_rad_per_fs", "omega_b2_rad_per_fs", "population"});
      const auto& J = r.bin_metrics[n].jsi;
      for (Eigen::Index j = 0; j < J.rows(); ++j)
        for (Eigen::Index k = 0; k < J.cols(); ++k)
          w.row({r.grids.b1[static_cast<std::size_t>(j)], r.grids.b2[static_cast<std::size_t>(k)], J(j, k)});
      w.close();
      files.push_back(p);
    }

    // |psi|^2 above a printable threshold, with a JSON sidecar
    {
      const ThreeFreqJsa psi = build_psi(c, d, src, L);
      double peak = 0.0;
      for (std::size_t l = 0; l < psi.slice_count(); ++l) peak = std::max(peak, psi.slice(l).cwiseAbs2().maxCoeff());
      const double threshold = 1e-4 * peak;
      const std::string p = path_in(c, tag + "_psi.csv");
      OutputMeta m2 = meta;
      m2.kind = "three_frequency_jsa";
      m2.extra.push_back({"print_threshold_abs_psi_sq", sci(threshold)});
      CsvWriter w(p, m2, {"omega_b1_rad_per_fs", "omega_b2_rad_per_fs", "omega_SFG_rad_per_fs", "abs_psi_sq"});
      for (std::size_t l = 0; l < psi.slice_count(); ++l) {
        const Eigen::MatrixXcd s = psi.slice(l);
        for (Eigen::Index j = 0; j < s.rows(); ++j)
          for (Eigen::Index k = 0; k < s.cols(); ++k)
            if (std::norm(s(j, k)) >= threshold)
              w.row({psi.grid_b1()[static_cast<std::size_t>(j)], psi.grid_b2()[static_cast<std::size_t>(k)],
                     psi.grid_sfg()[l], std::norm(s(j, k))});
      }
      w.close();
      files.push_back(p);
      const std::string side = path_in(c, tag + "_psi.json");
      write_json(side, m2,
                 {{"Xi2", r.Xi2},
                  {"quadrature_points", psi.quadrature_points()},
                  {"quadrature_rule", "trapezoid over source 2 idler extent"},
                  {"a2_support", grid_json(r.grids.a2_support)},
                  {"psi_units", "s^(3/2) (SI)"},
                  {"peak_abs_psi_sq", peak}});
      files.push_back(side);
    }

    const std::string mj = path_in(c, tag + "_metrics.json");
    write_json(mj, meta, metrics_json(c, r));
    files.push_back(mj);
    std::cerr << "L_SFG " << L << " mm: Xi2 " << r.Xi2 << ", R_H " << r.herald_rate << " /s, avg purity "
              << r.avg_purity << ", avg negativity " << r.avg_negativity << " (" << r.seconds << " s)\n";
    r.bin_metrics.clear();  // drop the kept JSIs
    results.push_back(std::move(r));
  }

  OutputMeta meta = meta_for(c, "swap_sweep");
  meta.grids = {{"omega_b1", src.grids.grid_i}, {"omega_b2", src.grids.grid_s}};
  const std::string sweep = path_in(c, "swap_sweep.csv");
  CsvWriter w(sweep, meta,
              {"L_SFG_mm", "Xi2", "R_H_per_s", "false_event_rate_per_s", "avg_purity", "avg_negativity",
               "unresolved_purity", "unresolved_negativity"});
  for (const auto& r : results)
    w.row({r.L_SFG_mm, r.Xi2, r.herald_rate, r.false_rate, r.avg_purity, r.avg_negativity, r.unresolved.purity,
           r.unresolved.negativity.negativity});
  w.close();
  files.push_back(sweep);
  return files;
}

std::vector<std::string> run_toy(const SimConfig& c) {
  c.validate();
  ensure_directory(c.output_dir);
  const std::string p = path_in(c, "toy_negativity.csv");
  CsvWriter w(p, meta_for(c, "toy_negativity"), {"N", "eta", "coherent", "negativity", "incoherent_closed_form"});
  for (double n : c.toy_N)
    for (bool coherent : {false, true})
      for (double eta : c.toy_eta) {
        const auto N = static_cast<std::size_t>(n);
        w.row({n, eta, coherent ? 1.0 : 0.0, toy_state_negativity(N, eta, coherent), (n - 1.0) * eta / 2.0});
      }
  w.close();
  return {p};
}

std::vector<std::string> run_rates(const SimConfig& c) {
  apply_thread_budget(c);
  ensure_directory(c.output_dir);
  const Design d = make_design(c);
  const SourceRun src = build_source(c, d);
  SwapRunOptions opt;
  opt.states = false;
  OutputMeta meta = meta_for(c, "rates");
  meta.grids = {{"omega_b1", src.grids.grid_i}, {"omega_b2", src.grids.grid_s}};
  const std::string p = path_in(c, "rates.csv");
  CsvWriter w(p, meta, {"L_SFG_mm", "xi2_source", "Xi2", "R_H_per_s", "false_event_rate_per_s", "P_multi"});
  nlohmann::json arr = nlohmann::json::array();
  for (double L : c.L_SFG_sweep_mm) {
    const SwapResult r = evaluate_swap(c, d, src, L, opt);
    w.row({L, r.xi2_source, r.Xi2, r.herald_rate, r.false_rate, r.multi_pair});
    arr.push_back({{"L_SFG_mm", L}, {"xi2_source", r.xi2_source}, {"Xi2", r.Xi2}, {"R_H_per_s", r.herald_rate},
                   {"false_event_rate_per_s", r.false_rate}, {"P_multi", r.multi_pair},
                   {"seconds_between_heralds", r.herald_rate > 0 ? 1.0 / r.herald_rate : 0.0}});
  }
  w.close();
  const std::string js = path_in(c, "rates.json");
  write_json(js, meta, {{"rates", arr}});
  return {p, js};
}

}  // namespace tfswap
