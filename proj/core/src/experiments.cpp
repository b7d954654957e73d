#include "tisim/experiments.hpp"

#include "tisim/arrow.hpp"
#include "tisim/errors.hpp"
#include "tisim/format.hpp"
#include "tisim/frontier.hpp"
#include "tisim/handshake.hpp"
#include "tisim/ledger.hpp"
#include "tisim/zeno.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef TISIM_VERSION
#define TISIM_VERSION "0.0.0"
#endif

namespace tisim {

using Json = nlohmann::ordered_json;

std::string_view artifact_version() noexcept { return TISIM_VERSION; }

bool RunResult::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const std::string& RunResult::file(const std::string& name) const {
  for (const auto& [n, content] : files) {
    if (n == name) {
      return content;
    }
  }
  throw std::out_of_range("run produced no file named " + name);
}

namespace {

Json config_json(const RunConfig& c) {
  Json j;
  j["experiment"] = std::string(to_string(c.experiment));
  j["seed"] = c.seed;
  j["trials"] = c.resolved_trials();
  j["beta"] = c.medium.attenuation;
  j["omega"] = c.medium.phase_rate;
  j["eta"] = c.medium.t_violation;
  j["r"] = c.reinforcement.factor;
  j["epsilon"] = c.reinforcement.epsilon;
  j["emitter_site"] = c.emitter_site;
  j["emitter_tick"] = c.emitter_tick;
  j["source_re"] = c.source_re;
  j["source_im"] = c.source_im;
  j["offer_energy"] = c.offer.energy;
  j["offer_momentum"] = c.offer.momentum;
  j["offer_spin_z"] = c.offer.spin_z;
  j["absorber_sites"] = c.absorber_sites;
  j["absorber_ticks"] = c.absorber_ticks;
  j["absorber_efficiency"] = c.absorber_efficiency;
  j["particles"] = c.particles;
  j["collisions"] = c.collisions;
  j["speed_bins"] = c.speed_bins;
  j["direction_sectors"] = c.direction_sectors;
  j["theta_total"] = c.theta_total;
  j["n_list"] = c.n_list;
  j["frontier_sites"] = c.frontier_sites;
  j["frontier_attempts"] = c.frontier_attempts;
  j["frontier_max_span"] = c.frontier_max_span;
  j["box_scales"] = c.box_scales;
  return j;
}

Json checks_json(const std::vector<CheckResult>& checks) {
  Json arr = Json::array();
  bool all = true;
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    all = all && c.passed;
  }
  return {{"passed", all}, {"criteria", arr}};
}

RunResult finish(const RunConfig& cfg, std::string result_csv, Json results,
                 std::vector<CheckResult> checks,
                 std::vector<std::pair<std::string, std::string>> extra = {}) {
  Json summary;
  summary["artifact"] = "tisim";
  summary["version"] = std::string(artifact_version());
  summary["experiment"] = std::string(to_string(cfg.experiment));
  summary["seed"] = cfg.seed;
  summary["config"] = config_json(cfg);
  summary["results"] = std::move(results);
  summary["check"] = checks_json(checks);

  RunResult out;
  out.files.emplace_back("result.csv", std::move(result_csv));
  for (auto& f : extra) {
    out.files.push_back(std::move(f));
  }
  out.files.emplace_back("summary.json", summary.dump(2) + "\n");
  out.checks = std::move(checks);
  return out;
}

std::string fmt(double x) { return format_decimal(x); }

RunResult run_born(const RunConfig& cfg) {
  const Scenario s = cfg.scenario();
  const std::uint64_t trials = cfg.resolved_trials();
  const EchoTable table = collect_confirmations(s.emitter, s.absorbers, s.medium, EvaluationSite::Post);
  const auto txs = run_trials(s, EvaluationSite::Post, cfg.seed, trials);

  Ledger ledger;
  std::uint64_t completed = 0;
  for (const auto& tx : txs) {
    if (tx.completed()) {
      ledger.post(tx);
      ++completed;
    }
  }
  const AuditReport report = audit(ledger);

  bool replay_rejected = true;
  std::string replay_detail = "no completed transaction to replay";
  if (completed > 0) {
    const auto first = std::find_if(txs.begin(), txs.end(), [](const Transaction& t) { return t.completed(); });
    replay_rejected = false;
    try {
      Ledger copy = ledger;
      copy.post(*first);
    } catch (const DoubleSpend&) {
      replay_rejected = true;
    }
    replay_detail = "re-posting tx " + std::to_string(first->id) +
                    (replay_rejected ? " raised DoubleSpend" : " was accepted");
  }

  std::vector<CheckResult> checks;
  Json absorbers = Json::array();
  const auto expected = selection_probabilities(table);
  const auto n = static_cast<double>(trials);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const PartyId id = table.entries()[i].absorber_id;
    const auto hits = static_cast<double>(std::count_if(
        txs.begin(), txs.end(), [&](const Transaction& t) { return t.chosen && *t.chosen == id; }));
    const double freq = hits / n;
    const double band = 3.0 * std::sqrt(expected[i] * (1.0 - expected[i]) / n);
    absorbers.push_back({{"absorber_id", id.value},
                         {"echo_strength", table.entries()[i].strength},
                         {"expected", expected[i]},
                         {"frequency", freq},
                         {"three_sigma", band}});
    checks.push_back({"born frequency absorber " + std::to_string(id.value),
                      std::fabs(freq - expected[i]) <= band,
                      "frequency " + fmt(freq) + " vs expected " + fmt(expected[i]) + " +/- " + fmt(band)});
  }
  checks.push_back({"ledger audit", report.pass,
                    report.pass ? "all sums exactly zero" : report.violations.front()});
  checks.push_back({"double spend rejected", replay_rejected, replay_detail});

  Json results;
  results["trials"] = trials;
  results["completed"] = completed;
  results["aborted"] = trials - completed;
  results["absorbers"] = absorbers;
  results["audit"] = Json::parse(audit_to_json(report));

  std::ostringstream log;
  write_transaction_log(log, txs);
  std::ostringstream ledger_csv;
  write_ledger_csv(ledger_csv, ledger);
  return finish(cfg, log.str(), std::move(results), std::move(checks),
                {{"ledger.csv", ledger_csv.str()}});
}

RunResult run_sites(const RunConfig& cfg) {
  const Scenario s = cfg.scenario();
  RandomSource rng(cfg.seed);
  const SiteComparison cmp = compare_sites(s, rng, cfg.resolved_trials());

  std::ostringstream csv;
  csv << "absorber_id,post_expected,prior_expected,post_frequency,prior_frequency\n";
  for (std::size_t i = 0; i < cmp.absorber_ids.size(); ++i) {
    csv << cmp.absorber_ids[i].value << ',' << fmt(cmp.post_expected[i]) << ','
        << fmt(cmp.prior_expected[i]) << ',' << fmt(cmp.post_frequency[i]) << ','
        << fmt(cmp.prior_frequency[i]) << '\n';
  }

  std::vector<CheckResult> checks;
  const std::string numbers = "tv " + fmt(cmp.tv_distance) + ", expected " + fmt(cmp.expected_tv) +
                              ", 3-sigma bound " + fmt(cmp.tv_bound);
  if (cmp.expected_tv == 0.0) {
    checks.push_back({"post/prior agree", cmp.tv_distance <= cmp.tv_bound, numbers});
    if (cfg.medium.t_violation == 0.0) {
      checks.push_back({"post/prior echo tables identical", cmp.tables_equal,
                        cmp.tables_equal ? "identical" : "tables differ"});
    }
  } else {
    checks.push_back({"post/prior diverge", cmp.tv_distance > cmp.tv_bound, numbers});
    checks.push_back({"divergence matches echo formula",
                      std::fabs(cmp.tv_distance - cmp.expected_tv) <= cmp.tv_tolerance,
                      numbers + ", tolerance " + fmt(cmp.tv_tolerance)});
  }

  Json results;
  results["trials"] = cmp.trials;
  results["tables_equal"] = cmp.tables_equal;
  results["tv_distance"] = cmp.tv_distance;
  results["expected_tv"] = cmp.expected_tv;
  results["tv_bound"] = cmp.tv_bound;
  results["tv_tolerance"] = cmp.tv_tolerance;
  Json absorbers = Json::array();
  for (std::size_t i = 0; i < cmp.absorber_ids.size(); ++i) {
    absorbers.push_back({{"absorber_id", cmp.absorber_ids[i].value},
                         {"post_expected", cmp.post_expected[i]},
                         {"prior_expected", cmp.prior_expected[i]},
                         {"post_frequency", cmp.post_frequency[i]},
                         {"prior_frequency", cmp.prior_frequency[i]}});
  }
  results["absorbers"] = absorbers;
  return finish(cfg, csv.str(), std::move(results), std::move(checks));
}

RunResult run_zeno(const RunConfig& cfg) {
  std::vector<std::uint64_t> ns = cfg.n_list;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  std::vector<ZenoResult> rows;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    RandomSource rng(derive_seed(cfg.seed, ns[k]));
    rows.push_back(zeno_run(cfg.theta_total, ns[k], cfg.resolved_trials(), rng));
  }

  std::ostringstream csv;
  csv << "N,expected,empirical,trials,three_sigma\n";
  std::vector<CheckResult> checks;
  Json results = Json::array();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    csv << r.steps << ',' << fmt(r.expected) << ',' << fmt(r.empirical) << ',' << r.trials << ','
        << fmt(r.three_sigma) << '\n';
    checks.push_back({"zeno survival N=" + std::to_string(r.steps), r.within_band(),
                      "empirical " + fmt(r.empirical) + " vs expected " + fmt(r.expected) +
                          " +/- " + fmt(r.three_sigma)});
    results.push_back({{"N", r.steps},
                       {"expected", r.expected},
                       {"empirical", r.empirical},
                       {"survivors", r.survivors},
                       {"trials", r.trials},
                       {"three_sigma", r.three_sigma}});
  }
  bool monotone = true;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double slack = rows[k].three_sigma + rows[k - 1].three_sigma;
    monotone = monotone && rows[k].empirical >= rows[k - 1].empirical - slack;
  }
  checks.push_back({"survival non-decreasing in N", monotone,
                    monotone ? "within 3-sigma bands" : "decrease beyond 3-sigma bands"});
  return finish(cfg, csv.str(), Json{{"runs", results}}, std::move(checks));
}

RunResult run_htheorem(const RunConfig& cfg) {
  const std::uint64_t runs = cfg.resolved_trials();
  std::ostringstream csv;
  csv << "run,sample,forward_step,forward_h,reversed_step,reversed_h\n";

  Json per_run = Json::array();
  std::uint64_t forward_ok = 0, equilibrium_ok = 0, reverse_ok = 0, mirror_ok = 0, restore_ok = 0;
  for (std::uint64_t r = 0; r < runs; ++r) {
    const std::uint64_t run_seed = derive_seed(cfg.seed, r);
    RandomSource rng(run_seed);
    GasState initial = two_delta_state(cfg.particles);
    const VelocityBinning binning =
        VelocityBinning::for_state(initial, cfg.speed_bins, cfg.direction_sectors);
    const ForwardRun fwd = simulate_forward(std::move(initial), cfg.collisions, rng, binning);
    const ReplayResult rev = reverse_replay(fwd.initial, fwd.history);

    RandomSource oracle_rng(derive_seed(run_seed, 1));
    const double reference =
        maxwell_reference_h(cfg.particles, fwd.initial.rms_speed(), binning, oracle_rng);

    const TrendCheck ft = check_trend(fwd.trace, TrendDirection::NonIncreasing);
    const TrendCheck rt = check_trend(rev.trace, TrendDirection::NonDecreasing);
    const double final_h = fwd.trace.back().h;
    const bool near_eq = std::fabs(final_h - reference) <= 0.05;

    double mirror_err = 0.0;
    const std::size_t len = fwd.trace.size();
    const bool same_len = rev.trace.size() == len;
    for (std::size_t k = 0; same_len && k < len; ++k) {
      mirror_err = std::max(mirror_err, std::fabs(rev.trace[k].h - fwd.trace[len - 1 - k].h));
    }
    const bool mirrored = same_len && mirror_err <= 1e-9;

    const GasState target = fwd.initial.negated();
    double restore_err = 0.0;
    for (std::size_t p = 0; p < target.size(); ++p) {
      restore_err = std::max({restore_err, std::fabs(rev.final_state.velocities[p].x - target.velocities[p].x),
                              std::fabs(rev.final_state.velocities[p].y - target.velocities[p].y)});
    }
    const bool restored = restore_err <= 1e-6;

    forward_ok += ft.endpoints_ok ? 1 : 0;
    equilibrium_ok += near_eq ? 1 : 0;
    reverse_ok += rt.endpoints_ok ? 1 : 0;
    mirror_ok += mirrored ? 1 : 0;
    restore_ok += restored ? 1 : 0;

    for (std::size_t k = 0; k < len; ++k) {
      csv << r << ',' << k << ',' << fwd.trace[k].step << ',' << fmt(fwd.trace[k].h) << ',';
      if (k < rev.trace.size()) {
        csv << rev.trace[k].step << ',' << fmt(rev.trace[k].h);
      } else {
        csv << ',';
      }
      csv << '\n';
    }

    per_run.push_back({{"run", r},
                       {"seed", run_seed},
                       {"forward_initial_h", fwd.trace.front().h},
                       {"forward_final_h", final_h},
                       {"maxwell_reference_h", reference},
                       {"reversed_initial_h", rev.trace.front().h},
                       {"reversed_final_h", rev.trace.back().h},
                       {"forward_non_increasing", ft.endpoints_ok},
                       {"forward_fluctuation_tau", ft.tau},
                       {"forward_large_increases", ft.violations},
                       {"reversed_non_decreasing", rt.endpoints_ok},
                       {"reversed_large_decreases", rt.violations},
                       {"mirror_max_error", mirror_err},
                       {"restore_max_error", restore_err}});
  }

  const auto count_detail = [&](std::uint64_t ok) {
    return std::to_string(ok) + "/" + std::to_string(runs) + " runs";
  };
  std::vector<CheckResult> checks{
      {"forward H(final) <= H(initial)", forward_ok == runs, count_detail(forward_ok)},
      {"forward final H within 0.05 of Maxwell reference", equilibrium_ok == runs,
       count_detail(equilibrium_ok)},
      {"reversed H(final) >= H(initial)", reverse_ok == runs, count_detail(reverse_ok)},
      {"reversed trace mirrors forward within 1e-9", mirror_ok == runs, count_detail(mirror_ok)},
      {"replay restores negated initial state within 1e-6", restore_ok == runs,
       count_detail(restore_ok)},
  };
  return finish(cfg, csv.str(), Json{{"runs", per_run}}, std::move(checks));
}

RunResult run_frontier(const RunConfig& cfg) {
  const std::uint64_t seeds = cfg.resolved_trials();
  GrowthParams params;
  params.sites = cfg.frontier_sites;
  params.attempts = cfg.frontier_attempts;
  params.max_span = cfg.frontier_max_span;
  params.medium = cfg.medium;
  params.reinforcement = cfg.reinforcement;

  std::string grid_csv;
  Json per_seed = Json::array();
  Json first_boxes = Json::array();
  std::uint64_t rougher = 0;
  for (std::uint64_t k = 0; k < seeds; ++k) {
    RandomSource rng(derive_seed(cfg.seed, k));
    const auto small = grow_many_small(params, rng);
    const CommitmentMap small_map = track(cfg.frontier_sites, small);
    const auto delivered = static_cast<std::int64_t>(small_map.transactions_applied());
    const Transaction span =
        spanning_transaction(cfg.frontier_sites, std::max<std::int64_t>(delivered, 1), cfg.medium,
                             cfg.reinforcement, rng);
    const CommitmentMap span_map = track(cfg.frontier_sites, std::span<const Transaction>(&span, 1));

    const Roughness rs = roughness(small_map.profile());
    const Roughness rl = roughness(span_map.profile());
    rougher += rs.width > rl.width ? 1 : 0;

    if (k == 0) {
      std::ostringstream os;
      write_cell_grid_csv(os, small_map);
      grid_csv = os.str();
      for (const auto& b : scale_profile(small_map, cfg.box_scales)) {
        first_boxes.push_back({{"scale", b.scale}, {"boxes", b.boxes}});
      }
    }
    per_seed.push_back({{"seed_index", k},
                        {"transactions", delivered},
                        {"many_small_width", rs.width},
                        {"many_small_finger_max", rs.finger_max},
                        {"spanning_width", rl.width},
                        {"spanning_finger_max", rl.finger_max}});
  }

  // Reference flat front on the same number of sites.
  CommitmentMap flat(cfg.frontier_sites, 8);
  for (std::int64_t t = 0; t < 5; ++t) {
    flat.commit_row(t);
  }
  const auto flat_boxes = scale_profile(flat, cfg.box_scales);
  bool flat_ok = true;
  Json flat_json = Json::array();
  for (const auto& b : flat_boxes) {
    const auto expected = static_cast<std::uint64_t>((cfg.frontier_sites + b.scale - 1) / b.scale);
    flat_ok = flat_ok && b.boxes == expected;
    flat_json.push_back({{"scale", b.scale}, {"boxes", b.boxes}, {"expected", expected}});
  }
  const bool floor_ok = !flat_boxes.empty() && flat_boxes.back().scale == 1 &&
                        std::all_of(flat_boxes.begin(), flat_boxes.end(),
                                    [](const BoxCount& b) { return b.scale >= 1; });

  const std::uint64_t needed = (seeds * 9 + 9) / 10;  // 90%, e.g. 18 of 20
  std::vector<CheckResult> checks{
      {"flat front box counts equal sites/scale", flat_ok, flat_ok ? "exact" : "mismatch"},
      {"scale table stops at one cell", floor_ok, "smallest scale " +
                                                     std::to_string(flat_boxes.back().scale)},
      {"many small transactions rougher than one spanning", rougher >= needed,
       std::to_string(rougher) + "/" + std::to_string(seeds) + " seeds (need " +
           std::to_string(needed) + ")"},
  };

  Json results;
  results["seeds"] = per_seed;
  results["box_counts"] = first_boxes;
  results["flat_front_box_counts"] = flat_json;
  results["rougher_seeds"] = rougher;
  return finish(cfg, grid_csv, std::move(results), std::move(checks));
}

} // namespace

RunResult run_experiment(const RunConfig& cfg) {
  validate(cfg);
  switch (cfg.experiment) {
    case Experiment::Born: return run_born(cfg);
    case Experiment::Sites: return run_sites(cfg);
    case Experiment::Zeno: return run_zeno(cfg);
    case Experiment::HTheorem: return run_htheorem(cfg);
    case Experiment::Frontier: return run_frontier(cfg);
  }
  throw std::logic_error("unhandled experiment");
}

void write_outputs(const RunResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : result.files) {
    if (std::filesystem::path(name).has_parent_path()) {
      throw std::invalid_argument("output name '" + name + "' must be a plain file name");
    }
    std::ofstream os(dir / name, std::ios::binary | std::ios::trunc);
    if (!os) {
      throw std::runtime_error("cannot write " + (dir / name).string());
    }
    os << content;
  }
}

} // namespace tisim
