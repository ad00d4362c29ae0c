#include "taillab/suites.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace taillab {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse " + what + " from '" + s + "'");
  }
}

Eigen::ArrayXd parse_list(const std::string& s, const std::string& what) {
  auto parts = split(s, ';');
  Eigen::ArrayXd v(static_cast<Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    v[static_cast<Index>(i)] = parse_double(parts[i], what);
  }
  return v;
}

FiniteSeq seq_from_json(const json& j) {
  Index start = j.value("start", Index{0});
  std::vector<double> vals = j.at("values").get<std::vector<double>>();
  return FiniteSeq(start,
                   Eigen::Map<const Eigen::ArrayXd>(vals.data(), vals.size()));
}

SpectralModel model_from_json(const json& j) {
  std::string name = j.at("name").get<std::string>();
  double alpha = j.at("alpha").get<double>();
  if (name == "iid") return SpectralModel::iid(alpha);
  if (name == "geometric") return SpectralModel::geometric(alpha, j.at("rho").get<double>());
  if (name == "ma") {
    std::vector<double> c = j.at("coeffs").get<std::vector<double>>();
    FiniteSeq coeffs(0, Eigen::Map<const Eigen::ArrayXd>(c.data(), c.size()));
    return SpectralModel::moving_average(alpha, coeffs, j.value("p", 1.0));
  }
  if (name == "deterministic") {
    return SpectralModel::deterministic(alpha, seq_from_json(j.at("path")));
  }
  if (name == "empirical") {
    std::vector<WeightedPath> table;
    for (const auto& p : j.at("paths")) {
      table.push_back({seq_from_json(p), p.at("weight").get<double>()});
    }
    return SpectralModel::empirical(alpha, std::move(table));
  }
  throw std::invalid_argument("unknown model name '" + name + "'");
}

// -log P(zeta <= y) estimated from simulated M3 paths over the levels' window.
Estimate empirical_m3_log_survival(const M3Config& cfg, const FiniteSeq& levels,
                                   std::uint64_t n_paths, unsigned lanes,
                                   std::uint64_t seed) {
  Estimate p = mc_mean(n_paths, lanes, seed, [&](Rng& rng) {
    FiniteSeq zeta = simulate_m3(cfg, rng).path;
    for (Index i = 0; i < levels.size(); ++i) {
      double y = levels.values()[i];
      if (std::isinf(y)) continue;
      if (zeta[levels.start() + i] > y) return 0.0;
    }
    return 1.0;
  });
  if (p.value <= 0.0) {
    throw std::runtime_error("no non-exceedances observed; raise n");
  }
  // Delta method for -log p.
  return {-std::log(p.value), p.stderr_ / p.value, p.n_samples, p.seed};
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "time-change",  "extremal-index", "q-identities", "cluster-index",
      "log-alpha1",   "maxstable",      "clusterlab"};
  return names;
}

SpectralModel parse_model(const std::string& spec) {
  if (spec.empty()) throw std::invalid_argument("empty model spec");
  if (spec[0] == '@') {
    std::ifstream in(spec.substr(1));
    if (!in) throw std::invalid_argument("cannot open model file " + spec.substr(1));
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw std::invalid_argument("bad model json: " + std::string(e.what()));
    }
    return model_from_json(j);
  }

  auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  std::map<std::string, std::string> kv;
  if (colon != std::string::npos) {
    for (const auto& item : split(spec.substr(colon + 1), ',')) {
      if (item.empty()) continue;
      auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw std::invalid_argument("model parameter '" + item + "' is not key=value");
      }
      kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  auto take = [&kv](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("missing model parameter " + key);
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto take_or = [&kv](const std::string& key, const std::string& dflt) {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto done = [&kv, &spec] {
    if (!kv.empty()) {
      throw std::invalid_argument("unknown model parameter '" + kv.begin()->first +
                                  "' in '" + spec + "'");
    }
  };

  double alpha = parse_double(take("alpha"), "alpha");
  if (name == "iid") {
    done();
    return SpectralModel::iid(alpha);
  }
  if (name == "geometric") {
    double rho = parse_double(take("rho"), "rho");
    done();
    return SpectralModel::geometric(alpha, rho);
  }
  if (name == "ma") {
    Eigen::ArrayXd c = parse_list(take("coeffs"), "coeffs");
    double p = parse_double(take_or("p", "1"), "p");
    done();
    return SpectralModel::moving_average(alpha, FiniteSeq(0, c), p);
  }
  if (name == "deterministic") {
    Eigen::ArrayXd v = parse_list(take("path"), "path");
    Index start = static_cast<Index>(parse_double(take_or("start", "0"), "start"));
    done();
    return SpectralModel::deterministic(alpha, FiniteSeq(start, v));
  }
  throw std::invalid_argument("unknown model '" + name +
                              "' (try iid, ma, geometric, deterministic, or @file)");
}

SpectralModel load_model(const std::string& spec, unsigned lanes,
                         std::uint64_t seed) {
  SpectralModel m = parse_model(spec);
  if (m.kind() == SpectralModel::Kind::Deterministic ||
      m.kind() == SpectralModel::Kind::Empirical) {
    certify_time_change(m, 20'000, lanes, derive_seed(seed, 19));
  }
  return m;
}

CheckRow row_from_pair(const std::string& suite, const std::string& check,
                       const Estimate& a, const Estimate& b, double tol) {
  CheckRow row;
  row.suite = suite;
  row.check = check;
  row.side_a = a.value;
  row.side_b = b.value;
  row.stderr_a = a.stderr_;
  row.stderr_b = b.stderr_;
  row.sigmas = discrepancy_sigmas(a, b);
  row.pass = row.sigmas <= tol;
  return row;
}

std::vector<CheckRow> rows_from_report(const std::string& suite,
                                       const IdentityReport& rep) {
  std::vector<CheckRow> rows;
  for (const auto& p : rep.pairs) {
    CheckRow row;
    row.suite = suite;
    row.check = rep.name + ":" + rep.sides[p.a].label + "|" + rep.sides[p.b].label;
    row.side_a = rep.sides[p.a].est.value;
    row.side_b = rep.sides[p.b].est.value;
    row.stderr_a = rep.sides[p.a].est.stderr_;
    row.stderr_b = rep.sides[p.b].est.stderr_;
    row.sigmas = rep.pair_sigmas(p);
    row.pass = row.sigmas <= rep.tol;
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::vector<CheckRow> suite_time_change(const SpectralModel& model,
                                        ExperimentConfig& cfg) {
  std::vector<CheckRow> rows;
  const Functional battery[] = {Functional::one(), Functional::sup(),
                                Functional::count_exceed(1.0)};
  int cell = 0;
  for (const auto& h : battery) {
    for (Index k : {-2, -1, 0, 1, 2}) {
      for (double t : {0.5, 1.0, 2.0}) {
        auto rep = check_time_change(model, h, k, t, cfg.n, cfg.lanes,
                                     derive_seed(cfg.seed, 2, cell++), cfg.tol);
        std::ostringstream name;
        name << "tcf[" << h.name() << ",k=" << k << ",t=" << t << "]";
        CheckRow row{"time-change", name.str(),       rep.lhs.value,
                     rep.rhs.value, rep.lhs.stderr_,  rep.rhs.stderr_,
                     rep.sigmas_y,  rep.sigmas_y <= cfg.tol};
        rows.push_back(row);
        if (rep.theta_lhs) {
          CheckRow trow{"time-change",          name.str() + ":theta-form",
                        rep.theta_lhs->value,   rep.theta_rhs->value,
                        rep.theta_lhs->stderr_, rep.theta_rhs->stderr_,
                        rep.sigmas_theta,       rep.sigmas_theta <= cfg.tol};
          rows.push_back(trow);
        }
      }
    }
  }
  return rows;
}

std::vector<CheckRow> suite_extremal_index(const SpectralModel& model,
                                           ExperimentConfig& cfg) {
  auto rep = theta_candidate_hexagon(model, cfg.n, cfg.lanes,
                                     derive_seed(cfg.seed, 3), cfg.tol);
  // Compare every method against the first side (the exact value when the
  // model has one) rather than emitting all pairs.
  std::vector<CheckRow> rows;
  for (std::size_t i = 1; i < rep.sides.size(); ++i) {
    rows.push_back(row_from_pair(
        "extremal-index", "theta:" + rep.sides[i].label + "|" + rep.sides[0].label,
        rep.sides[i].est, rep.sides[0].est, cfg.tol));
  }
  return rows;
}

std::vector<CheckRow> suite_q_identities(const SpectralModel& model,
                                         ExperimentConfig& cfg) {
  std::vector<CheckRow> rows;
  double a = model.alpha();
  const Functional homogeneous[] = {
      Functional::sup_pow(a), Functional::pnorm_pow(1.0, a),
      Functional::pos_pow_of(Functional::sum(), a),
      Functional::pos_pow_of(Functional::running_max_sum(), a)};
  int k = 0;
  for (const auto& h : homogeneous) {
    auto rep = check_Q_theta_identity(h, model, cfg.n, cfg.lanes,
                                      derive_seed(cfg.seed, 4, k), cfg.tol);
    auto r2 = rows_from_report("q-identities", rep);
    rows.insert(rows.end(), r2.begin(), r2.end());
    auto fwd = check_forward_identity(h, model, cfg.n, cfg.lanes,
                                      derive_seed(cfg.seed, 5, k), cfg.tol);
    auto r3 = rows_from_report("q-identities", fwd);
    rows.insert(rows.end(), r3.begin(), r3.end());
    ++k;
  }
  auto one = check_Q_theta_identity(Functional::one(), model, cfg.n, cfg.lanes,
                                    derive_seed(cfg.seed, 6), cfg.tol);
  auto r1 = rows_from_report("q-identities", one);
  rows.insert(rows.end(), r1.begin(), r1.end());
  auto qsum = qsum_alpha_identity(model, cfg.n, cfg.lanes,
                                  derive_seed(cfg.seed, 7), cfg.tol);
  auto r4 = rows_from_report("q-identities", qsum);
  rows.insert(rows.end(), r4.begin(), r4.end());
  return rows;
}

std::vector<CheckRow> suite_cluster_index(const SpectralModel& model,
                                          ExperimentConfig& cfg) {
  std::vector<CheckRow> rows;
  const Functional bases[] = {Functional::sum(), Functional::running_max_sum()};
  int k = 0;
  for (const auto& base : bases) {
    auto curve = cluster_index(base, model, 30, cfg.n, cfg.lanes,
                               derive_seed(cfg.seed, 8, k++), cfg.tol);
    CheckRow row{"cluster-index",
                 "slope[" + base.name() + "]:tail_slope|q_limit",
                 curve.tail_slope.value,
                 curve.limit.value,
                 curve.tail_slope.stderr_,
                 curve.limit.stderr_,
                 curve.sigmas,
                 curve.pass};
    rows.push_back(row);
  }
  return rows;
}

std::vector<CheckRow> suite_log_alpha1(const SpectralModel& model,
                                       ExperimentConfig& cfg) {
  if (model.alpha() != 1.0 || !model.nonnegative()) {
    cfg.notes.push_back("log-alpha1 skipped: needs a nonnegative model with alpha=1");
    return {};
  }
  auto rep = log_identities_alpha1(model, cfg.n, cfg.lanes,
                                   derive_seed(cfg.seed, 9), cfg.tol);
  return rows_from_report("log-alpha1", rep);
}

std::vector<CheckRow> suite_maxstable(const SpectralModel& model,
                                      ExperimentConfig& cfg) {
  if (!model.nonnegative()) {
    cfg.notes.push_back("maxstable skipped: needs a nonnegative model");
    return {};
  }
  std::vector<CheckRow> rows;
  double alpha = model.alpha();

  // Marginal law at coordinate 0.
  M3Config marg = make_m3_config(model, 0, 0);
  std::uint64_t n_paths = std::max<std::uint64_t>(cfg.n / 2, 5'000);
  std::vector<double> sample;
  sample.reserve(n_paths);
  Rng rng = lane_rng(derive_seed(cfg.seed, 10), 0);
  for (std::uint64_t i = 0; i < n_paths; ++i) {
    sample.push_back(simulate_m3(marg, rng).path[0]);
  }
  double d = ks_statistic(std::move(sample),
                          [alpha](double y) { return std::exp(-std::pow(y, -alpha)); });
  double crit = ks_critical(n_paths);
  CheckRow ks;
  ks.suite = "maxstable";
  ks.check = "marginal_frechet_ks";
  ks.side_a = d;
  ks.side_b = crit;
  ks.sigmas = crit > 0.0 ? 3.0 * d / crit : 0.0;
  ks.pass = d <= crit;
  rows.push_back(ks);

  // Two-coordinate fdd against empirical non-exceedance.
  M3Config pair_cfg = make_m3_config(model, 0, 1);
  int g = 0;
  for (auto [y0, y1] : {std::pair{1.0, 1.0}, std::pair{1.5, 2.0}}) {
    FiniteSeq levels(0, {y0, y1});
    Estimate fdd = fdd_log_survival(levels, model, cfg.n, cfg.lanes,
                                    derive_seed(cfg.seed, 11, g));
    Estimate emp = empirical_m3_log_survival(pair_cfg, levels, cfg.n / 2, cfg.lanes,
                                             derive_seed(cfg.seed, 12, g));
    std::ostringstream name;
    name << "fdd[y=(" << y0 << "," << y1 << ")]:formula|simulated";
    rows.push_back(row_from_pair("maxstable", name.str(), fdd, emp, cfg.tol));
    ++g;
  }

  // Block maxima reproduce the extremal index.
  Index m = 128;
  M3Config block = make_m3_config(model, 1, m);
  double theta = block.theta;
  std::uint64_t n_blocks = std::max<std::uint64_t>(cfg.n / 4, 4'000);
  for (double x : {1.0, 2.0}) {
    double level = std::pow(static_cast<double>(m), 1.0 / alpha) * x;
    Estimate p = mc_mean(n_blocks, cfg.lanes, derive_seed(cfg.seed, 13), [&](Rng& r) {
      return supnorm(simulate_m3(block, r).path) <= level ? 1.0 : 0.0;
    });
    Estimate nlog{-std::log(p.value), p.stderr_ / p.value, p.n_samples, p.seed};
    std::ostringstream name;
    name << "block_max_extremal_index[x=" << x << "]";
    rows.push_back(row_from_pair(
        "maxstable", name.str(), nlog,
        Estimate::exact(theta * std::pow(x, -alpha)), cfg.tol));
  }
  return rows;
}

std::vector<CheckRow> suite_clusterlab(const SpectralModel& model,
                                       ExperimentConfig& cfg) {
  if (!model.has_series()) {
    cfg.notes.push_back("clusterlab skipped: " + model.name() +
                        " has no canonical series");
    return {};
  }
  std::vector<CheckRow> rows;
  double alpha = model.alpha();
  Index len = static_cast<Index>(std::clamp<std::uint64_t>(cfg.n * 20, 200'000,
                                                           4'000'000));
  TimeSeries series = simulate_series(model, len, derive_seed(cfg.seed, 14));
  BlockingScheme scheme = make_blocking_scheme(series);
  {
    std::ostringstream note;
    note << "clusterlab scheme: n=" << scheme.n << " r_n=" << scheme.r_n
         << " c_n=" << scheme.c_n << " k_n=" << scheme.k_n
         << " P(|X|>c_n)=" << scheme.marginal_exceed_prob
         << " monitor=" << scheme.monitor;
    cfg.notes.push_back(note.str());
  }

  CheckRow monitor;
  monitor.suite = "clusterlab";
  monitor.check = "scheme_monitor[r_n*P(|X|>c_n)<0.05]";
  monitor.side_a = scheme.monitor;
  monitor.side_b = 0.05;
  monitor.sigmas = 3.0 * scheme.monitor / 0.05;
  monitor.pass = scheme.monitor < 0.05;
  rows.push_back(monitor);

  double theta = model.exact_theta().value_or(
      theta_candidate(model, ThetaMethod::InfargmaxProb, cfg.n, cfg.lanes,
                      derive_seed(cfg.seed, 15))
          .value);
  for (double u : scheme.u_grid) {
    auto h = Functional::sup_threshold(u);
    Estimate emp = empirical_cluster_measure(series, scheme, h,
                                             derive_seed(cfg.seed, 16));
    auto ns = nu_star(h, model, cfg.n, cfg.lanes, derive_seed(cfg.seed, 17));
    std::ostringstream name;
    name << "cluster_measure[u=" << u << "]:empirical|nu_star";
    rows.push_back(row_from_pair("clusterlab", name.str(), emp, ns.q_anchored,
                                 cfg.tol));
    std::ostringstream n2;
    n2 << "cluster_measure[u=" << u << "]:empirical|theta*u^-alpha";
    rows.push_back(row_from_pair("clusterlab", n2.str(), emp,
                                 Estimate::exact(theta * std::pow(u, -alpha)),
                                 cfg.tol));
    std::ostringstream n3;
    n3 << "nu_star_two_forms[u=" << u << "]";
    rows.push_back(row_from_pair("clusterlab", n3.str(), ns.q_anchored,
                                 ns.infargmax_anchored, cfg.tol));
  }

  // Probes look only near the anchor: on the limit law they coincide with
  // their global versions (every built-in Q is below 0.4 past +-8), while on
  // finite blocks they ignore unrelated exceedance clusters elsewhere in the
  // block.
  std::vector<Functional> probes = {
      Functional::custom("count_near_anchor>0.4",
                         [](const FiniteSeq& q) {
                           if (q.is_zero()) return 0.0;
                           Index a = infargmax(q).index;
                           double c = 0.0;
                           for (Index j = a - 8; j <= a + 8; ++j) {
                             if (std::abs(q[j]) > 0.4) c += 1.0;
                           }
                           return c;
                         },
                         {.shift_invariant = true}),
      Functional::custom("coord1_in_(0.4,0.6)",
                         [](const FiniteSeq& q) {
                           if (q.is_zero()) return 0.0;
                           double v = std::abs(q[infargmax(q).index + 1]);
                           return v > 0.4 && v < 0.6 ? 1.0 : 0.0;
                         },
                         {.shift_invariant = true})};
  try {
    auto rep = normalized_cluster_law(series, scheme, 1.0, probes, model, cfg.n,
                                      cfg.lanes, derive_seed(cfg.seed, 18),
                                      cfg.tol);
    auto r = rows_from_report("clusterlab", rep);
    rows.insert(rows.end(), r.begin(), r.end());
  } catch (const std::runtime_error& e) {
    cfg.notes.push_back(std::string("normalized_cluster_law skipped: ") + e.what());
  }
  return rows;
}

}  // namespace

std::vector<CheckRow> run_suite(const std::string& suite, const SpectralModel& model,
                                ExperimentConfig& cfg) {
  if (suite == "all") {
    std::vector<CheckRow> rows;
    for (const auto& s : suite_names()) {
      auto r = run_suite(s, model, cfg);
      rows.insert(rows.end(), r.begin(), r.end());
    }
    return rows;
  }
  if (suite == "time-change") return suite_time_change(model, cfg);
  if (suite == "extremal-index") return suite_extremal_index(model, cfg);
  if (suite == "q-identities") return suite_q_identities(model, cfg);
  if (suite == "cluster-index") return suite_cluster_index(model, cfg);
  if (suite == "log-alpha1") return suite_log_alpha1(model, cfg);
  if (suite == "maxstable") return suite_maxstable(model, cfg);
  if (suite == "clusterlab") return suite_clusterlab(model, cfg);
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

std::string render_csv(const std::vector<CheckRow>& rows,
                       const ExperimentConfig* cfg) {
  std::ostringstream os;
  if (cfg) {
    os << "# " << kVersion << " model=" << cfg->model_spec
       << " suite=" << cfg->suite << " n=" << cfg->n << " seed=" << cfg->seed
       << " lanes=" << cfg->lanes << " tol=" << fmt(cfg->tol) << "\n";
  }
  os << "suite,check,side_a,side_b,stderr_a,stderr_b,sigmas,pass\n";
  for (const auto& r : rows) {
    os << r.suite << "," << r.check << "," << fmt(r.side_a) << "," << fmt(r.side_b)
       << "," << fmt(r.stderr_a) << "," << fmt(r.stderr_b) << "," << fmt(r.sigmas)
       << "," << (r.pass ? "true" : "false") << "\n";
  }
  return os.str();
}

std::string render_json(const ExperimentConfig& cfg,
                        const std::vector<CheckRow>& rows) {
  json j;
  j["version"] = kVersion;
  j["config"] = {{"model", cfg.model_spec}, {"suite", cfg.suite},
                 {"n", cfg.n},             {"seed", cfg.seed},
                 {"lanes", cfg.lanes},     {"tol", cfg.tol},
                 {"out", cfg.out},         {"format", cfg.format}};
  j["notes"] = cfg.notes;
  bool all_pass = true;
  json checks = json::array();
  for (const auto& r : rows) {
    checks.push_back({{"suite", r.suite},
                      {"check", r.check},
                      {"side_a", r.side_a},
                      {"side_b", r.side_b},
                      {"stderr_a", r.stderr_a},
                      {"stderr_b", r.stderr_b},
                      {"sigmas", r.sigmas},
                      {"pass", r.pass}});
    all_pass = all_pass && r.pass;
  }
  j["checks"] = checks;
  j["all_pass"] = all_pass;
  return j.dump(2) + "\n";
}

double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double f = cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

double ks_critical(std::size_t n, double level) {
  // Kolmogorov asymptotic: P(D_n > K/sqrt(n)) ~ 2 exp(-2K^2) at the far tail.
  double k = std::sqrt(-0.5 * std::log(level / 2.0));
  return k / std::sqrt(static_cast<double>(n));
}

}  // namespace taillab
