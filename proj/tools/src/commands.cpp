#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "boxgauge/classical.hpp"
#include "boxgauge/errors.hpp"
#include "boxgauge/export.hpp"
#include "boxgauge/opanalysis.hpp"
#include "boxgauge/qbasis.hpp"
#include "boxgauge/qline.hpp"
#include "boxgauge/qprop.hpp"

namespace boxgauge::cli {

namespace {

using nlohmann::json;
using numeric::kPi;

constexpr double kResonantOmega = 1.5 * kPi * kPi;  // (E2 - E1) / hbar in natural units

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::filesystem::path sibling(const std::filesystem::path& out, const std::string& tag) {
  auto p = out;
  p.replace_filename(out.stem().string() + "." + tag + out.extension().string());
  return p;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json envelope(const Params& p, const CommonOptions& common) {
  return json{{"command", p.command()}, {"params", p.all()}, {"seed", common.seed}};
}

std::vector<double> linspace(double a, double b, long long n) {
  if (n < 1) throw InvalidArgument("sample count must be at least 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = b;
    return out;
  }
  for (long long i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = b;
  return out;
}

std::size_t positive_count(const Params& p, const std::string& key) {
  const auto n = p.integer(key);
  if (n < 1) throw RangeError("parameter '" + key + "' must be positive");
  return static_cast<std::size_t>(n);
}

std::vector<ParamSpec> join(std::vector<ParamSpec> a, const std::vector<ParamSpec>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

json cosine_field(double f0, double omega) { return json{{"kind", "cosine"}, {"f0", f0}, {"omega", omega}}; }
json constant_field(double f0) { return json{{"kind", "constant"}, {"f0", f0}}; }

classical::Gauge parse_gauge(const std::string& name) {
  if (name == "zero" || name == "0") return classical::Gauge::Zero;
  if (name == "chi") return classical::Gauge::Chi;
  throw InvalidArgument("gauge must be 'zero' or 'chi', got '" + name + "'");
}

// ---------------------------------------------------------------- classical

std::vector<ParamSpec> classical_params() {
  return join(join({{"x0", 0.3, "initial position in [0, L]"},
                    {"v0", 1.0, "initial velocity"},
                    {"t0", 0.0, "initial time"}},
                   field_params(cosine_field(20.0, 2.0 * kPi))),
              consts_params());
}

CommandResult classical_sim(const Params& p, const CommonOptions& common) {
  const auto consts = p.consts();
  const auto field = p.field();
  const classical::ClassicalState start{p.real("x0"), p.real("v0"), p.real("t0"), parse_gauge(p.text("gauge"))};
  const double t_end = p.real("t_end");
  const auto times = linspace(start.t, t_end, p.integer("samples"));
  const auto run = classical::simulate_box(start, field, consts, t_end, times);

  CommandResult r;
  const auto& last = run.trajectory.back();
  r.summary = "classical-sim reflections=" + std::to_string(run.events.size()) + " x_end=" + fmt(last.x) +
              " v_end=" + fmt(last.v);
  if (!common.out) return r;
  if (common.format == Format::Csv) {
    r.artifacts.push_back({*common.out, io::trajectory_csv(run.trajectory, field, consts)});
    r.artifacts.push_back({sibling(*common.out, "events"), io::events_csv(run.events)});
  } else {
    json j = envelope(p, common);
    json traj = json::array();
    for (const auto& s : run.trajectory) {
      auto zero = s;
      zero.gauge = classical::Gauge::Zero;
      auto chi = s;
      chi.gauge = classical::Gauge::Chi;
      traj.push_back({{"t", s.t},
                      {"x", s.x},
                      {"v", s.v},
                      {"p0", classical::canonical_momentum(zero, field, consts)},
                      {"pchi", classical::canonical_momentum(chi, field, consts)}});
    }
    json events = json::array();
    for (const auto& e : run.events) {
      events.push_back({{"t_hit", e.t_hit},
                        {"wall", e.wall == classical::Wall::Left ? "left" : "right"},
                        {"v_in", e.v_in},
                        {"v_out", e.v_out}});
    }
    j["trajectory"] = std::move(traj);
    j["events"] = std::move(events);
    r.artifacts.push_back({*common.out, dump(j)});
  }
  return r;
}

CommandResult classical_lyapunov(const Params& p, const CommonOptions& common) {
  const auto consts = p.consts();
  const auto field = p.field();
  const classical::ClassicalState start{p.real("x0"), p.real("v0"), p.real("t0")};
  const double horizon = p.real("horizon");
  const double interval = p.real("renorm_interval");
  const double d0 = p.real("delta0");
  const double lambda = classical::lyapunov_estimate(start, field, consts, horizon, interval, {d0});
  const double lambda_half = classical::lyapunov_estimate(start, field, consts, horizon, interval, {0.5 * d0});

  CommandResult r;
  r.summary = "classical-lyapunov lambda=" + fmt(lambda) + " lambda_half_delta=" + fmt(lambda_half);
  if (!common.out) return r;
  if (common.format == Format::Csv) {
    r.artifacts.push_back({*common.out, io::table_csv({"delta0", "lambda"}, {{d0, lambda}, {0.5 * d0, lambda_half}})});
  } else {
    json j = envelope(p, common);
    j["lambda"] = lambda;
    j["lambda_half_delta"] = lambda_half;
    r.artifacts.push_back({*common.out, dump(j)});
  }
  return r;
}

// -------------------------------------------------------------------- qbox

std::vector<ParamSpec> qbox_params(double dt) {
  return join(join({{"N", 32, "truncation order"},
                    {"dt", dt, "time step"},
                    {"scheme", "magnus-midpoint", "magnus-midpoint | crank-nicolson"},
                    {"initial", "ground", "\"ground\", a mode index n, or {\"coeffs\": [[re, im], ...]}"}},
                   field_params(cosine_field(5.0, kResonantOmega))),
              consts_params());
}

qbasis::SpectralState initial_state(const json& spec, int N, const model::PhysicalConstants& consts) {
  if (spec.is_string() && spec.get<std::string>() == "ground") return qbasis::SpectralState::basis_state(N, 1, consts);
  if (spec.is_number_integer()) {
    const int n = spec.get<int>();
    if (n < 1 || n > N) throw RangeError("initial mode index outside 1..N");
    return qbasis::SpectralState::basis_state(N, n, consts);
  }
  if (spec.is_object()) {
    for (const auto& [key, _] : spec.items()) {
      if (key != "coeffs") throw ConfigurationError("unknown key '" + key + "' in initial state");
    }
    const auto& c = spec.at("coeffs");
    if (!c.is_array() || c.size() != static_cast<std::size_t>(N)) {
      throw ConfigurationError("initial.coeffs must hold N entries");
    }
    qbasis::SpectralState s{numeric::CVector::Zero(N), consts};
    for (int i = 0; i < N; ++i) {
      const auto& e = c.at(static_cast<std::size_t>(i));
      s.coeffs[i] = e.is_array() ? numeric::Complex(e.at(0).get<double>(), e.at(1).get<double>())
                                 : numeric::Complex(e.get<double>(), 0.0);
    }
    const double n = s.coeffs.norm();
    if (n == 0.0) throw InvalidArgument("initial state has zero norm");
    s.coeffs /= n;
    return s;
  }
  throw ConfigurationError("initial must be \"ground\", a mode index, or {\"coeffs\": [...]}");
}

qprop::PropagationConfig propagation_config(const Params& p) {
  qprop::PropagationConfig cfg;
  cfg.N = static_cast<int>(p.integer("N"));
  cfg.dt = p.real("dt");
  cfg.scheme = qprop::scheme_from_string(p.text("scheme"));
  cfg.validate();
  return cfg;
}

CommandResult qbox_propagate(const Params& p, const CommonOptions& common) {
  const auto consts = p.consts();
  const auto field = p.field();
  auto cfg = propagation_config(p);
  cfg.include_F2_phase = p.flag("include_F2_phase");
  const auto gauge = parse_gauge(p.text("gauge"));
  const auto builder = gauge == classical::Gauge::Zero
                           ? qprop::h0_builder(cfg.N, field, consts)
                           : qprop::hchi_builder(cfg.N, field, consts, cfg.include_F2_phase);
  const auto times = linspace(p.real("t0"), p.real("t1"), p.integer("samples"));
  auto state = initial_state(p.raw("initial"), cfg.N, consts);
  const double n0 = state.norm_sq();

  std::vector<std::vector<double>> rows;
  json samples = json::array();
  double t = p.real("t0");
  double drift = 0.0;
  for (const double ts : times) {
    state = qprop::propagate(state, builder, t, ts, cfg);
    t = ts;
    const Eigen::VectorXd pops = state.populations();
    drift = std::max(drift, std::abs(state.norm_sq() - n0));
    std::vector<double> row{ts, state.norm_sq()};
    row.insert(row.end(), pops.data(), pops.data() + pops.size());
    rows.push_back(row);
    samples.push_back({{"t", ts}, {"norm", state.norm_sq()}, {"populations", std::vector<double>(pops.data(), pops.data() + pops.size())}});
  }

  CommandResult r;
  r.summary = "qbox-propagate norm_drift=" + fmt(drift) + " p1_end=" + fmt(rows.back()[2]);
  if (!common.out) return r;
  if (common.format == Format::Csv) {
    std::vector<std::string> header{"t", "norm"};
    for (int n = 1; n <= cfg.N; ++n) header.push_back("p" + std::to_string(n));
    r.artifacts.push_back({*common.out, io::table_csv(header, rows)});
  } else {
    json j = envelope(p, common);
    j["scheme"] = qprop::to_string(cfg.scheme);
    j["samples"] = std::move(samples);
    j["norm_drift"] = drift;
    r.artifacts.push_back({*common.out, dump(j)});
  }
  return r;
}

CommandResult qbox_gauge_residual(const Params& p, const CommonOptions& common) {
  const auto consts = p.consts();
  const auto field = p.field();
  const auto base = propagation_config(p);
  const double t1 = p.real("t1");

  std::vector<int> ladder{base.N};
  if (!p.raw("N_ladder").is_null()) {
    ladder = p.raw("N_ladder").get<std::vector<int>>();
    if (ladder.empty()) throw ConfigurationError("N_ladder must not be empty");
  }
  std::vector<std::vector<double>> rows;
  json runs = json::array();
  double last = 0.0;
  for (const int N : ladder) {
    auto cfg = base;
    cfg.N = N;
    const auto initial = initial_state(p.raw("initial"), N, consts);
    const auto res = qprop::gauge_equivalence(initial, field, consts, t1, cfg);
    rows.push_back({static_cast<double>(N), cfg.dt, t1, res.residual, res.norm_drift_zero, res.norm_drift_chi});
    runs.push_back({{"N", N},
                    {"residual", res.residual},
                    {"norm_drift_zero", res.norm_drift_zero},
                    {"norm_drift_chi", res.norm_drift_chi},
                    {"steps", res.steps}});
    last = res.residual;
  }

  CommandResult r;
  r.summary = "qbox-gauge-residual residual=" + fmt(last) + " N=" + std::to_string(ladder.back());
  if (!common.out) return r;
  if (common.format == Format::Csv) {
    r.artifacts.push_back(
        {*common.out, io::table_csv({"N", "dt", "t", "residual", "norm_drift_zero", "norm_drift_chi"}, rows)});
  } else {
    json j = envelope(p, common);
    j["scheme"] = qprop::to_string(base.scheme);
    j["runs"] = std::move(runs);
    r.artifacts.push_back({*common.out, dump(j)});
  }
  return r;
}

CommandResult qbox_naive_compare(const Params& p, const CommonOptions& common) {
  const auto consts = p.consts();
  const auto field = p.field();
  const auto cfg = propagation_config(p);
  const double t0 = p.real("t0");
  const double t1 = p.real("t1");
  const auto U = qprop::propagator_matrix(qprop::hchi_builder(cfg.N, field, consts, true), t0, t1, cfg, consts);
  const auto naive = qprop::naive_propagator_chi(t0, t1, cfg.N, field, consts);
  const double distance = qprop::operator_distance(U, naive.entries());
  const double defect_to = qprop::unitarity_defect(U);
  const double defect_naive = qprop::unitarity_defect(naive.entries());

  CommandResult r;
  r.summary = "qbox-naive-compare distance=" + fmt(distance) + " (naive propagator is INCORRECT)";
  if (!common.out) return r;
  if (common.format == Format::Csv) {
    std::ostringstream os;
    os << "propagator,unitarity_defect,distance_to_time_ordered\n";
    os << "time-ordered," << io::format_double(defect_to) << ",0\n";
    os << "naive-INCORRECT," << io::format_double(defect_naive) << ',' << io::format_double(distance) << '\n';
    r.artifacts.push_back({*common.out, os.str()});
  } else {
    json j = envelope(p, common);
    j["distance"] = distance;
    j["time_ordered"] = {{"unitarity_defect", defect_to}};
    j["naive"] = {{"label", "INCORRECT"}, {"unitarity_defect", defect_naive}};
    r.artifacts.push_back({*common.out, dump(j)});
  }
  return r;
}

// -------------------------------------------------------------------- qline

std::vector<ParamSpec> packet_params() {
  return {{"x0", 0.0, "packet centre"},
          {"p0", 0.0, "packet mean momentum"},
          {"sigma", 1.0, "position spread"},
          {"x_min", -40.0, "grid window start"},
          {"x_max", 40.0, "grid window end"},
          {"M", 1024, "grid points (power of two)"}};
}

qline::GridWavepacket packet_from(const Params& p, const model::PhysicalConstants& consts, double t) {
  const qline::Grid grid{p.real("x_min"), p.real("x_max"), positive_count(p, "M")};
  return qline::gaussian_packet(p.real("x0"), p.real("p0"), p.real("sigma"), grid, consts, t);
}

CommandResult qline_bch(const Params& p, const CommonOptions& common) {
  const auto consts = p.consts();
  const auto field = p.field();
  const auto packet = packet_from(p, consts, field.t0());
  const double tau = p.real("tau");
  const std::size_t steps = positive_count(p, "steps");
  const std::size_t levels = positive_count(p, "ladder");
  if (levels > 1 && (steps >> (levels - 1)) == 0) throw RangeError("steps too small for the requested ladder");

  std::vector<std::vector<double>> rows;
  json runs = json::array();
  double prev = std::nan("");
  double last_ratio = std::nan("");
  for (std::size_t k = levels; k-- > 0;) {
    const std::size_t s = steps >> k;
    const double res = qline::bch_check(packet, tau, field, consts, s);
    last_ratio = prev / res;
    rows.push_back({static_cast<double>(s), res, last_ratio});
    runs.push_back({{"steps", s}, {"residual", res}, {"ratio", std::isnan(last_ratio) ? json(nullptr) : json(last_ratio)}});
    prev = res;
  }

  CommandResult r;
  r.summary = "qline-bch residual=" + fmt(rows.back()[1]) + " ratio=" + fmt(last_ratio) + " steps=" +
              std::to_string(steps);
  if (!common.out) return r;
  if (common.format == Format::Csv) {
    r.artifacts.push_back({*common.out, io::table_csv({"steps", "residual", "ratio"}, rows)});
  } else {
    json j = envelope(p, common);
    j["runs"] = std::move(runs);
    r.artifacts.push_back({*common.out, dump(j)});
  }
  return r;
}

CommandResult qline_ehrenfest(const Params& p, const CommonOptions& common) {
  const auto consts = p.consts();
  const auto field = p.field();
  const double t0 = p.real("t0");
  const auto packet = packet_from(p, consts, t0);
  const auto times = linspace(t0, p.real("t_end"), p.integer("samples"));
  const auto samples = qline::ehrenfest_check(packet, times, field, consts, p.real("dt_max"));
  double worst = 0.0;
  for (const auto& s : samples) worst = std::max(worst, s.deviation);

  CommandResult r;
  r.summary = "qline-ehrenfest max_deviation=" + fmt(worst) + " samples=" + std::to_string(samples.size());
  if (!common.out) return r;
  if (common.format == Format::Csv) {
    r.artifacts.push_back({*common.out, io::moments_csv(samples)});
    std::vector<std::vector<double>> rows;
    for (const auto& s : samples) rows.push_back({s.t, s.mean_x, s.x_classical, s.deviation});
    r.artifacts.push_back({sibling(*common.out, "classical"),
                           io::table_csv({"t", "mean_x", "x_classical", "deviation"}, rows)});
    const auto final_packet =
        qline::split_step_H0(packet, t0, times.back(),
                             std::max<std::size_t>(1, static_cast<std::size_t>(
                                                          std::ceil((times.back() - t0) / p.real("dt_max")))),
                             field, consts);
    r.artifacts.push_back({sibling(*common.out, "packet"), io::packet_csv(final_packet)});
  } else {
    json j = envelope(p, common);
    json rows = json::array();
    for (const auto& s : samples) {
      rows.push_back({{"t", s.t},
                      {"mean_x", s.mean_x},
                      {"mean_p", s.mean_p},
                      {"var_x", s.var_x},
                      {"x_classical", s.x_classical},
                      {"deviation", s.deviation}});
    }
    j["samples"] = std::move(rows);
    j["max_deviation"] = worst;
    r.artifacts.push_back({*common.out, dump(j)});
  }
  return r;
}

// --------------------------------------------------------------- opanalysis

CommandResult op_bound_audit(const Params& p, const CommonOptions& common) {
  const auto consts = p.consts();
  const auto& families = p.raw("families");
  if (!families.is_array() || families.empty()) throw ConfigurationError("families must be a non-empty array");
  const auto trials = positive_count(p, "trials");
  const int N = static_cast<int>(positive_count(p, "N"));
  const double a0 = p.real("a0");

  std::vector<opanalysis::AuditReport> reports;
  std::size_t violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& d : families) {
    const auto A = opanalysis::BoundedCoefficient::from_json(d, consts);
    reports.push_back(opanalysis::bound_audit(A, a0, trials, N, common.seed, consts));
    violations += reports.back().violations;
    worst = std::min(worst, reports.back().worst_margin);
  }

  CommandResult r;
  r.summary = "op-bound-audit violations=" + std::to_string(violations) + " trials=" +
              std::to_string(trials * reports.size()) + " worst_margin=" + fmt(worst) +
              " seed=" + std::to_string(common.seed);
  if (!common.out) return r;
  if (common.format == Format::Csv) {
    std::ostringstream os;
    os << "family,a0,a,b,b0,trials,violations,worst_margin,seed\n";
    for (const auto& rep : reports) {
      os << rep.coefficient.at("family").get<std::string>() << ',' << io::format_double(rep.a0) << ','
         << io::format_double(rep.constants.a) << ',' << io::format_double(rep.constants.b) << ','
         << io::format_double(rep.constants.b0) << ',' << rep.trials << ',' << rep.violations << ','
         << io::format_double(rep.worst_margin) << ',' << rep.seed << '\n';
    }
    r.artifacts.push_back({*common.out, os.str()});
  } else {
    json j = envelope(p, common);
    json arr = json::array();
    for (const auto& rep : reports) arr.push_back(rep.to_json());
    j["reports"] = std::move(arr);
    j["violations"] = violations;
    r.artifacts.push_back({*common.out, dump(j)});
  }
  return r;
}

CommandResult op_defect(const Params& p, const CommonOptions& common) {
  const auto consts = p.consts();
  const auto A = opanalysis::BoundedCoefficient::from_json(p.raw("A"), consts);
  const auto sol = opanalysis::defect_solutions(A, consts);
  const double res_plus = opanalysis::defect_residual(A, +1, consts);
  const double res_minus = opanalysis::defect_residual(A, -1, consts);

  CommandResult r;
  r.summary = "op-defect n_plus=" + std::to_string(sol.n_plus) + " n_minus=" + std::to_string(sol.n_minus) +
              " residual=" + fmt(std::max(res_plus, res_minus));
  if (!common.out) return r;
  const auto n = static_cast<long long>(positive_count(p, "samples"));
  const double L = consts.box_length;
  if (common.format == Format::Csv) {
    std::vector<std::vector<double>> rows;
    for (long long i = 0; i < n; ++i) {
      const double x = L * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      rows.push_back({x, sol.log_abs2_plus(x), sol.log_abs2_minus(x)});
    }
    r.artifacts.push_back({*common.out, io::table_csv({"x", "log_abs2_plus", "log_abs2_minus"}, rows)});
  } else {
    json j = envelope(p, common);
    j["n_plus"] = sol.n_plus;
    j["n_minus"] = sol.n_minus;
    j["gamma_plus"] = {sol.gamma_plus.first, sol.gamma_plus.second};
    j["gamma_minus"] = {sol.gamma_minus.first, sol.gamma_minus.second};
    j["residual_plus"] = res_plus;
    j["residual_minus"] = res_minus;
    r.artifacts.push_back({*common.out, dump(j)});
  }
  return r;
}

CommandResult matrices_dump(const Params& p, const CommonOptions& common) {
  const auto consts = p.consts();
  const int N = static_cast<int>(positive_count(p, "N"));
  const auto op = p.text("op");
  const double theta = p.real("theta");
  numeric::CMatrix M;
  if (op == "T") {
    M = qbasis::matrix_T(N, consts).entries();
  } else if (op == "P") {
    M = qbasis::matrix_P(N, consts).entries();
  } else if (op == "x") {
    M = qbasis::matrix_x(N, consts).entries();
  } else if (op == "gauge") {
    M = qbasis::matrix_gauge_phase(N, theta, consts).entries();
  } else {
    throw InvalidArgument("op must be one of T, P, x, gauge");
  }

  CommandResult r;
  r.summary = "matrices-dump op=" + op + " N=" + std::to_string(N) +
              " hermiticity_residual=" + fmt(numeric::hermiticity_residual(M));
  if (!common.out) return r;
  if (common.format == Format::Csv) {
    r.artifacts.push_back({*common.out, io::matrix_csv(M)});
  } else {
    r.artifacts.push_back({*common.out, dump(io::matrix_json(M, op, theta))});
  }
  return r;
}

std::vector<Command> build_commands() {
  std::vector<Command> out;

  out.push_back({"classical-sim", "event-driven trajectory of the driven particle in the box",
                 join(classical_params(), {{"t_end", 10.0, "final time"},
                                           {"samples", 1001, "number of sample times"},
                                           {"gauge", "zero", "momentum column convention for the state (zero|chi)"}}),
                 classical_sim});

  out.push_back({"classical-lyapunov", "two-trajectory Lyapunov exponent estimate in the box",
                 join(classical_params(), {{"horizon", 2000.0, "integration time"},
                                           {"renorm_interval", 0.5, "time between renormalizations"},
                                           {"delta0", 1e-8, "initial separation"}}),
                 classical_lyapunov});

  out.push_back({"qbox-propagate", "time-ordered propagation in the truncated box basis",
                 join(qbox_params(1e-3), {{"gauge", "zero", "Hamiltonian: zero (T + alpha f x) or chi (T - alpha F P / m)"},
                                          {"include_F2_phase", true, "keep the alpha^2 F^2 / 2m term in the chi gauge"},
                                          {"t0", 0.0, "start time"},
                                          {"t1", 1.0, "end time"},
                                          {"samples", 11, "number of output times"}}),
                 qbox_propagate});

  out.push_back({"qbox-gauge-residual", "|| Phi_0(t) - U(t) Phi_chi(t) || after propagation in both gauges",
                 join(qbox_params(1e-3), {{"t1", 0.5, "comparison time (field.t0 is the start)"},
                                          {"N_ladder", nullptr, "optional list of N values to run instead of N"}}),
                 qbox_gauge_residual});

  out.push_back({"qbox-naive-compare",
                 "distance between the time-ordered chi-gauge propagator and the INCORRECT commuting one",
                 [] {
                   auto t = qbox_params(1e-3);
                   for (auto& s : t) {
                     if (s.key == "N") s.default_value = 16;
                     if (s.key == "field") s.default_value = cosine_field(20.0, kResonantOmega);
                   }
                   return join(t, {{"t0", 0.0, "start time"}, {"t1", 2.0 * kPi / kResonantOmega, "end time"}});
                 }(),
                 qbox_naive_compare});

  out.push_back({"qline-bch", "line gauge identity: U(t) U_chi psi against split-step U_0 psi",
                 join(join(join(packet_params(), {{"tau", 2.0, "evolution time"},
                                                  {"steps", 16384, "split-step count at the finest level"},
                                                  {"ladder", 3, "number of step halvings reported"}}),
                           field_params(constant_field(2.0))),
                      consts_params()),
                 qline_bch});

  out.push_back({"qline-ehrenfest", "<x>(t) of a split-step packet against the classical line solution",
                 join(join(join(packet_params(), {{"t0", 0.0, "start time"},
                                                  {"t_end", 2.0, "final time"},
                                                  {"samples", 21, "number of output times"},
                                                  {"dt_max", 1e-3, "largest split-step"}}),
                           field_params(constant_field(1.0))),
                      consts_params()),
                 qline_ehrenfest});

  out.push_back({"op-bound-audit", "Monte Carlo audit of the relative bound of the dilation operator",
                 join({{"families",
                        json::array({json{{"family", "constant"}, {"value", 1.0}}, json{{"family", "bump"}},
                                     json{{"family", "linear"}, {"slope", 1.0}}}),
                        "coefficient descriptors"},
                       {"trials", 1000, "random states per family"},
                       {"N", 32, "modes per trial state"},
                       {"a0", 0.0, "a0 (<= 0 picks half the admissible bound)"}},
                      consts_params()),
                 op_bound_audit});

  out.push_back({"op-defect", "defect solutions and indices for a coefficient A",
                 join({{"A", json{{"family", "linear"}, {"slope", 1.0}}, "coefficient descriptor"},
                       {"samples", 101, "output grid size"}},
                      consts_params()),
                 op_defect});

  out.push_back({"matrices-dump", "truncated operator matrices in the box basis",
                 join({{"op", "P", "T | P | x | gauge"},
                       {"N", 4, "truncation order"},
                       {"theta", 0.0, "phase slope for op=gauge"}},
                      consts_params()),
                 matrices_dump});
  return out;
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> table = build_commands();
  return table;
}

}  // namespace boxgauge::cli
