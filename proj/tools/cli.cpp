#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cavity/analysis.hpp"
#include "cavity/config.hpp"
#include "cavity/csv.hpp"
#include "cavity/protocol.hpp"
#include "cavity/version.hpp"

namespace cavity::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Artifacts {
  std::vector<std::pair<std::string, std::string>> files;
  json effective = json::object();

  void add(std::string name, std::string content) {
    files.emplace_back(std::move(name), std::move(content));
  }
};

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> kmax;
  bool quiet = false;
  std::string figure;
};

std::string str(double v) { return format_double(v); }

void require_truncation(const CoefficientTrajectory& traj, double tol) {
  if (traj.top_amplitude > tol)
    throw NumericalError("truncation", "max_t |a_kmax| = " + str(traj.top_amplitude) +
                                           " exceeds truncation_tol = " + str(tol) +
                                           "; increase k_max");
}

// Accept the table when the last k_max moved mu_III by less than |delta mu| / 10
// compared with the truncation four modes smaller.
void require_phase_stability(const ConvergenceTable& table) {
  if (table.rows.empty()) return;
  const auto& last = table.rows.back();
  const auto shift = table.shift(last.k_max - 4, 4);
  if (!shift) return;
  const double bound = std::abs(last.mu_III - table.mu_I) / 10.0;
  if (!(*shift < bound))
    throw NumericalError("phase_stability", "|mu_III(" + std::to_string(last.k_max - 4) +
                                                ") - mu_III(" + std::to_string(last.k_max) +
                                                ")| = " + str(*shift) + " is not below |delta_mu|/10 = " +
                                                str(bound));
}

std::string evolve_csv(const CoefficientTrajectory& traj) {
  CsvTable t({"t", "k", "re_a", "im_a", "abs2_a"});
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    for (int k = 1; k <= traj.k_max(); ++k) {
      const auto a = traj.a(i, k);
      t.add_row({str(traj.times[i]), std::to_string(k), str(a.real()), str(a.imag()),
                 str(std::norm(a))});
    }
  return t.str();
}

std::string populations_csv(const CoefficientTrajectory& traj, int modes) {
  modes = std::min(modes, traj.k_max());
  std::vector<std::string> header{"t"};
  for (int k = 1; k <= modes; ++k) header.push_back("abs2_a" + std::to_string(k));
  CsvTable t(header);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    std::vector<std::string> row{str(traj.times[i])};
    for (int k = 1; k <= modes; ++k) row.push_back(str(std::norm(traj.a(i, k))));
    t.add_row(row);
  }
  return t.str();
}

std::string profile_csv(const PhaseProfile& p) {
  CsvTable t({"x", "mu_III", "delta_mu"});
  for (std::size_t i = 0; i < p.x_values.size(); ++i)
    t.add_row({str(p.x_values[i]), str(p.mu_III[i]), str(p.delta_mu[i])});
  return t.str();
}

std::string converge_csv(const ConvergenceTable& table) {
  CsvTable t({"k_max", "mu_III", "delta_prev"});
  for (const auto& r : table.rows)
    t.add_row({std::to_string(r.k_max), str(r.mu_III), str(r.delta_prev)});
  return t.str();
}

std::vector<int> k_range(int lo, int hi) {
  std::vector<int> ks;
  for (int k = lo; k <= hi; ++k) ks.push_back(k);
  return ks;
}

// Local phase difference at the reference point after one period.
double measured_delta_mu(const SimConfig& cfg) {
  const auto coupled = cfg.coupled();
  const std::vector<int> ks{cfg.k_max};
  const auto table = convergence_study(coupled, ks, cfg.reference_x);
  return table.rows.front().mu_III - table.mu_I;
}

void cmd_phases(const SimConfig& cfg, Artifacts& art, std::ostream& out, bool quiet) {
  const auto constants = cfg.constants();
  const BasisMode mode(cfg.n);
  const double mu_I = mu_I_closed_form(cfg.L0, cfg.q1, cfg.omega, mode, constants);
  const double mu_II = mu_I_closed_form(cfg.L0, cfg.q2, cfg.omega, mode, constants);
  const auto ad = adiabatic_phase(cfg.motion_potential(), cfg.motion_boundary(), constants, mode);
  const double delta = delta_dynamical(cfg.motion_potential(), constants, mode);
  const double gamma = gamma_geometric(cfg.motion_potential(), constants, mode);

  CsvTable t({"quantity", "value"});
  t.add_row({"mu_I", str(mu_I)});
  t.add_row({"mu_II", str(mu_II)});
  t.add_row({"mu_ad", str(ad.mu_ad)});
  t.add_row({"delta", str(delta)});
  t.add_row({"gamma", str(gamma)});
  art.add("phases.csv", t.str());
  if (!quiet)
    out << "mu_I = " << str(mu_I) << "\nmu_II = " << str(mu_II) << "\nmu_ad = " << str(ad.mu_ad)
        << "  (mu_ad - mu_I = " << str(ad.mu_ad - mu_I) << ")\ndelta = " << str(delta)
        << "\ngamma = " << str(gamma) << "\n";
}

CoefficientTrajectory run_evolution(const SimConfig& cfg, Artifacts& art) {
  const auto traj = evolve_coefficients(cfg.coupled());
  art.effective["norm_drift"] = traj.norm_drift;
  art.effective["top_amplitude"] = traj.top_amplitude;
  art.effective["integrator_steps"] = traj.stats.steps;
  require_truncation(traj, cfg.truncation_tol);
  return traj;
}

void cmd_evolve(const SimConfig& cfg, Artifacts& art, std::ostream& out, bool quiet,
                const std::string& file) {
  const auto traj = run_evolution(cfg, art);
  art.add(file, evolve_csv(traj));
  if (!quiet)
    out << "evolved k_max = " << cfg.k_max << ", norm drift " << str(traj.norm_drift)
        << ", max |a_kmax| " << str(traj.top_amplitude) << "\n";
}

void cmd_populations(const SimConfig& cfg, Artifacts& art, std::ostream& out, bool quiet,
                     const std::string& file) {
  const auto traj = run_evolution(cfg, art);
  art.add(file, populations_csv(traj, 4));
  if (!quiet) {
    double min_a2 = 1.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i)
      min_a2 = std::min(min_a2, std::norm(traj.a(i, cfg.n)));
    out << "min_t |a_" << cfg.n << "|^2 = " << str(min_a2) << "\n";
  }
}

void cmd_profile(const SimConfig& cfg, Artifacts& art, std::ostream& out, bool quiet,
                 const std::string& file) {
  const auto coupled = cfg.coupled();
  const auto traj = run_evolution(cfg, art);
  const auto profile = case3_phase_profile(coupled, traj, cfg.window(), cfg.window_points);
  art.add(file, profile_csv(profile));
  if (!quiet) {
    const auto [lo, hi] = std::minmax_element(profile.delta_mu.begin(), profile.delta_mu.end());
    out << "delta_mu over window: [" << str(*lo) << ", " << str(*hi) << "]\n";
  }
}

void cmd_converge(const SimConfig& cfg, Artifacts& art, std::ostream& out, bool quiet,
                  const std::string& file) {
  const auto ks = k_range(cfg.converge_k_min, cfg.converge_k_max);
  const auto table = convergence_study(cfg.coupled(), ks, cfg.reference_x);
  art.effective["reference_x"] = table.reference_x;
  art.add(file, converge_csv(table));
  require_phase_stability(table);
  if (!quiet)
    out << "mu_III(k_max = " << table.rows.back().k_max << ") = " << str(table.rows.back().mu_III)
        << ", mu_I = " << str(table.mu_I) << "\n";
}

void cmd_velocity(const SimConfig& cfg, Artifacts& art, std::ostream& out, bool quiet) {
  const auto traj = run_evolution(cfg, art);
  const auto constants = cfg.constants();
  const auto report = velocity_stats(traj, cfg.motion_boundary(), constants);

  CsvTable t({"quantity", "value"});
  t.add_row({"mean_v_over_c", str(report.mean_v_over_c)});
  t.add_row({"std_v_over_c", str(report.std_v_over_c)});
  for (std::size_t k = 0; k < report.mode_v_over_c.size(); ++k)
    t.add_row({"mode_v_over_c_" + std::to_string(k + 1), str(report.mode_v_over_c[k])});
  art.add("velocity.csv", t.str());

  CsvTable series({"t", "mean_v_over_c", "std_v_over_c"});
  for (std::size_t i = 0; i < report.times.size(); ++i)
    series.add_row({str(report.times[i]), str(report.mean_v[i] / PhysicalConstants::c),
                     str(report.std_v[i] / PhysicalConstants::c)});
  art.add("velocity_series.csv", series.str());

  const auto causal = causality_check(cfg.motion_boundary(), constants);
  if (!quiet)
    out << "<v>/c = " << str(report.mean_v_over_c) << ", std/c = " << str(report.std_v_over_c)
        << ", T < L0/c: " << (causal.causal ? "true" : "false") << "\n";
}

void cmd_protocol(const SimConfig& cfg, Artifacts& art, std::ostream& out, bool quiet) {
  const double delta_mu = cfg.delta_mu ? *cfg.delta_mu : measured_delta_mu(cfg);
  const auto pc = cfg.protocol(delta_mu);
  const auto outcome = simulate_ensemble(pc, cfg.shards);
  const auto p = detection_probability(pc.mode, pc.epsilon, pc.L0);

  std::optional<std::uint64_t> needed;
  if (std::sin(0.5 * delta_mu) != 0.0)
    needed = required_ensemble_size(delta_mu, p.exact, cfg.sigma);

  CsvTable t({"quantity", "value"});
  t.add_row({"delta_mu", str(delta_mu)});
  t.add_row({"message_sent", std::to_string(pc.message)});
  t.add_row({"detection_probability_approx", str(p.approx)});
  t.add_row({"detection_probability_exact", str(p.exact)});
  t.add_row({"ensemble_size", std::to_string(pc.ensemble_size)});
  t.add_row({"clicks_D1", std::to_string(outcome.clicks_D1)});
  t.add_row({"clicks_D2", std::to_string(outcome.clicks_D2)});
  t.add_row({"undetected", std::to_string(outcome.undetected)});
  t.add_row({"ratio", str(outcome.ratio)});
  t.add_row({"expected_ratio", str(outcome.expected_ratio)});
  t.add_row({"inferred_message", std::string(to_string(outcome.inferred_message))});
  t.add_row({"required_ensemble_size", needed ? std::to_string(*needed) : "inf"});
  t.add_row({"seed", std::to_string(outcome.seed)});
  t.add_row({"shards", std::to_string(outcome.shards)});
  art.add("protocol.csv", t.str());
  if (!quiet)
    out << "D1 = " << outcome.clicks_D1 << ", D2 = " << outcome.clicks_D2
        << ", inferred message: " << to_string(outcome.inferred_message) << "\n";
}

struct FigureSpec {
  double q2;
  int k_max;
};

const std::map<std::string, FigureSpec>& figures() {
  static const std::map<std::string, FigureSpec> table = {
      {"fig3", {7.04, 16}}, {"fig4", {7.33, 24}}, {"fig5a", {7.04, 16}},
      {"fig5b", {7.33, 31}}, {"fig6", {7.33, 0}},
  };
  return table;
}

void cmd_figure(SimConfig cfg, const Options& opt, Artifacts& art, std::ostream& out) {
  const auto& spec = figures().at(opt.figure);
  cfg.q2 = spec.q2;
  if (spec.k_max > 0) cfg.k_max = opt.kmax.value_or(spec.k_max);
  cfg.validate();
  art.effective["q2"] = cfg.q2;
  art.effective["k_max"] = cfg.k_max;
  const std::string file = opt.figure + ".csv";
  if (opt.figure == "fig3" || opt.figure == "fig4")
    cmd_populations(cfg, art, out, opt.quiet, file);
  else if (opt.figure == "fig5a" || opt.figure == "fig5b")
    cmd_profile(cfg, art, out, opt.quiet, file);
  else
    cmd_converge(cfg, art, out, opt.quiet, file);
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

void write_artifacts(const Artifacts& art, const std::string& command, const SimConfig& cfg,
                     const fs::path& dir) {
  fs::create_directories(dir);
  json outputs = json::array();
  for (const auto& [name, content] : art.files) {
    std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write '" + (dir / name).string() + "'");
    f << content;
    outputs.push_back(name);
  }
  json manifest = {
      {"command", command},
      {"version", version},
      {"config", cfg.to_json()},
      {"effective", art.effective},
      {"integrator", "Dormand-Prince 5(4), dense output"},
      {"outputs", outputs},
      {"timestamp", timestamp()},
  };
  std::ofstream m(dir / "manifest.json", std::ios::trunc);
  if (!m) throw ConfigError("cannot write manifest in '" + dir.string() + "'");
  m << manifest.dump(2) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moving-wall cavity phase simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--config", opt.config_path, "Flat JSON configuration file");
  app.add_option("--out", opt.out_dir, "Output directory");
  app.add_option("--seed", opt.seed, "Override the protocol RNG seed");
  app.add_option("--kmax", opt.kmax, "Override the basis truncation order")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", opt.quiet, "Suppress the summary on stdout");

  app.add_subcommand("phases", "Cyclic, dynamical and geometric phases");
  app.add_subcommand("evolve", "Coefficient trajectory of the case-III cavity");
  app.add_subcommand("profile", "Local phase profile near the static wall");
  app.add_subcommand("converge", "Local phase against basis truncation order");
  app.add_subcommand("velocity", "Velocity mean and spread over one period");
  app.add_subcommand("protocol", "Monte Carlo run of the detector-click protocol");
  auto* figure = app.add_subcommand("figure", "Reproduce one of the reference data sets");
  figure->add_option("name", opt.figure, "fig3 | fig4 | fig5a | fig5b | fig6")
      ->required()
      ->check(CLI::IsMember({"fig3", "fig4", "fig5a", "fig5b", "fig6"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : config_error;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    SimConfig cfg = opt.config_path.empty() ? SimConfig{} : load_config(opt.config_path);
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.kmax) cfg.k_max = *opt.kmax;
    cfg.validate();

    Artifacts art;
    if (command == "phases")
      cmd_phases(cfg, art, out, opt.quiet);
    else if (command == "evolve")
      cmd_evolve(cfg, art, out, opt.quiet, "evolve.csv");
    else if (command == "profile")
      cmd_profile(cfg, art, out, opt.quiet, "profile.csv");
    else if (command == "converge")
      cmd_converge(cfg, art, out, opt.quiet, "converge.csv");
    else if (command == "velocity")
      cmd_velocity(cfg, art, out, opt.quiet);
    else if (command == "protocol")
      cmd_protocol(cfg, art, out, opt.quiet);
    else
      cmd_figure(cfg, opt, art, out);

    const std::string label = command == "figure" ? "figure " + opt.figure : command;
    write_artifacts(art, label, cfg, opt.out_dir);
    return ok;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const NumericalError& e) {
    err << "numerical failure [" << e.criterion() << "]: " << e.what() << "\n";
    return numerical_error;
  } catch (const fs::filesystem_error& e) {
    err << "output error: " << e.what() << "\n";
    return config_error;
  }
}

}  // namespace cavity::cli
