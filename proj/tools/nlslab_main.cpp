#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "nlslab/densities.hpp"
#include "nlslab/dynamics.hpp"
#include "nlslab/errors.hpp"
#include "nlslab/io.hpp"
#include "nlslab/validate.hpp"

namespace fs = std::filesystem;
using nlslab::Complex;
using json = nlohmann::json;

namespace {

struct RunConfig {
  nlslab::ModelConfig model;
  nlslab::TimeGrid grid{0.0, 50.0, 2001, nlslab::Spacing::Linear};
  std::string outputs;
  std::vector<std::string> checks;
  bool plot = false;
  double tol = 1e-10;
};

void apply_json(RunConfig& cfg, const json& j) {
  static const std::set<std::string> top_keys = {"model", "grid", "outputs", "checks", "plot", "tol"};
  static const std::set<std::string> model_keys = {"D", "seed", "lambda1", "lambda2", "mix1", "mix2"};
  static const std::set<std::string> grid_keys = {"t0", "t1", "n", "spacing"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!top_keys.count(it.key()))
      throw nlslab::ConfigError("config: unknown key '" + it.key() + "'");
  if (j.contains("model")) {
    const auto& m = j.at("model");
    for (auto it = m.begin(); it != m.end(); ++it)
      if (!model_keys.count(it.key()))
        throw nlslab::ConfigError("config: unknown model key '" + it.key() + "'");
    if (m.contains("D")) cfg.model.dim = m.at("D").get<int>();
    if (m.contains("seed")) cfg.model.seed = m.at("seed").get<std::uint64_t>();
    if (m.contains("lambda1")) cfg.model.lambda1 = m.at("lambda1").get<double>();
    if (m.contains("lambda2")) cfg.model.lambda2 = m.at("lambda2").get<double>();
    if (m.contains("mix1")) cfg.model.mix1 = m.at("mix1").get<double>();
    if (m.contains("mix2")) cfg.model.mix2 = m.at("mix2").get<double>();
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    for (auto it = g.begin(); it != g.end(); ++it)
      if (!grid_keys.count(it.key()))
        throw nlslab::ConfigError("config: unknown grid key '" + it.key() + "'");
    if (g.contains("t0")) cfg.grid.t0 = g.at("t0").get<double>();
    if (g.contains("t1")) cfg.grid.t1 = g.at("t1").get<double>();
    if (g.contains("n")) cfg.grid.n = g.at("n").get<int>();
    if (g.contains("spacing")) {
      const std::string s = g.at("spacing").get<std::string>();
      if (s == "linear") cfg.grid.spacing = nlslab::Spacing::Linear;
      else if (s == "log") cfg.grid.spacing = nlslab::Spacing::Log;
      else throw nlslab::ConfigError("config: spacing must be linear or log");
    }
  }
  if (j.contains("outputs")) cfg.outputs = j.at("outputs").get<std::string>();
  if (j.contains("checks")) cfg.checks = j.at("checks").get<std::vector<std::string>>();
  if (j.contains("plot")) cfg.plot = j.at("plot").get<bool>();
  if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
}

RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw nlslab::ConfigError("config: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw nlslab::ConfigError(std::string("config: bad JSON: ") + e.what());
  }
  apply_json(cfg, j);
  return cfg;
}

json model_manifest(const nlslab::BipartiteModel& m) {
  json j;
  j["config"] = {{"D", m.cfg.dim},
                 {"seed", m.cfg.seed},
                 {"lambda1", m.cfg.lambda1},
                 {"lambda2", m.cfg.lambda2},
                 {"mix1", m.cfg.mix1},
                 {"mix2", m.cfg.mix2},
                 {"alpha_m", m.cfg.alpha_m}};
  j["D_NLS"] = m.cfg.nls_dim();
  j["invariants"] = {
      {"trace_psi1", std::abs(m.psi1.trace())},
      {"trace_psi2", std::abs(m.psi2.trace())},
      {"rank_psi1", nlslab::rank_tol(m.psi1)},
      {"rank_psi2", nlslab::rank_tol(m.psi2)},
      {"psi1_asymmetry", nlslab::rel_asymmetry(m.psi1)},
      {"psi2_asymmetry", nlslab::rel_asymmetry(m.psi2)},
  };
  return j;
}

json run_manifest(const RunConfig& cfg, const std::string& command, double wall_seconds) {
  json j;
  j["command"] = command;
  j["seed"] = cfg.model.seed;
  j["D"] = cfg.model.dim;
  j["grid"] = {{"t0", cfg.grid.t0},
               {"t1", cfg.grid.t1},
               {"n", cfg.grid.n},
               {"spacing", cfg.grid.spacing == nlslab::Spacing::Linear ? "linear" : "log"}};
  j["tol"] = cfg.tol;
  j["log_regularization"] = 1e-12;
  j["wall_seconds"] = wall_seconds;
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw nlslab::IoError("cannot open '" + path.string() + "' for writing");
  out << text;
}

struct StateSpec {
  nlslab::CMat matrix;
  std::string label;
};

StateSpec parse_state(const std::string& text, const nlslab::BipartiteModel& m,
                      const nlslab::EigenSystem& e1) {
  if (text == "PD") return {nlslab::projector_PD(m), "PD"};
  if (text == "Pprime") return {nlslab::projector_PDprime(m), "Pprime"};
  if (text == "Jvec:a1" || text == "Jvec:a2") {
    const int alpha = text.back() == '1' ? 1 : 2;
    const nlslab::CVec v = nlslab::j_vector(m, alpha);
    return {v * v.adjoint(), text};
  }
  const auto spec = nlslab::DensitySpec::parse(text, m.cfg.dim);
  return {nlslab::make_density(m, e1, spec).mat, spec.label()};
}

StateSpec parse_obs(const std::string& text, const nlslab::BipartiteModel& m,
                    const nlslab::EigenSystem& e1) {
  if (text == "I") return {nlslab::projector_PD(m), "I"};
  if (text == "JtJ:a1") return {nlslab::observable_jtj(m, 1), text};
  if (text == "JtJ:a2") return {nlslab::observable_jtj(m, 2), text};
  if (text == "JJt:a1") return {nlslab::observable_jjt(m, 1), text};
  if (text == "JJt:a2") return {nlslab::observable_jjt(m, 2), text};
  return parse_state(text, m, e1);
}

int cmd_generate(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const nlslab::BipartiteModel m = nlslab::build(cfg.model);
  if (cfg.outputs.empty()) throw nlslab::ConfigError("generate: --out directory required");
  fs::create_directories(cfg.outputs);
  const fs::path dir(cfg.outputs);
  nlslab::write_matrix_csv((dir / "base.csv").string(), m.base.cast<Complex>());
  nlslab::write_matrix_csv((dir / "s1.csv").string(), m.s1);
  nlslab::write_matrix_csv((dir / "s2.csv").string(), m.s2);
  nlslab::write_matrix_csv((dir / "psi1.csv").string(), m.psi1);
  nlslab::write_matrix_csv((dir / "psi2.csv").string(), m.psi2);
  nlslab::write_matrix_csv((dir / "observable.csv").string(), m.observable);

  // subsystem spectra with log-scale magnitudes, ready for plotting
  for (int alpha : {1, 2}) {
    const nlslab::EigenSystem es = nlslab::subsystem_eigensystem(m, alpha);
    std::ofstream spec(dir / ("spectrum_alpha" + std::to_string(alpha) + ".csv"));
    spec << "index,re,im,abs,log10_abs\n";
    char buf[160];
    for (int k = 0; k < es.values.size(); ++k) {
      const double mag = std::abs(es.values[k]);
      std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", k + 1,
                    es.values[k].real(), es.values[k].imag(), mag,
                    mag > 0 ? std::log10(mag) : -400.0);
      spec << buf;
    }
  }

  json manifest = model_manifest(m);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  manifest["run"] = run_manifest(cfg, "generate", wall);
  write_text(dir / "model.json", manifest.dump(2) + "\n");
  std::cout << "wrote model files to " << cfg.outputs << " (D=" << m.cfg.dim
            << ", D_NLS=" << m.cfg.nls_dim() << ")\n";
  return 0;
}

int cmd_validate(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  nlslab::ValidationReport rep = nlslab::run_validation(cfg.model);
  if (!cfg.checks.empty()) {
    std::vector<nlslab::CheckResult> kept;
    for (const auto& e : rep.entries)
      for (const auto& want : cfg.checks)
        if (e.name.find(want) != std::string::npos) {
          kept.push_back(e);
          break;
        }
    rep.entries = kept;
  }
  std::cout << rep.to_table();
  if (!cfg.outputs.empty()) {
    fs::create_directories(cfg.outputs);
    write_text(fs::path(cfg.outputs) / "validation.json", rep.to_json());
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_text(fs::path(cfg.outputs) / "validate_manifest.json",
               run_manifest(cfg, "validate", wall).dump(2) + "\n");
  }
  return rep.all_pass() ? 0 : 4;
}

int cmd_echo(const RunConfig& cfg, const std::string& density_spec) {
  const auto start = std::chrono::steady_clock::now();
  const nlslab::BipartiteModel m = nlslab::build(cfg.model);
  const nlslab::EigenSystem e1 = nlslab::subsystem_eigensystem(m, 1);
  const auto spec = nlslab::DensitySpec::parse(density_spec, m.cfg.dim);
  const nlslab::DensityOperator rho = nlslab::make_density(m, e1, spec);
  const nlslab::CVec g = nlslab::ground_state(m, e1);
  nlslab::TimeSeries series = nlslab::loschmidt_echo(rho.mat, g, cfg.grid);
  series.label = "echo " + spec.label();

  const double period = nlslab::period_estimate(series);
  std::cout << "echo " << spec.label() << ": initial " << series.values.front().real()
            << ", estimated period " << period << "\n";
  if (!cfg.outputs.empty()) {
    fs::create_directories(cfg.outputs);
    const fs::path dir(cfg.outputs);
    nlslab::write_series_csv((dir / "echo.csv").string(), series);
    if (cfg.plot) nlslab::write_series_svg((dir / "echo.svg").string(), series);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_text(dir / "echo_manifest.json", run_manifest(cfg, "echo", wall).dump(2) + "\n");
  }
  return 0;
}

int cmd_vie(const RunConfig& cfg, const std::string& state, const std::string& obs) {
  const auto start = std::chrono::steady_clock::now();
  const nlslab::BipartiteModel m = nlslab::build(cfg.model);
  const nlslab::EigenSystem e1 = nlslab::subsystem_eigensystem(m, 1);
  const StateSpec rho = parse_state(state, m, e1);
  const StateSpec o = parse_obs(obs, m, e1);
  nlslab::TimeSeries series =
      nlslab::vie_series(m.base.cast<Complex>(), rho.matrix, o.matrix, cfg.grid);
  series.label = "vie " + rho.label + " / " + o.label;

  double peak = 0.0;
  for (const auto& v : series.values) peak = std::max(peak, v.real());
  std::cout << "vie " << rho.label << " with " << o.label << ": peak " << peak << "\n";
  if (!cfg.outputs.empty()) {
    fs::create_directories(cfg.outputs);
    const fs::path dir(cfg.outputs);
    std::vector<double> t = cfg.grid.times(), v(series.values.size());
    for (size_t k = 0; k < v.size(); ++k) v[k] = series.values[k].real();
    nlslab::write_real_series_csv((dir / "vie.csv").string(), t, v);
    if (cfg.plot) nlslab::write_real_series_svg((dir / "vie.svg").string(), t, v, series.label);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_text(dir / "vie_manifest.json", run_manifest(cfg, "vie", wall).dump(2) + "\n");
  }
  return 0;
}

int cmd_average(const RunConfig& cfg, const std::string& state, const std::string& obs,
                double t_final, int n_samples) {
  const auto start = std::chrono::steady_clock::now();
  const nlslab::BipartiteModel m = nlslab::build(cfg.model);
  const nlslab::EigenSystem e1 = nlslab::subsystem_eigensystem(m, 1);
  const StateSpec rho = parse_state(state, m, e1);
  const StateSpec o = parse_obs(obs, m, e1);
  const nlslab::AverageResult avg =
      nlslab::long_time_average(m.base.cast<Complex>(), rho.matrix, o.matrix, t_final, n_samples);
  const double dim = m.cfg.dim;
  std::cout << "average Tr[rho(t) O] over [0," << t_final << "]: " << avg.value.real();
  if (std::abs(avg.value.imag()) > 1e-12) std::cout << " + " << avg.value.imag() << "i";
  std::cout << "  (fluctuation " << avg.fluctuation << ", per-dimension "
            << avg.value.real() / dim << ")\n";
  if (!cfg.outputs.empty()) {
    fs::create_directories(cfg.outputs);
    json j = run_manifest(cfg, "average",
                          std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                              .count());
    j["state"] = rho.label;
    j["observable"] = o.label;
    j["T"] = t_final;
    j["value_re"] = avg.value.real();
    j["value_im"] = avg.value.imag();
    j["value_per_dimension"] = avg.value.real() / dim;
    j["fluctuation"] = avg.fluctuation;
    write_text(fs::path(cfg.outputs) / "average.json", j.dump(2) + "\n");
  }
  return 0;
}

int cmd_nls(const RunConfig& cfg) {
  const int dim = cfg.model.dim;
  const nlslab::NlsBasis nb = nlslab::nls_eigenvectors(dim);
  std::cout << "degenerate-block basis, D=" << dim
            << " (head^2 = j/(j+1), tail^2 = 1/(j(j+1)))\n";
  char buf[128];
  for (int j = 1; j <= dim / 2 - 1; ++j) {
    const double head = static_cast<double>(j) / (j + 1);
    const double tail = 1.0 / (static_cast<double>(j) * (j + 1));
    std::snprintf(buf, sizeof(buf), "j=%-3d head^2=%-12.10g tail^2=%-12.10g support=%d\n", j,
                  head, tail, j + 1);
    std::cout << buf;
  }
  if (!cfg.outputs.empty()) {
    fs::create_directories(cfg.outputs);
    nlslab::write_matrix_csv((fs::path(cfg.outputs) / "nls_basis.csv").string(), nb.vectors);
  }
  return 0;
}

int cmd_density(const RunConfig& cfg, const std::string& spec_text,
                const std::string& partner_text) {
  const nlslab::BipartiteModel m = nlslab::build(cfg.model);
  const nlslab::EigenSystem e1 = nlslab::subsystem_eigensystem(m, 1);
  const auto spec = nlslab::DensitySpec::parse(spec_text, m.cfg.dim);
  const nlslab::DensityOperator rho = nlslab::make_density(m, e1, spec);
  const auto report = nlslab::ground_overlaps(rho.mat, m, e1);

  json j;
  j["spec"] = spec.label();
  j["trace_re"] = rho.mat.trace().real();
  j["trace_im"] = rho.mat.trace().imag();
  j["rank"] = nlslab::rank_tol(rho.mat);
  j["norm2"] = rho.norm2;
  j["nonthermal_levels"] = report.nonthermal_levels;
  j["nonthermal_threshold_log"] = report.threshold_log;
  if (!partner_text.empty()) {
    const auto pspec = nlslab::DensitySpec::parse(partner_text, m.cfg.dim);
    const nlslab::DensityOperator partner = nlslab::make_density(m, e1, pspec);
    const Complex c = nlslab::coherence_ratio(rho.mat, partner.mat);
    j["coherence_partner"] = pspec.label();
    j["coherence_re"] = c.real();
    j["coherence_im"] = c.imag();
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nlslab: bipartite random-matrix laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  int dim = 0;
  std::string out_dir;
  bool plot = false;
  double tol = -1.0;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--seed", seed, "override the configured seed");
  app.add_option("--D", dim, "override the configured Hilbert dimension");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--plot", plot, "also emit SVG plots");
  app.add_option("--tol", tol, "override the reporting tolerance");

  auto* generate = app.add_subcommand("generate", "build a model and write its matrices");
  auto* validate = app.add_subcommand("validate", "run the identity-check suite");
  auto* echo = app.add_subcommand("echo", "Loschmidt echo of a density");
  auto* vie_cmd = app.add_subcommand("vie", "imaginary-spectrum variance of an evolved product");
  auto* average = app.add_subcommand("average", "long-time average of Tr[rho(t) O]");
  auto* nls = app.add_subcommand("nls", "closed-form degenerate-block data");
  auto* density = app.add_subcommand("density", "describe one density operator");
  for (auto* sub : {generate, validate, echo, vie_cmd, average, nls, density})
    sub->fallthrough();

  std::string density_spec = "nH:mixed:NLS";
  echo->add_option("--density", density_spec, "density spec basis:kind:indices");

  std::string state = "Pprime", obs = "JtJ:a1";
  vie_cmd->add_option("--state", state, "initial state (Pprime, PD, Jvec:a1/2, or density spec)");
  vie_cmd->add_option("--obs", obs, "observable (JtJ:a1/2, JJt:a1/2, I, or density spec)");

  std::string avg_state = "Jvec:a1", avg_obs = "JtJ:a1";
  double avg_T = 1000.0;
  int avg_n = 4001;
  average->add_option("--state", avg_state, "initial state");
  average->add_option("--obs", avg_obs, "observable");
  average->add_option("--T", avg_T, "averaging horizon");
  average->add_option("--n", avg_n, "trapezoid samples");

  std::string dspec = "nH:mixed:NLS", dpartner;
  density->add_option("--spec", dspec, "density spec basis:kind:indices");
  density->add_option("--partner", dpartner, "partner spec for the coherence ratio");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = load_config(config_path);
    if (seed) cfg.model.seed = seed;
    if (dim) cfg.model.dim = dim;
    if (!out_dir.empty()) cfg.outputs = out_dir;
    if (plot) cfg.plot = true;
    if (tol > 0) cfg.tol = tol;
    cfg.model.validate();

    if (generate->parsed()) return cmd_generate(cfg);
    if (validate->parsed()) return cmd_validate(cfg);
    if (echo->parsed()) return cmd_echo(cfg, density_spec);
    if (vie_cmd->parsed()) return cmd_vie(cfg, state, obs);
    if (average->parsed()) return cmd_average(cfg, avg_state, avg_obs, avg_T, avg_n);
    if (nls->parsed()) return cmd_nls(cfg);
    if (density->parsed()) return cmd_density(cfg, dspec, dpartner);
  } catch (const nlslab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nlslab::Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
