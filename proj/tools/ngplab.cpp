// Command-line front end: JSON-configured runs of the solver, curve sweeps,
// dispersion scans, kernel hypothesis checks, time evolution and the
// closed-form oracle, with CSV/JSON artifacts written per run.
//
// Exit codes: 0 success, 1 config error, 2 non-convergence, 3 numerical blowup.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ngplab/closed_form.hpp"
#include "ngplab/csv.hpp"
#include "ngplab/curve.hpp"
#include "ngplab/evolve.hpp"
#include "ngplab/hypotheses.hpp"
#include "ngplab/minimize.hpp"
#include "ngplab/version.hpp"

using json = nlohmann::json;
using namespace ngplab;
namespace fs = std::filesystem;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& required,
                  const std::set<std::string>& optional) {
  if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (!required.count(key) && !optional.count(key))
      throw ConfigError(where + ": unknown key \"" + key + "\"");
  }
  for (const auto& key : required)
    if (!obj.contains(key)) throw ConfigError(where + ": missing key \"" + key + "\"");
}

InteractionKernel parse_kernel(const json& j) {
  require_keys(j, "kernel", {"name"}, {"params"});
  const std::string name = j.at("name").get<std::string>();
  const json params = j.value("params", json::object());
  auto p = [&](const char* key) -> double {
    if (!params.contains(key))
      throw ConfigError("kernel " + name + ": missing param \"" + key + "\"");
    return params.at(key).get<double>();
  };
  if (name == "dirac") {
    require_keys(params, "kernel.params", {}, {});
    return InteractionKernel::dirac();
  }
  if (name == "exp_pair") {
    require_keys(params, "kernel.params", {"alpha", "beta"}, {});
    return InteractionKernel::exp_pair(p("alpha"), p("beta"));
  }
  if (name == "log_kernel") {
    require_keys(params, "kernel.params", {"alpha"}, {});
    return InteractionKernel::log_kernel(p("alpha"));
  }
  if (name == "perturbed_log") {
    require_keys(params, "kernel.params", {"sigma", "m"}, {});
    return InteractionKernel::perturbed_log(p("sigma"), static_cast<int>(p("m")));
  }
  if (name == "three_delta") {
    require_keys(params, "kernel.params", {"sigma"}, {});
    return InteractionKernel::three_delta(p("sigma"));
  }
  if (name == "roton") {
    require_keys(params, "kernel.params", {"a", "b", "c"}, {});
    return InteractionKernel::roton(p("a"), p("b"), p("c"));
  }
  throw ConfigError("kernel: unknown name \"" + name + "\"");
}

json kernel_to_json(const InteractionKernel& k) {
  json out;
  out["name"] = k.name();
  json params = json::object();
  const auto& p = k.params();
  switch (k.kind()) {
    case KernelKind::dirac: break;
    case KernelKind::exp_pair: params["alpha"] = p[0]; params["beta"] = p[1]; break;
    case KernelKind::log_kernel: params["alpha"] = p[0]; break;
    case KernelKind::perturbed_log: params["sigma"] = p[0]; params["m"] = p[1]; break;
    case KernelKind::three_delta: params["sigma"] = p[0]; break;
    case KernelKind::roton: params["a"] = p[0]; params["b"] = p[1]; params["c"] = p[2]; break;
  }
  out["params"] = params;
  return out;
}

Grid parse_grid(const json& j) {
  require_keys(j, "grid", {"n_points", "length"}, {});
  return make_grid(j.at("n_points").get<int>(), j.at("length").get<double>());
}

MinimizerConfig parse_minimizer(const json& j) {
  require_keys(j, "minimizer", {},
               {"step_init", "armijo_shrink", "armijo_slope", "grad_tol", "max_iter", "eta_cap",
                "residual_tol", "boundary_tol"});
  MinimizerConfig c;
  c.step_init = j.value("step_init", c.step_init);
  c.armijo_shrink = j.value("armijo_shrink", c.armijo_shrink);
  c.armijo_slope = j.value("armijo_slope", c.armijo_slope);
  c.grad_tol = j.value("grad_tol", c.grad_tol);
  c.max_iter = j.value("max_iter", c.max_iter);
  c.eta_cap = j.value("eta_cap", c.eta_cap);
  c.residual_tol = j.value("residual_tol", c.residual_tol);
  c.boundary_tol = j.value("boundary_tol", c.boundary_tol);
  c.validate();
  return c;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

json minimizer_to_json(const MinimizerConfig& c) {
  return {{"step_init", c.step_init},     {"armijo_shrink", c.armijo_shrink},
          {"armijo_slope", c.armijo_slope}, {"grad_tol", c.grad_tol},
          {"max_iter", c.max_iter},       {"eta_cap", c.eta_cap},
          {"residual_tol", c.residual_tol}, {"boundary_tol", c.boundary_tol}};
}

json solution_to_json(const SolitonSolution& s) {
  return {{"q", s.q},
          {"E", s.E},
          {"c_est", s.c_est},
          {"residual_norm", s.residual_norm},
          {"iterations", s.iterations},
          {"converged", s.converged},
          {"eta_clamped", s.eta_clamped},
          {"boundary_ok", s.boundary_ok}};
}

json report_to_json(const HypothesisReport& r) {
  json out;
  if (r.h0_ok) {
    out["h0"] = {{"ok", *r.h0_ok}, {"worst_value", r.h0_worst_value}, {"worst_xi", r.h0_worst_xi}};
  }
  if (r.h1_ok) {
    json h1 = {{"ok", *r.h1_ok},
               {"second_deriv_at_zero", r.second_deriv_at_zero},
               {"margin", r.h1_margin}};
    if (r.omega) h1["omega"] = *r.omega;
    out["h1"] = h1;
  }
  if (r.h2prime) {
    json h2 = {{"verdict", h2_verdict_name(*r.h2prime)}, {"min_ratio", r.h2_min_ratio}};
    if (r.h2_witness) {
      h2["witness"] = {
          {"shape", r.h2_witness->function.shape == TestFunction::Shape::bumps ? "bumps" : "hermite"},
          {"params", r.h2_witness->function.params},
          {"integral", r.h2_witness->integral},
          {"norm2", r.h2_witness->norm2}};
    }
    out["h2prime"] = h2;
  }
  return out;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

int run(const json& cfg, const std::string& output_dir_flag, std::optional<long> seed_flag) {
  require_keys(cfg, "config", {"command", "kernel"},
               {"grid", "output_dir", "seed", "solve", "sweep", "dispersion", "check", "evolve",
                "oracle", "minimizer"});
  const std::string command = cfg.at("command").get<std::string>();
  const InteractionKernel kernel = parse_kernel(cfg.at("kernel"));

  std::string output_dir = cfg.value("output_dir", std::string("."));
  if (!output_dir_flag.empty()) output_dir = output_dir_flag;
  fs::create_directories(output_dir);
  auto path = [&](const std::string& name) { return (fs::path(output_dir) / name).string(); };

  std::uint64_t seed = cfg.value("seed", 0ull);
  if (seed_flag) seed = static_cast<std::uint64_t>(*seed_flag);

  MinimizerConfig mincfg;
  if (cfg.contains("minimizer")) mincfg = parse_minimizer(cfg.at("minimizer"));

  json meta;
  meta["version"] = NGPLAB_VERSION;
  meta["command"] = command;
  meta["kernel"] = kernel_to_json(kernel);
  meta["seed"] = seed;
  meta["minimizer"] = minimizer_to_json(mincfg);

  Timer timer;
  int exit_code = 0;

  auto grid_of = [&]() {
    if (!cfg.contains("grid")) throw ConfigError(command + ": needs a \"grid\" block");
    Grid g = parse_grid(cfg.at("grid"));
    meta["grid"] = {{"n_points", g.n()}, {"length", g.length()}, {"spacing", g.spacing()}};
    return g;
  };

  if (command == "solve") {
    if (!cfg.contains("solve")) throw ConfigError("solve: missing \"solve\" block");
    const json& blk = cfg.at("solve");
    require_keys(blk, "solve", {"q"}, {"init", "init_noise"});
    Grid g = grid_of();
    const double q = blk.at("q").get<double>();
    const std::string init = blk.value("init", std::string("kdv"));
    const double noise = blk.value("init_noise", 0.0);

    const auto h1 = check_H1(kernel);
    const double omega = h1.omega.value_or(0.0);
    HydroField seed_f = (init == "gp" || omega <= 0.0)
                            ? seed_field(SeedRule::gp, g, q, 0.0)
                            : seed_field(SeedRule::kdv, g, q, omega);
    if (init != "gp" && init != "kdv") throw ConfigError("solve.init must be \"kdv\" or \"gp\"");
    if (noise > 0.0) {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      const int modes = 5;
      std::vector<double> amp(modes), ph(modes);
      for (int m = 0; m < modes; ++m) {
        amp[m] = noise * u(rng);
        ph[m] = M_PI * u(rng);
      }
      for (int j = 0; j < g.n(); ++j) {
        double f = 1.0;
        for (int m = 0; m < modes; ++m)
          f += amp[m] * std::sin(2 * M_PI * (m + 1) * g.x(j) / g.length() + ph[m]);
        seed_f.eta[j] *= f;
        seed_f.w[j] *= f;
      }
    }

    std::optional<SolitonSolution> sol_opt;
    try {
      sol_opt = minimize(g, kernel, q, seed_f, mincfg);
    } catch (const BoxTooSmallError& e) {
      std::cerr << "solve: " << e.what() << "\n";
      sol_opt = e.partial;
      sol_opt->converged = false;
      exit_code = 2;
    }
    const SolitonSolution& sol = *sol_opt;
    csv::write_field(path("field.csv"), sol.field);
    meta["solution"] = solution_to_json(sol);
    if (!sol.converged) {
      std::cerr << "solve: not converged (projected-gradient tolerance or residual check failed)\n";
      exit_code = 2;
    }
  } else if (command == "sweep") {
    if (!cfg.contains("sweep")) throw ConfigError("sweep: missing \"sweep\" block");
    const json& blk = cfg.at("sweep");
    require_keys(blk, "sweep", {}, {"q_values", "q_start", "q_stop", "q_step"});
    Grid g = grid_of();
    std::vector<double> qs;
    if (blk.contains("q_values")) {
      qs = blk.at("q_values").get<std::vector<double>>();
    } else {
      const double q0 = blk.at("q_start").get<double>();
      const double q1 = blk.at("q_stop").get<double>();
      const double dq = blk.at("q_step").get<double>();
      if (!(dq > 0.0)) throw ConfigError("sweep: q_step must be positive");
      for (double q = q0; q <= q1 + 1e-12; q += dq) qs.push_back(q);
    }
    auto res = sweep(g, kernel, qs, mincfg);
    csv::write_curve(path("curve.csv"), res.points);
    csv::write_field(path("final_field.csv"), res.solutions.back().field);

    const auto h1 = check_H1(kernel);
    CurveDiagnostics diag;
    int converged_count = 0;
    for (const auto& p : res.points) converged_count += p.converged;
    json jdiag;
    if (converged_count >= 3) {
      diag = diagnose(res.points, h1.omega.value_or(0.0));
      jdiag = {{"concave", diag.concave},
               {"worst_second_difference", diag.worst_second_difference},
               {"nondecreasing", diag.nondecreasing},
               {"lipschitz_ok", diag.lipschitz_ok},
               {"kdv_bound_ok", diag.kdv_bound_ok},
               {"sigma", diag.sigma}};
      json tg = json::array();
      for (auto& [q, gap] : diag.tangent_gap) tg.push_back({{"q", q}, {"gap", gap}});
      jdiag["tangent_gap"] = tg;
      if (diag.q_star_estimate) jdiag["q_star_estimate"] = *diag.q_star_estimate;
    }
    std::ofstream(path("diagnostics.json")) << jdiag.dump(2) << "\n";
    meta["sweep"] = {{"n_points", res.points.size()}, {"n_converged", converged_count}};
    if (converged_count == 0) {
      std::cerr << "sweep: no point converged\n";
      exit_code = 2;
    }
  } else if (command == "dispersion") {
    if (!cfg.contains("dispersion")) throw ConfigError("dispersion: missing \"dispersion\" block");
    const json& blk = cfg.at("dispersion");
    require_keys(blk, "dispersion", {"xi_min", "xi_max", "n_samples"}, {});
    const double a = blk.at("xi_min").get<double>(), b = blk.at("xi_max").get<double>();
    const int n = blk.at("n_samples").get<int>();
    if (!(a >= 0.0 && b > a && n >= 2)) throw ConfigError("dispersion: bad range");
    csv::Writer wtr(path("dispersion.csv"), "xi,w");
    for (int i = 0; i < n; ++i) {
      const double xi = a + (b - a) * i / (n - 1);
      wtr.row({xi, dispersion(kernel, xi)});
    }
    json ext = json::array();
    for (const auto& e : dispersion_extrema(kernel, std::max(a, 1e-6), b, std::max(n, 1000)))
      ext.push_back({{"xi", e.xi}, {"w", e.w}, {"kind", e.is_max ? "max" : "min"}});
    meta["extrema"] = ext;
  } else if (command == "check") {
    json blk = cfg.value("check", json::object());
    require_keys(blk, "check", {}, {"xi_max", "search_budget"});
    const double xi_max = blk.value("xi_max", 100.0);
    const long budget = blk.value("search_budget", 4000l);
    HypothesisReport rep = check_H0(kernel, xi_max);
    rep.merge(check_H1(kernel));
    rep.merge(check_H2prime(kernel, budget, seed == 0 ? 12345 : seed));
    const json jrep = report_to_json(rep);
    std::ofstream(path("report.json")) << jrep.dump(2) << "\n";
    meta["report"] = jrep;
  } else if (command == "evolve") {
    if (!cfg.contains("evolve")) throw ConfigError("evolve: missing \"evolve\" block");
    const json& blk = cfg.at("evolve");
    require_keys(blk, "evolve", {"t_end"},
                 {"c", "q", "dt", "record_every", "perturbation_amplitude", "snapshot_times"});
    Grid g = grid_of();
    EvolutionConfig ecfg;
    ecfg.t_end = blk.at("t_end").get<double>();
    ecfg.dt = blk.value("dt", 1e-3);
    ecfg.record_every = blk.value("record_every", 100);
    ecfg.perturbation_amplitude = blk.value("perturbation_amplitude", 0.0);

    std::optional<SolitonSolution> sol_opt;
    if (blk.contains("c")) {
      const double c = blk.at("c").get<double>();
      HydroField seed_h = gp_soliton_hydro(c, g);
      sol_opt = minimize(g, kernel, momentum(seed_h), seed_h, mincfg);
    } else if (blk.contains("q")) {
      const auto h1 = check_H1(kernel);
      sol_opt = minimize(g, kernel, blk.at("q").get<double>(),
                         h1.omega && *h1.omega > 0 ? SeedRule::kdv : SeedRule::gp, mincfg,
                         h1.omega.value_or(0.0));
    } else {
      throw ConfigError("evolve: needs \"c\" or \"q\"");
    }
    const SolitonSolution& sol = *sol_opt;
    if (!sol.converged) {
      std::cerr << "evolve: reference solve did not converge\n";
      exit_code = 2;
    } else {
      try {
        auto [max_dist, summary] = stability_experiment(sol, kernel, ecfg, seed);
        csv::write_trajectory(path("trajectory.csv"), summary);
        meta["evolve"] = {{"max_dist", max_dist},
                          {"dt_guard_ok", summary.dt_guard_ok},
                          {"initial_dist", summary.distances.empty() ? 0.0 : summary.distances.front()}};
        if (blk.contains("snapshot_times")) {
          // re-run recording snapshots at the requested times
          ComplexField cur = reconstruct_complex(sol.field);
          detail::StrangStepper st(g, kernel, cur.phase_jump, ecfg.dt);
          const auto times = blk.at("snapshot_times").get<std::vector<double>>();
          size_t next = 0;
          const long n_steps = static_cast<long>(std::llround(ecfg.t_end / ecfg.dt));
          for (long i = 0; i <= n_steps && next < times.size(); ++i) {
            if (i * ecfg.dt >= times[next]) {
              csv::write_field(path("snapshot_" + std::to_string(next) + ".csv"), cur);
              ++next;
            }
            if (i < n_steps) st.step(cur.values);
          }
        }
      } catch (const BlowupError& e) {
        std::cerr << "evolve: " << e.what() << "\n";
        exit_code = 3;
      }
    }
    meta["solution"] = solution_to_json(sol);
  } else if (command == "oracle") {
    if (!cfg.contains("oracle")) throw ConfigError("oracle: missing \"oracle\" block");
    const json& blk = cfg.at("oracle");
    require_keys(blk, "oracle", {"c"}, {});
    const double c = blk.at("c").get<double>();
    const auto inv = gp_soliton_invariants(c);
    meta["oracle"] = {{"c", c}, {"E", inv.E}, {"p", inv.p}};
    if (cfg.contains("grid")) {
      Grid g = grid_of();
      csv::write_field(path("field.csv"), gp_soliton_hydro(c, g));
    }
    std::cout << "E=" << csv::fmt(inv.E) << " p=" << csv::fmt(inv.p) << "\n";
  } else {
    throw ConfigError("unknown command \"" + command + "\"");
  }

  json resolved = cfg;
  resolved["output_dir"] = output_dir;
  resolved["seed"] = seed;
  meta["resolved_config"] = resolved;
  meta["config_hash"] = fnv1a(resolved.dump());
  meta["elapsed_seconds"] = timer.seconds();
  std::ofstream(path("meta.json")) << meta.dump(2) << "\n";
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ngplab: dark solitons of the nonlocal Gross-Pitaevskii equation"};
  std::string config_path, output_dir;
  long seed = -1;
  bool seed_set = false;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--output-dir", output_dir, "override the configured output directory");
  app.add_option("--seed", seed, "override the configured RNG seed")->each([&](const std::string&) {
    seed_set = true;
  });
  CLI11_PARSE(app, argc, argv);

  json cfg;
  try {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config " + config_path);
    in >> cfg;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  try {
    return run(cfg, output_dir, seed_set ? std::optional<long>(seed) : std::nullopt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const BlowupError& e) {
    std::cerr << "blowup: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
