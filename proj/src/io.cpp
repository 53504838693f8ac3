#include "exb/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace exb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using nlohmann::json;

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::string control_mode_name(ControlMode mode) {
  switch (mode) {
    case ControlMode::none:
      return "none";
    case ControlMode::exact:
      return "exact";
    case ControlMode::truncated:
      return "truncated";
  }
  return "none";
}

ControlMode control_mode_from_name(const std::string& name) {
  if (name == "none") return ControlMode::none;
  if (name == "exact") return ControlMode::exact;
  if (name == "truncated") return ControlMode::truncated;
  throw ConfigError("unknown control mode: " + name +
                    " (expected none|exact|truncated)");
}

PotentialSpec RunConfig::make_spec() const { return make_spec(epsilon, rng_seed); }

PotentialSpec RunConfig::make_spec(double eps, std::uint64_t seed) const {
  if (phases) return PotentialSpec(n_modes, eps, *phases, seed);
  return PotentialSpec(n_modes, eps, seed);
}

EnsembleConfig RunConfig::make_ensemble(ControlMode mode) const {
  EnsembleConfig cfg;
  cfg.n_traj = n_traj;
  cfg.t_final = t_final;
  cfg.strip_x_min = strip_x_min;
  cfg.strip_x_max = strip_x_max;
  cfg.strip_y_min = strip_y_min;
  cfg.strip_y_max = strip_y_max;
  cfg.control = control;
  cfg.control.mode = mode;
  cfg.tol = tol;
  cfg.seed = ensemble_seed;
  cfg.grid_init = grid_init;
  cfg.stop_at_escape = stop_at_escape;
  cfg.track_energy = track_energy;
  cfg.n_threads = n_threads;
  return cfg;
}

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  try {
    if (j.contains("potential")) {
      const auto& p = j.at("potential");
      cfg.n_modes = p.value("n_modes", cfg.n_modes);
      cfg.epsilon = p.value("epsilon", cfg.epsilon);
      cfg.rng_seed = p.value("rng_seed", cfg.rng_seed);
      if (p.contains("phases") && !p.at("phases").is_null()) {
        cfg.phases = p.at("phases").get<std::vector<double>>();
      }
    }
    if (j.contains("control")) {
      const auto& c = j.at("control");
      cfg.control.x0 = c.value("x0", cfg.control.x0);
      if (c.contains("mode")) {
        cfg.control.mode = control_mode_from_name(c.at("mode").get<std::string>());
      }
      cfg.control.harmonics = c.value("harmonics", cfg.control.harmonics);
      cfg.control.control_scale =
          c.value("control_scale", cfg.control.control_scale);
    }
    if (j.contains("ensemble")) {
      const auto& e = j.at("ensemble");
      cfg.n_traj = e.value("n_traj", cfg.n_traj);
      cfg.t_final = e.value("t_final", cfg.t_final);
      cfg.tol = e.value("tol", cfg.tol);
      cfg.ensemble_seed = e.value("seed", cfg.ensemble_seed);
      if (e.contains("strip")) {
        const auto s = e.at("strip").get<std::vector<double>>();
        if (s.size() != 4) {
          throw ConfigError("ensemble.strip must be [x_min, x_max, y_min, y_max]");
        }
        cfg.strip_x_min = s[0];
        cfg.strip_x_max = s[1];
        cfg.strip_y_min = s[2];
        cfg.strip_y_max = s[3];
      }
      cfg.grid_init = e.value("grid_init", cfg.grid_init);
      cfg.stop_at_escape = e.value("stop_at_escape", cfg.stop_at_escape);
      cfg.track_energy = e.value("track_energy", cfg.track_energy);
      cfg.n_threads = e.value("n_threads", cfg.n_threads);
    }
    if (j.contains("diagnostics")) {
      const auto& d = j.at("diagnostics");
      cfg.resolution = d.value("resolution", cfg.resolution);
      if (d.contains("eps_sweep")) {
        cfg.eps_sweep = d.at("eps_sweep").get<std::vector<double>>();
      }
      if (d.contains("seeds")) {
        cfg.seeds = d.at("seeds").get<std::vector<std::uint64_t>>();
      }
      if (d.contains("msd_window")) {
        const auto w = d.at("msd_window").get<std::vector<double>>();
        if (w.size() != 2) throw ConfigError("diagnostics.msd_window must be [lo, hi]");
        cfg.msd_window_lo = w[0];
        cfg.msd_window_hi = w[1];
      }
      cfg.contour_time = d.value("contour_time", cfg.contour_time);
      cfg.contour_resolution =
          d.value("contour_resolution", cfg.contour_resolution);
    }
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    cfg.plots = j.value("plots", cfg.plots);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }

  if (cfg.n_modes < 1) throw ConfigError("potential.n_modes must be >= 1");
  if (cfg.epsilon < 0) throw ConfigError("potential.epsilon must be >= 0");
  if (cfg.n_traj < 1) throw ConfigError("ensemble.n_traj must be >= 1");
  if (!(cfg.tol >= 1e-13 && cfg.tol <= 1e-6)) {
    throw ConfigError("ensemble.tol must lie in [1e-13, 1e-6]");
  }
  if (cfg.control.harmonics < 0) throw ConfigError("control.harmonics must be >= 0");
  if (cfg.eps_sweep.empty()) throw ConfigError("diagnostics.eps_sweep must be non-empty");
  if (cfg.seeds.empty()) throw ConfigError("diagnostics.seeds must be non-empty");
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

std::string run_config_to_json(const RunConfig& cfg) {
  json j;
  j["potential"] = {{"n_modes", cfg.n_modes},
                    {"epsilon", cfg.epsilon},
                    {"rng_seed", cfg.rng_seed}};
  if (cfg.phases) j["potential"]["phases"] = *cfg.phases;
  j["control"] = {{"x0", cfg.control.x0},
                  {"mode", control_mode_name(cfg.control.mode)},
                  {"harmonics", cfg.control.harmonics},
                  {"control_scale", cfg.control.control_scale}};
  j["ensemble"] = {
      {"n_traj", cfg.n_traj},
      {"t_final", cfg.t_final},
      {"tol", cfg.tol},
      {"seed", cfg.ensemble_seed},
      {"strip",
       {cfg.strip_x_min, cfg.strip_x_max, cfg.strip_y_min, cfg.strip_y_max}},
      {"grid_init", cfg.grid_init},
      {"stop_at_escape", cfg.stop_at_escape},
      {"track_energy", cfg.track_energy},
      {"n_threads", cfg.n_threads}};
  j["diagnostics"] = {{"resolution", cfg.resolution},
                      {"eps_sweep", cfg.eps_sweep},
                      {"seeds", cfg.seeds},
                      {"msd_window", {cfg.msd_window_lo, cfg.msd_window_hi}},
                      {"contour_time", cfg.contour_time},
                      {"contour_resolution", cfg.contour_resolution}};
  j["output_dir"] = cfg.output_dir;
  j["plots"] = cfg.plots;
  return j.dump(2);
}

std::string config_echo(const RunConfig& cfg) {
  return json::parse(run_config_to_json(cfg)).dump();
}

void write_poincare_csv(const std::string& path,
                        const std::vector<TrajectoryRecord>& records,
                        const std::string& echo) {
  auto out = open_out(path);
  out << "# " << echo << "\n";
  out << "traj_id,k,x,y\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (const auto& p : records[i].poincare_points) {
      out << i << ',' << p.section_index << ',' << fmt(p.x) << ',' << fmt(p.y)
          << '\n';
    }
  }
}

void write_ensemble_report_json(const std::string& path,
                                const EnsembleReport& report,
                                const std::string& echo) {
  json j;
  j["config_echo"] = json::parse(echo);
  j["control_mode"] = control_mode_name(report.config.control.mode);
  j["n_traj"] = report.n_traj;
  j["n_escaped"] = report.n_escaped;
  j["n_failed"] = report.n_failed;
  j["escape_fraction"] = report.escape_fraction;
  j["wall_time_seconds"] = report.wall_time_seconds;
  json times = json::array();
  for (double t : report.first_crossing_times) {
    if (std::isnan(t)) {
      times.push_back(nullptr);
    } else {
      times.push_back(t);
    }
  }
  j["first_crossing_times"] = times;
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

void write_energy_csv(const std::string& path,
                      const std::vector<EnergyReport>& rows,
                      const std::string& echo, bool with_seed) {
  auto out = open_out(path);
  out << "# " << echo << "\n";
  out << "epsilon,zeta_ex,zeta_tr,eta_ex,eta_tr";
  if (with_seed) out << ",seed";
  out << "\n";
  for (const auto& r : rows) {
    out << fmt(r.epsilon) << ',' << fmt(r.zeta_ex) << ',' << fmt(r.zeta_tr)
        << ',' << fmt(r.eta_ex) << ',' << fmt(r.eta_tr);
    if (with_seed) out << ',' << r.seed;
    out << '\n';
  }
}

void write_energy_mean_csv(
    const std::string& path, const std::vector<double>& eps_list,
    const std::vector<std::vector<EnergyReport>>& per_seed_rows,
    const std::string& echo) {
  auto out = open_out(path);
  out << "# " << echo << "\n";
  out << "epsilon,zeta_ex,zeta_ex_se,zeta_tr,zeta_tr_se,eta_ex,eta_ex_se,"
         "eta_tr,eta_tr_se,n_seeds\n";
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    const auto& rows = per_seed_rows[i];
    const double n = static_cast<double>(rows.size());
    auto mean_se = [&](auto getter) {
      double mu = 0;
      for (const auto& r : rows) mu += getter(r);
      mu /= n;
      double var = 0;
      for (const auto& r : rows) {
        const double d = getter(r) - mu;
        var += d * d;
      }
      const double se = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
      return std::pair<double, double>(mu, se);
    };
    const auto z1 = mean_se([](const EnergyReport& r) { return r.zeta_ex; });
    const auto z2 = mean_se([](const EnergyReport& r) { return r.zeta_tr; });
    const auto e1 = mean_se([](const EnergyReport& r) { return r.eta_ex; });
    const auto e2 = mean_se([](const EnergyReport& r) { return r.eta_tr; });
    out << fmt(eps_list[i]) << ',' << fmt(z1.first) << ',' << fmt(z1.second)
        << ',' << fmt(z2.first) << ',' << fmt(z2.second) << ',' << fmt(e1.first)
        << ',' << fmt(e1.second) << ',' << fmt(e2.first) << ',' << fmt(e2.second)
        << ',' << rows.size() << '\n';
  }
}

void write_escape_csv(const std::string& path,
                      const std::vector<double>& eps_list,
                      const std::vector<std::array<double, 3>>& fractions,
                      const std::string& echo) {
  auto out = open_out(path);
  out << "# " << echo << "\n";
  out << "epsilon,n_without,n_exact,n_tr\n";
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    out << fmt(eps_list[i]) << ',' << fmt(fractions[i][0]) << ','
        << fmt(fractions[i][1]) << ',' << fmt(fractions[i][2]) << '\n';
  }
}

void write_comparison_csv(const std::string& path,
                          const std::vector<ComparisonRow>& rows,
                          const std::string& echo) {
  auto out = open_out(path);
  out << "# " << echo << "\n";
  out << "epsilon,n_without,n_exact,n_tr,delta_n,delta_eta\n";
  for (const auto& r : rows) {
    out << fmt(r.epsilon) << ',' << fmt(r.n_without) << ',' << fmt(r.n_exact)
        << ',' << fmt(r.n_tr) << ',' << fmt(r.delta_n) << ',' << fmt(r.delta_eta)
        << '\n';
  }
}

void write_grid_file(const std::string& path, const ScalarGrid& grid,
                     const std::string& echo) {
  auto out = open_out(path);
  out << "# " << echo << "\n";
  out << grid.nx << ' ' << grid.ny << ' ' << fmt(grid.x_min) << ' '
      << fmt(grid.x_max) << ' ' << fmt(grid.y_min) << ' ' << fmt(grid.y_max)
      << ' ' << fmt(grid.t) << "\n";
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      if (ix) out << ' ';
      out << fmt(grid.values[static_cast<std::size_t>(iy) * grid.nx + ix]);
    }
    out << '\n';
  }
}

void write_ppm_heatmap(const std::string& path, const ScalarGrid& grid,
                       const std::string& echo) {
  double vmax = 0.0;
  for (double v : grid.values) vmax = std::max(vmax, std::fabs(v));
  if (vmax == 0.0) vmax = 1.0;
  auto out = open_out(path, true);
  out << "P6\n# " << echo << "\n" << grid.nx << ' ' << grid.ny << "\n255\n";
  std::string row(static_cast<std::size_t>(grid.nx) * 3, '\0');
  for (int iy = grid.ny - 1; iy >= 0; --iy) {  // y increases upward
    for (int ix = 0; ix < grid.nx; ++ix) {
      const double u =
          grid.values[static_cast<std::size_t>(iy) * grid.nx + ix] / vmax;
      // blue (-1) -> white (0) -> red (+1)
      double r = 1.0, g = 1.0, b = 1.0;
      if (u >= 0) {
        g = 1.0 - u;
        b = 1.0 - u;
      } else {
        r = 1.0 + u;
        g = 1.0 + u;
      }
      row[3 * ix + 0] = static_cast<char>(std::lround(255 * std::clamp(r, 0.0, 1.0)));
      row[3 * ix + 1] = static_cast<char>(std::lround(255 * std::clamp(g, 0.0, 1.0)));
      row[3 * ix + 2] = static_cast<char>(std::lround(255 * std::clamp(b, 0.0, 1.0)));
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

void write_portrait_svg(const std::string& path,
                        const std::vector<TrajectoryRecord>& records,
                        const std::string& title, const std::string& echo) {
  double x_lo = 1e300, x_hi = -1e300;
  for (const auto& r : records) {
    for (const auto& p : r.poincare_points) {
      x_lo = std::min(x_lo, p.x);
      x_hi = std::max(x_hi, p.x);
    }
  }
  if (x_lo > x_hi) {
    x_lo = 0;
    x_hi = 1;
  }
  const double pad = 0.02 * (x_hi - x_lo + 1e-12);
  x_lo -= pad;
  x_hi += pad;

  const int w = 760, hgt = 640, margin = 50;
  const double sx = (w - 2.0 * margin) / (x_hi - x_lo);
  const double sy = (hgt - 2.0 * margin) / kTwoPi;

  auto out = open_out(path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<!-- " << echo << " -->\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << hgt << "\" viewBox=\"0 0 " << w << ' ' << hgt
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"24\" font-size=\"15\" "
         "text-anchor=\"middle\" font-family=\"sans-serif\">"
      << title << "</text>\n";
  out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\""
      << w - 2 * margin << "\" height=\"" << hgt - 2 * margin
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  char buf[64];
  out << "<g fill=\"black\">\n";
  for (const auto& r : records) {
    for (const auto& p : r.poincare_points) {
      double ywrap = std::fmod(p.y, kTwoPi);
      if (ywrap < 0) ywrap += kTwoPi;
      const double px = margin + (p.x - x_lo) * sx;
      const double py = hgt - margin - ywrap * sy;
      std::snprintf(buf, sizeof(buf), "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"0.7\"/>\n",
                    px, py);
      out << buf;
    }
  }
  out << "</g>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"" << hgt - 14
      << "\" font-size=\"13\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\">x</text>\n";
  out << "<text x=\"16\" y=\"" << hgt / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" transform=\"rotate(-90 16 "
      << hgt / 2 << ")\">y</text>\n";
  out << "</svg>\n";
}

}  // namespace exb
