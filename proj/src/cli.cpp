#include "epm/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "epm/analysis.hpp"
#include "epm/errors.hpp"
#include "epm/kernels.hpp"

namespace epm::cli {

using json = nlohmann::ordered_json;
using std::numbers::pi;

std::string format_float(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", x);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

}  // namespace

double parse_quantity(const std::string& text, const std::string& native) {
  std::istringstream in(trim(text));
  double value;
  if (!(in >> value)) throw config_error("not a number: '" + text + "'");
  std::string suffix;
  in >> suffix;

  if (suffix.empty()) suffix = native;
  // lengths -> um
  if (suffix == "nm") return value * 1e-3;
  if (suffix == "um" || suffix == "µm") return value;
  if (suffix == "mm") return value * 1e3;
  if (suffix == "cm") return value * 1e4;
  if (suffix == "m") return value * 1e6;
  // times -> ps
  if (suffix == "fs") return value * 1e-3;
  if (suffix == "ps") return value;
  if (suffix == "ns") return value * 1e3;
  // ordinary frequencies -> angular, rad/ps
  if (suffix == "THz") return 2.0 * pi * value;
  if (suffix == "GHz") return 2.0 * pi * value * 1e-3;
  if (suffix == "radps") return value;  // native angular frequency
  throw config_error("unknown unit suffix '" + suffix + "' in '" + text + "'");
}

namespace {

// Minimal sectioned key = value reader.
struct IniFile {
  std::map<std::string, std::map<std::string, std::string>> sections;

  bool has(const std::string& sec, const std::string& key) const {
    auto s = sections.find(sec);
    return s != sections.end() && s->second.count(key) > 0;
  }
  std::string get(const std::string& sec, const std::string& key) const {
    auto s = sections.find(sec);
    if (s == sections.end() || !s->second.count(key))
      throw config_error("missing required key [" + sec + "] " + key);
    return s->second.at(key);
  }
  std::string get_or(const std::string& sec, const std::string& key,
                     const std::string& fallback) const {
    return has(sec, key) ? sections.at(sec).at(key) : fallback;
  }
};

IniFile parse_ini(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path.string());
  IniFile ini;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error(path.string() + ":" + std::to_string(lineno) +
                           ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      ini.sections[section];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(path.string() + ":" + std::to_string(lineno) +
                         ": expected key = value");
    if (section.empty())
      throw config_error(path.string() + ":" + std::to_string(lineno) +
                         ": key outside any [section]");
    ini.sections[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return ini;
}

BeamDispersion parse_beam(const IniFile& ini, const std::string& prefix,
                          double omega_ref) {
  BeamDispersion d;
  d.omega_ref = omega_ref;
  d.k0 = parse_quantity(ini.get("crystal", prefix + "_k0"), "radps");
  d.k1 = parse_quantity(ini.get("crystal", prefix + "_k1"), "radps");
  d.k2 = parse_quantity(ini.get("crystal", prefix + "_k2"), "radps");
  return d;
}

}  // namespace

RunConfig load_config(const std::filesystem::path& path) {
  const IniFile ini = parse_ini(path);
  RunConfig cfg;

  if (!ini.sections.count("crystal"))
    throw config_error("missing [crystal] section");
  if (!ini.sections.count("pump")) throw config_error("missing [pump] section");

  // pump first; the crystal expansion centers depend on omega_p
  const bool has_wl = ini.has("pump", "wavelength");
  const bool has_wp = ini.has("pump", "omega_p");
  if (has_wl == has_wp)
    throw config_error(
        "[pump] needs exactly one of 'wavelength' or 'omega_p'");
  double omega_p;
  if (has_wl) {
    const double lambda = parse_quantity(ini.get("pump", "wavelength"), "um");
    if (!(lambda > 0)) throw config_error("[pump] wavelength must be positive");
    omega_p = 2.0 * pi * constants::c / lambda;
  } else {
    omega_p = parse_quantity(ini.get("pump", "omega_p"), "radps");
  }
  const bool has_bw = ini.has("pump", "bandwidth");
  const bool has_fwhm = ini.has("pump", "fwhm");
  if (has_bw == has_fwhm)
    throw config_error("[pump] needs exactly one of 'bandwidth' or 'fwhm'");
  double bandwidth;
  if (has_bw) {
    bandwidth = parse_quantity(ini.get("pump", "bandwidth"), "radps");
  } else {
    // Gaussian transform-limited pulse: Omega_p = 4 sqrt(ln 2) / FWHM
    const double fwhm = parse_quantity(ini.get("pump", "fwhm"), "ps");
    if (!(fwhm > 0)) throw config_error("[pump] fwhm must be positive");
    bandwidth = 4.0 * std::sqrt(std::numbers::ln2) / fwhm;
  }
  if (!(bandwidth > 0)) throw config_error("[pump] bandwidth must be positive");
  cfg.pump = {omega_p, bandwidth};

  const double length = parse_quantity(ini.get("crystal", "L"), "um");
  if (ini.has("crystal", "preset")) {
    cfg.preset_name = ini.get("crystal", "preset");
    cfg.crystal = preset(cfg.preset_name, length);
  } else {
    cfg.crystal.pump = parse_beam(ini, "pump", omega_p);
    cfg.crystal.signal = parse_beam(ini, "signal", omega_p / 2);
    cfg.crystal.idler = parse_beam(ini, "idler", omega_p / 2);
    cfg.crystal.length = length;
    cfg.crystal.pump_center = omega_p;
  }
  if (std::abs(cfg.crystal.pump_center - omega_p) >
      1e-9 * omega_p)
    throw config_error(
        "[pump] frequency does not match the crystal preset design point");

  const std::string grating = ini.get_or("crystal", "grating", "solve");
  if (grating == "solve") {
    cfg.solve_grating = true;
    cfg.grating_um.reset();
  } else if (grating == "none") {
    cfg.solve_grating = false;
    cfg.grating_um.reset();
  } else {
    cfg.solve_grating = false;
    cfg.grating_um = parse_quantity(grating, "um");
  }

  cfg.grid_n = static_cast<int>(
      parse_quantity(ini.get_or("grid", "n", "512"), "radps"));
  const std::string span = ini.get_or("grid", "span", "auto");
  if (span == "auto")
    cfg.grid_span.reset();
  else
    cfg.grid_span = parse_quantity(span, "radps");

  const std::string mode = ini.get_or("scan", "mode", "hom");
  if (mode == "hom")
    cfg.scan_mode = ScanMode::hom;
  else if (mode == "mz")
    cfg.scan_mode = ScanMode::mz;
  else
    throw config_error("[scan] mode must be hom or mz, got '" + mode + "'");

  const std::string state = ini.get_or("scan", "state", "grid");
  if (state == "tb")
    cfg.scan_state = StateKind::tb;
  else if (state == "db")
    cfg.scan_state = StateKind::db;
  else if (state == "grid" || state == "db_l")
    cfg.scan_state = StateKind::db_l;
  else
    throw config_error("[scan] state must be tb, db or grid, got '" + state +
                       "'");

  cfg.tau_min = parse_quantity(ini.get_or("scan", "tau_min", "-6"), "ps");
  cfg.tau_max = parse_quantity(ini.get_or("scan", "tau_max", "6"), "ps");
  cfg.scan_points = static_cast<int>(
      parse_quantity(ini.get_or("scan", "points", "1201"), "radps"));
  if (cfg.scan_points < 2 || !(cfg.tau_min < cfg.tau_max))
    throw config_error("[scan] needs points >= 2 and tau_min < tau_max");

  cfg.out_dir = ini.get_or("output", "dir", ".");
  cfg.format = ini.get_or("output", "format", "csv");
  if (cfg.format != "csv" && cfg.format != "json")
    throw config_error("[output] format must be csv or json");
  return cfg;
}

namespace {

// config values round-trip exactly, unlike the 9-digit data files
std::string full_precision(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string serialize(const RunConfig& cfg) {
  std::ostringstream out;
  out << "[crystal]\n";
  if (!cfg.preset_name.empty()) {
    out << "preset = " << cfg.preset_name << "\n";
  } else {
    auto beam = [&](const char* p, const BeamDispersion& d) {
      out << p << "_k0 = " << full_precision(d.k0) << "\n"
          << p << "_k1 = " << full_precision(d.k1) << "\n"
          << p << "_k2 = " << full_precision(d.k2) << "\n";
    };
    beam("pump", cfg.crystal.pump);
    beam("signal", cfg.crystal.signal);
    beam("idler", cfg.crystal.idler);
  }
  out << "L = " << full_precision(cfg.crystal.length) << " um\n";
  if (cfg.solve_grating)
    out << "grating = solve\n";
  else if (cfg.grating_um)
    out << "grating = " << full_precision(*cfg.grating_um) << " um\n";
  else
    out << "grating = none\n";
  out << "\n[pump]\n";
  out << "omega_p = " << full_precision(cfg.pump.omega_p) << "\n";
  out << "bandwidth = " << full_precision(cfg.pump.bandwidth) << "\n";
  out << "\n[grid]\n";
  out << "n = " << cfg.grid_n << "\n";
  if (cfg.grid_span)
    out << "span = " << full_precision(*cfg.grid_span) << "\n";
  else
    out << "span = auto\n";
  out << "\n[scan]\n";
  out << "mode = " << to_string(cfg.scan_mode) << "\n";
  out << "state = "
      << (cfg.scan_state == StateKind::tb
              ? "tb"
              : cfg.scan_state == StateKind::db ? "db" : "grid")
      << "\n";
  out << "tau_min = " << full_precision(cfg.tau_min) << " ps\n";
  out << "tau_max = " << full_precision(cfg.tau_max) << " ps\n";
  out << "points = " << cfg.scan_points << "\n";
  out << "\n[output]\n";
  out << "dir = " << cfg.out_dir.string() << "\n";
  out << "format = " << cfg.format << "\n";
  return out.str();
}

namespace {

CrystalConfig resolved_crystal(const RunConfig& cfg, double* grating_out) {
  CrystalConfig c = cfg.crystal;
  if (cfg.solve_grating) {
    const double period = solve_grating_period(c);
    c = with_grating(std::move(c), period);
  } else if (cfg.grating_um) {
    c = with_grating(std::move(c), *cfg.grating_um);
  }
  if (grating_out)
    *grating_out = c.poling_period ? *c.poling_period : 0.0;
  return c;
}

FrequencyGrid resolved_grid(const RunConfig& cfg, const CrystalConfig& c) {
  if (cfg.grid_span) return FrequencyGrid{cfg.grid_n, *cfg.grid_span};
  return default_grid(c, cfg.pump, cfg.grid_n);
}

json config_json(const RunConfig& cfg) {
  json j;
  j["preset"] = cfg.preset_name;
  j["L_um"] = cfg.crystal.length;
  j["grating"] = cfg.solve_grating
                     ? json("solve")
                     : (cfg.grating_um ? json(*cfg.grating_um) : json("none"));
  j["omega_p_radps"] = cfg.pump.omega_p;
  j["pump_bandwidth_radps"] = cfg.pump.bandwidth;
  j["grid_n"] = cfg.grid_n;
  j["grid_span_radps"] = cfg.grid_span ? json(*cfg.grid_span) : json("auto");
  j["scan_mode"] = to_string(cfg.scan_mode);
  j["scan_state"] = to_string(cfg.scan_state);
  j["tau_min_ps"] = cfg.tau_min;
  j["tau_max_ps"] = cfg.tau_max;
  j["scan_points"] = cfg.scan_points;
  return j;
}

json derived_json(const CrystalConfig& c, const PumpSpectrum& pump) {
  const PhaseMatchReport pm = check_extended_pm(c);
  json j;
  j["gamma_ps_per_um"] = pm.gamma;
  j["mu_ps2_per_um"] = pm.mu;
  j["type_ii_gap_ps_per_um"] = pm.type_ii_gap;
  j["residual_index"] = pm.residual_index;
  j["residual_slowness_ps_per_um"] = pm.residual_slowness;
  j["extended_pm_satisfied"] = pm.satisfied;
  if (pm.type_ii_gap > 0.0) j["omega_f_radps"] = omega_f(c);
  if (pm.gamma > 0.0 && pm.mu > 0.0) {
    const LengthWindow w = length_window(c, pump.bandwidth);
    j["length_window_um"] = {w.l_min, w.l_max};
  }
  return j;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw config_error("cannot write output file: " + p.string());
  out << text;
}

// nan -> null keeps the report valid JSON
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

struct Columns {
  std::vector<std::string> names;
  std::vector<const std::vector<double>*> data;
};

std::string render_table(const Columns& cols, const std::string& format) {
  std::ostringstream out;
  const std::size_t rows = cols.data.empty() ? 0 : cols.data[0]->size();
  if (format == "json") {
    json j;
    for (std::size_t c = 0; c < cols.names.size(); ++c)
      j[cols.names[c]] = *cols.data[c];
    return j.dump(2) + "\n";
  }
  for (std::size_t c = 0; c < cols.names.size(); ++c)
    out << (c ? "," : "") << cols.names[c];
  out << "\n";
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols.names.size(); ++c)
      out << (c ? "," : "") << format_float((*cols.data[c])[r]);
    out << "\n";
  }
  return out.str();
}

std::string data_extension(const std::string& format) {
  return format == "json" ? ".json" : ".csv";
}

}  // namespace

int run(const RunConfig& cfg_in, const std::string& subcommand) {
  RunConfig cfg = cfg_in;
  if (const char* env = std::getenv("EPM_OUT_DIR")) cfg.out_dir = env;

  try {
    std::filesystem::create_directories(cfg.out_dir);

    json report;
    report["subcommand"] = subcommand;
    report["inputs"] = config_json(cfg);
    json files = json::array();

    double grating = 0.0;
    const CrystalConfig crystal = resolved_crystal(cfg, &grating);
    report["derived"] = derived_json(crystal, cfg.pump);
    if (crystal.poling_period)
      report["derived"]["grating_period_um"] = *crystal.poling_period;

    if (subcommand == "design") {
      const LengthWindow w = length_window(crystal, cfg.pump.bandwidth);
      json obs;
      obs["grating_period_um"] =
          crystal.poling_period ? json(*crystal.poling_period) : json(nullptr);
      obs["length_window_um"] = {w.l_min, w.l_max};
      obs["length_um"] = crystal.length;
      json warnings = json::array();
      if (crystal.length < 3.0 * w.l_min)
        warnings.push_back("crystal length within a factor 3 of the lower "
                           "validity bound");
      if (crystal.length > w.l_max / 3.0)
        warnings.push_back("crystal length within a factor 3 of the upper "
                           "validity bound");
      for (const auto& wmsg : warnings)
        std::cerr << "warning: " << wmsg.get<std::string>() << "\n";
      obs["length_warnings"] = warnings;
      report["observables"] = obs;
    } else if (subcommand == "jsa") {
      const FrequencyGrid grid = resolved_grid(cfg, crystal);
      const JsaGrid j = build_jsa(crystal, cfg.pump, grid);

      std::vector<double> nu_s, nu_i, re, im;
      nu_s.reserve(j.values.size());
      for (int a = 0; a < grid.n; ++a)
        for (int b = 0; b < grid.n; ++b) {
          nu_s.push_back(grid.nu(a));
          nu_i.push_back(grid.nu(b));
          re.push_back(j.at(a, b).real());
          im.push_back(j.at(a, b).imag());
        }
      const auto path =
          cfg.out_dir / ("jsa_grid" + data_extension(cfg.format));
      write_text(path, render_table(
                           {{"nu_s", "nu_i", "re", "im"},
                            {&nu_s, &nu_i, &re, &im}},
                           cfg.format));
      files.push_back(path.string());

      // sum/difference-axis RMS widths of the spectral weight
      const int n = grid.n;
      const double d = grid.spacing();
      std::vector<double> w(j.values.size());
      kernels::active().abs2(j.values.data(), w.data(), w.size());
      double tot = 0, m1s = 0, m2s = 0, m1d = 0, m2d = 0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const double wv = w[static_cast<std::size_t>(a) * n + b];
          const double sum = grid.nu(a) + grid.nu(b);
          const double diff = grid.nu(a) - grid.nu(b);
          tot += wv;
          m1s += wv * sum;
          m2s += wv * sum * sum;
          m1d += wv * diff;
          m2d += wv * diff * diff;
        }
      json obs;
      obs["l2_norm_sq"] = j.l2_norm_sq();
      obs["sum_axis_rms_radps"] =
          std::sqrt(std::max(0.0, m2s / tot - (m1s / tot) * (m1s / tot)));
      obs["diff_axis_rms_radps"] =
          std::sqrt(std::max(0.0, m2d / tot - (m1d / tot) * (m1d / tot)));
      obs["grid_n"] = n;
      obs["grid_span_radps"] = grid.span;

      const auto [sig, idl] = marginal_spectra(j);
      std::vector<double> nus(n);
      for (int a = 0; a < n; ++a) nus[a] = grid.nu(a);
      const auto mpath =
          cfg.out_dir / ("jsa_marginals" + data_extension(cfg.format));
      write_text(mpath, render_table({{"nu", "signal", "idler"},
                                      {&nus, &sig, &idl}},
                                     cfg.format));
      files.push_back(mpath.string());
      report["observables"] = obs;
    } else if (subcommand == "hom" || subcommand == "mz") {
      const ScanMode mode =
          subcommand == "hom" ? ScanMode::hom : ScanMode::mz;
      ScanResult r;
      if (cfg.scan_state == StateKind::tb) {
        r = scan(make_tb_limit_state(crystal), mode, cfg.tau_min, cfg.tau_max,
                 cfg.scan_points);
      } else if (cfg.scan_state == StateKind::db) {
        r = scan(make_db_limit_state(cfg.pump), mode, cfg.tau_min,
                 cfg.tau_max, cfg.scan_points);
      } else {
        const FrequencyGrid grid = resolved_grid(cfg, crystal);
        r = scan(build_jsa(crystal, cfg.pump, grid), mode, cfg.tau_min,
                 cfg.tau_max, cfg.scan_points);
      }
      const auto path =
          cfg.out_dir / (subcommand + "_scan" + data_extension(cfg.format));
      write_text(path,
                 render_table({{"tau", "P"}, {&r.tau, &r.p}}, cfg.format));
      files.push_back(path.string());

      json obs;
      obs["state_kind"] = to_string(r.kind);
      obs["visibility"] = num(visibility(r));
      if (mode == ScanMode::hom) {
        obs["dip_width_ps"] = num(dip_width(r));
      } else {
        obs["envelope_fwhm_ps"] = num(envelope_fwhm(r));
      }
      report["observables"] = obs;
    } else if (subcommand == "schmidt") {
      const FrequencyGrid grid = resolved_grid(cfg, crystal);
      const JsaGrid j = build_jsa(crystal, cfg.pump, grid);
      const SchmidtSpectrum s = schmidt_decompose(j);
      json obs;
      obs["schmidt_number"] = s.schmidt_number;
      obs["entropy"] = s.entropy;
      obs["truncation_mass"] = s.truncation_mass;
      obs["coefficients"] = s.coefficients;
      report["observables"] = obs;
    } else if (subcommand == "timedomain") {
      const FrequencyGrid grid = resolved_grid(cfg, crystal);
      const JsaGrid j = build_jsa(crystal, cfg.pump, grid);
      const TimeDomainAmplitude t = time_domain(j);
      const int n = grid.n;
      std::vector<double> ts, ti, density;
      ts.reserve(t.values.size());
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          ts.push_back(t.times[a]);
          ti.push_back(t.times[b]);
          density.push_back(
              std::norm(t.values[static_cast<std::size_t>(a) * n + b]));
        }
      const auto path =
          cfg.out_dir / ("timedomain_grid" + data_extension(cfg.format));
      write_text(path, render_table({{"t_s", "t_i", "density"},
                                     {&ts, &ti, &density}},
                                    cfg.format));
      files.push_back(path.string());
      json obs;
      obs["width_diff_axis_ps"] = t.width_diff;
      obs["width_sum_axis_ps"] = t.width_sum;
      obs["t0_ps"] = t.t0;
      obs["parseval_norm_sq"] = t.l2_norm_sq();
      report["observables"] = obs;
    } else {
      throw config_error("unknown subcommand: " + subcommand);
    }

    report["files"] = files;
    const auto rpath = cfg.out_dir / (subcommand + "_report.json");
    write_text(rpath, report.dump(2) + "\n");
    return 0;
  } catch (const physics_error& e) {
    std::cerr << "physics error: " << e.what() << "\n";
    return 2;
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace epm::cli
