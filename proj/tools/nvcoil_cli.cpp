// Command-line front end: geometry reports, homogeneity profiles, field
// scans, winding-parameter searches, Rabi/ODMR synthesis and fitting.
// Exit codes: 0 success, 1 usage, 2 domain error, 3 I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "nvcoil/fitting.hpp"
#include "nvcoil/homogeneity.hpp"
#include "nvcoil/io.hpp"
#include "nvcoil/optimizer.hpp"
#include "nvcoil/spinsim.hpp"

namespace {

using namespace nvcoil;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw IoError("cannot write '" + out_path + "'");
  out << text;
}

struct GeometryChoice {
  std::string letter;
  std::string config_path;

  CoilGeometry resolve() const {
    if (!letter.empty() && !config_path.empty())
      throw std::invalid_argument("give either --geometry or --config, not both");
    if (!letter.empty()) return build_catalog(letter);
    if (!config_path.empty()) return parse_geometry_config(slurp(config_path));
    throw std::invalid_argument("need --geometry or --config");
  }
};

void add_geometry_flags(CLI::App* cmd, GeometryChoice& choice) {
  cmd->add_option("--geometry", choice.letter, "catalog letter (A, C, D, E, F)");
  cmd->add_option("--config", choice.config_path, "geometry config JSON file");
}

struct ParamRange {
  std::string name;
  double lower = 0.0, upper = 0.0, initial = 0.0;
  bool has_initial = false;
};

// name=lo:hi[:init], bounds in mm
ParamRange parse_param(const std::string& text) {
  ParamRange out;
  const auto eq = text.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("--param expects name=lo:hi[:init], got '" + text + "'");
  out.name = text.substr(0, eq);
  std::string rest = text.substr(eq + 1);
  for (char& c : rest)
    if (c == ':') c = ' ';
  std::istringstream ss(rest);
  if (!(ss >> out.lower >> out.upper))
    throw std::invalid_argument("--param expects name=lo:hi[:init], got '" + text + "'");
  if (ss >> out.initial) out.has_initial = true;
  return out;
}

SearchSpace make_space(const std::vector<std::string>& params, double extent_mm,
                       const IcdSpec& grid) {
  SearchSpace space;
  for (const std::string& text : params) {
    ParamRange pr = parse_param(text);
    const double init_mm = pr.has_initial ? pr.initial : 0.5 * (pr.lower + pr.upper);
    space.parameters.push_back(
        {pr.name, pr.lower * 1e-3, pr.upper * 1e-3, init_mm * 1e-3});
  }
  space.objective_extent = extent_mm * 1e-3;
  space.grid = grid;
  return space;
}

std::string search_outputs(const SearchResult& result, const std::string& trace_path) {
  if (!trace_path.empty()) {
    std::ofstream trace(trace_path);
    if (!trace) throw IoError("cannot write '" + trace_path + "'");
    write_trace_csv(result, trace);
  }
  return search_result_to_json(result) + "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"axisymmetric coil field mapping and NV ensemble signal toolkit"};
  app.require_subcommand(1);

  // ---- constants ----
  auto* constants = app.add_subcommand(
      "constants", "source current, Q factor, ringing time, wavelength");
  double f0_ghz = 2.87, df_mhz = 20.0, power_w = 10.0, impedance = 50.0;
  double c_override = 0.0, radius_mm = -1.0;
  bool paper_c = false, constants_json = false;
  constants->add_option("--f0-ghz", f0_ghz, "carrier frequency");
  constants->add_option("--df-mhz", df_mhz, "bandwidth");
  constants->add_option("--power-w", power_w, "source power");
  constants->add_option("--impedance-ohm", impedance, "source impedance");
  constants->add_flag("--paper-c", paper_c, "use c = 3.0e8 m/s");
  constants->add_option("--c-mps", c_override, "light speed override");
  constants->add_option("--radius-mm", radius_mm, "also print the phase lag of this turn radius");
  constants->add_flag("--json", constants_json, "emit JSON instead of text");
  std::string constants_out;
  constants->add_option("--out", constants_out, "output file (default stdout)");
  constants->callback([&] {
    double c = kLightSpeed;
    if (paper_c) c = kLightSpeedCompat;
    if (c_override > 0.0) c = c_override;
    const RfConstants rf = rf_constants(f0_ghz * 1e9, df_mhz * 1e6, c);
    const double imax = source_current(power_w, impedance);
    std::ostringstream ss;
    if (constants_json) {
      nlohmann::json doc{{"q_factor", rf.q_factor},
                         {"tau_c_ns", rf.ringing_time_s * 1e9},
                         {"lambda_mm", rf.wavelength_m * 1e3},
                         {"i_max_a", imax}};
      if (radius_mm >= 0.0)
        doc["phase_lag_rad"] = phase_lag(radius_mm * 1e-3, rf.wavelength_m);
      ss << doc.dump(2) << "\n";
    } else {
      ss << "Q=" << format_number(rf.q_factor) << "\n"
         << "tau_c_ns=" << format_number(rf.ringing_time_s * 1e9) << "\n"
         << "lambda_mm=" << format_number(rf.wavelength_m * 1e3) << "\n"
         << "i_max_a=" << format_number(imax) << "\n";
      if (radius_mm >= 0.0)
        ss << "phase_lag_rad="
           << format_number(phase_lag(radius_mm * 1e-3, rf.wavelength_m)) << "\n";
    }
    emit(ss.str(), constants_out);
  });

  // ---- report ----
  auto* report = app.add_subcommand(
      "report", "inhomogeneity table over the 0.25 / 0.6 mm half-lengths");
  std::string geometries = "A,C,D,E,F", report_format = "text", report_out;
  report->add_option("--geometries", geometries, "comma-separated catalog letters");
  report->add_option("--format", report_format, "csv or text")
      ->check(CLI::IsMember({"csv", "text"}));
  report->add_option("--out", report_out, "output file (default stdout)");
  report->callback([&] {
    std::vector<CoilGeometry> geoms;
    std::stringstream ss(geometries);
    std::string letter;
    while (std::getline(ss, letter, ','))
      if (!letter.empty()) geoms.push_back(build_catalog(letter));
    const auto rows = table_report(geoms);
    std::ostringstream out;
    if (report_format == "csv")
      write_table_csv(rows, out);
    else
      out << format_table_text(rows);
    emit(out.str(), report_out);
  });

  // ---- profile ----
  auto* profile = app.add_subcommand(
      "profile", "sigma_pp as a function of the ICD half-extent");
  GeometryChoice profile_geom;
  add_geometry_flags(profile, profile_geom);
  std::string profile_axis = "axial", profile_out, profile_svg;
  double ext_min = 0.05, ext_max = 1.5;
  int ext_steps = 30;
  IcdSpec profile_grid;
  double profile_diameter_um = 50.0;
  profile->add_option("--axis", profile_axis, "axial or radial")
      ->check(CLI::IsMember({"axial", "radial"}));
  profile->add_option("--min-mm", ext_min, "smallest extent");
  profile->add_option("--max-mm", ext_max, "largest extent");
  profile->add_option("--steps", ext_steps, "number of extents")->check(CLI::PositiveNumber);
  profile->add_option("--n-axial", profile_grid.n_axial, "axial grid points");
  profile->add_option("--n-radial", profile_grid.n_radial, "radial grid points");
  profile->add_option("--diameter-um", profile_diameter_um, "ICD diameter");
  profile->add_option("--out", profile_out, "output file (default stdout)");
  profile->add_option("--svg", profile_svg, "also write a line plot");
  profile->callback([&] {
    profile_grid.diameter = profile_diameter_um * 1e-6;
    const CoilGeometry g = profile_geom.resolve();
    std::vector<double> extents;
    for (int i = 0; i < ext_steps; ++i)
      extents.push_back((ext_min + (ext_max - ext_min) * i /
                         std::max(1, ext_steps - 1)) * 1e-3);
    const auto axis = profile_axis == "radial" ? ProfileAxis::Radial
                                               : ProfileAxis::Axial;
    const auto prof = homogeneity_profile(g, profile_grid, axis, extents);
    std::ostringstream out;
    write_profile_csv(prof, out);
    emit(out.str(), profile_out);
    if (!profile_svg.empty()) {
      SignalSeries s;
      s.x = 1e3 * Eigen::Map<const Eigen::ArrayXd>(prof.half_lengths.data(),
                                                   static_cast<Eigen::Index>(prof.half_lengths.size()));
      s.y = Eigen::Map<const Eigen::ArrayXd>(prof.sigma_pp.data(),
                                             static_cast<Eigen::Index>(prof.sigma_pp.size()));
      s.x_label = "half_length_mm";
      s.y_label = "sigma_pp_percent";
      std::ofstream svg(profile_svg);
      if (!svg) throw IoError("cannot write '" + profile_svg + "'");
      write_svg_lines({s}, "sigma_pp vs half-extent: " + g.name, svg);
    }
  });

  // ---- field ----
  auto* field = app.add_subcommand("field", "field phasor along a scan line");
  GeometryChoice field_geom;
  add_geometry_flags(field, field_geom);
  double field_r = 0.0, z_from = 0.0, z_to = 0.0;
  int field_steps = 1;
  std::string field_out;
  field->add_option("--r-mm", field_r, "radial coordinate of the scan");
  field->add_option("--z-mm", z_from, "z of a single sample (or scan start)");
  field->add_option("--z-to-mm", z_to, "scan end; defaults to --z-mm");
  field->add_option("--steps", field_steps, "samples along the scan")->check(CLI::PositiveNumber);
  field->add_option("--out", field_out, "output file (default stdout)");
  bool z_to_given = false;
  field->callback([&] {
    z_to_given = field->count("--z-to-mm") > 0;
    const CoilGeometry g = field_geom.resolve();
    const double z_end = z_to_given ? z_to : z_from;
    std::ostringstream out;
    out << "r_mm,z_mm,br_re_t,br_im_t,bz_re_t,bz_im_t,b_t\n";
    for (int i = 0; i < field_steps; ++i) {
      const double z = field_steps == 1
                           ? z_from
                           : z_from + (z_end - z_from) * i / (field_steps - 1);
      const FieldSample s = superpose(g, field_r * 1e-3, z * 1e-3);
      out << format_number(field_r) << ',' << format_number(z) << ','
          << format_number(s.br.real()) << ',' << format_number(s.br.imag())
          << ',' << format_number(s.bz.real()) << ','
          << format_number(s.bz.imag()) << ',' << format_number(s.magnitude)
          << '\n';
    }
    emit(out.str(), field_out);
  });

  // ---- sweep / refine ----
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "exhaustive grid search of winding parameters");
  auto* refine_cmd = app.add_subcommand(
      "refine", "coordinate-descent refinement of winding parameters");
  struct SearchArgs {
    std::string letter = "E";
    std::vector<std::string> params;
    double extent_mm = 0.25;
    IcdSpec grid;
    std::string out_path, trace_path;
  };
  SearchArgs sweep_args, refine_args;
  int sweep_steps = 11;
  long sweep_budget = 100000;
  double refine_tol = 1e-6;
  int refine_cycles = 60;
  for (auto [cmd, args] : {std::pair{sweep_cmd, &sweep_args},
                           std::pair{refine_cmd, &refine_args}}) {
    cmd->add_option("--geometry", args->letter, "catalog letter (D, E, F)");
    cmd->add_option("--param", args->params,
                    "name=lo:hi[:init], bounds in mm (repeatable)")
        ->required();
    cmd->add_option("--extent-mm", args->extent_mm, "objective ICD half-length");
    cmd->add_option("--n-axial", args->grid.n_axial, "axial grid points");
    cmd->add_option("--n-radial", args->grid.n_radial, "radial grid points");
    cmd->add_option("--out", args->out_path, "result JSON (default stdout)");
    cmd->add_option("--trace", args->trace_path, "trace CSV file");
  }
  sweep_cmd->add_option("--steps", sweep_steps, "points per axis");
  sweep_cmd->add_option("--budget", sweep_budget, "evaluation budget");
  refine_cmd->add_option("--tolerance", refine_tol, "stop when a cycle improves less (percent)");
  refine_cmd->add_option("--max-cycles", refine_cycles, "coordinate cycle cap");
  sweep_cmd->callback([&] {
    const GeometryTemplate tmpl(parse_catalog_id(sweep_args.letter));
    const SearchSpace space =
        make_space(sweep_args.params, sweep_args.extent_mm, sweep_args.grid);
    const SearchResult result = sweep(tmpl, space, sweep_steps, sweep_budget);
    emit(search_outputs(result, sweep_args.trace_path), sweep_args.out_path);
  });
  refine_cmd->callback([&] {
    const GeometryTemplate tmpl(parse_catalog_id(refine_args.letter));
    const SearchSpace space =
        make_space(refine_args.params, refine_args.extent_mm, refine_args.grid);
    const SearchResult result = refine(tmpl, space, refine_tol, refine_cycles);
    emit(search_outputs(result, refine_args.trace_path), refine_args.out_path);
  });

  // ---- rabi-synth ----
  auto* synth = app.add_subcommand("rabi-synth", "synthesize an ensemble Rabi signal");
  double synth_f0_mhz = 0.69, synth_dz = 0.05, synth_amp = 1.0, synth_off = 0.0;
  double synth_tmax_us = 0.0, noise_pct = 0.0, synth_trunc = 50.0, drive_scale = 1.0;
  double synth_extent_mm = 0.25;
  int synth_points = 512, synth_nodes = 20001;
  std::uint64_t synth_seed = 1;
  bool synth_numeric = false;
  GeometryChoice synth_geom;
  std::string synth_out, synth_svg;
  synth->add_option("--f0-mhz", synth_f0_mhz, "nominal Rabi frequency");
  synth->add_option("--delta-zeta", synth_dz, "Lorentzian width of the frequency spread");
  synth->add_option("--amplitude", synth_amp, "signal amplitude");
  synth->add_option("--offset", synth_off, "signal offset");
  synth->add_option("--t-max-us", synth_tmax_us, "trace length")->required();
  synth->add_option("--points", synth_points, "samples")->check(CLI::PositiveNumber);
  synth->add_flag("--numeric", synth_numeric, "use the quadrature ensemble");
  synth->add_option("--truncation", synth_trunc, "quadrature range in half-widths");
  synth->add_option("--nodes", synth_nodes, "quadrature nodes (odd)");
  add_geometry_flags(synth, synth_geom);
  synth->add_option("--extent-mm", synth_extent_mm, "ICD half-length of the field-map ensemble");
  synth->add_option("--drive-scale", drive_scale, "field scale of the field-map ensemble");
  synth->add_option("--noise-pct", noise_pct, "additive Gaussian noise, percent of amplitude");
  synth->add_option("--seed", synth_seed, "noise seed");
  synth->add_option("--out", synth_out, "output CSV (default stdout)");
  synth->add_option("--svg", synth_svg, "also write a line plot");
  synth->callback([&] {
    Eigen::ArrayXd t_us = Eigen::ArrayXd::LinSpaced(synth_points, 0.0, synth_tmax_us);
    const Eigen::ArrayXd t_s = t_us * 1e-6;
    Eigen::ArrayXd y;
    if (!synth_geom.letter.empty() || !synth_geom.config_path.empty()) {
      const CoilGeometry g = synth_geom.resolve();
      IcdSpec spec;
      spec.half_length = synth_extent_mm * 1e-3;
      const auto points = icd_samples(spec);
      std::vector<FieldSample> samples;
      samples.reserve(points.size());
      for (const auto& [r, z] : points) samples.push_back(superpose(g, r, z));
      const std::vector<double> weights(samples.size(), 1.0);
      y = synth_amp * rabi_from_field_map(samples, weights, NvConstants{},
                                          drive_scale, t_s) + synth_off;
    } else {
      RabiModel model{2.0 * std::numbers::pi * synth_f0_mhz * 1e6, synth_dz,
                      synth_amp, synth_off};
      y = synth_numeric
              ? rabi_lorentzian_numeric(model, t_s, synth_trunc, synth_nodes)
              : rabi_closed_form(model, t_s);
    }
    if (noise_pct > 0.0)
      y += (noise_pct / 100.0) * synth_amp *
           deterministic_gaussian(synth_seed, y.size());
    SignalSeries series{t_us, y, "t_us", "signal"};
    std::ostringstream out;
    write_signal_csv(series, out);
    emit(out.str(), synth_out);
    if (!synth_svg.empty()) {
      std::ofstream svg(synth_svg);
      if (!svg) throw IoError("cannot write '" + synth_svg + "'");
      write_svg_lines({series}, "ensemble Rabi signal", svg);
    }
  });

  // ---- rabi-fit ----
  auto* rabi_fit = app.add_subcommand("rabi-fit", "fit a decaying cosine to t_us,signal CSV");
  std::string fit_in, fit_out;
  rabi_fit->add_option("--in", fit_in, "input CSV")->required();
  rabi_fit->add_option("--out", fit_out, "output JSON (default stdout)");
  rabi_fit->callback([&] {
    const SignalSeries series = read_signal_csv(fit_in);
    const FitResult fit = fit_decaying_cosine(series.x * 1e-6, series.y);
    nlohmann::json doc{{"a", fit.amplitude},
                       {"b", fit.offset},
                       {"t_us", fit.decay_time * 1e6},
                       {"f_mhz", fit.frequency * 1e-6},
                       {"q_rad", fit.phase},
                       {"residual_rms", fit.residual_rms},
                       {"delta_zeta", delta_zeta(fit.frequency, fit.decay_time)}};
    emit(doc.dump(2) + "\n", fit_out);
  });

  // ---- odmr-fit ----
  auto* odmr = app.add_subcommand("odmr-fit", "fit a Gaussian dip to f_ghz,signal CSV");
  std::string odmr_in, odmr_out, odmr_branch = "none";
  odmr->add_option("--in", odmr_in, "input CSV")->required();
  odmr->add_option("--branch", odmr_branch, "Zeeman branch for the bias-field estimate")
      ->check(CLI::IsMember({"none", "lower", "upper"}));
  odmr->add_option("--out", odmr_out, "output JSON (default stdout)");
  odmr->callback([&] {
    const SignalSeries series = read_signal_csv(odmr_in);
    const OdmrFit fit = fit_gaussian_dip(series.x * 1e9, series.y);
    nlohmann::json doc{{"center_ghz", fit.center * 1e-9},
                       {"width_mhz", fit.width * 1e-6},
                       {"width_convention", kOdmrWidthConvention},
                       {"contrast", fit.contrast},
                       {"baseline", fit.baseline},
                       {"residual_rms", fit.residual_rms}};
    if (odmr_branch != "none") {
      const auto branch = odmr_branch == "lower" ? ZeemanBranch::Lower
                                                 : ZeemanBranch::Upper;
      doc["bias_mt"] = resonance_to_bias(fit.center, branch) * 1e3;
    }
    emit(doc.dump(2) + "\n", odmr_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints the usage message
    return code == 0 ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const nvcoil::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
