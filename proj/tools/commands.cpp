#include "commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "exonav/exonav.hpp"
#include "svg_plot.hpp"

namespace exonav::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr const char* kUnitsFooter =
    "Units: lengths in mm, tension in N, angles in degrees on the command "
    "line (radians in CSV files).";

struct Options {
  std::string spec_path;
  std::string output;
  double stroke = 0.0;
  double tension = 0.0;
  double theta_deg = 0.0;
  std::size_t samples = kDefaultBackboneSamples;
  std::size_t eta_steps = kDefaultEtaSteps;
  bool retract = false;
  std::string backbone_out;

  double stroke_min = 0.0;
  double stroke_max = 4.0;
  std::size_t steps = 41;
  std::vector<double> markers = reference_marker_arclengths();
  double sigma_pos = 0.0;
  double sigma_stroke = 0.0;
  std::uint64_t seed = 0;

  std::string method;
  std::string input;
  std::optional<double> predict_s;
  std::string predict_out;

  std::vector<std::string> compare_files;
  std::string per_sample_out;

  std::string curve;
  std::string phantom;
  std::optional<double> tube_radius;

  std::vector<std::string> plot_inputs;
  std::string title = "exonav";

  double phantom_radius = 4.0;
  double demo_stroke = 5.0;
};

io::SpecBundle resolve_spec(const Options& opt) {
  if (!opt.spec_path.empty()) return io::load_spec(opt.spec_path);
  if (const char* env = std::getenv(kSpecEnvVar); env != nullptr && *env != '\0') {
    return io::load_spec(env);
  }
  return {TubeSpec::reference_prototype(), TendonSpec::reference_prototype()};
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    io::write_text_atomic(path, text);
  }
}

std::vector<double> eta_grid(std::size_t steps, bool retract) {
  auto grid = uniform_grid(1.0, steps);
  if (retract) std::reverse(grid.begin(), grid.end());
  return grid;
}

int cmd_geometry(const Options& opt, std::ostream& out, std::ostream& err) {
  const io::SpecBundle spec = resolve_spec(opt);
  const DerivedGeometry geom = derive_geometry(spec.tube);
  const PatternReport report = pattern_consistency(spec.tube);

  std::ostream& table = opt.output.empty() ? err : out;
  table << std::setprecision(6) << std::fixed;
  table << "notch neutral-axis offset   y_na_notch = " << geom.notch_na_offset << " mm\n"
        << "composite neutral-axis      y_na       = " << geom.composite_na_offset << " mm\n"
        << "neutral-axis length         l_na       = " << geom.na_length << " mm\n"
        << "tendon to neutral axis      d_t_na     = " << geom.tendon_na_distance << " mm\n"
        << "slack tendon length         l_t0       = " << geom.slack_tendon_length << " mm\n"
        << "notch count                            = " << report.notch_count << '\n'
        << "circumferential closure ratio          = " << report.closure_ratio << '\n'
        << "half-angle residual                    = "
        << rad_to_deg(report.half_angle_residual) << " deg\n";
  table << std::defaultfloat;

  if (spec.tube.psi_max == kPi) {
    err << "warning: psi_max is 180 deg, the notch offset is zero (full annulus)\n";
  }
  for (const auto& w : report.warnings()) {
    err << "warning: " << w << '\n';
  }
  emit(io::derived_geometry_json(geom), opt.output, out);
  return kOk;
}

int cmd_shape(const Options& opt, std::ostream& out, std::ostream&) {
  const io::SpecBundle spec = resolve_spec(opt);
  const DerivedGeometry geom = derive_geometry(spec.tube);
  const JointState joint = joint_from_stroke(opt.stroke, opt.tension, spec.tendon,
                                             geom, deg_to_rad(opt.theta_deg));
  const auto grid = uniform_grid(geom.na_length, opt.samples);
  emit(io::curve_csv(forward_kinematics(joint, geom, grid)), opt.output, out);
  return kOk;
}

int cmd_sweep(const Options& opt, std::ostream& out, std::ostream& err) {
  if (opt.output.empty()) {
    throw ValidationError("sweep needs --output DIR");
  }
  const io::SpecBundle spec = resolve_spec(opt);
  auto profile = linear_stroke_profile(opt.stroke_min, opt.stroke_max, opt.steps);
  for (auto& sample : profile) sample.tension = opt.tension;
  const NoiseSpec noise{opt.sigma_pos, opt.sigma_stroke, opt.seed};
  const SyntheticDataset data =
      synthetic_sweep(spec.tube, spec.tendon, profile, opt.markers, noise,
                      deg_to_rad(opt.theta_deg));
  for (const auto& f : data.failures) {
    err << "warning: sample " << f.index << ": " << f.message << '\n';
  }
  if (data.sample_index.empty()) {
    throw DomainError(DomainError::Reason::over_actuated,
                      "every stroke in the sweep was rejected by the model");
  }
  io::write_dataset_bundle(opt.output, data);
  out << "wrote " << data.sample_index.size() << " samples to " << opt.output << '\n';
  return kOk;
}

int cmd_ftl(const Options& opt, std::ostream& out, std::ostream&) {
  const io::SpecBundle spec = resolve_spec(opt);
  const DerivedGeometry geom = derive_geometry(spec.tube);
  const JointState joint = joint_from_stroke(opt.stroke, opt.tension, spec.tendon,
                                             geom, deg_to_rad(opt.theta_deg));
  const auto grid = eta_grid(opt.eta_steps, opt.retract);
  const FtlRun run = ftl_run(joint, geom, grid);
  emit(io::tip_csv(run.tip), opt.output, out);
  if (!opt.backbone_out.empty()) {
    // Final backbone sampled at s = eta * l_na over the same grid.
    const auto& widest = opt.retract ? run.exposed.front() : run.exposed.back();
    io::write_text_atomic(opt.backbone_out, io::curve_csv(widest));
  }
  return kOk;
}

int cmd_estimate(const Options& opt, std::ostream& out, std::ostream& err) {
  const io::SpecBundle spec = resolve_spec(opt);
  const DerivedGeometry geom = derive_geometry(spec.tube);
  const io::Track track = io::load_track(opt.input);
  const double theta = deg_to_rad(opt.theta_deg);

  EstimateResult est;
  if (opt.method == "stroke") {
    if (track.actuation.empty()) {
      throw ValidationError("stroke method needs dl_t_mm,T_N columns in the input");
    }
    est = stroke_based_estimate(track.actuation, geom, spec.tendon, theta);
  } else {
    est = position_based_estimate(track.points, geom, theta);
  }
  for (const auto& f : est.failures) {
    err << "warning: sample " << f.index << ": " << f.message << '\n';
  }
  if (est.joint_series.empty() && !track.points.empty()) {
    throw DomainError(DomainError::Reason::unreachable,
                      "no sample could be estimated");
  }

  std::vector<io::JointRow> rows;
  for (std::size_t k = 0; k < est.joint_series.size(); ++k) {
    const std::size_t i = est.sample_index[k];
    const JointState& j = est.joint_series[k];
    if (!track.actuation.empty()) {
      rows.push_back({track.actuation[i].stroke, track.actuation[i].tension, j});
    } else {
      const double implied = geom.slack_tendon_length -
          tendon_length_from_cylinder(j.cylinder_radius, j.cylinder_height, geom);
      rows.push_back({implied, 0.0, j});
    }
  }
  emit(io::joints_csv(rows), opt.output, out);

  if (opt.predict_s) {
    io::Track predicted;
    predicted.by_arclength = track.by_arclength;
    for (std::size_t k = 0; k < est.joint_series.size(); ++k) {
      predicted.index.push_back(track.index[est.sample_index[k]]);
      predicted.points.push_back(
          backbone_point(est.joint_series[k], geom, *opt.predict_s));
    }
    if (opt.predict_out.empty()) {
      throw ValidationError("--predict-s needs --predict-out PATH");
    }
    io::write_text_atomic(opt.predict_out, io::track_csv(predicted));
  }
  return kOk;
}

int cmd_compare(const Options& opt, std::ostream& out, std::ostream&) {
  const io::Track a = io::load_track(opt.compare_files.at(0));
  const io::Track b = io::load_track(opt.compare_files.at(1));
  if (a.by_arclength != b.by_arclength) {
    throw ValidationError("cannot compare an eta-indexed track with an s-indexed one");
  }
  std::vector<double> index;
  TrajectoryComparison cmp;
  if (a.by_arclength) {
    cmp = compare_points(a.points, b.points);
    index = a.index;
  } else {
    RepeatabilityResult r =
        repeatability_compare(io::to_tip_trajectory(a), io::to_tip_trajectory(b));
    cmp = std::move(r.comparison);
    index = std::move(r.eta);
  }
  out << io::comparison_json(cmp) << '\n';
  if (!opt.per_sample_out.empty()) {
    std::string csv = a.by_arclength ? "s_mm,distance_mm\n" : "eta,distance_mm\n";
    for (std::size_t i = 0; i < cmp.per_sample_distances.size(); ++i) {
      csv += io::format_number(index[i]) + "," +
             io::format_number(cmp.per_sample_distances[i]) + "\n";
    }
    io::write_text_atomic(opt.per_sample_out, csv);
  }
  return kOk;
}

int cmd_clearance(const Options& opt, std::ostream& out, std::ostream&) {
  const io::SpecBundle spec = resolve_spec(opt);
  const DerivedGeometry geom = derive_geometry(spec.tube);
  const BackboneCurve curve =
      io::to_backbone_curve(io::load_track(opt.curve), geom.na_length);
  const PhantomSpec phantom = io::parse_phantom_json(io::read_text(opt.phantom));
  const double tube_radius = opt.tube_radius.value_or(spec.tube.outer_radius);
  const ClearanceResult r = phantom_clearance(curve, phantom, tube_radius);
  ordered_json doc{{"min_clearance_mm", r.min_clearance},
                   {"collides", r.collides},
                   {"closest_index", r.closest_index}};
  out << doc.dump() << '\n';
  return kOk;
}

int cmd_plot(const Options& opt, std::ostream& out, std::ostream&) {
  std::vector<PlotSeries> series;
  for (const auto& path : opt.plot_inputs) {
    series.push_back({fs::path(path).filename().string(), io::load_track(path).points});
  }
  emit(render_svg(series, opt.title), opt.output, out);
  return kOk;
}

int cmd_demo(const Options& opt, std::ostream& out, std::ostream& err) {
  const fs::path dir = opt.output.empty() ? fs::path("exonav_demo") : fs::path(opt.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "'");

  const io::SpecBundle spec = resolve_spec(opt);
  const DerivedGeometry geom = derive_geometry(spec.tube);
  io::write_text_atomic(dir / "derived_geometry.json", io::derived_geometry_json(geom));

  const double theta = deg_to_rad(opt.theta_deg);
  const auto profile = linear_stroke_profile(0.0, opt.demo_stroke, 11);
  const SyntheticDataset data =
      synthetic_sweep(spec.tube, spec.tendon, profile, reference_marker_arclengths(),
                      NoiseSpec{opt.sigma_pos, opt.sigma_stroke, opt.seed}, theta);
  io::write_dataset_bundle(dir / "sweep", data);
  for (const auto& f : data.failures) {
    err << "warning: sweep sample " << f.index << ": " << f.message << '\n';
  }

  const JointState joint =
      joint_from_stroke(opt.demo_stroke, 0.0, spec.tendon, geom, theta);
  const auto grid = eta_grid(opt.eta_steps, false);
  const FtlRun run = ftl_run(joint, geom, grid);
  io::write_text_atomic(dir / "ftl_tip.csv", io::tip_csv(run.tip));
  io::write_text_atomic(dir / "ftl_backbone.csv", io::curve_csv(run.exposed.back()));
  const TrajectoryComparison fidelity =
      ftl_fidelity(run.tip, run.exposed.back(), geom.na_length);

  const PhantomSpec phantom = phantom_on_cylinder_axis(joint, opt.phantom_radius);
  io::write_text_atomic(dir / "phantom.json", io::phantom_json(phantom));

  std::string clearance_csv = "eta,min_clearance_mm,collides\n";
  double worst = std::numeric_limits<double>::infinity();
  bool all_clear = true;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const ClearanceResult r =
        phantom_clearance(run.exposed[k], phantom, spec.tube.outer_radius);
    worst = std::min(worst, r.min_clearance);
    all_clear = all_clear && r.min_clearance > 0.0;
    clearance_csv += io::format_number(grid[k]) + "," +
                     io::format_number(r.min_clearance) + "," +
                     (r.collides ? "1" : "0") + "\n";
  }
  io::write_text_atomic(dir / "clearance.csv", clearance_csv);

  std::vector<PlotSeries> series{{"final backbone", {}}, {"FTL tip trace", {}}};
  for (const auto& c : run.exposed.back()) series[0].points.push_back(c.point);
  for (const auto& t : run.tip) series[1].points.push_back(t.point);
  io::write_text_atomic(dir / "ftl.svg", render_svg(series, "FTL progression"));

  ordered_json summary{
      {"y_na_notch_mm", geom.notch_na_offset},
      {"y_na_mm", geom.composite_na_offset},
      {"l_na_mm", geom.na_length},
      {"stroke_mm", opt.demo_stroke},
      {"R_mm", joint.cylinder_radius},
      {"H_mm", joint.cylinder_height},
      {"phi_rad", joint.deflection_angle},
      {"ftl_max_de_mm", fidelity.max_euclidean},
      {"phantom_radius_mm", opt.phantom_radius},
      {"min_clearance_mm", worst},
      {"positive_clearance_every_eta", all_clear},
      {"eta_steps", grid.size()},
      {"output_dir", dir.string()},
  };
  out << summary.dump(2) << '\n';
  return kOk;
}

void add_spec_option(CLI::App* cmd, Options& opt) {
  cmd->add_option("--spec", opt.spec_path,
                  std::string("tube/tendon spec JSON (default: $") + kSpecEnvVar +
                      ", else the built-in 0.851/0.953 mm prototype)");
}

void add_actuation_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("--stroke-mm", opt.stroke, "tendon stroke dl_t [mm]")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--tension-n", opt.tension, "tendon tension T [N]")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--theta-deg", opt.theta_deg, "actuation angle theta [deg]");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Kinematics of a helically notched tendon-driven continuum robot"};
  app.footer(kUnitsFooter);
  app.require_subcommand(1);

  auto* geometry = app.add_subcommand(
      "geometry", "Derive neutral-axis and tendon constants of a tube spec [mm]");
  add_spec_option(geometry, opt);
  geometry->add_option("-o,--output", opt.output,
                       "derived-geometry JSON path [mm fields] (default: stdout)");

  auto* shape = app.add_subcommand(
      "shape", "Backbone curve s_mm,x_mm,y_mm,z_mm for one actuation state");
  add_spec_option(shape, opt);
  add_actuation_options(shape, opt);
  shape->add_option("--samples", opt.samples, "number of arc-length samples")
      ->check(CLI::Range(2, 1000000));
  shape->add_option("-o,--output", opt.output, "curve CSV path (default: stdout)");

  auto* sweep = app.add_subcommand(
      "sweep", "Synthetic stroke sweep written as a dataset bundle directory");
  add_spec_option(sweep, opt);
  sweep->add_option("--stroke-min-mm", opt.stroke_min, "first stroke [mm]")
      ->check(CLI::NonNegativeNumber);
  sweep->add_option("--stroke-max-mm", opt.stroke_max, "last stroke [mm]")
      ->check(CLI::NonNegativeNumber);
  sweep->add_option("--steps", opt.steps, "number of strokes")->check(CLI::Range(1, 1000000));
  sweep->add_option("--tension-n", opt.tension, "tendon tension for every sample [N]")
      ->check(CLI::NonNegativeNumber);
  sweep->add_option("--theta-deg", opt.theta_deg, "actuation angle theta [deg]");
  sweep->add_option("--markers", opt.markers, "marker arc lengths [mm]");
  sweep->add_option("--sigma-pos-mm", opt.sigma_pos, "marker noise sigma per axis [mm]")
      ->check(CLI::NonNegativeNumber);
  sweep->add_option("--sigma-stroke-mm", opt.sigma_stroke, "stroke log noise sigma [mm]")
      ->check(CLI::NonNegativeNumber);
  sweep->add_option("--seed", opt.seed, "noise seed");
  sweep->add_option("-o,--output", opt.output, "bundle directory")->required();

  auto* ftl = app.add_subcommand(
      "ftl", "Follow-the-leader tip trace eta,x_mm,y_mm,z_mm at fixed joint state");
  add_spec_option(ftl, opt);
  add_actuation_options(ftl, opt);
  ftl->add_option("--eta-steps", opt.eta_steps, "eta grid size")->check(CLI::Range(2, 1000000));
  ftl->add_flag("--retract", opt.retract, "run the grid from eta = 1 down to 0");
  ftl->add_option("--backbone", opt.backbone_out,
                  "also write the final backbone at s = eta * l_na [mm]");
  ftl->add_option("-o,--output", opt.output, "tip CSV path (default: stdout)");

  auto* estimate = app.add_subcommand(
      "estimate", "Estimate joint states (R, H [mm], phi, theta [rad]) from a track");
  add_spec_option(estimate, opt);
  estimate->add_option("--method", opt.method, "stroke or position")
      ->required()
      ->check(CLI::IsMember({"stroke", "position"}));
  estimate->add_option("-i,--input", opt.input,
                       "track CSV eta,x_mm,y_mm,z_mm[,dl_t_mm,T_N]")
      ->required()
      ->check(CLI::ExistingFile);
  estimate->add_option("--theta-deg", opt.theta_deg, "fixed actuation angle [deg]");
  estimate->add_option("--predict-s", opt.predict_s,
                       "arc length [mm] at which to predict marker positions");
  estimate->add_option("--predict-out", opt.predict_out, "predicted marker track CSV");
  estimate->add_option("-o,--output", opt.output,
                       "joints CSV dl_t_mm,T_N,R_mm,H_mm,phi_rad,theta_rad (default: stdout)");

  auto* compare = app.add_subcommand(
      "compare", "Max Euclidean distance and RMSE [mm] between two tracks");
  compare->add_option("tracks", opt.compare_files, "two track CSV files")
      ->required()
      ->expected(2)
      ->check(CLI::ExistingFile);
  compare->add_option("--per-sample", opt.per_sample_out, "per-sample distance CSV [mm]");

  auto* clearance = app.add_subcommand(
      "clearance", "Minimum clearance [mm] between a backbone and a cylindrical phantom");
  add_spec_option(clearance, opt);
  clearance->add_option("--curve", opt.curve, "curve CSV (s_mm or eta indexed)")
      ->required()
      ->check(CLI::ExistingFile);
  clearance->add_option("--phantom", opt.phantom,
                        "phantom JSON {axis_point_mm, axis_direction, radius_mm}")
      ->required()
      ->check(CLI::ExistingFile);
  clearance->add_option("--tube-radius-mm", opt.tube_radius,
                        "tube outer radius [mm] (default: spec outer_radius)")
      ->check(CLI::NonNegativeNumber);

  auto* plot = app.add_subcommand(
      "plot", "SVG with XY, XZ and isometric projections, ticks in mm");
  plot->add_option("-i,--input", opt.plot_inputs, "track or curve CSV (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  plot->add_option("--title", opt.title, "figure title");
  plot->add_option("-o,--output", opt.output, "SVG path (default: stdout)");

  auto* demo = app.add_subcommand(
      "demo", "Geometry, sweep, FTL run and phantom clearance on the built-in prototype");
  add_spec_option(demo, opt);
  demo->add_option("--stroke-mm", opt.demo_stroke, "tendon stroke dl_t for the FTL run [mm]")
      ->check(CLI::NonNegativeNumber);
  demo->add_option("--theta-deg", opt.theta_deg, "actuation angle theta [deg]");
  demo->add_option("--phantom-radius-mm", opt.phantom_radius,
                   "phantom radius on the imaginary-cylinder axis [mm]")
      ->check(CLI::NonNegativeNumber);
  demo->add_option("--eta-steps", opt.eta_steps, "eta grid size")->check(CLI::Range(2, 1000000));
  demo->add_option("--seed", opt.seed, "noise seed for the sweep");
  demo->add_option("--sigma-pos-mm", opt.sigma_pos, "marker noise sigma per axis [mm]")
      ->check(CLI::NonNegativeNumber);
  demo->add_option("-o,--output", opt.output, "output directory (default: exonav_demo)");

  for (auto* sub : app.get_subcommands({})) sub->footer(kUnitsFooter);

  std::vector<const char*> argv{"exonav"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kValidation;
  }

  try {
    if (geometry->parsed()) return cmd_geometry(opt, out, err);
    if (shape->parsed()) return cmd_shape(opt, out, err);
    if (sweep->parsed()) return cmd_sweep(opt, out, err);
    if (ftl->parsed()) return cmd_ftl(opt, out, err);
    if (estimate->parsed()) return cmd_estimate(opt, out, err);
    if (compare->parsed()) return cmd_compare(opt, out, err);
    if (clearance->parsed()) return cmd_clearance(opt, out, err);
    if (plot->parsed()) return cmd_plot(opt, out, err);
    if (demo->parsed()) return cmd_demo(opt, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return e.reason() == DomainError::Reason::invalid_input ? kValidation : kNumerical;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kValidation;
}

}  // namespace exonav::cli
