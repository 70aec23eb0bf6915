#pragma once

// File formats: tube/tendon spec JSON, derived-geometry JSON, curve/track/joint
// CSV, phantom JSON and the synthetic dataset bundle.
//
// Spec JSON layout:
//   { "tube":   { inner_radius, outer_radius, notch_axial_width,
//                 notch_circumferential_extent, bridge_length,
//                 circumferential_offset, patterned_length,
//                 psi_max (degrees), turn_count, tendon_radius },
//     "tendon": { total_length (mm), cross_section_area (m^2),
//                 elastic_modulus (GPa) } }          // optional
//
// Lengths are mm throughout. Numbers are written with 15 significant digits.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "exonav/estimation.hpp"
#include "exonav/geometry.hpp"
#include "exonav/kinematics.hpp"
#include "exonav/simulation.hpp"
#include "exonav/types.hpp"

namespace exonav::io {

struct SpecBundle {
  TubeSpec tube;
  TendonSpec tendon;
};

/// Parses and validates. Throws ValidationError naming the offending field.
SpecBundle parse_spec_json(std::string_view text);
/// Throws IoError when the file cannot be read.
SpecBundle load_spec(const std::filesystem::path& path);
std::string spec_json(const SpecBundle& spec);

std::string derived_geometry_json(const DerivedGeometry& geom);

std::string format_number(double value);

/// Writes to a sibling temporary file, then renames over `path`.
void write_text_atomic(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

std::string curve_csv(const BackboneCurve& curve);
std::string tip_csv(const TipTrajectory& tip);

struct JointRow {
  double stroke = 0.0;
  double tension = 0.0;
  JointState joint;
};
std::string joints_csv(std::span<const JointRow> rows);
std::vector<JointRow> parse_joints_csv(std::string_view text);

/// A point sequence read from CSV. `index` holds the first column, which is
/// either eta (`by_arclength == false`) or s in mm.
struct Track {
  bool by_arclength = false;
  std::vector<double> index;
  std::vector<Point3> points;
  std::vector<ActuationSample> actuation;  // empty unless both columns exist
};

/// Accepts `eta,x_mm,y_mm,z_mm[,dl_t_mm,T_N]` and `s_mm,x_mm,y_mm,z_mm`.
Track parse_track_csv(std::string_view text);
Track load_track(const std::filesystem::path& path);
std::string track_csv(const Track& track);

TipTrajectory to_tip_trajectory(const Track& track);
BackboneCurve to_backbone_curve(const Track& track, double na_length);

PhantomSpec parse_phantom_json(std::string_view text);
std::string phantom_json(const PhantomSpec& phantom);

std::string comparison_json(const TrajectoryComparison& cmp);

/// Directory with spec.json, joints.csv, tip.csv, and per marker
/// marker_<s>.csv (measured) plus marker_<s>_truth.csv.
void write_dataset_bundle(const std::filesystem::path& dir,
                          const SyntheticDataset& data);

std::string marker_file_stem(double arc_length);

}  // namespace exonav::io
