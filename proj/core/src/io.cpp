#include "exonav/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "exonav/errors.hpp"

namespace exonav::io {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

double number_field(const json& obj, const char* section, const char* name) {
  const std::string path = std::string(section) + "." + name;
  if (!obj.contains(name)) {
    throw ValidationError("missing field '" + path + "'");
  }
  const json& v = obj.at(name);
  if (!v.is_number()) {
    throw ValidationError("field '" + path + "' must be a number");
  }
  return v.get<double>();
}

int integer_field(const json& obj, const char* section, const char* name) {
  const std::string path = std::string(section) + "." + name;
  if (!obj.contains(name)) {
    throw ValidationError("missing field '" + path + "'");
  }
  const json& v = obj.at(name);
  if (!v.is_number_integer()) {
    throw ValidationError("field '" + path + "' must be an integer");
  }
  return v.get<int>();
}

const json& object_field(const json& doc, const char* name) {
  if (!doc.contains(name)) {
    throw ValidationError(std::string("missing field '") + name + "'");
  }
  const json& v = doc.at(name);
  if (!v.is_object()) {
    throw ValidationError(std::string("field '") + name + "' must be an object");
  }
  return v;
}

json parse_document(std::string_view text) {
  try {
    json doc = json::parse(text.begin(), text.end());
    if (!doc.is_object()) {
      throw ValidationError("top-level JSON value must be an object");
    }
    return doc;
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    std::string field(line.substr(start, pos - start));
    while (!field.empty() && (field.back() == ' ' || field.back() == '\r')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(std::move(field));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::vector<std::string>> csv_rows(std::string_view text,
                                               std::vector<std::string>& header) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto fields = split(line, ',');
    if (!have_header) {
      header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      throw ValidationError("CSV row has " + std::to_string(fields.size()) +
                            " fields, header has " + std::to_string(header.size()));
    }
    rows.push_back(std::move(fields));
  }
  if (!have_header) {
    throw ValidationError("CSV input is empty");
  }
  return rows;
}

double parse_double(const std::string& field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("CSV field '" + field + "' is not a number");
  }
}

std::string csv_line(std::initializer_list<double> values) {
  std::string line;
  bool first = true;
  for (double v : values) {
    if (!first) line += ',';
    line += format_number(v);
    first = false;
  }
  line += '\n';
  return line;
}

}  // namespace

SpecBundle parse_spec_json(std::string_view text) {
  const json doc = parse_document(text);
  SpecBundle out;
  const json& t = object_field(doc, "tube");
  out.tube.inner_radius = number_field(t, "tube", "inner_radius");
  out.tube.outer_radius = number_field(t, "tube", "outer_radius");
  out.tube.notch_axial_width = number_field(t, "tube", "notch_axial_width");
  out.tube.notch_circumferential_extent =
      number_field(t, "tube", "notch_circumferential_extent");
  out.tube.bridge_length = number_field(t, "tube", "bridge_length");
  out.tube.circumferential_offset = number_field(t, "tube", "circumferential_offset");
  out.tube.patterned_length = number_field(t, "tube", "patterned_length");
  out.tube.psi_max = deg_to_rad(number_field(t, "tube", "psi_max"));
  out.tube.turn_count = integer_field(t, "tube", "turn_count");
  out.tube.tendon_radius = number_field(t, "tube", "tendon_radius");
  out.tube.validate();

  if (doc.contains("tendon")) {
    const json& d = object_field(doc, "tendon");
    out.tendon.total_length = number_field(d, "tendon", "total_length");
    out.tendon.cross_section_area = number_field(d, "tendon", "cross_section_area");
    out.tendon.elastic_modulus = number_field(d, "tendon", "elastic_modulus");
  } else {
    out.tendon = TendonSpec::reference_prototype();
  }
  out.tendon.validate();
  return out;
}

SpecBundle load_spec(const std::filesystem::path& path) {
  return parse_spec_json(read_text(path));
}

std::string spec_json(const SpecBundle& spec) {
  ordered_json doc;
  const TubeSpec& t = spec.tube;
  doc["tube"] = ordered_json{
      {"inner_radius", t.inner_radius},
      {"outer_radius", t.outer_radius},
      {"notch_axial_width", t.notch_axial_width},
      {"notch_circumferential_extent", t.notch_circumferential_extent},
      {"bridge_length", t.bridge_length},
      {"circumferential_offset", t.circumferential_offset},
      {"patterned_length", t.patterned_length},
      {"psi_max", rad_to_deg(t.psi_max)},
      {"turn_count", t.turn_count},
      {"tendon_radius", t.tendon_radius},
  };
  doc["tendon"] = ordered_json{
      {"total_length", spec.tendon.total_length},
      {"cross_section_area", spec.tendon.cross_section_area},
      {"elastic_modulus", spec.tendon.elastic_modulus},
  };
  return doc.dump(2) + "\n";
}

std::string derived_geometry_json(const DerivedGeometry& geom) {
  ordered_json doc{
      {"notch_na_offset", geom.notch_na_offset},
      {"composite_na_offset", geom.composite_na_offset},
      {"na_length", geom.na_length},
      {"tendon_na_distance", geom.tendon_na_distance},
      {"slack_tendon_length", geom.slack_tendon_length},
  };
  return doc.dump(2) + "\n";
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  return buf;
}

void write_text_atomic(const std::filesystem::path& path, std::string_view text) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open '" + tmp.string() + "' for writing");
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
      throw IoError("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into '" + path.string() + "'");
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string curve_csv(const BackboneCurve& curve) {
  std::string out = "s_mm,x_mm,y_mm,z_mm\n";
  for (const auto& c : curve) {
    out += csv_line({c.s, c.point.x(), c.point.y(), c.point.z()});
  }
  return out;
}

std::string tip_csv(const TipTrajectory& tip) {
  std::string out = "eta,x_mm,y_mm,z_mm\n";
  for (const auto& t : tip) {
    out += csv_line({t.eta, t.point.x(), t.point.y(), t.point.z()});
  }
  return out;
}

std::string joints_csv(std::span<const JointRow> rows) {
  std::string out = "dl_t_mm,T_N,R_mm,H_mm,phi_rad,theta_rad\n";
  for (const auto& r : rows) {
    out += csv_line({r.stroke, r.tension, r.joint.cylinder_radius,
                     r.joint.cylinder_height, r.joint.deflection_angle,
                     r.joint.actuation_angle});
  }
  return out;
}

std::vector<JointRow> parse_joints_csv(std::string_view text) {
  std::vector<std::string> header;
  const auto rows = csv_rows(text, header);
  const std::vector<std::string> expected{"dl_t_mm", "T_N",     "R_mm",
                                          "H_mm",    "phi_rad", "theta_rad"};
  if (header != expected) {
    throw ValidationError(
        "joint CSV header must be dl_t_mm,T_N,R_mm,H_mm,phi_rad,theta_rad");
  }
  std::vector<JointRow> out;
  for (const auto& f : rows) {
    out.push_back({parse_double(f[0]), parse_double(f[1]),
                   JointState{parse_double(f[2]), parse_double(f[3]),
                              parse_double(f[4]), parse_double(f[5])}});
  }
  return out;
}

Track parse_track_csv(std::string_view text) {
  std::vector<std::string> header;
  const auto rows = csv_rows(text, header);
  Track track;
  if (header.size() < 4 || header[1] != "x_mm" || header[2] != "y_mm" ||
      header[3] != "z_mm" || (header[0] != "eta" && header[0] != "s_mm")) {
    throw ValidationError(
        "track CSV header must start with eta,x_mm,y_mm,z_mm or s_mm,x_mm,y_mm,z_mm");
  }
  track.by_arclength = header[0] == "s_mm";
  bool with_actuation = false;
  if (header.size() == 6) {
    if (header[4] != "dl_t_mm" || header[5] != "T_N") {
      throw ValidationError("optional track columns must be dl_t_mm,T_N");
    }
    with_actuation = true;
  } else if (header.size() != 4) {
    throw ValidationError("track CSV must have 4 or 6 columns");
  }
  for (const auto& f : rows) {
    track.index.push_back(parse_double(f[0]));
    const Point3 p(parse_double(f[1]), parse_double(f[2]), parse_double(f[3]));
    if (!p.allFinite()) {
      throw ValidationError("track contains a non-finite point");
    }
    track.points.push_back(p);
    if (with_actuation) {
      track.actuation.push_back({parse_double(f[4]), parse_double(f[5])});
    }
  }
  return track;
}

Track load_track(const std::filesystem::path& path) {
  return parse_track_csv(read_text(path));
}

std::string track_csv(const Track& track) {
  const bool with_actuation = !track.actuation.empty();
  std::string out = track.by_arclength ? "s_mm" : "eta";
  out += ",x_mm,y_mm,z_mm";
  out += with_actuation ? ",dl_t_mm,T_N\n" : "\n";
  for (std::size_t i = 0; i < track.points.size(); ++i) {
    const Point3& p = track.points[i];
    if (with_actuation) {
      out += csv_line({track.index[i], p.x(), p.y(), p.z(),
                       track.actuation[i].stroke, track.actuation[i].tension});
    } else {
      out += csv_line({track.index[i], p.x(), p.y(), p.z()});
    }
  }
  return out;
}

TipTrajectory to_tip_trajectory(const Track& track) {
  if (track.by_arclength) {
    throw ValidationError("expected an eta-indexed track, got s_mm");
  }
  TipTrajectory out;
  for (std::size_t i = 0; i < track.points.size(); ++i) {
    out.push_back({track.index[i], track.points[i]});
  }
  return out;
}

BackboneCurve to_backbone_curve(const Track& track, double na_length) {
  BackboneCurve out;
  for (std::size_t i = 0; i < track.points.size(); ++i) {
    const double s = track.by_arclength ? track.index[i] : track.index[i] * na_length;
    out.push_back({s, track.points[i]});
  }
  return out;
}

PhantomSpec parse_phantom_json(std::string_view text) {
  const json doc = parse_document(text);
  auto vec3 = [&](const char* name) {
    if (!doc.contains(name)) {
      throw ValidationError(std::string("missing field '") + name + "'");
    }
    const json& v = doc.at(name);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() ||
        !v[1].is_number() || !v[2].is_number()) {
      throw ValidationError(std::string("field '") + name +
                            "' must be an array of three numbers");
    }
    return Vector3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
  };
  PhantomSpec phantom;
  phantom.axis_point = vec3("axis_point_mm");
  phantom.axis_direction = vec3("axis_direction");
  phantom.radius = number_field(doc, "phantom", "radius_mm");
  phantom.validate();
  return phantom;
}

std::string phantom_json(const PhantomSpec& phantom) {
  const auto& p = phantom.axis_point;
  const auto& d = phantom.axis_direction;
  ordered_json doc{
      {"axis_point_mm", {p.x(), p.y(), p.z()}},
      {"axis_direction", {d.x(), d.y(), d.z()}},
      {"radius_mm", phantom.radius},
  };
  return doc.dump(2) + "\n";
}

std::string comparison_json(const TrajectoryComparison& cmp) {
  ordered_json doc{
      {"max_de_mm", cmp.max_euclidean},
      {"rmse_mm", cmp.rmse},
      {"n_samples", cmp.per_sample_distances.size()},
  };
  return doc.dump();
}

std::string marker_file_stem(double arc_length) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "marker_%.6g", arc_length);
  return buf;
}

void write_dataset_bundle(const std::filesystem::path& dir,
                          const SyntheticDataset& data) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create directory '" + dir.string() + "'");
  }
  write_text_atomic(dir / "spec.json", spec_json({data.tube, data.tendon}));

  // The eta column of sweep tracks holds normalized sample progress.
  const double span = data.commanded.size() > 1
                          ? static_cast<double>(data.commanded.size() - 1)
                          : 1.0;
  std::vector<double> progress;
  std::vector<JointRow> rows;
  for (std::size_t k = 0; k < data.sample_index.size(); ++k) {
    const std::size_t i = data.sample_index[k];
    progress.push_back(static_cast<double>(i) / span);
    rows.push_back({data.commanded[i].stroke, data.commanded[i].tension,
                    data.joints[k]});
  }
  write_text_atomic(dir / "joints.csv", joints_csv(rows));

  auto track_of = [&](const std::vector<Point3>& points) {
    Track t;
    t.index = progress;
    t.points = points;
    t.actuation = data.measured;
    return t;
  };
  write_text_atomic(dir / "tip.csv", track_csv(track_of(data.tip_measured)));
  for (const auto& marker : data.markers) {
    const std::string stem = marker_file_stem(marker.arc_length);
    write_text_atomic(dir / (stem + ".csv"), track_csv(track_of(marker.measured)));
    write_text_atomic(dir / (stem + "_truth.csv"), track_csv(track_of(marker.truth)));
  }
}

}  // namespace exonav::io
