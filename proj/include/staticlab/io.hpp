#ifndef STATICLAB_IO_HPP
#define STATICLAB_IO_HPP

// JSON serialization for profiles, models, potentials, catalog entries, and the
// verifier/classifier reports, plus CSV output for parameter sweeps. File writes go
// through a temp-and-rename path so readers never observe a half-written file.

#include <array>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "staticlab/catalog.hpp"
#include "staticlab/classifier.hpp"
#include "staticlab/models.hpp"
#include "staticlab/profile.hpp"
#include "staticlab/verifier.hpp"

namespace staticlab::io {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// files
// ---------------------------------------------------------------------------

inline void write_text_atomic(const std::filesystem::path& path,
                              const std::string& text) {
  const auto dir = path.parent_path();
  std::error_code ec;
  if (!dir.empty()) std::filesystem::create_directories(dir, ec);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), Errc::IoError, "cannot open " + tmp.string() + " for writing");
    out << text;
    out.flush();
    require(out.good(), Errc::IoError, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  require(!ec, Errc::IoError, "rename failed: " + ec.message());
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::IoError, "cannot open " + path.string());
  try {
    json j;
    in >> j;
    return j;
  } catch (const std::exception& ex) {
    fail(Errc::ParseError, "bad JSON in " + path.string() + ": " + ex.what());
  }
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

inline std::string utc_timestamp() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace detail {

inline double getd(const json& j, const char* key) {
  require(j.contains(key) && j[key].is_number(), Errc::ParseError,
          std::string("missing or non-numeric field: ") + key);
  return j[key].get<double>();
}

inline std::string gets(const json& j, const char* key) {
  require(j.contains(key) && j[key].is_string(), Errc::ParseError,
          std::string("missing or non-string field: ") + key);
  return j[key].get<std::string>();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// profiles
// ---------------------------------------------------------------------------

inline json profile_to_json(const Profile& p) {
  json j;
  j["kind"] = profile_kind_name(p.kind());
  j["domain"] = {p.lo(), p.hi()};
  const auto& prm = p.params();
  switch (p.kind()) {
    case ProfileKind::Constant:
      j["value"] = prm[0];
      break;
    case ProfileKind::Linear:
      j["c0"] = prm[0];
      j["c1"] = prm[1];
      break;
    case ProfileKind::Trig:
      j["amplitude"] = prm[0];
      j["frequency"] = prm[1];
      j["phase"] = prm[2];
      j["offset"] = prm[3];
      break;
    case ProfileKind::HyperbolicTrig:
      j["c_plus"] = prm[0];
      j["c_minus"] = prm[1];
      j["rate"] = prm[2];
      j["offset"] = prm[3];
      break;
    case ProfileKind::PowerLaw:
      j["coeff"] = prm[0];
      j["exponent"] = prm[1];
      j["shift"] = prm[2];
      break;
    case ProfileKind::Grid: {
      json nodes = json::array();
      for (const auto& n : p.nodes())
        nodes.push_back(json::array({n.s, n.d0, n.d1, n.d2, n.d3}));
      j["nodes"] = std::move(nodes);
      break;
    }
  }
  return j;
}

// `base_dir` resolves a grid profile's optional "path" reference (a sidecar text
// file in the trajectory format) relative to the JSON file it appeared in.
inline Profile profile_from_json(const json& j,
                                 const std::filesystem::path& base_dir = {}) {
  const std::string kind = detail::gets(j, "kind");
  if (kind == "grid") {
    std::vector<GridNode> nodes;
    if (j.contains("path")) {
      const std::filesystem::path rel = j["path"].get<std::string>();
      const auto full = rel.is_absolute() ? rel : base_dir / rel;
      std::ifstream in(full, std::ios::binary);
      require(in.good(), Errc::IoError, "cannot open grid sidecar: " + full.string());
      Profile p = Profile::grid(read_grid_text(in).nodes);
      if (j.contains("domain")) {
        const auto& d = j["domain"];
        require(d.is_array() && d.size() == 2, Errc::ParseError,
                "domain must be [lo, hi]");
        p = p.restricted(d[0].get<double>(), d[1].get<double>());
      }
      return p;
    }
    require(j.contains("nodes") && j["nodes"].is_array(), Errc::ParseError,
            "grid profile needs nodes or path");
    for (const auto& row : j["nodes"]) {
      require(row.is_array() && row.size() == 5, Errc::ParseError,
              "grid node must be [s, value, d1, d2, d3]");
      nodes.push_back({row[0].get<double>(), row[1].get<double>(),
                       row[2].get<double>(), row[3].get<double>(),
                       row[4].get<double>()});
    }
    Profile p = Profile::grid(std::move(nodes));
    if (j.contains("domain")) {
      const auto& d = j["domain"];
      require(d.is_array() && d.size() == 2, Errc::ParseError, "domain must be [lo, hi]");
      p = p.restricted(d[0].get<double>(), d[1].get<double>());
    }
    return p;
  }

  require(j.contains("domain") && j["domain"].is_array() && j["domain"].size() == 2,
          Errc::ParseError, "profile needs domain [lo, hi]");
  const double lo = j["domain"][0].get<double>(), hi = j["domain"][1].get<double>();
  if (kind == "constant") return Profile::constant(detail::getd(j, "value"), lo, hi);
  if (kind == "linear")
    return Profile::linear(detail::getd(j, "c0"), detail::getd(j, "c1"), lo, hi);
  if (kind == "trig")
    return Profile::trig(detail::getd(j, "amplitude"), detail::getd(j, "frequency"),
                         detail::getd(j, "phase"), detail::getd(j, "offset"), lo, hi);
  if (kind == "hyperbolic")
    return Profile::hyperbolic(detail::getd(j, "c_plus"), detail::getd(j, "c_minus"),
                               detail::getd(j, "rate"), detail::getd(j, "offset"), lo,
                               hi);
  if (kind == "power")
    return Profile::power_law(detail::getd(j, "coeff"), detail::getd(j, "exponent"),
                              detail::getd(j, "shift"), lo, hi);
  fail(Errc::ParseError, "unknown profile kind: " + kind);
}

// ---------------------------------------------------------------------------
// models, potentials, entries
// ---------------------------------------------------------------------------

inline json model_to_json(const WarpedModel& m) {
  json j;
  j["class"] = model_class_name(m.cls);
  j["fiber_k"] = m.fiber_k;
  if (m.R_expected) j["R"] = *m.R_expected;
  if (m.two_warp()) j["p"] = profile_to_json(m.p);
  j["h"] = profile_to_json(m.h);
  return j;
}

inline WarpedModel model_from_json(const json& j,
                                   const std::filesystem::path& base_dir = {}) {
  const ModelClass cls = model_class_from_name(detail::gets(j, "class"));
  const double fiber_k = detail::getd(j, "fiber_k");
  std::optional<double> R;
  if (j.contains("R")) R = j["R"].get<double>();
  require(j.contains("h"), Errc::ParseError, "model needs an h profile");
  Profile h = profile_from_json(j["h"], base_dir);
  Profile p = Profile::constant(1.0, h.lo(), h.hi());
  if (j.contains("p")) p = profile_from_json(j["p"], base_dir);
  return WarpedModel::from_parts(cls, std::move(p), std::move(h), fiber_k, R);
}

inline json potential_to_json(const Potential& pot) {
  json j;
  j["f"] = profile_to_json(pot.f);
  j["x"] = pot.x;
  j["y"] = pot.y;
  return j;
}

inline Potential potential_from_json(const json& j,
                                     const std::filesystem::path& base_dir = {}) {
  require(j.contains("f"), Errc::ParseError, "potential needs an f profile");
  return Potential{profile_from_json(j["f"], base_dir), detail::getd(j, "x"),
                   detail::getd(j, "y")};
}

inline json entry_to_json(const CatalogEntry& e) {
  json j;
  j["id"] = e.id;
  j["model"] = model_to_json(e.model);
  j["potential"] = potential_to_json(e.potential);
  j["expected_type"] = family_type_name(e.expected_type);
  j["expected_R"] = e.expected_R;
  j["notes"] = e.notes;
  return j;
}

inline CatalogEntry entry_from_json(const json& j,
                                    const std::filesystem::path& base_dir = {}) {
  require(j.contains("model") && j.contains("potential"), Errc::ParseError,
          "entry needs model and potential");
  CatalogEntry e{j.value("id", std::string("unnamed")),
                 model_from_json(j["model"], base_dir),
                 potential_from_json(j["potential"], base_dir),
                 FamilyType::Unclassified,
                 0.0,
                 j.value("notes", std::string())};
  if (j.contains("expected_type"))
    e.expected_type = family_type_from_name(j["expected_type"].get<std::string>());
  if (j.contains("expected_R")) e.expected_R = j["expected_R"].get<double>();
  return e;
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

inline json constraint_flags_to_json(const ConstraintFlags& c) {
  json j;
  j["xR3_plus_y_zero"] = c.xR3_plus_y_zero;
  j["R_zero"] = c.R_zero;
  j["y0_zero"] = c.y0_zero;
  return j;
}

inline json residual_report_to_json(const ResidualReport& r) {
  json j;
  j["master_max"] = r.master_max;
  j["trace_max"] = r.trace_max;
  json comps;
  for (const auto& [key, val] : r.component_residuals) comps[key] = val;
  j["components"] = std::move(comps);
  j["constraint_flags"] = constraint_flags_to_json(r.constraint_flags);
  j["R"] = r.R_used;
  j["dichotomy_max"] = r.dichotomy_max;
  return j;
}

inline json oracle_cross_to_json(const OracleCross& oc) {
  json j;
  j["master_max"] = oc.master_max;
  j["codazzi_max"] = oc.codazzi_max;
  j["ricci_vs_closed_max"] = oc.ricci_vs_closed_max;
  j["fd_step"] = oc.fd_step;
  j["points"] = oc.points;
  return j;
}

inline json verdict_to_json(const ClassifierVerdict& v) {
  json j;
  j["signature"] = spectral_signature_name(v.pattern.signature);
  j["theorem1_type"] = family_type_name(v.pattern.type);
  j["R"] = v.R;
  j["P_range"] = {v.P_range[0], v.P_range[1]};
  j["A_range"] = {v.A_range[0], v.A_range[1]};
  j["constraint_flags"] = constraint_flags_to_json(v.constraint_flags);
  j["diagnostics"] = v.pattern.diagnostics;
  return j;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline void write_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::string text;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) text += ',';
    text += header[i];
  }
  text += '\n';
  char buf[40];
  for (const auto& row : rows) {
    require(row.size() == header.size(), Errc::IoError,
            "csv row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) text += ',';
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      text += buf;
    }
    text += '\n';
  }
  write_text_atomic(path, text);
}

}  // namespace staticlab::io

#endif  // STATICLAB_IO_HPP
