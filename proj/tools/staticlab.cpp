// staticlab command-line front-end: build catalog entries, verify potentials
// against the defining curvature equation, classify models, and sweep the warp
// ODE families. Reports are JSON (CSV for sweeps) and writes are atomic.
//
// Exit codes: 0 all requested checks passed, 1 a check failed, 2 usage, I/O, or
// parse errors.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "staticlab/staticlab.hpp"

namespace sl = staticlab;
using sl::io::json;

namespace {

int g_exit = 0;

struct CommonOpts {
  std::string catalog_id;
  std::string model_path;
  std::string spec_str;
  int samples = 101;
  double fd_step = 1e-3;
  bool richardson = false;
  double threshold = 1e-8;
  std::string out_path;
  std::string format = "json";
  std::optional<unsigned> seed;
  int jobs = 0;
  bool no_timestamp = false;
};

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("STATICLAB_DATA_DIR")) return env;
  return std::filesystem::path("out") / "cache";
}

int effective_jobs(const CommonOpts& o) {
  if (o.jobs > 0) return o.jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    sl::require(used == s.size() && std::isfinite(v), sl::Errc::ParseError,
                std::string("bad number for ") + what + ": " + s);
    return v;
  } catch (const sl::Error&) {
    throw;
  } catch (const std::exception&) {
    sl::fail(sl::Errc::ParseError, std::string("bad number for ") + what + ": " + s);
  }
}

// "lo:hi:step" (inclusive, step sign must point from lo to hi) or a single value.
std::vector<double> parse_range(const std::string& s, const char* what) {
  const auto c1 = s.find(':');
  if (c1 == std::string::npos) return {parse_double(s, what)};
  const auto c2 = s.find(':', c1 + 1);
  sl::require(c2 != std::string::npos, sl::Errc::ParseError,
              std::string(what) + " range must be lo:hi:step");
  const double lo = parse_double(s.substr(0, c1), what);
  const double hi = parse_double(s.substr(c1 + 1, c2 - c1 - 1), what);
  const double step = parse_double(s.substr(c2 + 1), what);
  sl::require(step != 0 && (hi - lo) * step >= 0, sl::Errc::ParseError,
              std::string(what) + " range step points away from hi");
  std::vector<double> out;
  const double eps = 1e-9 * std::abs(step);
  for (double v = lo; (step > 0) ? v <= hi + eps : v >= hi - eps; v += step)
    out.push_back(v);
  return out;
}

sl::Specialization parse_spec(const std::string& s) {
  if (s == "static") return sl::Specialization::static_space();
  if (s == "miao-tam") return sl::Specialization::miao_tam();
  if (s == "critical-point") return sl::Specialization::critical_point();
  if (s.rfind("v-static:", 0) == 0)
    return sl::Specialization::v_static(parse_double(s.substr(9), "v-static constant"));
  if (s.rfind("general:", 0) == 0) {
    const std::string rest = s.substr(8);
    const auto comma = rest.find(',');
    sl::require(comma != std::string::npos, sl::Errc::ParseError,
                "general spec must be general:<x>,<y>");
    return sl::Specialization::general(parse_double(rest.substr(0, comma), "x"),
                                       parse_double(rest.substr(comma + 1), "y"));
  }
  sl::fail(sl::Errc::ParseError,
           "unknown spec '" + s +
               "' (use static | miao-tam | v-static:<c> | critical-point | "
               "general:<x>,<y>)");
}

void add_source_opts(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--catalog", o.catalog_id, "catalog entry id (see `list`)");
  cmd->add_option("--model", o.model_path, "path to an entry JSON file");
}

void add_report_opts(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--out", o.out_path, "write the report here (default: stdout)");
  cmd->add_option("--format", o.format, "json|csv (csv only for sweep)")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--no-timestamp", o.no_timestamp,
                "omit the generated_at field (byte-stable reports)");
}

json config_echo(const char* command, const CommonOpts& o) {
  json c;
  c["command"] = command;
  if (!o.catalog_id.empty()) c["catalog"] = o.catalog_id;
  if (!o.model_path.empty()) c["model"] = o.model_path;
  if (!o.spec_str.empty()) c["spec"] = o.spec_str;
  c["samples"] = o.samples;
  c["fd_step"] = o.fd_step;
  c["richardson"] = o.richardson;
  c["threshold"] = o.threshold;
  if (o.seed) c["seed"] = *o.seed;
  c["jobs"] = effective_jobs(o);
  c["format"] = o.format;
  return c;
}

void emit_json(const json& rep, const CommonOpts& o) {
  if (o.out_path.empty()) {
    std::cout << rep.dump(2) << "\n";
  } else {
    sl::io::write_json_file(o.out_path, rep);
    std::cerr << "wrote " << o.out_path << "\n";
  }
}

// verify/classify sources: exactly one of --catalog / --model, and external slots
// have no built-in data to run on.
sl::CatalogEntry load_entry(const CommonOpts& o) {
  const bool has_cat = !o.catalog_id.empty(), has_file = !o.model_path.empty();
  sl::require(has_cat != has_file, sl::Errc::ParseError,
              "give exactly one of --catalog or --model");
  if (has_file) {
    const auto j = sl::io::read_json_file(o.model_path);
    return sl::io::entry_from_json(
        j, std::filesystem::path(o.model_path).parent_path());
  }
  sl::require(!sl::is_external_slot(o.catalog_id), sl::Errc::ParseError,
              "catalog id '" + o.catalog_id +
                  "' is an external slot: supply its data with --model");
  return sl::build_entry(o.catalog_id);
}

void run_list(const CommonOpts& o) {
  if (o.format == "json") {
    json arr = json::array();
    for (const auto& e : sl::build_all_entries()) {
      json row;
      row["id"] = e.id;
      row["expected_type"] = sl::family_type_name(e.expected_type);
      row["expected_R"] = e.expected_R;
      row["external"] = false;
      row["notes"] = e.notes;
      arr.push_back(std::move(row));
    }
    for (const auto& s : sl::external_slots()) {
      json row;
      row["id"] = s.id;
      row["external"] = true;
      row["notes"] = s.notes;
      arr.push_back(std::move(row));
    }
    json rep;
    rep["config"] = config_echo("list", o);
    if (!o.no_timestamp) rep["generated_at"] = sl::io::utc_timestamp();
    rep["entries"] = std::move(arr);
    emit_json(rep, o);
    return;
  }
  std::printf("%-24s %-6s %-8s %s\n", "id", "type", "R", "notes");
  for (const auto& e : sl::build_all_entries())
    std::printf("%-24s %-6s %-8g %s\n", e.id.c_str(),
                sl::family_type_name(e.expected_type), e.expected_R, e.notes.c_str());
  for (const auto& s : sl::external_slots())
    std::printf("%-24s %-6s %-8s %s\n", s.id.c_str(), "-", "-", s.notes.c_str());
}

void run_build(const CommonOpts& o) {
  sl::CatalogEntry entry = [&] {
    if (!o.model_path.empty()) {
      // Normalize a user file (external slots land here too: the slot id is kept).
      const auto j = sl::io::read_json_file(o.model_path);
      auto e = sl::io::entry_from_json(
          j, std::filesystem::path(o.model_path).parent_path());
      if (!o.catalog_id.empty()) e.id = o.catalog_id;
      return e;
    }
    sl::require(!o.catalog_id.empty(), sl::Errc::ParseError,
                "build needs --catalog or --model");
    sl::require(!sl::is_external_slot(o.catalog_id), sl::Errc::ParseError,
                "catalog id '" + o.catalog_id +
                    "' is an external slot: supply its data with --model");
    return sl::build_entry(o.catalog_id);
  }();

  const std::filesystem::path out =
      o.out_path.empty() ? data_dir() / (entry.id + ".json")
                         : std::filesystem::path(o.out_path);
  sl::io::write_json_file(out, sl::io::entry_to_json(entry));
  std::cout << "built " << entry.id << " -> " << out.string() << "\n";
}

void run_verify(const CommonOpts& o) {
  const auto entry = load_entry(o);
  const auto rr = sl::master_residual(entry.model, entry.potential, o.samples);

  // No claimed specialization: verify the potential exactly as stored.
  const sl::Specialization spec =
      o.spec_str.empty()
          ? sl::Specialization::general(entry.potential.x, entry.potential.y)
          : parse_spec(o.spec_str);
  const bool spec_ok = sl::specialization_matches(entry.potential, spec, rr.R_used);
  const auto claimed_flags =
      sl::check_specialization(entry.model, entry.potential, spec);

  sl::oracle::OracleOptions opt;
  opt.fd_step = o.fd_step;
  opt.richardson = o.richardson;
  const auto oc =
      sl::master_residual_oracle(entry.model, entry.potential, 25, opt, true, o.seed);
  const auto cs = sl::lemma_constant_solution(entry.model, entry.potential);

  const bool pass = spec_ok && rr.master_max < o.threshold;

  json rep;
  rep["config"] = config_echo("verify", o);
  if (!o.no_timestamp) rep["generated_at"] = sl::io::utc_timestamp();
  rep["id"] = entry.id;
  rep["closed_form"] = sl::io::residual_report_to_json(rr);
  rep["oracle"] = sl::io::oracle_cross_to_json(oc);
  {
    const auto [ix, iy] = spec.implied_xy(rr.R_used);
    json sj;
    sj["claimed"] = o.spec_str.empty() ? "general (from entry)" : o.spec_str;
    sj["kind"] = sl::spec_kind_name(spec.kind);
    sj["implied_x"] = ix;
    sj["implied_y"] = iy;
    sj["matches_potential"] = spec_ok;
    sj["constraint_flags"] = sl::io::constraint_flags_to_json(claimed_flags);
    rep["specialization"] = std::move(sj);
  }
  {
    json cj;
    cj["is_constant_minus_x"] = cs.is_constant_minus_x;
    cj["y_condition_holds"] = cs.y_condition_holds;
    rep["constant_solution"] = std::move(cj);
  }
  rep["pass"] = pass;
  emit_json(rep, o);
  if (!pass) g_exit = 1;
}

void run_classify(const CommonOpts& o) {
  const auto entry = load_entry(o);
  const auto ep = sl::eigen_profile_closed_form(entry.model);
  const auto verdict = sl::classify_theorem1(entry.model, entry.potential, ep);

  bool pass = verdict.pattern.type != sl::FamilyType::Unclassified;
  json rep;
  rep["config"] = config_echo("classify", o);
  if (!o.no_timestamp) rep["generated_at"] = sl::io::utc_timestamp();
  rep["id"] = entry.id;
  rep["verdict"] = sl::io::verdict_to_json(verdict);
  if (entry.expected_type != sl::FamilyType::Unclassified) {
    rep["expected_type"] = sl::family_type_name(entry.expected_type);
    if (verdict.pattern.type != entry.expected_type) pass = false;
  }
  rep["pass"] = pass;
  emit_json(rep, o);
  if (!pass) g_exit = 1;
}

struct SweepOpts {
  std::string family = "h4";
  std::string R_str = "0";
  std::string a_str = "0";
  std::string k_str = "1";
  double span = 3;
};

// One h4 sweep row: integrate the warp, then the slope-initialized potential
// (x = y = 0, unit slope), and report the closed-form residual alongside the
// conserved-quantity drift. Collapsed trajectories are trimmed to h >= 0.05 h0
// before the potential runs (the potential equation shares the h^-4 singularity).
std::array<double, 4> sweep_row_h4(double R, double a, double span) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::array<double, 4> row{a, nan, nan, nan};
  try {
    sl::ode::HFamilyParams hp;
    hp.R = R;
    hp.a = a;
    hp.h0 = 1;
    hp.h0p = 0;
    hp.s0 = 0;
    hp.span = span;
    auto traj = sl::ode::integrate_h4(hp);
    row[1] = traj.first_integral_k;
    row[2] = traj.max_drift;

    sl::ode::Trajectory part = traj;
    if (traj.collapsed) {
      double cut = part.h.hi();
      for (const auto& n : part.h.nodes())
        if (n.d0 < 0.05 * hp.h0) {
          cut = n.s;
          break;
        }
      part.h = part.h.restricted(part.h.lo(), cut);
    }
    sl::ode::FFamilyParams fp;  // x = 0, y = 0, slope 1
    const sl::Profile f = sl::ode::integrate_f_second_order(part, hp, fp);
    const auto model =
        sl::WarpedModel::single_warp(part.h, traj.first_integral_k, R);
    row[3] = sl::master_residual(model, sl::Potential{f, 0, 0}, 65).master_max;
  } catch (const sl::Error& e) {
    std::cerr << "sweep row (R=" << R << ", a=" << a << ") skipped: " << e.what()
              << "\n";
  }
  return row;
}

std::array<double, 4> sweep_row_h3(double alpha, double k, double span) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::array<double, 4> row{alpha, k, nan, nan};
  try {
    sl::TypeIIIParams prm;
    prm.alpha = alpha;
    prm.k = k;
    prm.c = 1;
    prm.x = 0;
    prm.h0 = 4;
    prm.span = span;
    const auto entry = sl::build_type_iii(prm, "sweep");
    sl::ode::H3FamilyParams hp;
    hp.alpha = alpha;
    hp.h0 = prm.h0;
    hp.h0p = std::sqrt(k - 2 * alpha / prm.h0);
    hp.span = span;
    const auto traj = sl::ode::integrate_h3(hp);
    row[2] = traj.max_drift;
    row[3] = sl::master_residual(entry.model, entry.potential, 65).master_max;
  } catch (const sl::Error& e) {
    std::cerr << "sweep row (alpha=" << alpha << ", k=" << k
              << ") skipped: " << e.what() << "\n";
  }
  return row;
}

void run_sweep(const CommonOpts& o, const SweepOpts& so) {
  struct Task {
    double first, second;
  };
  std::vector<Task> tasks;
  std::vector<std::string> header;
  if (so.family == "h4") {
    const auto Rs = parse_range(so.R_str, "--R");
    const auto as = parse_range(so.a_str, "--a");
    sl::require(Rs.size() == 1, sl::Errc::ParseError,
                "h4 sweeps fix --R to a single value (sweep over --a)");
    for (double a : as) tasks.push_back({Rs[0], a});
    header = {"a", "k", "max_drift", "master_max"};
  } else if (so.family == "h3") {
    const auto alphas = parse_range(so.a_str, "--a");
    const auto ks = parse_range(so.k_str, "--k");
    sl::require(ks.size() == 1, sl::Errc::ParseError,
                "h3 sweeps fix --k to a single value (sweep over --a)");
    for (double al : alphas) tasks.push_back({al, ks[0]});
    header = {"alpha", "k", "max_drift", "master_max"};
  } else {
    sl::fail(sl::Errc::ParseError, "unknown sweep family: " + so.family);
  }

  // Shared-nothing worker pool; rows land at their input index, so output order is
  // deterministic no matter which worker finishes first.
  std::vector<std::array<double, 4>> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  const int jobs =
      std::max(1, std::min<int>(effective_jobs(o), static_cast<int>(tasks.size())));
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();)
      rows[i] = (so.family == "h4")
                    ? sweep_row_h4(tasks[i].first, tasks[i].second, so.span)
                    : sweep_row_h3(tasks[i].first, tasks[i].second, so.span);
  };
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::vector<std::vector<double>> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back({r[0], r[1], r[2], r[3]});
  if (o.out_path.empty()) {
    std::string text;
    for (std::size_t i = 0; i < header.size(); ++i)
      text += (i ? "," : "") + header[i];
    std::cout << text << "\n";
    char buf[40];
    for (const auto& r : out) {
      text.clear();
      for (std::size_t i = 0; i < r.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", r[i]);
        text += (i ? "," : "") + std::string(buf);
      }
      std::cout << text << "\n";
    }
  } else {
    sl::io::write_csv(o.out_path, header, out);
    std::cerr << "wrote " << o.out_path << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"staticlab: curvature toolkit for warped 4-d model families"};
  app.require_subcommand(1);

  CommonOpts o;
  SweepOpts so;

  auto* list = app.add_subcommand("list", "list catalog entries and external slots");
  list->add_option("--format", o.format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));
  list->add_option("--out", o.out_path, "write the report here (default: stdout)");
  list->add_flag("--no-timestamp", o.no_timestamp, "omit the generated_at field");
  list->callback([&] { run_list(o); });

  auto* build = app.add_subcommand(
      "build", "construct an entry and write its JSON to the data directory");
  add_source_opts(build, o);
  build->add_option("--out", o.out_path,
                    "output path (default: $STATICLAB_DATA_DIR or out/cache)");
  build->callback([&] { run_build(o); });

  auto* verify = app.add_subcommand(
      "verify", "check the defining curvature equation and a claimed specialization");
  add_source_opts(verify, o);
  verify->add_option("--spec", o.spec_str,
                     "static | miao-tam | v-static:<c> | critical-point | "
                     "general:<x>,<y> (default: the entry's own pair)");
  verify->add_option("--samples", o.samples, "closed-form sample count (default 101)")
      ->check(CLI::Range(3, 100000));
  verify->add_option("--fd-step", o.fd_step, "oracle stencil step (default 1e-3)")
      ->check(CLI::PositiveNumber);
  verify->add_flag("--richardson", o.richardson, "refine oracle stencils");
  verify->add_option("--threshold", o.threshold,
                     "closed-form residual gate (default 1e-8)")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", o.seed, "randomize oracle sample points");
  add_report_opts(verify, o);
  verify->callback([&] { run_verify(o); });

  auto* classify =
      app.add_subcommand("classify", "eigenvalue-pattern classification verdict");
  add_source_opts(classify, o);
  add_report_opts(classify, o);
  classify->callback([&] { run_classify(o); });

  auto* sweep = app.add_subcommand(
      "sweep", "batch-integrate a warp family over a parameter range (CSV)");
  sweep->add_option("--family", so.family, "h4 | h3")->required();
  sweep->add_option("--R", so.R_str, "scalar curvature (h4; single value)");
  sweep->add_option("--a", so.a_str, "warp parameter, value or lo:hi:step");
  sweep->add_option("--k", so.k_str, "fiber curvature (h3; single value)");
  sweep->add_option("--span", so.span, "integration span (default 3)")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--jobs", o.jobs, "worker pool size (default: hardware)");
  sweep->add_option("--out", o.out_path, "CSV path (default: stdout)");
  sweep->callback([&] { run_sweep(o, so); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const sl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return g_exit;
}
