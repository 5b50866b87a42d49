// nsurf: command-line front end for the normal surface library.

#include <cstdint>
#include <limits>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "nsurf.hpp"

namespace {

using nlohmann::json;
using namespace nsurf;

constexpr const char* kVersion = "0.1.0";

struct Input {
  std::string path;
  std::string text;
  std::string digest;
};

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

Input read_input(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("io_error", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  Input in{path, ss.str(), {}};
  in.digest = sha256_hex(in.text);
  return in;
}

json big(const Integer& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return v.str();
}

json big_list(const std::vector<Integer>& xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(big(x));
  return a;
}

json rational(const Rational& r) {
  if (r.denominator() == 1) return r.numerator();
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

json envelope(const std::string& cmd, const Input& in) {
  return {{"version", kVersion}, {"subcommand", cmd}, {"input", in.path}, {"input_digest", in.digest}};
}

CoordSystem parse_system(const std::string& s) {
  return s == "almost-normal" ? CoordSystem::AlmostNormal : CoordSystem::Normal;
}

NormalVector parse_vector(const Triangulation& tri, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error("parse_error", std::string("vector: ") + e.what());
  }
  if (!j.is_array()) throw Error("parse_error", "vector must be a JSON array");
  std::vector<Integer> coords;
  for (const auto& x : j) {
    if (x.is_number_unsigned() || x.is_number_integer()) {
      coords.emplace_back(x.get<std::int64_t>());
    } else if (x.is_string()) {
      try {
        coords.emplace_back(x.get<std::string>());
      } catch (const std::exception&) {
        throw Error("parse_error", "vector entry '" + x.get<std::string>() + "' is not an integer");
      }
    } else {
      throw Error("parse_error", "vector entries must be integers");
    }
  }
  const auto n = tri.size();
  CoordSystem sys;
  if (coords.size() == 7 * n)
    sys = CoordSystem::Normal;
  else if (coords.size() == 10 * n)
    sys = CoordSystem::AlmostNormal;
  else
    throw DimensionError("vector has " + std::to_string(coords.size()) + " entries; expected " + std::to_string(7 * n) +
                         " or " + std::to_string(10 * n));
  return NormalVector{sys, std::move(coords)};
}

json boundary_json(const BoundaryComponent& b) {
  return {{"faces", b.faces},   {"edges", b.edges},
          {"vertices", b.vertices}, {"euler", b.euler()},
          {"one_vertex", b.vertices.size() == 1}, {"one_vertex_torus", b.one_vertex_torus()}};
}

json cmd_validate(const Input& in) {
  const auto tri = parse_triangulation(in.text);
  const auto r = validate(tri);
  json out = envelope("tri validate", in);
  json bdry = json::array();
  for (const auto& b : r.boundary) bdry.push_back(boundary_json(b));
  out["report"] = {{"tetrahedra", r.tetrahedra}, {"vertices", r.vertices}, {"edges", r.edges},
                   {"faces", r.faces},           {"boundary_faces", r.boundary_faces},
                   {"connected", r.connected},   {"orientable", r.orientable},
                   {"closed", r.closed},         {"valid_edges", r.valid_edges},
                   {"euler", r.euler},           {"boundary", bdry}};
  return out;
}

json cmd_enumerate(const Input& in, const std::string& system, unsigned threads) {
  const auto tri = parse_triangulation(in.text);
  EnumerationOptions opts;
  opts.threads = threads;
  const auto set = vertex_solutions(tri, parse_system(system), opts);
  json sols = json::array();
  for (const auto& v : set.solutions) {
    sols.push_back({{"coords", big_list(v.coords)},
                    {"chi", big(euler_characteristic(tri, v))},
                    {"edge_weights", big_list(edge_weights(tri, v))},
                    {"octagons", big(octagon_total(v))}});
  }
  json out = envelope("enumerate", in);
  out["system"] = system;
  out["triangulation_digest"] = set.triangulation_digest;
  out["count"] = set.solutions.size();
  out["solutions"] = sols;
  return out;
}

json cmd_analyze(const Input& in, const std::string& vector) {
  const auto tri = parse_triangulation(in.text);
  const auto v = parse_vector(tri, vector);
  const auto cx = build_cell_complex(tri, v);
  const auto r = analyze(tri, v, cx);
  json comps = json::array();
  for (const auto& c : r.components) {
    comps.push_back({{"chi", c.euler},
                     {"orientable", c.orientable},
                     {"closed", c.closed},
                     {"boundary_curves", c.boundary_curves},
                     {c.orientable ? "genus" : "crosscaps", c.genus},
                     {"vertex_linking", c.vertex_linking},
                     {"disks", c.disk_count}});
  }
  json tubes = json::array();
  for (const auto& t : tube_candidates(tri, v))
    tubes.push_back({{"tet", t.tet}, {"disk", disk::name(t.kind)}, {"copies", {t.copy, t.copy + 1}}});
  json out = envelope("analyze", in);
  out["system"] = v.system == CoordSystem::Normal ? "normal" : "almost-normal";
  out["vector"] = big_list(v.coords);
  out["chi"] = big(euler_characteristic(tri, v));
  out["complex"] = {{"vertices", cx.vertices().size()}, {"arcs", cx.arcs().size()}, {"disks", cx.disks().size()}};
  out["components"] = comps;
  out["connected"] = r.connected;
  out["tube_candidates"] = tubes;
  return out;
}

json cmd_slopes(const Input& in, long chi_min, long max_bdry, long zero_cap, unsigned threads) {
  const auto tri = parse_triangulation(in.text);
  const auto torus = boundary_torus(tri);
  SurveyOptions opts;
  opts.bounds = {chi_min, max_bdry, zero_cap};
  opts.threads = threads;
  json slopes = json::array();
  for (const auto& e : slope_survey(tri, opts))
    slopes.push_back({{"p", e.p}, {"q", e.q}, {"provenance", to_string(e.provenance)}, {"witness", big_list(e.witness.coords)}});
  json out = envelope("slopes", in);
  out["basis"] = {torus.e1(), torus.e2()};
  out["bounds"] = {{"chi_min", chi_min}, {"max_boundary_points", max_bdry}, {"zero_chi_cap", zero_cap}};
  out["slopes"] = slopes;
  return out;
}

json profile_json(const LmaxProfile& p) {
  json a = json::array();
  for (const auto& r : p.values()) a.push_back(rational(r));
  return a;
}

json cmd_width(const Input& in, bool do_minimize, const std::string& objective, std::size_t cap, bool commute_only) {
  const auto w = parse_morse(in.text);
  json out = envelope("width", in);
  out["events"] = w.size();
  out["gap_counts"] = w.gap_counts();
  out["width"] = width(w);
  out["lmax"] = profile_json(lmax_profile(w, LmaxMode::RelativeToK));
  if (w.vertex_index()) {
    out["vertex_good_position"] = vertex_in_good_position(w);
  } else {
    const auto b = bridge_report(w);
    out["bridge"] = {{"is_bridge", b.is_bridge}, {"bridge_number", b.bridge_number}};
  }
  if (do_minimize) {
    MinimizeOptions opts;
    opts.cap = cap;
    opts.allow_cancellation = !commute_only;
    const auto r = minimize(w, objective == "lmax" ? Objective::Lmax : Objective::Width, opts);
    out["minimized"] = {{"objective", objective},
                        {"word", serialize(r.word)},
                        {"width", r.width},
                        {"lmax", profile_json(r.lmax)},
                        {"explored", r.explored},
                        {"moves", commute_only ? "commute" : "commute+cancel"}};
  }
  return out;
}

std::string render_text(const json& j) {
  std::ostringstream os;
  for (const auto& [k, v] : j.items()) os << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normal and almost-normal surfaces, boundary slopes and knot width"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string format = "json";
  std::string file;
  unsigned threads = 1;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", file, "input file")->required();
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));
  };

  auto* tri_cmd = app.add_subcommand("tri", "triangulation utilities");
  tri_cmd->require_subcommand(1);
  auto* validate_cmd = tri_cmd->add_subcommand("validate", "print the diagnostics report");
  add_common(validate_cmd);

  std::string system = "normal";
  auto* enum_cmd = app.add_subcommand("enumerate", "vertex solutions of the matching equations");
  add_common(enum_cmd);
  enum_cmd->add_option("--system", system, "coordinate system")->check(CLI::IsMember({"normal", "almost-normal"}));
  enum_cmd->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 256u));

  std::string vector;
  auto* analyze_cmd = app.add_subcommand("analyze", "analyze the surface of one vector");
  add_common(analyze_cmd);
  analyze_cmd->add_option("--vector", vector, "JSON coordinate array")->required();

  long chi_min = 0, max_bdry = 0, zero_cap = 2;
  auto* slopes_cmd = app.add_subcommand("slopes", "boundary slope survey on a one-vertex torus boundary");
  add_common(slopes_cmd);
  slopes_cmd->add_option("--chi-min", chi_min, "least Euler characteristic")->required()->check(CLI::Range(-16L, 2L));
  slopes_cmd->add_option("--max-bdry", max_bdry, "boundary weight budget")->required()->check(CLI::Range(0L, 64L));
  slopes_cmd->add_option("--zero-chi-cap", zero_cap, "multiplicity cap for chi >= 0 closed summands")
      ->check(CLI::Range(0L, 8L));
  slopes_cmd->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 256u));

  bool do_minimize = false, commute_only = false;
  std::string objective = "width";
  std::size_t cap = 14;
  auto* width_cmd = app.add_subcommand("width", "width, Lmax and bridge data of a Morse word");
  add_common(width_cmd);
  width_cmd->add_flag("--minimize", do_minimize, "search the move closure");
  width_cmd->add_option("--objective", objective, "minimization objective")->check(CLI::IsMember({"width", "lmax"}));
  width_cmd->add_option("--cap", cap, "search cap in events")->check(CLI::Range(std::size_t{1}, std::size_t{16}));
  width_cmd->add_flag("--commute-only", commute_only, "disable zigzag cancellation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  json out;
  try {
    const Input in = read_input(file);
    if (validate_cmd->parsed())
      out = cmd_validate(in);
    else if (enum_cmd->parsed())
      out = cmd_enumerate(in, system, threads);
    else if (analyze_cmd->parsed())
      out = cmd_analyze(in, vector);
    else if (slopes_cmd->parsed())
      out = cmd_slopes(in, chi_min, max_bdry, zero_cap, threads);
    else
      out = cmd_width(in, do_minimize, objective, cap, commute_only);
  } catch (const Error& e) {
    json err = {{"error", {{"kind", e.kind()}, {"message", e.what()}}}, {"version", kVersion}};
    std::cout << (format == "text" ? render_text(err) : err.dump(2) + "\n");
    return 1;
  }
  std::cout << (format == "text" ? render_text(out) : out.dump(2) + "\n");
  return 0;
}
