// Copyright 2026 The nbl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// nbl: batch runner for the correlation-box experiments.
//
// Every subcommand prints a one-line summary on stdout. With --out PATH the full
// result (config, seed, version, payload) is written atomically as JSON or CSV;
// --out - sends it to stdout instead. --schema prints the CSV columns and exits.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nbl/acceptance.hpp"
#include "nbl/analysis.hpp"
#include "nbl/boxes.hpp"
#include "nbl/error.hpp"
#include "nbl/games.hpp"
#include "nbl/io.hpp"
#include "nbl/parallel.hpp"
#include "nbl/protocols.hpp"
#include "nbl/sphere_cover.hpp"
#include "nbl/version.hpp"

namespace {

using nbl::io::Json;

constexpr int kExitPrecondition = 2;
constexpr int kExitAcceptance = 3;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

struct Result {
  std::string summary;
  Json payload;
  Table table;
};

const std::map<std::string, std::vector<std::string>> kSchemas{
    {"box show", {"x", "y", "a", "b", "prob"}},
    {"box sample", {"trial", "a", "b"}},
    {"box tv", {"x", "y", "tv"}},
    {"game eval", {"p", "q", "win_prob"}},
    {"game omega", {"p", "omega"}},
    {"game bound", {"p", "q", "bound"}},
    {"game optimize", {"p", "value", "omega", "theta_a0", "theta_a1", "theta_b0", "theta_b1"}},
    {"protocol run", {"x", "y", "a", "b", "prob"}},
    {"protocol enumerate", {"index", "protocol"}},
    {"protocol family", {"intercept", "slope"}},
    {"analysis intersections", {"p", "multiplicity"}},
    {"analysis measure", {"epsilon", "measure"}},
    {"analysis gap", {"p", "gap"}},
    {"analysis schedule", {"k", "log_bound", "bound", "log_epsilon", "epsilon", "identity_error", "inequality_holds"}},
    {"cover build", {"i", "x", "y", "z"}},
    {"cover box", {"i", "j", "p00", "p01", "p10", "p11"}},
    {"cover verify", {"trial", "i", "j", "exact_dot", "cover_dot", "tv"}},
    {"suite acceptance", {"id", "name", "passed", "budget_seconds", "detail"}},
};

const std::map<std::string, std::string> kColumnDocs{
    {"x", "Alice's input (or point x coordinate for cover build)"},
    {"y", "Bob's input (or point y coordinate for cover build)"},
    {"z", "point z coordinate"},
    {"a", "Alice's output"},
    {"b", "Bob's output"},
    {"prob", "Pr[a, b | x, y]"},
    {"trial", "0-based trial number; trial t uses derive_seed(seed, t)"},
    {"tv", "total variation distance"},
    {"p", "Pr[x = 1] in CHSH[p, q]"},
    {"q", "Pr[y = 1] in CHSH[p, q]"},
    {"win_prob", "win probability of the box"},
    {"omega", "1/2 + 1/2 sqrt(p^2 + (1-p)^2)"},
    {"bound", "quantum ceiling (or counting bound for schedules)"},
    {"value", "win probability of the optimized planar strategy"},
    {"theta_a0", "Alice's X-Z plane angle for x = 0"},
    {"theta_a1", "Alice's X-Z plane angle for x = 1"},
    {"theta_b0", "Bob's X-Z plane angle for y = 0"},
    {"theta_b1", "Bob's X-Z plane angle for y = 1"},
    {"index", "mixed-radix enumeration index"},
    {"protocol", "protocol as JSON"},
    {"intercept", "l(p) = intercept + slope p"},
    {"slope", "l(p) = intercept + slope p"},
    {"multiplicity", "2 for a tangency"},
    {"epsilon", "closeness threshold"},
    {"measure", "relative measure of {p : |l(p) - omega(p)| <= epsilon}"},
    {"gap", "min over the family of |l(p) - omega(p)|"},
    {"k", "number of queries"},
    {"log_bound", "ln (2|X|)^{2|A|^k} (2|Y|)^{2|B|^k}"},
    {"log_epsilon", "ln epsilon_k"},
    {"identity_error", "k^4 bound^2 epsilon / c^2 - 1"},
    {"inequality_holds", "k^4 bound^2 >= c^2 / epsilon"},
    {"i", "Alice's cover index"},
    {"j", "Bob's cover index"},
    {"p00", "Pr[0, 0]"},
    {"p01", "Pr[0, 1]"},
    {"p10", "Pr[1, 0]"},
    {"p11", "Pr[1, 1]"},
    {"exact_dot", "x . y for the Haar-random directions"},
    {"cover_dot", "c_i . c_j for the nearest cover points"},
    {"id", "criterion number"},
    {"name", "criterion name"},
    {"passed", "true or false"},
    {"budget_seconds", "time budget"},
    {"detail", "measured values"},
};

std::string fixed(double v, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string general(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_field(const Json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

Table box_rows(const nbl::CorrelationBox& box) {
  Table t{kSchemas.at("box show"), {}};
  for (std::size_t x = 0; x < box.x_size(); ++x)
    for (std::size_t y = 0; y < box.y_size(); ++y)
      for (std::size_t a = 0; a < box.a_size(); ++a)
        for (std::size_t b = 0; b < box.b_size(); ++b) t.rows.push_back({x, y, a, b, nbl::prob(box, x, y, a, b)});
  return t;
}

std::vector<double> p_grid(double p, std::size_t resolution) {
  if (resolution == 0) return {p};
  std::vector<double> ps;
  for (std::size_t i = 0; i <= resolution; ++i) ps.push_back(0.5 + 0.5 * double(i) / double(resolution));
  return ps;
}

struct Options {
  double p = 0.5;
  double q = 0.5;
  double epsilon = 0.2;
  double c = 0.01;
  double intercept = 0.0;
  double slope = 0.0;
  std::optional<double> tangent;
  std::size_t k = 1;
  std::size_t trials = 1000;
  std::size_t resolution = 0;
  std::size_t x = 0, y = 0;
  std::size_t x_size = 2, y_size = 2, a_size = 2, b_size = 2;
  std::size_t limit = 20;
  std::uint64_t seed = 7;
  std::string out;
  std::string format = "json";
  std::string builtin;
  std::string box_path;
  std::string against_builtin;
  std::string against_path;
  std::string protocol_path;
  std::string family_path;
  std::string cover_path;
  bool count_only = false;
  bool binary = false;
  bool up_to_k = false;
  bool schema = false;
  unsigned threads = 0;
};

// Accepts a bare object or a document written by --out, optionally nested under `key`.
Json load_input(const std::string& path, const char* key = nullptr) {
  Json j = nbl::io::read_json(path);
  if (j.is_object() && j.contains("tool") && j.contains("result")) j = j["result"];
  if (key && j.is_object() && j.contains(key)) j = j[key];
  return j;
}

nbl::CorrelationBox builtin_box(const std::string& name) {
  if (name == "pr") return nbl::pr_box();
  if (name == "local00") {
    const std::array<std::size_t, 2> zero{0, 0};
    return nbl::local_box(zero, 2, zero, 2);
  }
  if (name == "octahedron") return nbl::discretized_box(nbl::certify_cover(nbl::octahedron_points()));
  throw nbl::PreconditionError("unknown builtin box '" + name + "' (expected pr, octahedron or local00)");
}

nbl::CorrelationBox load_box(const std::string& builtin, const std::string& path, const char* what) {
  nbl::require(builtin.empty() != path.empty(), std::string("exactly one of --") + what + " / its builtin form is required");
  if (!builtin.empty()) return builtin_box(builtin);
  Json j = load_input(path, "induced_box");
  if (j.is_object() && j.contains("box") && j["box"].is_object()) j = j["box"];
  return nbl::io::box_from_json(j);
}

nbl::CorrelationBox target_box(const Options& o) { return load_box(o.builtin, o.box_path, "box"); }

nbl::SphereCover load_cover(const Options& o) {
  if (!o.cover_path.empty()) return nbl::io::cover_from_json(load_input(o.cover_path));
  return nbl::build_cover(o.epsilon);
}

nbl::AffineFunction input_line(const Options& o) {
  return o.tangent ? nbl::tangent_line(*o.tangent) : nbl::AffineFunction{o.intercept, o.slope};
}

Result run_box_show(const Options& o) {
  const auto box = target_box(o);
  return {std::to_string(box.x_size()) + "x" + std::to_string(box.y_size()) + " -> " + std::to_string(box.a_size()) +
              "x" + std::to_string(box.b_size()) + " box",
          nbl::io::box_to_json(box), box_rows(box)};
}

Result run_box_sample(const Options& o) {
  const auto box = target_box(o);
  nbl::require(o.x < box.x_size() && o.y < box.y_size(), "--x/--y must index the box inputs");
  Table t{kSchemas.at("box sample"), {}};
  std::vector<std::size_t> counts(box.row_size(), 0);
  for (std::size_t trial = 0; trial < o.trials; ++trial) {
    std::mt19937_64 rng(nbl::derive_seed(o.seed, trial));
    const auto [a, b] = nbl::sample(box, o.x, o.y, rng);
    ++counts[a * box.b_size() + b];
    t.rows.push_back({trial, a, b});
  }
  Json freq = Json::array();
  for (auto c : counts) freq.push_back(double(c) / double(o.trials));
  return {"sampled " + std::to_string(o.trials) + " draws", Json{{"counts", counts}, {"frequencies", freq}}, t};
}

Result run_box_tv(const Options& o) {
  const auto lhs = target_box(o);
  const auto rhs = load_box(o.against_builtin, o.against_path, "against");
  nbl::require(lhs.same_alphabets(rhs), "boxes must share alphabets");
  Table t{kSchemas.at("box tv"), {}};
  for (std::size_t x = 0; x < lhs.x_size(); ++x)
    for (std::size_t y = 0; y < lhs.y_size(); ++y)
      t.rows.push_back({x, y, nbl::tv_distance(lhs.distribution(x, y), rhs.distribution(x, y))});
  const double tv = nbl::tv_closeness(lhs, rhs);
  return {fixed(tv), Json{{"tv_closeness", tv}}, t};
}

Result run_game_eval(const Options& o) {
  const auto box = target_box(o);
  nbl::require(box.is_binary(), "game eval needs a binary box");
  const double v = nbl::win_prob(box, o.p, o.q);
  return {fixed(v), Json{{"win_prob", v}}, {kSchemas.at("game eval"), {{o.p, o.q, v}}}};
}

Result run_game_omega(const Options& o) {
  Table t{kSchemas.at("game omega"), {}};
  Json values = Json::array();
  for (double p : p_grid(o.p, o.resolution)) {
    nbl::require(p >= 0.5 && p <= 1.0, "--p must lie in [1/2, 1]");
    const double w = nbl::omega(p);
    t.rows.push_back({p, w});
    values.push_back({{"p", p}, {"omega", w}});
  }
  return {fixed(t.rows.front()[1].get<double>()), Json{{"values", values}}, t};
}

Result run_game_bound(const Options& o) {
  nbl::require(nbl::in_biased_regime(o.p, o.q), "biased bound needs 1/2 <= q <= 1/(2p) <= 1");
  const double v = nbl::biased_bound(o.p, o.q);
  return {fixed(v), Json{{"bound", v}}, {kSchemas.at("game bound"), {{o.p, o.q, v}}}};
}

Result run_game_optimize(const Options& o) {
  Table t{kSchemas.at("game optimize"), {}};
  Json results = Json::array();
  nbl::OptimizerOptions opts;
  opts.seed = o.seed;
  for (double p : p_grid(o.p, o.resolution)) {
    nbl::require(p >= 0.5 && p <= 1.0, "--p must lie in [1/2, 1]");
    const auto r = nbl::optimal_strategy(p, opts);
    const auto& a = r.strategy.angles;
    t.rows.push_back({p, r.value, r.target, a[0], a[1], a[2], a[3]});
    results.push_back({{"p", p}, {"value", r.value}, {"omega", r.target}, {"reached_target", r.reached_target},
                       {"angles", a}, {"box", nbl::io::box_to_json(r.strategy.box())}});
  }
  return {fixed(t.rows.front()[1].get<double>()), Json{{"strategies", results}}, t};
}

Result run_protocol_run(const Options& o) {
  const auto target = target_box(o);
  nbl::require(!o.protocol_path.empty(), "--protocol is required");
  const auto protocol = nbl::io::randomized_protocol_from_json(load_input(o.protocol_path));
  const auto box = nbl::induced_box(protocol, target);
  Json payload{{"induced_box", nbl::io::box_to_json(box)}};
  std::string summary = "induced " + std::to_string(box.x_size()) + "x" + std::to_string(box.y_size()) + " box";
  if (box.is_binary()) {
    const double v = nbl::win_prob(box, o.p, 0.5);
    payload["win_prob"] = v;
    summary += ", win_prob(p = " + general(o.p) + ") = " + fixed(v);
  }
  if (!o.against_builtin.empty() || !o.against_path.empty()) {
    const auto source = load_box(o.against_builtin, o.against_path, "against");
    const auto check = nbl::check_reduction(protocol, target, source, o.epsilon);
    payload["reduction"] = {{"epsilon", o.epsilon}, {"tv", check.tv}, {"within", check.within}};
    summary += ", tv = " + fixed(check.tv);
  }
  return {summary, payload, box_rows(box)};
}

nbl::ProtocolShape enumerate_shape(const Options& o) {
  if (o.builtin.empty() && o.box_path.empty()) {
    nbl::require(o.binary, "protocol enumerate needs --binary or a target box");
    nbl::ProtocolShape shape;
    shape.k = o.k;
    return shape;
  }
  return nbl::ProtocolShape::binary_against(target_box(o), o.k);
}

Result run_protocol_enumerate(const Options& o) {
  const auto shape = enumerate_shape(o);
  const auto count = nbl::protocol_count(shape);
  nbl::require(count.has_value(), "protocol count overflows 64 bits");
  const double bound = nbl::counting_bound(shape.x2, shape.y2, shape.a2, shape.b2, shape.k);
  Json payload{{"count", *count}, {"counting_bound", bound}};
  Table t{kSchemas.at("protocol enumerate"), {}};
  if (!o.count_only) {
    const nbl::ProtocolEnumerator all(shape);
    const std::uint64_t end = std::min<std::uint64_t>(all.size(), o.limit);
    Json listed = Json::array();
    all.for_each(0, end, [&](std::uint64_t index, const nbl::DeterministicProtocol& p) {
      const auto j = nbl::io::protocol_to_json(p);
      listed.push_back(j);
      t.rows.push_back({index, j.dump()});
    });
    payload["protocols"] = listed;
  } else {
    t.rows.push_back({"count", std::to_string(*count)});
  }
  return {std::to_string(*count), payload, t};
}

Result run_protocol_family(const Options& o) {
  const auto target = target_box(o);
  nbl::FamilyOptions opts;
  opts.up_to_k = o.up_to_k;
  opts.threads = o.threads;
  const auto family = nbl::affine_family(target, o.k, opts);
  Table t{kSchemas.at("protocol family"), {}};
  for (const auto& l : family) t.rows.push_back({l.intercept, l.slope});
  return {std::to_string(family.size()) + " lines", Json{{"family", nbl::io::family_to_json(family)}}, t};
}

Result run_analysis_intersections(const Options& o) {
  const auto line = input_line(o);
  const auto roots = nbl::line_intersections(line);
  Table t{kSchemas.at("analysis intersections"), {}};
  Json list = Json::array();
  std::string summary = std::to_string(roots.size()) + " root(s)";
  for (const auto& r : roots) {
    t.rows.push_back({r.p, r.multiplicity});
    list.push_back({{"p", r.p}, {"multiplicity", r.multiplicity}});
    summary += " " + fixed(r.p);
  }
  return {summary,
          Json{{"line", {line.intercept, line.slope}}, {"roots", list},
               {"residual", nbl::intersection_residual(line, roots)}},
          t};
}

Result run_analysis_measure(const Options& o) {
  nbl::require(o.epsilon > 0.0, "--epsilon must be positive");
  const auto line = input_line(o);
  const double m = nbl::measure_near(line, o.epsilon);
  return {general(m),
          Json{{"line", {line.intercept, line.slope}}, {"measure", m}, {"bound_8_sqrt_eps", 8 * std::sqrt(o.epsilon)}},
          {kSchemas.at("analysis measure"), {{o.epsilon, m}}}};
}

Result run_analysis_gap(const Options& o) {
  const std::size_t resolution = o.resolution ? o.resolution : 10000;
  nbl::GapCertificate cert;
  if (!o.family_path.empty()) {
    cert = nbl::find_hard_p(nbl::io::family_from_json(load_input(o.family_path, "family")), resolution);
    cert.target = o.family_path;
  } else {
    nbl::FamilyOptions opts;
    opts.up_to_k = o.up_to_k;
    opts.threads = o.threads;
    cert = nbl::find_hard_p(nbl::affine_family(target_box(o), o.k, opts), resolution);
    cert.target = o.builtin.empty() ? o.box_path : o.builtin;
  }
  cert.k = o.k;
  nbl::require(nbl::verify_certificate(cert), "certificate failed self-verification");
  Table t{kSchemas.at("analysis gap"), {}};
  for (double p : p_grid(0.5, std::min<std::size_t>(resolution, 1000))) t.rows.push_back({p, nbl::family_gap(cert.family, p)});
  return {"p_star = " + fixed(cert.p_star) + ", gap = " + fixed(cert.gap), nbl::io::certificate_to_json(cert), t};
}

Result run_analysis_schedule(const Options& o) {
  nbl::require(o.k >= 1, "--k must be at least 1");
  const auto entries = nbl::epsilon_schedule(o.x_size, o.y_size, o.a_size, o.b_size, o.k, o.c);
  Table t{kSchemas.at("analysis schedule"), {}};
  Json list = Json::array();
  for (const auto& e : entries) {
    t.rows.push_back({e.k, e.log_bound, e.bound, e.log_epsilon, e.epsilon, e.identity_error, e.inequality_holds});
    list.push_back({{"k", e.k}, {"log_bound", e.log_bound}, {"bound", e.bound}, {"log_epsilon", e.log_epsilon},
                    {"epsilon", e.epsilon}, {"identity_error", e.identity_error},
                    {"inequality_holds", e.inequality_holds}});
  }
  return {"epsilon_1 = " + general(entries.front().epsilon), Json{{"c", o.c}, {"entries", list}}, t};
}

Result run_cover_build(const Options& o) {
  const auto cover = nbl::build_cover(o.epsilon);
  Table t{kSchemas.at("cover build"), {}};
  for (std::size_t i = 0; i < cover.size(); ++i)
    t.rows.push_back({i, cover.points[i].x(), cover.points[i].y(), cover.points[i].z()});
  return {"T = " + std::to_string(cover.size()) + ", radius = " + fixed(cover.covering_radius),
          nbl::io::cover_to_json(cover), t};
}

Result run_cover_box(const Options& o) {
  const auto cover = load_cover(o);
  nbl::require(cover.size() <= 1000, "cover box materializes T^2 rows; use a cover with T <= 1000");
  const auto box = nbl::discretized_box(cover);
  Table t{kSchemas.at("cover box"), {}};
  for (std::size_t i = 0; i < cover.size(); ++i) {
    for (std::size_t j = 0; j < cover.size(); ++j) {
      const auto r = box.row(i, j);
      t.rows.push_back({i, j, r[0], r[1], r[2], r[3]});
    }
  }
  return {std::to_string(cover.size()) + "x" + std::to_string(cover.size()) + " box",
          Json{{"box", nbl::io::box_to_json(box)},
               {"bell_spec", nbl::io::bell_spec_to_json(nbl::discretized_bell_spec(cover))},
               {"state", "singlet"}},
          t};
}

Result run_cover_verify(const Options& o) {
  const auto cover = load_cover(o);
  const auto stats = nbl::verify_reduction(cover, o.trials, o.seed, o.threads);
  Table t{kSchemas.at("cover verify"), {}};
  for (std::size_t n = 0; n < stats.trials.size(); ++n) {
    const auto& tr = stats.trials[n];
    t.rows.push_back({n, tr.i, tr.j, tr.exact_dot, tr.cover_dot, tr.tv});
  }
  return {"max_tv = " + fixed(stats.max_tv) + ", mean_tv = " + fixed(stats.mean_tv),
          Json{{"T", cover.size()}, {"covering_radius", cover.covering_radius}, {"max_tv", stats.max_tv},
               {"mean_tv", stats.mean_tv}, {"identity_defect", stats.identity_defect}},
          t};
}

std::string render(const std::string& command, const Options& o, const Json& config, const Result& r) {
  if (o.format == "csv") {
    std::ostringstream out;
    out << "# " << nbl::kToolName << " " << nbl::kVersion << " command=" << command << " seed=" << o.seed
        << "\n# config=" << config.dump() << "\n";
    for (std::size_t c = 0; c < r.table.columns.size(); ++c) out << (c ? "," : "") << r.table.columns[c];
    out << "\n";
    for (const auto& row : r.table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_field(row[c]);
      out << "\n";
    }
    return out.str();
  }
  Json doc{{"tool", nbl::kToolName}, {"version", nbl::kVersion}, {"command", command},
           {"seed", o.seed}, {"config", config}, {"result", r.payload}};
  return doc.dump(2) + "\n";
}

void print_schema(const std::string& command) {
  std::cout << command << " CSV columns:\n";
  for (const auto& c : kSchemas.at(command)) std::cout << "  " << c << ": " << kColumnDocs.at(c) << "\n";
}

Json config_of(const CLI::App& sub) {
  Json config = Json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_name(false, true);
    if (name.empty() || name == "--help" || name == "-h" || opt->count() == 0) continue;
    const auto values = opt->results();
    std::string key = name.substr(name.find_first_not_of('-'));
    if (opt->get_expected_max() == 0) {
      config[key] = true;
    } else {
      config[key] = values.size() == 1 ? Json(values.front()) : Json(values);
    }
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlation-box reductions: games, protocols, gap certificates and sphere covers"};
  app.set_version_flag("--version", std::string(nbl::kVersion));
  app.require_subcommand(1);
  Options o;

  std::vector<std::pair<std::string, CLI::App*>> leaves;
  std::map<std::string, std::function<Result(const Options&)>> handlers;

  auto common = [&](CLI::App* s, const std::string& name) {
    s->add_option("--seed", o.seed, "master seed")->capture_default_str();
    s->add_option("--out", o.out, "write the full result here ('-' for stdout)");
    s->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    s->add_flag("--schema", o.schema, "print the CSV columns and exit");
    s->add_option("--threads", o.threads, "worker threads (0: NBL_THREADS or hardware)");
    leaves.emplace_back(name, s);
  };
  auto target = [&](CLI::App* s) {
    s->add_option("--builtin", o.builtin, "built-in box")->check(CLI::IsMember({"pr", "octahedron", "local00"}));
    s->add_option("--box", o.box_path, "box JSON file");
  };
  auto line = [&](CLI::App* s) {
    s->add_option("--intercept", o.intercept, "line intercept");
    s->add_option("--slope", o.slope, "line slope");
    s->add_option("--tangent", o.tangent, "use the tangent line to omega at this p");
  };

  auto* box = app.add_subcommand("box", "inspect correlation boxes")->require_subcommand(1);
  auto* box_show = box->add_subcommand("show", "print a box table");
  target(box_show);
  common(box_show, "box show");
  handlers["box show"] = run_box_show;
  auto* box_sample = box->add_subcommand("sample", "sample outputs for one input pair");
  target(box_sample);
  box_sample->add_option("--x", o.x, "Alice's input");
  box_sample->add_option("--y", o.y, "Bob's input");
  box_sample->add_option("--trials", o.trials, "number of draws")->capture_default_str();
  common(box_sample, "box sample");
  handlers["box sample"] = run_box_sample;
  auto* box_tv = box->add_subcommand("tv", "max-per-input total variation between two boxes");
  target(box_tv);
  box_tv->add_option("--against", o.against_path, "second box JSON file");
  box_tv->add_option("--against-builtin", o.against_builtin, "second built-in box")
      ->check(CLI::IsMember({"pr", "octahedron", "local00"}));
  common(box_tv, "box tv");
  handlers["box tv"] = run_box_tv;

  auto* game = app.add_subcommand("game", "biased CHSH games")->require_subcommand(1);
  auto* game_eval = game->add_subcommand("eval", "win probability of a binary box");
  target(game_eval);
  game_eval->add_option("--p", o.p, "Pr[x = 1]");
  game_eval->add_option("--q", o.q, "Pr[y = 1]");
  common(game_eval, "game eval");
  handlers["game eval"] = run_game_eval;
  auto* game_omega = game->add_subcommand("omega", "optimal quantum value of CHSH[p, 1/2]");
  game_omega->add_option("--p", o.p, "Pr[x = 1]");
  game_omega->add_option("--resolution", o.resolution, "evaluate on resolution + 1 grid points instead");
  common(game_omega, "game omega");
  handlers["game omega"] = run_game_omega;
  auto* game_bound = game->add_subcommand("bound", "quantum ceiling of CHSH[p, q]");
  game_bound->add_option("--p", o.p, "Pr[x = 1]");
  game_bound->add_option("--q", o.q, "Pr[y = 1]");
  common(game_bound, "game bound");
  handlers["game bound"] = run_game_bound;
  auto* game_opt = game->add_subcommand("optimize", "optimize a planar strategy for CHSH[p, 1/2]");
  game_opt->add_option("--p", o.p, "Pr[x = 1]");
  game_opt->add_option("--resolution", o.resolution, "optimize on resolution + 1 grid points instead");
  common(game_opt, "game optimize");
  handlers["game optimize"] = run_game_optimize;

  auto* protocol = app.add_subcommand("protocol", "k-query protocols")->require_subcommand(1);
  auto* protocol_run = protocol->add_subcommand("run", "box induced by a protocol against a target");
  target(protocol_run);
  protocol_run->add_option("--protocol", o.protocol_path, "protocol JSON (deterministic or randomized)");
  protocol_run->add_option("--against", o.against_path, "compare with this source box");
  protocol_run->add_option("--against-builtin", o.against_builtin, "compare with this built-in box")
      ->check(CLI::IsMember({"pr", "octahedron", "local00"}));
  protocol_run->add_option("--epsilon", o.epsilon, "reduction error threshold");
  protocol_run->add_option("--p", o.p, "report win_prob at this p");
  common(protocol_run, "protocol run");
  handlers["protocol run"] = run_protocol_run;
  auto* protocol_enum = protocol->add_subcommand("enumerate", "count or list deterministic protocols");
  target(protocol_enum);
  protocol_enum->add_flag("--binary", o.binary, "binary target alphabets");
  protocol_enum->add_option("--k", o.k, "queries")->capture_default_str();
  protocol_enum->add_flag("--count-only", o.count_only, "only print the count");
  protocol_enum->add_option("--limit", o.limit, "list at most this many protocols")->capture_default_str();
  common(protocol_enum, "protocol enumerate");
  handlers["protocol enumerate"] = run_protocol_enumerate;
  auto* protocol_family = protocol->add_subcommand("family", "affine family of win-probability lines");
  target(protocol_family);
  protocol_family->add_option("--k", o.k, "queries")->capture_default_str();
  protocol_family->add_flag("--up-to-k", o.up_to_k, "union over 0..k queries");
  common(protocol_family, "protocol family");
  handlers["protocol family"] = run_protocol_family;

  auto* analysis = app.add_subcommand("analysis", "lines versus omega")->require_subcommand(1);
  auto* an_int = analysis->add_subcommand("intersections", "solve l(p) = omega(p) on [1/2, 1]");
  line(an_int);
  common(an_int, "analysis intersections");
  handlers["analysis intersections"] = run_analysis_intersections;
  auto* an_measure = analysis->add_subcommand("measure", "measure of p with |l(p) - omega(p)| <= epsilon");
  line(an_measure);
  an_measure->add_option("--epsilon", o.epsilon, "threshold");
  common(an_measure, "analysis measure");
  handlers["analysis measure"] = run_analysis_measure;
  auto* an_gap = analysis->add_subcommand("gap", "hardest p for a family (gap certificate)");
  target(an_gap);
  an_gap->add_option("--family", o.family_path, "family JSON from 'protocol family'");
  an_gap->add_option("--k", o.k, "queries")->capture_default_str();
  an_gap->add_flag("--up-to-k", o.up_to_k, "union over 0..k queries");
  an_gap->add_option("--resolution", o.resolution, "grid resolution (default 10000)");
  common(an_gap, "analysis gap");
  handlers["analysis gap"] = run_analysis_gap;
  auto* an_sched = analysis->add_subcommand("schedule", "epsilon_k schedule");
  an_sched->add_option("--x", o.x_size, "|X|")->capture_default_str();
  an_sched->add_option("--y", o.y_size, "|Y|")->capture_default_str();
  an_sched->add_option("--a", o.a_size, "|A|")->capture_default_str();
  an_sched->add_option("--b", o.b_size, "|B|")->capture_default_str();
  an_sched->add_option("--k", o.k, "largest k")->capture_default_str();
  an_sched->add_option("--c", o.c, "series constant")->capture_default_str();
  common(an_sched, "analysis schedule");
  handlers["analysis schedule"] = run_analysis_schedule;

  auto* cover = app.add_subcommand("cover", "sphere covers and the discretized box")->require_subcommand(1);
  auto* cover_build = cover->add_subcommand("build", "audited cover of the Bloch sphere");
  cover_build->add_option("--epsilon", o.epsilon, "covering radius")->capture_default_str();
  common(cover_build, "cover build");
  handlers["cover build"] = run_cover_build;
  auto* cover_box = cover->add_subcommand("box", "discretized singlet box on a cover");
  cover_box->add_option("--cover", o.cover_path, "cover JSON (default: build one at --epsilon)");
  cover_box->add_option("--epsilon", o.epsilon, "covering radius")->capture_default_str();
  common(cover_box, "cover box");
  handlers["cover box"] = run_cover_box;
  auto* cover_verify = cover->add_subcommand("verify", "run the nearest-point reduction on Haar-random pairs");
  cover_verify->add_option("--cover", o.cover_path, "cover JSON (default: build one at --epsilon)");
  cover_verify->add_option("--epsilon", o.epsilon, "covering radius")->capture_default_str();
  cover_verify->add_option("--trials", o.trials, "trials")->capture_default_str();
  common(cover_verify, "cover verify");
  handlers["cover verify"] = run_cover_verify;

  auto* suite = app.add_subcommand("suite", "batteries")->require_subcommand(1);
  auto* acceptance = suite->add_subcommand("acceptance", "run the acceptance criteria");
  common(acceptance, "suite acceptance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitPrecondition;
  }

  for (const auto& [name, sub] : leaves) {
    if (!sub->parsed()) continue;
    if (o.schema) {
      print_schema(name);
      return 0;
    }
    const Json config = config_of(*sub);
    try {
      Result r;
      int status = 0;
      if (name == "suite acceptance") {
        nbl::AcceptanceOptions opts;
        opts.seed = o.seed;
        opts.threads = o.threads;
        r.table.columns = kSchemas.at(name);
        Json list = Json::array();
        int failed = 0;
        nbl::run_acceptance(opts, [&](const nbl::CriterionResult& c) {
          std::printf("[%s] criterion %d: %s (%.2fs) %s\n", c.passed ? "PASS" : "FAIL", c.id, c.name.c_str(),
                      c.seconds, c.detail.c_str());
          std::fflush(stdout);
          failed += c.passed ? 0 : 1;
          list.push_back({{"id", c.id}, {"name", c.name}, {"passed", c.passed},
                          {"budget_seconds", c.budget_seconds}, {"detail", c.detail}});
          r.table.rows.push_back({c.id, c.name, c.passed, c.budget_seconds, c.detail});
        });
        r.payload = {{"criteria", list}, {"failed", failed}};
        r.summary = std::to_string(10 - failed) + "/10 criteria passed";
        status = failed ? kExitAcceptance : 0;
      } else {
        r = handlers.at(name)(o);
      }
      std::cout << r.summary << "\n";
      if (!o.out.empty()) {
        const std::string text = render(name, o, config, r);
        if (o.out == "-") {
          std::cout << text;
        } else {
          nbl::io::write_text_atomically(o.out, text);
        }
      }
      return status;
    } catch (const std::invalid_argument& e) {
      std::cerr << "nbl " << name << ": precondition violated: " << e.what() << "\n";
      return kExitPrecondition;
    } catch (const std::exception& e) {
      std::cerr << "nbl " << name << ": " << e.what() << "\n";
      return 1;
    }
  }
  return kExitPrecondition;
}
