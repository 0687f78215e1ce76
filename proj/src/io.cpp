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

#include "nbl/io.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "nbl/error.hpp"
#include "nbl/version.hpp"

namespace nbl::io {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  require(j.is_object() && j.contains(key), std::string("json: missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("json: field '") + key + "': " + e.what());
  }
}

Json shape_to_json(const ProtocolShape& s) {
  return Json{{"x1", s.x1}, {"y1", s.y1}, {"a1", s.a1}, {"b1", s.b1}, {"x2", s.x2},
              {"y2", s.y2}, {"a2", s.a2}, {"b2", s.b2}, {"k", s.k}};
}

ProtocolShape shape_from_json(const Json& j) {
  ProtocolShape s;
  s.x1 = field<std::size_t>(j, "x1");
  s.y1 = field<std::size_t>(j, "y1");
  s.a1 = field<std::size_t>(j, "a1");
  s.b1 = field<std::size_t>(j, "b1");
  s.x2 = field<std::size_t>(j, "x2");
  s.y2 = field<std::size_t>(j, "y2");
  s.a2 = field<std::size_t>(j, "a2");
  s.b2 = field<std::size_t>(j, "b2");
  s.k = field<std::size_t>(j, "k");
  return s;
}

}  // namespace

Json box_to_json(const CorrelationBox& box) {
  Json table = Json::array();
  for (std::size_t x = 0; x < box.x_size(); ++x) {
    Json by_y = Json::array();
    for (std::size_t y = 0; y < box.y_size(); ++y) {
      auto r = box.row(x, y);
      by_y.push_back(std::vector<double>(r.begin(), r.end()));
    }
    table.push_back(std::move(by_y));
  }
  return Json{{"x_size", box.x_size()}, {"y_size", box.y_size()}, {"a_size", box.a_size()},
              {"b_size", box.b_size()}, {"table", std::move(table)}};
}

CorrelationBox box_from_json(const Json& j) {
  const auto xs = field<std::size_t>(j, "x_size");
  const auto ys = field<std::size_t>(j, "y_size");
  const auto as = field<std::size_t>(j, "a_size");
  const auto bs = field<std::size_t>(j, "b_size");
  const auto table = field<std::vector<std::vector<std::vector<double>>>>(j, "table");
  require(table.size() == xs, "box json: table must have x_size rows");
  std::vector<double> flat;
  flat.reserve(xs * ys * as * bs);
  for (const auto& by_y : table) {
    require(by_y.size() == ys, "box json: table[x] must have y_size rows");
    for (const auto& row : by_y) {
      require(row.size() == as * bs, "box json: each row must have a_size*b_size entries");
      flat.insert(flat.end(), row.begin(), row.end());
    }
  }
  return CorrelationBox(xs, ys, as, bs, std::move(flat));
}

Json unitary_to_json(const Unitary2& u) {
  Json out = Json::array();
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      out.push_back(u(r, c).real());
      out.push_back(u(r, c).imag());
    }
  }
  return out;
}

Unitary2 unitary_from_json(const Json& j) {
  std::vector<double> v;
  try {
    v = j.get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("unitary json: ") + e.what());
  }
  require(v.size() == 8, "unitary json: expected 8 reals");
  Eigen::Matrix2cd m;
  m << Complex(v[0], v[1]), Complex(v[2], v[3]), Complex(v[4], v[5]), Complex(v[6], v[7]);
  return Unitary2(m);
}

Json bell_spec_to_json(const BellBoxSpec& spec) {
  Json us = Json::array(), vs = Json::array(), f = Json::array(), g = Json::array();
  for (const auto& m : spec.alice) {
    us.push_back(unitary_to_json(m.unitary));
    f.push_back({m.relabel[0], m.relabel[1]});
  }
  for (const auto& m : spec.bob) {
    vs.push_back(unitary_to_json(m.unitary));
    g.push_back({m.relabel[0], m.relabel[1]});
  }
  return Json{{"a_size", spec.a_size}, {"b_size", spec.b_size}, {"alice_unitaries", us},
              {"bob_unitaries", vs},   {"f", f},                 {"g", g}};
}

BellBoxSpec bell_spec_from_json(const Json& j) {
  BellBoxSpec spec;
  spec.a_size = field<std::size_t>(j, "a_size");
  spec.b_size = field<std::size_t>(j, "b_size");
  const auto us = field<Json>(j, "alice_unitaries");
  const auto vs = field<Json>(j, "bob_unitaries");
  const auto f = field<std::vector<std::array<std::size_t, 2>>>(j, "f");
  const auto g = field<std::vector<std::array<std::size_t, 2>>>(j, "g");
  require(us.size() == f.size() && vs.size() == g.size(), "bell spec json: one relabel per unitary");
  for (std::size_t i = 0; i < us.size(); ++i) spec.alice.push_back({unitary_from_json(us[i]), f[i]});
  for (std::size_t i = 0; i < vs.size(); ++i) spec.bob.push_back({unitary_from_json(vs[i]), g[i]});
  return spec;
}

Json protocol_to_json(const DeterministicProtocol& protocol) {
  return Json{{"k", protocol.k()},
              {"shape", shape_to_json(protocol.shape())},
              {"alice_queries", protocol.alice_queries()},
              {"bob_queries", protocol.bob_queries()},
              {"alice_output", protocol.alice_output()},
              {"bob_output", protocol.bob_output()}};
}

DeterministicProtocol protocol_from_json(const Json& j) {
  const ProtocolShape shape = shape_from_json(field<Json>(j, "shape"));
  require(field<std::size_t>(j, "k") == shape.k, "protocol json: k disagrees with shape");
  return DeterministicProtocol(shape, field<std::vector<std::vector<std::size_t>>>(j, "alice_queries"),
                               field<std::vector<std::vector<std::size_t>>>(j, "bob_queries"),
                               field<std::vector<std::size_t>>(j, "alice_output"),
                               field<std::vector<std::size_t>>(j, "bob_output"));
}

Json randomized_protocol_to_json(const RandomizedProtocol& protocol) {
  Json ps = Json::array();
  for (const auto& p : protocol.protocols()) ps.push_back(protocol_to_json(p));
  return Json{{"weights", protocol.weights()}, {"protocols", ps}};
}

RandomizedProtocol randomized_protocol_from_json(const Json& j) {
  if (j.is_object() && !j.contains("protocols")) {
    return RandomizedProtocol({protocol_from_json(j)}, {1.0});
  }
  std::vector<DeterministicProtocol> ps;
  for (const auto& p : field<Json>(j, "protocols")) ps.push_back(protocol_from_json(p));
  return RandomizedProtocol(std::move(ps), field<std::vector<double>>(j, "weights"));
}

Json family_to_json(const std::vector<AffineFunction>& family) {
  Json out = Json::array();
  for (const auto& l : family) out.push_back({l.intercept, l.slope});
  return out;
}

std::vector<AffineFunction> family_from_json(const Json& j) {
  std::vector<std::array<double, 2>> pairs;
  try {
    pairs = j.get<std::vector<std::array<double, 2>>>();
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("family json: ") + e.what());
  }
  std::vector<AffineFunction> out;
  for (const auto& [i, s] : pairs) out.push_back({i, s});
  return out;
}

Json certificate_to_json(const GapCertificate& c) {
  return Json{{"target", c.target},         {"k", c.k},
              {"p_star", c.p_star},         {"gap", c.gap},
              {"resolution", c.resolution}, {"family_size", c.family.size()},
              {"family", family_to_json(c.family)}, {"tool_version", kVersion}};
}

GapCertificate certificate_from_json(const Json& j) {
  GapCertificate c;
  c.target = field<std::string>(j, "target");
  c.k = field<std::size_t>(j, "k");
  c.p_star = field<double>(j, "p_star");
  c.gap = field<double>(j, "gap");
  c.resolution = field<std::size_t>(j, "resolution");
  c.family = family_from_json(field<Json>(j, "family"));
  return c;
}

Json cover_to_json(const SphereCover& cover) {
  Json points = Json::array();
  for (const auto& p : cover.points) points.push_back({p.x(), p.y(), p.z()});
  const auto& a = cover.audit;
  return Json{{"points", points},
              {"size", cover.size()},
              {"covering_radius", cover.covering_radius},
              {"target_epsilon", cover.target_epsilon},
              {"attempts", cover.attempts},
              {"audit",
               {{"probes", a.probes},
                {"grid", a.grid},
                {"mesh_width", a.mesh_width},
                {"max_probe_distance", a.max_probe_distance},
                {"certified_radius", a.certified_radius}}}};
}

SphereCover cover_from_json(const Json& j) {
  std::vector<BlochVector> points;
  for (const auto& xyz : field<std::vector<std::array<double, 3>>>(j, "points")) {
    points.emplace_back(xyz[0], xyz[1], xyz[2]);
  }
  require(!points.empty(), "cover json: no points");
  // The radius is re-audited rather than trusted from the file.
  SphereCover cover = certify_cover(std::move(points));
  if (j.contains("target_epsilon")) cover.target_epsilon = field<double>(j, "target_epsilon");
  if (j.contains("attempts")) cover.attempts = field<int>(j, "attempts");
  return cover;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void write_text_atomically(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), "cannot write " + tmp.string());
    out << text;
    out.flush();
    require(out.good(), "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw PreconditionError("cannot move output into place: " + ec.message());
  }
}

}  // namespace nbl::io
