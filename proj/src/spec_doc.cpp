// Copyright 2026 the graphbm authors
// SPDX-License-Identifier: Apache-2.0
#include "graphbm/spec_doc.hpp"

#include <initializer_list>
#include <string>

#include <json.hpp>

namespace graphbm {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& msg) {
  throw Error(ErrorCode::ParseError, msg);
}

const json& expect_object(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where + " must be a JSON object");
  return j;
}

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || item.key() == k;
    if (!ok) fail("unknown key '" + item.key() + "' in " + where);
  }
}

double expect_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where + " must be a number");
  return j.get<double>();
}

std::string expect_string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where + " must be a string");
  return j.get<std::string>();
}

double number_field(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail("missing field '" + std::string(key) + "' in " + where);
  return expect_number(*it, where + "." + key);
}

double number_field_or(const json& obj, const char* key, const std::string& where,
                       double fallback) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : expect_number(*it, where + "." + key);
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail("missing field '" + std::string(key) + "' in " + where);
  return expect_string(*it, where + "." + key);
}

FunctionPieceSpec parse_piece(const json& j, const std::string& where) {
  expect_object(j, where);
  FunctionPieceSpec p;
  p.kind = string_field(j, "kind", where);
  if (p.kind == "bump") {
    check_keys(j, where, {"kind", "center", "width"});
    p.center = number_field(j, "center", where);
    p.width = number_field(j, "width", where);
  } else if (p.kind == "exp_decay") {
    check_keys(j, where, {"kind", "rate", "amp"});
    p.rate = number_field(j, "rate", where);
    p.amp = number_field_or(j, "amp", where, 1.0);
  } else if (p.kind == "indicator") {
    check_keys(j, where, {"kind", "lo", "hi", "ramp"});
    p.lo = number_field(j, "lo", where);
    p.hi = number_field(j, "hi", where);
    p.ramp = number_field(j, "ramp", where);
  } else if (p.kind == "constant") {
    check_keys(j, where, {"kind", "value"});
    p.value = number_field(j, "value", where);
  } else if (p.kind == "grid") {
    check_keys(j, where, {"kind", "dx", "values"});
    p.dx = number_field(j, "dx", where);
    const auto it = j.find("values");
    if (it == j.end() || !it->is_array()) fail(where + ".values must be an array");
    for (const auto& v : *it) p.values.push_back(expect_number(v, where + ".values[]"));
  } else {
    fail("unknown function kind '" + p.kind + "' in " + where);
  }
  return p;
}

}  // namespace

SpecDocument parse_spec_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  expect_object(j, "document");
  check_keys(j, "document",
             {"vertices", "internal_edges", "external_edges", "wentzell", "functions"});

  SpecDocument doc;
  if (const auto it = j.find("vertices"); it != j.end()) {
    if (!it->is_array()) fail("'vertices' must be an array");
    for (const auto& v : *it) doc.graph.vertices.push_back(expect_string(v, "vertices[]"));
  }
  if (const auto it = j.find("internal_edges"); it != j.end()) {
    if (!it->is_array()) fail("'internal_edges' must be an array");
    for (const auto& e : *it) {
      const std::string where = "internal_edges[]";
      expect_object(e, where);
      check_keys(e, where, {"id", "from", "to", "length"});
      InternalEdgeSpec spec;
      spec.id = string_field(e, "id", where);
      spec.from = string_field(e, "from", where);
      spec.to = string_field(e, "to", where);
      spec.length = number_field(e, "length", where);
      doc.graph.internal_edges.push_back(std::move(spec));
    }
  }
  if (const auto it = j.find("external_edges"); it != j.end()) {
    if (!it->is_array()) fail("'external_edges' must be an array");
    for (const auto& e : *it) {
      const std::string where = "external_edges[]";
      expect_object(e, where);
      check_keys(e, where, {"id", "vertex"});
      ExternalEdgeSpec spec;
      spec.id = string_field(e, "id", where);
      spec.vertex = string_field(e, "vertex", where);
      doc.graph.external_edges.push_back(std::move(spec));
    }
  }
  if (const auto it = j.find("wentzell"); it != j.end()) {
    expect_object(*it, "'wentzell'");
    for (const auto& item : it->items()) {
      const std::string where = "wentzell." + item.key();
      expect_object(item.value(), where);
      check_keys(item.value(), where, {"a", "c", "b"});
      VertexDataSpec vd;
      vd.a = number_field_or(item.value(), "a", where, 0.0);
      vd.c = number_field_or(item.value(), "c", where, 0.0);
      if (const auto bit = item.value().find("b"); bit != item.value().end()) {
        expect_object(*bit, where + ".b");
        for (const auto& b : bit->items())
          vd.b[b.key()] = expect_number(b.value(), where + ".b." + b.key());
      }
      doc.wentzell[item.key()] = std::move(vd);
    }
  }
  if (const auto it = j.find("functions"); it != j.end()) {
    expect_object(*it, "'functions'");
    for (const auto& item : it->items()) {
      const std::string where = "functions." + item.key();
      expect_object(item.value(), where);
      check_keys(item.value(), where, {"h", "edges"});
      FunctionSpec fs;
      fs.h = number_field_or(item.value(), "h", where, 1e-3);
      if (const auto eit = item.value().find("edges"); eit != item.value().end()) {
        expect_object(*eit, where + ".edges");
        for (const auto& e : eit->items())
          fs.edges[e.key()] = parse_piece(e.value(), where + ".edges." + e.key());
      }
      doc.functions[item.key()] = std::move(fs);
    }
  }
  return doc;
}

std::string serialize_spec_document(const SpecDocument& doc) {
  json j = json::object();
  j["vertices"] = doc.graph.vertices;
  j["internal_edges"] = json::array();
  for (const auto& e : doc.graph.internal_edges)
    j["internal_edges"].push_back(
        {{"id", e.id}, {"from", e.from}, {"to", e.to}, {"length", e.length}});
  j["external_edges"] = json::array();
  for (const auto& e : doc.graph.external_edges)
    j["external_edges"].push_back({{"id", e.id}, {"vertex", e.vertex}});
  j["wentzell"] = json::object();
  for (const auto& [vid, vd] : doc.wentzell) {
    json b = json::object();
    for (const auto& [eid, val] : vd.b) b[eid] = val;
    j["wentzell"][vid] = {{"a", vd.a}, {"c", vd.c}, {"b", std::move(b)}};
  }
  j["functions"] = json::object();
  for (const auto& [name, fs] : doc.functions) {
    json edges = json::object();
    for (const auto& [eid, p] : fs.edges) {
      json piece = {{"kind", p.kind}};
      if (p.kind == "bump") {
        piece["center"] = p.center;
        piece["width"] = p.width;
      } else if (p.kind == "exp_decay") {
        piece["rate"] = p.rate;
        piece["amp"] = p.amp;
      } else if (p.kind == "indicator") {
        piece["lo"] = p.lo;
        piece["hi"] = p.hi;
        piece["ramp"] = p.ramp;
      } else if (p.kind == "constant") {
        piece["value"] = p.value;
      } else if (p.kind == "grid") {
        piece["dx"] = p.dx;
        piece["values"] = p.values;
      }
      edges[eid] = std::move(piece);
    }
    j["functions"][name] = {{"h", fs.h}, {"edges", std::move(edges)}};
  }
  return j.dump(2) + "\n";
}

RealizedModel realize_model(const SpecDocument& doc) {
  MetricGraph g = MetricGraph::validate(doc.graph);
  WentzellData w = WentzellData::validate(g, doc.wentzell);
  return RealizedModel{std::move(g), std::move(w)};
}

EdgeFunction realize_function(const MetricGraph& g, const SpecDocument& doc,
                              const std::string& name) {
  const auto it = doc.functions.find(name);
  if (it == doc.functions.end()) fail("document defines no function named '" + name + "'");
  FunctionBuilder fb(g, it->second.h);
  for (const auto& [eid, p] : it->second.edges) {
    if (p.kind == "bump") {
      fb.bump(eid, p.center, p.width);
    } else if (p.kind == "exp_decay") {
      fb.exp_decay(eid, p.rate, p.amp);
    } else if (p.kind == "indicator") {
      fb.indicator(eid, p.lo, p.hi, p.ramp);
    } else if (p.kind == "constant") {
      fb.constant(eid, p.value);
    } else {
      fb.samples(eid, p.dx, p.values);
    }
  }
  EdgeFunction f = fb.build();
  validate_function(g, f);
  return f;
}

}  // namespace graphbm
