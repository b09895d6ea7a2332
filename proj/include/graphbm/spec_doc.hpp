// Copyright 2026 the graphbm authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "graphbm/edge_function.hpp"
#include "graphbm/graph.hpp"
#include "graphbm/wentzell.hpp"

namespace graphbm {

// Self-contained JSON model documents: one file carries the graph, its vertex
// boundary data, and any named test functions, so every experiment is
// reproducible from a single input. Shape:
//
//   {
//     "vertices": ["u", "v"],
//     "internal_edges": [{"id": "i1", "from": "u", "to": "v", "length": 1.0}],
//     "external_edges": [{"id": "e1", "vertex": "u"}],
//     "wentzell": {"u": {"a": 0, "c": 0, "b": {"e1": 0.5, "i1": 0.5}}, ...},
//     "functions": {
//       "f": {"h": 1e-3,
//             "edges": {"i1": {"kind": "bump", "center": 0.5, "width": 0.3}}}
//     }
//   }
//
// Unknown keys are rejected everywhere (a typo like "widht" must not silently
// produce the zero function). Edges not listed under a function are zero.
//
// Function kinds (mirroring FunctionBuilder):
//   bump      {center, width}      cos^2 arch on |x - center| <= width
//   exp_decay {rate, amp?}         amp * e^{-rate x}, truncated when negligible
//   indicator {lo, hi, ramp}       smoothed indicator of [lo, hi]
//   constant  {value}              whole edge; internal edges only
//   grid      {dx, values}         raw samples from x = 0, linearly interpolated

struct FunctionPieceSpec {
  std::string kind;
  double center = 0.0, width = 0.0;  // bump
  double rate = 0.0, amp = 1.0;      // exp_decay
  double lo = 0.0, hi = 0.0, ramp = 0.0;  // indicator
  double value = 0.0;                // constant
  double dx = 0.0;                   // grid
  std::vector<double> values;        // grid
};

struct FunctionSpec {
  double h = 1e-3;  // sampling pitch for the analytic kinds
  std::map<std::string, FunctionPieceSpec> edges;
};

struct SpecDocument {
  GraphSpec graph;
  std::map<std::string, VertexDataSpec> wentzell;
  std::map<std::string, FunctionSpec> functions;
};

// Throws ParseError on malformed JSON, wrong types, or unknown keys.
// Structural constraints (graph shape, coefficient normalization) are only
// checked when the document is realized.
SpecDocument parse_spec_document(const std::string& text);

// Canonical form: object keys sorted, doubles in shortest round-trip
// notation, two-space indentation. parse -> serialize -> parse is the
// identity on documents.
std::string serialize_spec_document(const SpecDocument& doc);

// Validated graph + vertex data from a document.
struct RealizedModel {
  MetricGraph graph;
  WentzellData wentzell;
};
RealizedModel realize_model(const SpecDocument& doc);

// Sample the named function onto per-edge grids at pitch spec.h and validate
// it. Unknown names throw ParseError; bad parameters surface the builder's
// errors.
EdgeFunction realize_function(const MetricGraph& g, const SpecDocument& doc,
                              const std::string& name);

}  // namespace graphbm
