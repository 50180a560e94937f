#pragma once

// File formats of the command-line front end: JSON instance and cycle
// files, Graphviz DOT export and sweep report serialisation.
//
// Instance file:  {"n": 4, "matching": [[0, 1], ...], "faults": [[2, 3], ...]}
// Cycle file:     {"n": 4, "cycle": [0, 1, 3, ...], "trace": ["label", ...]}
//
// Vertices are accepted as integers or as n-character binary strings in
// which character i is coordinate i (bit i of the integer form); output
// always uses integers.

#include <string>
#include <vector>

#include "hcube/cube.hpp"
#include "hcube/structures.hpp"
#include "hcube/trace.hpp"
#include "hcube/verify.hpp"

namespace hcube {

struct Instance {
    int n = 0;
    EdgeSet matching;
    EdgeSet faults;

    friend bool operator==(const Instance&, const Instance&) = default;
};

/// Throws ParseError for malformed JSON, invalid edges, a non-matching M
/// or M ∩ F ≠ ∅.
Instance parse_instance(const std::string& text);
std::string serialize_instance(const Instance& inst);

struct CycleFile {
    int n = 0;
    std::vector<Vertex> cycle;
    std::vector<std::string> trace;

    friend bool operator==(const CycleFile&, const CycleFile&) = default;
};

/// Throws ParseError for malformed JSON or vertices outside Q_n. The cycle
/// itself is not validated here.
CycleFile parse_cycle_file(const std::string& text);
std::string serialize_cycle_file(const CycleFile& c);

/// Case labels of a trace, one per step, in construction order.
CycleFile make_cycle_file(const HamCycle& c, const ConstructionTrace* trace);

/// Undirected DOT graph of Q_n: cycle edges bold, matching edges tagged
/// "matching" and drawn red, fault edges tagged "fault" and drawn dotted.
std::string to_dot(const HamCycle& c, const EdgeSet& matching, const EdgeSet& faults);

/// Machine-readable summary of a sweep, one object per cell.
std::string sweep_summary_json(const std::vector<SweepReport>& reports);

/// Whole-file read; throws ParseError if the file cannot be opened.
std::string read_text_file(const std::string& path);

/// Writes to a temporary sibling and renames it over `path`.
void write_text_file_atomic(const std::string& path, const std::string& content);

}  // namespace hcube
