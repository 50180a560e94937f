#include "hcube/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hcube/errors.hpp"

namespace hcube {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

int read_dimension(const json& j, const char* what) {
    if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
        throw ParseError(std::string(what) + ": missing integer field \"n\"");
    const int n = j["n"].get<int>();
    if (n < 1 || n > kMaxDimension) throw ParseError(std::string(what) + ": n out of range");
    return n;
}

Vertex read_vertex(const json& v, int n, const char* what) {
    if (v.is_number_unsigned() || v.is_number_integer()) {
        const auto x = v.get<long long>();
        if (x < 0 || x >= static_cast<long long>(num_vertices(n)))
            throw ParseError(std::string(what) + ": vertex " + std::to_string(x) + " outside Q_" + std::to_string(n));
        return static_cast<Vertex>(x);
    }
    if (v.is_string()) {
        const auto& s = v.get_ref<const std::string&>();
        if (static_cast<int>(s.size()) != n)
            throw ParseError(std::string(what) + ": binary vertex '" + s + "' must have n characters");
        Vertex x = 0;
        for (int i = 0; i < n; ++i) {
            if (s[i] != '0' && s[i] != '1') throw ParseError(std::string(what) + ": bad binary vertex '" + s + "'");
            if (s[i] == '1') x |= Vertex{1} << i;
        }
        return x;
    }
    throw ParseError(std::string(what) + ": vertex must be an integer or a binary string");
}

EdgeSet read_edges(const json& j, const char* key, int n) {
    EdgeSet out;
    if (!j.contains(key)) return out;
    const json& list = j[key];
    if (!list.is_array()) throw ParseError(std::string("instance: \"") + key + "\" must be a list of pairs");
    for (const auto& pair : list) {
        if (!pair.is_array() || pair.size() != 2)
            throw ParseError(std::string("instance: \"") + key + "\" entries must be vertex pairs");
        const Vertex a = read_vertex(pair[0], n, "instance");
        const Vertex b = read_vertex(pair[1], n, "instance");
        if (hamming_distance(a, b) != 1)
            throw ParseError("instance: {" + std::to_string(a) + ", " + std::to_string(b) + "} is not an edge of Q_" +
                             std::to_string(n));
        if (!out.insert(Edge::between(a, b)))
            throw ParseError(std::string("instance: duplicate edge in \"") + key + "\"");
    }
    return out;
}

json edges_json(const EdgeSet& s) {
    json out = json::array();
    for (const auto& e : s) out.push_back({e.lo, e.hi});
    return out;
}

std::string dot_edge(const Edge& e) { return "  " + std::to_string(e.lo) + " -- " + std::to_string(e.hi); }

}  // namespace

Instance parse_instance(const std::string& text) {
    const json j = parse_json(text, "instance");
    Instance inst;
    inst.n = read_dimension(j, "instance");
    inst.matching = read_edges(j, "matching", inst.n);
    inst.faults = read_edges(j, "faults", inst.n);
    if (!is_matching(inst.matching)) throw ParseError("instance: \"matching\" is not a matching");
    if (!inst.matching.disjoint(inst.faults)) throw ParseError("instance: matching and faults share an edge");
    return inst;
}

std::string serialize_instance(const Instance& inst) {
    json j;
    j["n"] = inst.n;
    j["matching"] = edges_json(inst.matching);
    j["faults"] = edges_json(inst.faults);
    return j.dump(2) + "\n";
}

CycleFile parse_cycle_file(const std::string& text) {
    const json j = parse_json(text, "cycle file");
    CycleFile c;
    c.n = read_dimension(j, "cycle file");
    if (!j.contains("cycle") || !j["cycle"].is_array()) throw ParseError("cycle file: missing list \"cycle\"");
    for (const auto& v : j["cycle"]) c.cycle.push_back(read_vertex(v, c.n, "cycle file"));
    if (j.contains("trace")) {
        if (!j["trace"].is_array()) throw ParseError("cycle file: \"trace\" must be a list of strings");
        for (const auto& s : j["trace"]) {
            if (!s.is_string()) throw ParseError("cycle file: \"trace\" must be a list of strings");
            c.trace.push_back(s.get<std::string>());
        }
    }
    return c;
}

std::string serialize_cycle_file(const CycleFile& c) {
    json j;
    j["n"] = c.n;
    j["cycle"] = c.cycle;
    if (!c.trace.empty()) j["trace"] = c.trace;
    return j.dump(2) + "\n";
}

CycleFile make_cycle_file(const HamCycle& c, const ConstructionTrace* trace) {
    CycleFile out{c.n, c.seq, {}};
    if (trace) out.trace = trace->labels();
    return out;
}

std::string to_dot(const HamCycle& c, const EdgeSet& matching, const EdgeSet& faults) {
    std::ostringstream os;
    os << "graph Q" << c.n << " {\n";
    os << "  node [shape=circle];\n";
    const EdgeSet on = c.edges();
    for (const auto& e : all_edges(c.n)) {
        std::string attrs;
        if (faults.contains(e))
            attrs = "class=\"fault\", style=dotted, color=gray";
        else if (matching.contains(e))
            attrs = "class=\"matching\", style=bold, color=red";
        else if (on.contains(e))
            attrs = "class=\"cycle\", style=bold";
        else
            attrs = "style=invis";
        if (on.contains(e) && faults.contains(e)) attrs += ", label=\"fault on cycle\"";
        os << dot_edge(e) << " [" << attrs << "];\n";
    }
    os << "}\n";
    return os.str();
}

std::string sweep_summary_json(const std::vector<SweepReport>& reports) {
    json out = json::array();
    for (const auto& r : reports) {
        json cell;
        cell["theorem"] = r.theorem;
        cell["n"] = r.n;
        cell["m"] = r.cell.m_size;
        cell["f"] = r.cell.f_size;
        cell["mode"] = r.sampled ? "sampled" : "classes";
        if (r.sampled) cell["seed"] = r.seed;
        cell["tested"] = r.tested;
        cell["successes"] = r.successes;
        cell["exceptional"] = r.exceptional;
        cell["disagreements"] = r.disagreements;
        cell["failures"] = r.failures;
        cell["oracle_checked"] = r.oracle_checked;
        cell["seconds"] = r.wall_seconds;
        cell["pass"] = r.pass();
        json exc = json::array();
        for (const auto& e : r.exceptional_instances)
            exc.push_back({{"matching", edges_json(e.instance.matching)},
                           {"faults", edges_json(e.instance.faults)},
                           {"oracle", to_string(e.oracle)}});
        cell["exceptional_instances"] = exc;
        cell["labels"] = r.label_counts;
        out.push_back(cell);
    }
    return out.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ArgumentError("cannot write '" + tmp + "'");
        out << content;
        if (!out.flush()) throw ArgumentError("cannot write '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::remove(tmp.c_str());
        throw ArgumentError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
    }
}

}  // namespace hcube
