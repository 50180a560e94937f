// Command-line front end: construct, verify, sweep and exceptions.
//
// Exit codes
//   0  success
//   1  verification or sweep failed
//   2  usage or argument error
//   3  unreadable or malformed input file
//   4  precondition violated by the instance
//   5  the instance is the exceptional Q_4 configuration (no cycle exists)
//   6  internal invariant violated (a bug)
//   7  search budget exhausted or operation unsupported
//   8  exception catalog mismatch

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hcube/basecases.hpp"
#include "hcube/constructor.hpp"
#include "hcube/errors.hpp"
#include "hcube/io.hpp"
#include "hcube/verify.hpp"

namespace {

using namespace hcube;

enum Exit : int {
    ok = 0,
    failed = 1,
    usage = 2,
    parse = 3,
    precondition = 4,
    case_a = 5,
    internal = 6,
    resource = 7,
    mismatch = 8,
};

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-")
        std::cout << content;
    else
        write_text_file_atomic(path, content);
}

struct ConstructArgs {
    std::string instance;
    bool faulty = false;
    bool trace = false;
    std::string dot;
    std::string out;
};

int cmd_construct(const ConstructArgs& a) {
    const Instance inst = parse_instance(read_text_file(a.instance));
    ConstructionTrace trace;
    ConstructionTrace* tp = a.trace ? &trace : nullptr;
    std::optional<HamCycle> cycle;
    if (a.faulty) {
        FaultyOutcome r = extend_matching_faulty(inst.n, inst.matching, inst.faults, tp);
        if (r.case_a()) {
            std::cerr << "hcube: the instance is the exceptional Q_4 configuration; "
                         "no Hamiltonian cycle contains M and avoids F\n";
            return case_a;
        }
        cycle = std::move(r.cycle);
    } else {
        if (!inst.faults.empty())
            throw PreconditionError("the instance lists faulty edges; use --faulty");
        cycle = extend_matching(inst.n, inst.matching, tp);
    }
    const CycleVerdict v = validate_cycle(*cycle, inst.matching, inst.faults);
    if (!v.pass()) {
        std::cerr << "hcube: constructed cycle failed re-verification";
        if (!v.problems.empty()) std::cerr << ": " << v.problems.front();
        std::cerr << "\n";
        return internal;
    }
    emit(a.out, serialize_cycle_file(make_cycle_file(*cycle, tp)));
    if (!a.dot.empty()) write_text_file_atomic(a.dot, to_dot(*cycle, inst.matching, inst.faults));
    return ok;
}

int cmd_verify(const std::string& instance_path, const std::string& cycle_path) {
    const Instance inst = parse_instance(read_text_file(instance_path));
    const CycleFile cf = parse_cycle_file(read_text_file(cycle_path));
    if (cf.n != inst.n) throw ParseError("cycle file dimension differs from the instance");
    const auto m = to_pairs(inst.matching);
    const auto f = to_pairs(inst.faults);
    const CycleVerdict v = validate_cycle(cf.cycle, inst.n, m, f);
    auto line = [](const char* name, bool pass) { std::cout << name << ": " << (pass ? "pass" : "FAIL") << "\n"; };
    line("(a) adjacency", v.adjacency);
    line("(b) coverage", v.coverage);
    line("(c) contains matching", v.contains_matching);
    line("(d) avoids faults", v.avoids_faults);
    for (const auto& p : v.problems) std::cout << "  " << p << "\n";
    std::cout << "verdict: " << (v.pass() ? "pass" : "fail") << "\n";
    return v.pass() ? ok : failed;
}

struct SweepArgs {
    int theorem = 1;
    int n = 0;
    std::optional<int> m;
    std::optional<int> f;
    std::uint64_t sample = 0;
    std::uint64_t seed = 1;
    std::string out;
    std::string json;
};

int cmd_sweep(const SweepArgs& a) {
    if (a.theorem != 1 && a.theorem != 2) throw ArgumentError("--theorem must be 1 or 2");
    std::vector<SweepCell> cells;
    if (a.m && a.f) {
        cells.push_back(SweepCell{*a.m, *a.f});
    } else {
        for (const auto& c : legal_cells(a.theorem, a.n))
            if ((!a.m || c.m_size == *a.m) && (!a.f || c.f_size == *a.f)) cells.push_back(c);
        if (cells.empty()) throw ArgumentError("no legal cell matches the selectors");
    }
    SweepOptions opts;
    opts.samples = a.sample;
    opts.seed = a.seed;
    std::vector<SweepReport> reports;
    std::string text;
    bool pass = true;
    for (const auto& c : cells) {
        reports.push_back(sweep(a.theorem, a.n, c, opts));
        const SweepReport& r = reports.back();
        text += format_report_line(r) + "\n";
        for (const auto& e : r.exceptional_instances) {
            std::ostringstream os;
            os << "  exceptional M=" << e.instance.matching << " F=" << e.instance.faults << " oracle=" << to_string(e.oracle)
               << "\n";
            text += os.str();
        }
        for (const auto& msg : r.failure_messages) text += "  failure " + msg + "\n";
        pass = pass && r.pass();
    }
    emit(a.out, text);
    if (!a.json.empty()) write_text_file_atomic(a.json, sweep_summary_json(reports));
    return pass ? ok : failed;
}

int cmd_exceptions(const std::string& out, const std::string& check) {
    const ExceptionCatalog built = build_exception_catalog();
    if (!check.empty()) {
        const ExceptionCatalog stored = parse_catalog(read_text_file(check));
        if (!(stored == built)) throw CatalogMismatch("stored catalog '" + check + "' differs from the recomputed one");
        std::cout << "catalog '" << check << "' matches the recomputed catalog\n";
    }
    if (check.empty() || !out.empty()) emit(out, export_catalog(built));
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hamiltonian cycles of hypercubes through prescribed matchings"};
    app.require_subcommand(1);

    ConstructArgs construct;
    auto* c = app.add_subcommand("construct", "Build a Hamiltonian cycle through the instance's matching");
    c->add_option("instance", construct.instance, "Instance file (JSON)")->required();
    c->add_flag("--faulty", construct.faulty, "Avoid the instance's faulty edges");
    c->add_flag("--trace", construct.trace, "Record the case labels in the cycle file");
    c->add_option("--dot", construct.dot, "Also write a Graphviz DOT file");
    c->add_option("-o,--output", construct.out, "Cycle file (default: stdout)");

    std::string verify_instance;
    std::string verify_cycle;
    auto* v = app.add_subcommand("verify", "Check a cycle file against an instance");
    v->add_option("instance", verify_instance, "Instance file (JSON)")->required();
    v->add_option("cycle", verify_cycle, "Cycle file (JSON)")->required();

    SweepArgs sw;
    auto* s = app.add_subcommand("sweep", "Run a construction over isomorphism classes or random samples");
    s->add_option("--theorem", sw.theorem, "1: no faults, 2: with faults")->required();
    s->add_option("--n", sw.n, "Dimension")->required();
    s->add_option("--m", sw.m, "Matching size (default: every legal size)");
    s->add_option("--f", sw.f, "Fault count (default: every legal count)");
    s->add_option("--sample", sw.sample, "Random instances per cell (default: every class)");
    s->add_option("--seed", sw.seed, "Seed of the sampler");
    s->add_option("-o,--output", sw.out, "Report file (default: stdout)");
    s->add_option("--json", sw.json, "Also write a JSON summary");

    std::string exc_out;
    std::string exc_check;
    auto* e = app.add_subcommand("exceptions", "Derive the catalog of exceptional configurations");
    e->add_option("-o,--output", exc_out, "Catalog file (default: stdout)");
    e->add_option("--check", exc_check, "Compare a stored catalog with the recomputed one");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::ParseError& ex) {
        app.exit(ex);
        return usage;
    }

    try {
        if (*c) return cmd_construct(construct);
        if (*v) return cmd_verify(verify_instance, verify_cycle);
        if (*s) return cmd_sweep(sw);
        if (*e) return cmd_exceptions(exc_out, exc_check);
    } catch (const CatalogMismatch& ex) {
        std::cerr << "hcube: catalog mismatch: " << ex.what() << "\n";
        return mismatch;
    } catch (const ParseError& ex) {
        std::cerr << "hcube: parse error: " << ex.what() << "\n";
        return parse;
    } catch (const PreconditionError& ex) {
        std::cerr << "hcube: precondition violated: " << ex.what() << "\n";
        return precondition;
    } catch (const ArgumentError& ex) {
        std::cerr << "hcube: argument error: " << ex.what() << "\n";
        return usage;
    } catch (const InternalInvariantError& ex) {
        std::cerr << "hcube: internal error: " << ex.what() << "\n";
        return internal;
    } catch (const BudgetExceeded& ex) {
        std::cerr << "hcube: search budget exhausted: " << ex.what() << "\n";
        return resource;
    } catch (const UnsupportedError& ex) {
        std::cerr << "hcube: unsupported: " << ex.what() << "\n";
        return resource;
    }
    return usage;
}
