#pragma once

// Record of the decisions taken by a construction: one step per recursion
// level or base-case route, with the split dimension, the case label, the
// primitive operations invoked and the surgery edges.

#include <string>
#include <vector>

#include "hcube/cube.hpp"

namespace hcube {

struct TraceStep {
    int n = 0;
    int dim = -1;  // split dimension, -1 when the step does not split
    std::string label;
    std::vector<std::string> calls;
    EdgeSet removed;  // Q_n coordinates
    EdgeSet added;
};

class ConstructionTrace {
public:
    /// Opens a new step; later note/surgery calls attach to it.
    void begin(int n, int dim, std::string label);
    /// Replaces the label of the innermost open step at dimension n.
    void relabel(int n, std::string label);
    void note_call(int n, std::string call);
    void note_surgery(int n, const EdgeSet& removed, const EdgeSet& added);

    /// Position to return to when an attempted branch is abandoned.
    std::size_t mark() const { return steps_.size(); }
    void rollback(std::size_t mark);

    const std::vector<TraceStep>& steps() const { return steps_; }
    std::vector<std::string> labels() const;

private:
    TraceStep* open_step(int n);
    std::vector<TraceStep> steps_;
};

/// Null-safe helpers so code paths without a trace need no branches.
inline void trace_begin(ConstructionTrace* t, int n, int dim, std::string label) {
    if (t) t->begin(n, dim, std::move(label));
}
inline void trace_relabel(ConstructionTrace* t, int n, std::string label) {
    if (t) t->relabel(n, std::move(label));
}
inline void trace_call(ConstructionTrace* t, int n, std::string call) {
    if (t) t->note_call(n, std::move(call));
}
inline void trace_surgery(ConstructionTrace* t, int n, const EdgeSet& removed, const EdgeSet& added) {
    if (t) t->note_surgery(n, removed, added);
}

}  // namespace hcube
