#include "hcube/trace.hpp"

namespace hcube {

void ConstructionTrace::begin(int n, int dim, std::string label) {
    steps_.push_back(TraceStep{n, dim, std::move(label), {}, {}, {}});
}

TraceStep* ConstructionTrace::open_step(int n) {
    for (auto it = steps_.rbegin(); it != steps_.rend(); ++it)
        if (it->n == n) return &*it;
    return nullptr;
}

void ConstructionTrace::relabel(int n, std::string label) {
    if (TraceStep* s = open_step(n)) s->label = std::move(label);
}

void ConstructionTrace::note_call(int n, std::string call) {
    if (TraceStep* s = open_step(n)) s->calls.push_back(std::move(call));
}

void ConstructionTrace::note_surgery(int n, const EdgeSet& removed, const EdgeSet& added) {
    if (TraceStep* s = open_step(n)) {
        s->removed = s->removed.unite(removed);
        s->added = s->added.unite(added);
    }
}

void ConstructionTrace::rollback(std::size_t mark) {
    if (mark < steps_.size()) steps_.resize(mark);
}

std::vector<std::string> ConstructionTrace::labels() const {
    std::vector<std::string> out;
    out.reserve(steps_.size());
    for (const auto& s : steps_) out.push_back(s.label);
    return out;
}

}  // namespace hcube
