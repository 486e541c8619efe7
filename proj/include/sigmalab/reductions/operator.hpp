#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include "sigmalab/catalog/presentation.hpp"
#include "sigmalab/core/fragment.hpp"
#include "sigmalab/reductions/prefix.hpp"

namespace sigmalab {

// One pass of an operator over a stream S↾0, S↾1, ...; each call returns the
// output prefix determined so far, which extends the previous one.
class OperatorRun {
public:
    virtual ~OperatorRun() = default;
    virtual const OutputPrefix& feed(const FiniteFragment& f) = 0;
};

// A monotone map from fragments to output prefixes, with the relation it
// targets. `total` marks operators defined on every fragment of the signature
// rather than only on copies of family members.
struct ReductionOperator {
    std::string name;
    Relation target = Relation::Id;
    bool total = false;
    std::function<std::unique_ptr<OperatorRun>()> start;
    // Complete limiting range on copies of member i, when the construction
    // knows it (E_range operators).
    std::function<std::optional<std::set<std::uint64_t>>(std::size_t)> declared_range;

    OutputPrefix apply(const FiniteFragment& f) const {
        auto run = start();
        OutputPrefix out = columnar(target) ? OutputPrefix::make_columnar() : OutputPrefix::make_flat();
        for (std::size_t n = 1; n <= f.size(); ++n) out = run->feed(f.restrict(n));
        return out;
    }
};

// Γ along a presentation, kept in lockstep with the stages requested.
class OperatorTrace {
public:
    OperatorTrace(const ReductionOperator& g, Presentation p) : run_(g.start()), p_(std::move(p)) {
        current_ = columnar(g.target) ? OutputPrefix::make_columnar() : OutputPrefix::make_flat();
    }

    const OutputPrefix& at(std::size_t s) {
        while (fed_ < s + 1) current_ = run_->feed(p_.at(fed_++));
        if (fed_ > s + 1) throw ConstructionError("operator trace already past stage " + std::to_string(s));
        return current_;
    }
    const OutputPrefix& current() const { return current_; }
    std::size_t stages() const { return fed_; }

private:
    std::unique_ptr<OperatorRun> run_;
    Presentation p_;
    OutputPrefix current_;
    std::size_t fed_ = 0;
};

// Two flat prefixes contradict each other on their common part.
inline bool inconsistent(const OutputPrefix& a, const OutputPrefix& b) {
    std::size_t n = std::min(a.flat.size(), b.flat.size());
    for (std::size_t k = 0; k < n; ++k)
        if (a.flat[k] != b.flat[k]) return true;
    return false;
}

}  // namespace sigmalab
