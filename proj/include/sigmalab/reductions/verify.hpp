#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sigmalab/catalog/family.hpp"
#include "sigmalab/catalog/presentation.hpp"
#include "sigmalab/reductions/operator.hpp"

namespace sigmalab {

struct ReductionReport {
    bool pass = true;
    std::size_t monotonicity_violations = 0;
    std::size_t range_violations = 0;
    std::size_t same_member_pairs = 0, same_member_failures = 0;
    std::size_t cross_pairs = 0, cross_unseparated = 0;
    nlohmann::json cells = nlohmann::json::array();

    nlohmann::json to_json() const {
        return {{"pass", pass},
                {"monotonicity_violations", monotonicity_violations},
                {"range_violations", range_violations},
                {"same_member_pairs", same_member_pairs},
                {"same_member_failures", same_member_failures},
                {"cross_pairs", cross_pairs},
                {"cross_unseparated", cross_unseparated},
                {"cells", cells}};
    }
};

namespace verify_detail {

// Columns whose mismatches persist into the second half of the common part.
inline std::vector<std::size_t> late_disagreements(const OutputPrefix& a, const OutputPrefix& b) {
    std::vector<std::size_t> cols;
    auto late = [](const std::vector<std::uint64_t>& x, const std::vector<std::uint64_t>& y) {
        auto g = agreement(x, y);
        return g.last_mismatch && 2 * (*g.last_mismatch + 1) > g.common;
    };
    if (!a.columnar) {
        if (late(a.flat, b.flat)) cols.push_back(0);
        return cols;
    }
    for (std::size_t m = 0; m < std::min(a.columns.size(), b.columns.size()); ++m)
        if (late(a.columns[m], b.columns[m])) cols.push_back(m);
    return cols;
}

}  // namespace verify_detail

// Runs Γ on seeded copies of every member to `horizon` stages and compares
// all pairs: copies of one member must never be certified distinct, copies of
// different members must show the separation evidence of the target relation.
inline ReductionReport verify_reduction(const ReductionOperator& g, const Family& fam, std::size_t horizon,
                                        const std::vector<std::uint64_t>& seeds) {
    ReductionReport rep;
    if (fam.empty() || seeds.empty() || horizon == 0) return rep;
    struct Run {
        std::size_t member;
        std::uint64_t seed;
        OutputPrefix out;
    };
    std::vector<Run> runs;
    for (std::size_t i = 0; i < fam.size(); ++i)
        for (auto seed : seeds) {
            OperatorTrace t(g, present(fam[i], seed));
            OutputPrefix prev = t.at(0);
            auto limit = g.declared_range ? g.declared_range(i) : std::nullopt;
            for (std::size_t s = 0; s < horizon; ++s) {
                const auto& cur = t.at(s);
                if (!prev.is_prefix_of(cur)) ++rep.monotonicity_violations;
                if (limit)
                    for (auto v : cur.range())
                        if (!limit->count(v)) {
                            ++rep.range_violations;
                            break;
                        }
                prev = cur;
            }
            runs.push_back({i, seed, prev});
        }

    for (std::size_t a = 0; a < runs.size(); ++a)
        for (std::size_t b = a + 1; b < runs.size(); ++b) {
            const auto& ra = runs[a];
            const auto& rb = runs[b];
            auto ca = g.declared_range ? g.declared_range(ra.member) : std::nullopt;
            auto cb = g.declared_range ? g.declared_range(rb.member) : std::nullopt;
            auto v = check_prefix(g.target, ra.out, rb.out, ca, cb);
            nlohmann::json cell{{"left", {{"member", ra.member}, {"seed", ra.seed}}},
                                {"right", {{"member", rb.member}, {"seed", rb.seed}}},
                                {"verdict", v.to_json()}};
            if (ra.member == rb.member) {
                ++rep.same_member_pairs;
                bool bad = v.distinct();
                cell["ok"] = !bad;
                rep.same_member_failures += bad;
            } else {
                ++rep.cross_pairs;
                bool separated = false;
                switch (g.target) {
                    case Relation::EqN:
                    case Relation::Id: separated = v.distinct(); break;
                    case Relation::Erange: {
                        separated = v.distinct() || !v.evidence["only_left"].empty() || !v.evidence["only_right"].empty();
                        break;
                    }
                    case Relation::E0:
                    case Relation::E3:
                    case Relation::Eset: {
                        auto cols = verify_detail::late_disagreements(ra.out, rb.out);
                        cell["late_disagreement_columns"] = cols;
                        separated = !cols.empty();
                        break;
                    }
                }
                cell["ok"] = separated;
                rep.cross_unseparated += !separated;
            }
            rep.cells.push_back(cell);
        }
    rep.pass = rep.monotonicity_violations == 0 && rep.range_violations == 0 && rep.same_member_failures == 0 &&
               rep.cross_unseparated == 0;
    return rep;
}

}  // namespace sigmalab
