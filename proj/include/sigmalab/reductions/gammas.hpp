#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sigmalab/learners/constructions.hpp"
#include "sigmalab/pairing.hpp"
#include "sigmalab/reductions/operator.hpp"

namespace sigmalab {

namespace gamma_detail {

template <class F>
class LambdaRun : public OperatorRun {
public:
    LambdaRun(OutputPrefix init, F f) : out_(std::move(init)), f_(std::move(f)) {}
    const OutputPrefix& feed(const FiniteFragment& frag) override {
        f_(frag, out_);
        return out_;
    }

private:
    OutputPrefix out_;
    F f_;
};

template <class F>
std::unique_ptr<OperatorRun> make_run(OutputPrefix init, F f) {
    return std::make_unique<LambdaRun<F>>(std::move(init), std::move(f));
}

// First stage at which each witness holds, filled in as stages arrive.
struct TriggerTable {
    std::vector<std::pair<std::pair<std::size_t, std::size_t>, FormulaWitness>> phi;
    std::vector<std::optional<std::size_t>> first;

    explicit TriggerTable(const PairwiseWitnesses& w) {
        for (const auto& kv : w) phi.push_back(kv);
        first.assign(phi.size(), std::nullopt);
    }
    void update(const FiniteFragment& f, std::size_t s) {
        for (std::size_t k = 0; k < phi.size(); ++k)
            if (!first[k] && sat_fragment(phi[k].second, f)) first[k] = s;
    }
    // phi_ij is defined and holds on S↾t.
    bool holds(std::size_t i, std::size_t j, std::size_t t) const {
        for (std::size_t k = 0; k < phi.size(); ++k)
            if (phi[k].first == std::make_pair(i, j)) return first[k] && *first[k] <= t;
        return false;
    }
};

}  // namespace gamma_detail

// =ℕ-reduction from a Fin-learner: nothing until the learner commits to i,
// then i at every later stage.
inline ReductionOperator gamma_fin_to_eqnat(const Family& fam, const FinLearner& fin) {
    ReductionOperator g;
    g.name = "fin_to_eqnat";
    g.target = Relation::EqN;
    auto proto = std::make_shared<FinLearner>(fin);
    g.start = [proto]() {
        return gamma_detail::make_run(OutputPrefix::make_flat(), [m = LearnerPtr(proto->clone())](
                                                                      const FiniteFragment& f, OutputPrefix& out) mutable {
            auto h = m->step(f);
            if (!h.is_question()) out.flat.push_back(h.code());
        });
    };
    const std::size_t n = fam.size();
    g.declared_range = [n](std::size_t i) -> std::optional<std::set<std::uint64_t>> {
        if (i >= n) return std::nullopt;
        return std::set<std::uint64_t>{i};
    };
    return g;
}

// Total version on arbitrary fragments of the signature: one entry per stage,
// |K| while no strong witness holds, then the least code whose witness held
// first.
inline ReductionOperator gamma_fin_to_eqnat_total(const Family& fam, std::vector<FormulaWitness> strong) {
    if (strong.size() != fam.size()) throw ConfigurationError("one strong witness per member required");
    ReductionOperator g;
    g.name = "fin_to_eqnat_total";
    g.target = Relation::Id;
    g.total = true;
    auto phi = std::make_shared<std::vector<FormulaWitness>>(std::move(strong));
    g.start = [phi]() {
        return gamma_detail::make_run(OutputPrefix::make_flat(),
                                      [phi, committed = std::optional<std::size_t>()](const FiniteFragment& f,
                                                                                      OutputPrefix& out) mutable {
                                          if (!committed)
                                              for (std::size_t i = 0; i < phi->size(); ++i)
                                                  if (sat_fragment((*phi)[i], f)) {
                                                      committed = i;
                                                      break;
                                                  }
                                          out.flat.push_back(committed ? *committed : phi->size());
                                      });
    };
    return g;
}

// Witnesses phi_ij for every ordered pair with Th(A_i) not inside Th(A_j),
// checked against the classifier. Rejects families that are not Σ1-posets.
inline PairwiseWitnesses poset_witnesses(const Family& fam, const std::string& who) {
    auto c = classify_family(fam);
    if (!c.is_partial_order()) throw ConfigurationError(who + ": " + fam.describe() + " is not a Σ1-partial order");
    for (std::size_t i = 0; i < fam.size(); ++i)
        for (std::size_t j = 0; j < fam.size(); ++j)
            if (i != j && !c.leq[i][j] && !c.pairwise.count({i, j}))
                throw ConfigurationError(who + ": no witness for (" + std::to_string(i) + "," + std::to_string(j) + ")");
    return c.pairwise;
}

inline std::set<std::uint64_t> erange_limit(const Family& fam, const PairwiseWitnesses& w, std::size_t member) {
    std::set<std::uint64_t> r{pair(0, 0)};
    for (const auto& [k, phi] : w)
        if (sat_catalog(phi, fam[member])) r.insert(pair(k.first, k.second));
    return r;
}

// E_range-reduction: position <s,i,j> holds <i,j> when phi_ij holds on S↾s,
// else <0,0>. Stage s fixes every position below <s+1,0,0>.
inline ReductionOperator gamma_erange(const Family& fam, const PairwiseWitnesses& w) {
    auto c = classify_family(fam);
    if (!c.is_partial_order()) throw ConfigurationError("gamma_erange: " + fam.describe() + " is not a Σ1-partial order");
    verify_pairwise(fam, w, false, "gamma_erange");
    for (std::size_t i = 0; i < fam.size(); ++i)
        for (std::size_t j = 0; j < fam.size(); ++j)
            if (i != j && !c.leq[i][j] && !w.count({i, j}))
                throw ConfigurationError("gamma_erange: missing witness (" + std::to_string(i) + "," + std::to_string(j) + ")");
    ReductionOperator g;
    g.name = "erange";
    g.target = Relation::Erange;
    g.start = [w]() {
        return gamma_detail::make_run(
            OutputPrefix::make_flat(),
            [t = gamma_detail::TriggerTable(w), s = std::size_t(0)](const FiniteFragment& f, OutputPrefix& out) mutable {
                t.update(f, s);
                const std::uint64_t end = pair(s + 1, 0);
                for (std::uint64_t z = out.flat.size(); z < end; ++z) {
                    auto [st, ij] = unpair(z);
                    auto [i, j] = unpair(ij);
                    out.flat.push_back(t.holds(i, j, st) ? pair(i, j) : pair(0, 0));
                }
                ++s;
            });
    };
    auto limits = std::make_shared<std::vector<std::set<std::uint64_t>>>();
    for (std::size_t k = 0; k < fam.size(); ++k) limits->push_back(erange_limit(fam, w, k));
    g.declared_range = [limits](std::size_t i) -> std::optional<std::set<std::uint64_t>> {
        if (i >= limits->size()) return std::nullopt;
        return (*limits)[i];
    };
    return g;
}

inline ReductionOperator gamma_erange(const Family& fam) { return gamma_erange(fam, poset_witnesses(fam, "gamma_erange")); }

// E_3-reduction: column <i,j> reads 0 until phi_ij holds, 1 afterwards; all 0
// when i = j or Th(A_i) ⊆ Th(A_j).
inline ReductionOperator gamma_erange_to_e3(const Family& fam, const PairwiseWitnesses& w) {
    auto base = gamma_erange(fam, w);  // same preconditions
    ReductionOperator g;
    g.name = "erange_to_e3";
    g.target = Relation::E3;
    const std::size_t cols = fam.empty() ? 0 : pair(fam.size() - 1, fam.size() - 1) + 1;
    g.start = [w, cols]() {
        return gamma_detail::make_run(
            OutputPrefix::make_columnar(std::vector<std::vector<std::uint64_t>>(cols)),
            [t = gamma_detail::TriggerTable(w), s = std::size_t(0)](const FiniteFragment& f, OutputPrefix& out) mutable {
                t.update(f, s);
                for (std::size_t c = 0; c < out.columns.size(); ++c) {
                    auto [i, j] = unpair(c);
                    out.columns[c].push_back(t.holds(i, j, s) ? 1 : 0);
                }
                ++s;
            });
    };
    return g;
}

inline ReductionOperator gamma_erange_to_e3(const Family& fam) {
    return gamma_erange_to_e3(fam, poset_witnesses(fam, "gamma_erange_to_e3"));
}

// 0^{p(0)} 1 0^{p(1)} 1 ...
inline std::vector<std::uint64_t> unary_encode(const std::vector<std::uint64_t>& p) {
    std::vector<std::uint64_t> out;
    for (auto v : p) {
        out.insert(out.end(), v, 0);
        out.push_back(1);
    }
    return out;
}

inline std::string unary_string(const std::vector<std::uint64_t>& p) {
    std::string s;
    for (auto b : unary_encode(p)) s += b ? '1' : '0';
    return s;
}

// Inverse on complete blocks; trailing zeros without a separator are dropped.
inline std::vector<std::uint64_t> unary_decode(const std::vector<std::uint64_t>& bits) {
    std::vector<std::uint64_t> out;
    std::uint64_t run = 0;
    for (auto b : bits) {
        if (b > 1) throw ParseError("unary code is over {0,1}");
        if (b) {
            out.push_back(run);
            run = 0;
        } else {
            ++run;
        }
    }
    return out;
}

// Columnar prefix as CSV, one row per position, one column per Γ-column.
inline std::string to_csv(const OutputPrefix& p) {
    std::string s;
    if (!p.columnar) {
        s = "position,value\n";
        for (std::size_t k = 0; k < p.flat.size(); ++k) s += std::to_string(k) + "," + std::to_string(p.flat[k]) + "\n";
        return s;
    }
    std::size_t rows = 0;
    s = "position";
    for (std::size_t c = 0; c < p.columns.size(); ++c) {
        s += ",col" + std::to_string(c);
        rows = std::max(rows, p.columns[c].size());
    }
    s += "\n";
    for (std::size_t k = 0; k < rows; ++k) {
        s += std::to_string(k);
        for (const auto& col : p.columns) s += "," + (k < col.size() ? std::to_string(col[k]) : std::string());
        s += "\n";
    }
    return s;
}

}  // namespace sigmalab
