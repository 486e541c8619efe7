#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sigmalab/catalog/oracle.hpp"
#include "sigmalab/learners/learner.hpp"
#include "sigmalab/logic/classify.hpp"
#include "sigmalab/logic/sigma2.hpp"
#include "sigmalab/pairing.hpp"

namespace sigmalab {

namespace learner_detail {

constexpr std::int64_t kNone = -1;

inline std::size_t require_code(const Family& fam, const CatalogStructure& s, const std::string& who) {
    auto c = fam.code_of(s);
    if (!c) throw ConfigurationError(who + ": family lacks " + s.to_string());
    return *c;
}

// Least element of the order fragment (below everything), if any.
inline std::int64_t least(const FiniteFragment& f) {
    for (Element x = 0; x < f.size(); ++x)
        if (f.out(0, x).size() == f.size()) return x;
    return kNone;
}

inline std::int64_t greatest(const FiniteFragment& f) {
    for (Element x = 0; x < f.size(); ++x)
        if (f.in(0, x).size() == f.size()) return x;
    return kNone;
}

// Number of earlier-or-equal stages at which a value was seen.
class ValueCounter {
public:
    std::size_t push(std::int64_t v) { return ++counts_[v]; }

private:
    std::unordered_map<std::int64_t, std::size_t> counts_;
};

// Longest chain in an order fragment, counted in elements.
inline std::size_t height(const FiniteFragment& f) {
    if (f.empty()) return 0;
    std::vector<Element> order(f.size());
    for (Element x = 0; x < f.size(); ++x) order[x] = x;
    std::sort(order.begin(), order.end(),
              [&](Element a, Element b) { return f.in(0, a).size() < f.in(0, b).size(); });
    std::vector<std::size_t> len(f.size(), 1);
    std::size_t best = 1;
    for (auto y : order) {
        for (auto x : f.in(0, y))
            if (x != y) len[y] = std::max(len[y], len[x] + 1);
        best = std::max(best, len[y]);
    }
    return best;
}

}  // namespace learner_detail

// Ex-learner for {ω, ω*}: compares how long the current least and greatest
// elements have persisted.
class ExMinMaxLearner : public LearnerBase<ExMinMaxLearner> {
public:
    explicit ExMinMaxLearner(const Family& fam) {
        if (fam.size() != 2) throw ConfigurationError("ex_minmax needs exactly {omega, omega_star}");
        omega_ = learner_detail::require_code(fam, CatalogStructure::omega(), "ex_minmax");
        omega_star_ = learner_detail::require_code(fam, CatalogStructure::omega_star(), "ex_minmax");
    }

    Hypothesis next(const FiniteFragment& f, std::size_t) {
        auto cmin = mins_.push(learner_detail::least(f));
        auto cmax = maxs_.push(learner_detail::greatest(f));
        if (cmin > cmax) return Hypothesis::conjecture(omega_);
        if (cmin < cmax) return Hypothesis::conjecture(omega_star_);
        return kQuestion;
    }
    std::string id() const override { return "ex_minmax"; }

private:
    std::size_t omega_ = 0, omega_star_ = 1;
    learner_detail::ValueCounter mins_, maxs_;
};

// Waits for the first strong witness to hold, then commits forever.
class FinLearner : public LearnerBase<FinLearner> {
public:
    FinLearner(const Family& fam, std::vector<FormulaWitness> strong) : phi_(std::move(strong)) {
        if (phi_.size() != fam.size()) throw ConfigurationError("fin: one strong witness per member required");
        for (std::size_t i = 0; i < fam.size(); ++i)
            for (std::size_t j = 0; j < fam.size(); ++j)
                if (sat_catalog(phi_[i], fam[j]) != (i == j))
                    throw ConfigurationError("fin: witness " + std::to_string(i) + " does not single out " +
                                             fam[i].to_string());
    }

    // Witnesses taken from the classifier; refuses families it cannot split.
    static FinLearner from_classifier(const Family& fam, std::size_t bound = 8) {
        auto c = classify_family(fam, bound);
        std::vector<FormulaWitness> w;
        for (std::size_t i = 0; i < fam.size(); ++i) {
            if (c.level != Level::StrongAntichain || !c.strong.at(i))
                throw ConfigurationError("fin: no strong witness for " + fam[i].to_string() + " within bound " +
                                         std::to_string(bound));
            w.push_back(*c.strong[i]);
        }
        return FinLearner(fam, std::move(w));
    }

    Hypothesis next(const FiniteFragment& f, std::size_t) {
        if (committed_) return Hypothesis::conjecture(*committed_);
        std::optional<std::size_t> hit;
        for (std::size_t i = 0; i < phi_.size(); ++i) {
            if (!sat_fragment(phi_[i], f)) continue;
            if (hit) throw WitnessInconsistency("witnesses " + std::to_string(*hit) + " and " + std::to_string(i) +
                                                " hold on the same fragment");
            hit = i;
        }
        committed_ = hit;
        return hit ? Hypothesis::conjecture(*hit) : kQuestion;
    }
    std::string id() const override { return "fin"; }

private:
    std::vector<FormulaWitness> phi_;
    std::optional<std::size_t> committed_;
};

using PairwiseWitnesses = std::map<std::pair<std::size_t, std::size_t>, FormulaWitness>;

// Verifies phi_ij: true in A_i, false in A_j.
inline void verify_pairwise(const Family& fam, const PairwiseWitnesses& w, bool need_all, const std::string& who) {
    for (const auto& [k, phi] : w) {
        auto [i, j] = k;
        if (i >= fam.size() || j >= fam.size() || i == j) throw ConfigurationError(who + ": bad witness index");
        if (!sat_catalog(phi, fam[i]) || sat_catalog(phi, fam[j]))
            throw ConfigurationError(who + ": witness (" + std::to_string(i) + "," + std::to_string(j) + ") fails");
    }
    if (need_all)
        for (std::size_t i = 0; i < fam.size(); ++i)
            for (std::size_t j = 0; j < fam.size(); ++j)
                if (i != j && !w.count({i, j}))
                    throw ConfigurationError(who + ": no witness separating " + fam[i].to_string() + " from " +
                                             fam[j].to_string());
}

// co-learner: at slot <i,t> says i iff A_i is triggered by stage t, that is
// some phi_ji with j != i holds on S↾t.
class CoLearner : public LearnerBase<CoLearner> {
public:
    CoLearner(const Family& fam, PairwiseWitnesses w) : n_(fam.size()) {
        verify_pairwise(fam, w, true, "co");
        against_.resize(n_);
        for (auto& [k, phi] : w) against_[k.second].emplace_back(phi);
        trigger_.assign(n_, std::nullopt);
    }

    static CoLearner from_classifier(const Family& fam, std::size_t bound = 8) {
        auto c = classify_family(fam, bound);
        if (c.level != Level::Antichain && c.level != Level::StrongAntichain)
            throw ConfigurationError("co: " + fam.describe() + " is not a Σ1-antichain (" + to_string(c.level) + ")");
        return CoLearner(fam, c.pairwise);
    }

    Hypothesis next(const FiniteFragment& f, std::size_t s) {
        for (std::size_t i = 0; i < n_; ++i) {
            if (trigger_[i]) continue;
            for (auto& phi : against_[i])
                if (phi.update(f)) trigger_[i] = s;
        }
        auto [i, t] = unpair(s);
        if (i < n_ && trigger_[i] && *trigger_[i] <= t) return Hypothesis::conjecture(i);
        return kQuestion;
    }
    std::string id() const override { return "co"; }

private:
    std::size_t n_;
    std::vector<std::vector<SatTracker>> against_;  // phi_ji for each i
    std::vector<std::optional<std::size_t>> trigger_;
};

// nUs-learner for solid Σ1-posets. Keeps its conjecture while the fragment
// still embeds into it; otherwise moves to the least code in C_s.
class NusLearner : public LearnerBase<NusLearner> {
public:
    NusLearner(const Family& fam, std::vector<FormulaWitness> solid) : fam_(fam), phi_(std::move(solid)) {
        if (phi_.size() != fam.size()) throw ConfigurationError("nus: one solid witness per member required");
        auto c = classify_family(fam);
        if (!c.is_partial_order()) throw ConfigurationError("nus: " + fam.describe() + " is not a Σ1-partial order");
        for (std::size_t i = 0; i < fam.size(); ++i) {
            if (!sat_catalog(phi_[i], fam[i])) throw ConfigurationError("nus: witness fails in its own member");
            for (std::size_t j = 0; j < fam.size(); ++j)
                if (j != i && c.leq[j][i] && sat_catalog(phi_[i], fam[j]))
                    throw ConfigurationError("nus: witness for " + fam[i].to_string() + " holds in " +
                                             fam[j].to_string() + " below it");
        }
    }

    static NusLearner from_classifier(const Family& fam, std::size_t bound = 8) {
        auto c = classify_family(fam, bound);
        if (!c.is_partial_order() || c.solid != Solidity::Solid)
            throw ConfigurationError("nus: " + fam.describe() + " is not confirmed solid");
        std::vector<FormulaWitness> w;
        for (const auto& x : c.solid_witnesses) w.push_back(*x);
        return NusLearner(fam, std::move(w));
    }

    Hypothesis next(const FiniteFragment& f, std::size_t s) {
        Hypothesis out = kQuestion;
        if (s > 0) {
            bool keep = prev_candidates_.empty() ||
                        (!current_.is_question() && embeds_in_catalog(f, fam_[current_.code()]));
            out = keep ? current_ : Hypothesis::conjecture(prev_candidates_.front());
        }
        // C_s for the next stage
        prev_candidates_.clear();
        for (std::size_t i = 0; i < fam_.size(); ++i)
            if (embeds_in_catalog(f, fam_[i]) && sat_fragment(phi_[i], f)) prev_candidates_.push_back(i);
        current_ = out;
        return out;
    }
    std::string id() const override { return "nus"; }

private:
    Family fam_;
    std::vector<FormulaWitness> phi_;
    std::vector<std::size_t> prev_candidates_;
    Hypothesis current_;
};

// Members of 𝔓 in the family, by poset index.
inline std::map<std::size_t, std::size_t> poset_family_codes(const Family& fam) {
    std::map<std::size_t, std::size_t> by_k;
    for (std::size_t c = 0; c < fam.size(); ++c) {
        const auto& m = fam[c];
        if (m.shape() != Shape::Tilde || m.arg(0).shape() != Shape::PosetP)
            throw ConfigurationError("ex_poset: " + m.to_string() + " is not a padded P_k");
        by_k[m.arg(0).param()] = c;
    }
    if (!by_k.count(0)) throw ConfigurationError("ex_poset: family lacks the padded P_0");
    return by_k;
}

// Ex-learner for 𝔓: says P̃_0 when the fragment has a least non-isolated
// element a whose remaining non-isolated elements all sit above a single b > a;
// else the least P̃_i, i > 0, that the fragment embeds into.
class ExPosetLearner : public LearnerBase<ExPosetLearner> {
public:
    explicit ExPosetLearner(const Family& fam) : fam_(fam), by_k_(poset_family_codes(fam)) {}

    static bool guard(const FiniteFragment& f) {
        std::vector<Element> live;
        for (Element x = 0; x < f.size(); ++x)
            if (!f.isolated(x)) live.push_back(x);
        auto least_of = [&](std::optional<Element> skip) -> std::optional<Element> {
            std::optional<Element> cand;
            for (auto x : live) {
                if (skip && x == *skip) continue;
                if (!cand || f.holds2(0, x, *cand)) cand = x;
            }
            if (!cand) return std::nullopt;
            for (auto x : live)
                if ((!skip || x != *skip) && !f.holds2(0, *cand, x)) return std::nullopt;
            return cand;
        };
        auto a = least_of(std::nullopt);
        if (!a) return false;
        auto b = least_of(*a);
        return b && f.holds2(0, *a, *b) && !f.holds2(0, *b, *a);
    }

    Hypothesis next(const FiniteFragment& f, std::size_t) {
        if (guard(f)) return Hypothesis::conjecture(by_k_.at(0));
        for (auto [k, code] : by_k_)
            if (k > 0 && embeds_in_catalog(f, fam_[code])) return Hypothesis::conjecture(code);
        return kQuestion;
    }
    std::string id() const override { return "ex_poset"; }

private:
    Family fam_;
    std::map<std::size_t, std::size_t> by_k_;
};

// Codes listed so that Σ1-inclusion only points forward, or nullopt when the
// family is not a Σ1-partial order.
inline std::optional<std::vector<std::size_t>> inclusion_order(const Family& fam) {
    auto c = classify_family(fam);
    if (!c.is_partial_order()) return std::nullopt;
    std::vector<std::size_t> order, below(fam.size(), 0);
    for (std::size_t i = 0; i < fam.size(); ++i)
        for (std::size_t j = 0; j < fam.size(); ++j)
            if (i != j && c.leq[j][i]) ++below[i];
    std::vector<bool> done(fam.size(), false);
    while (order.size() < fam.size()) {
        // least index whose lower cone is already listed
        for (std::size_t i = 0; i < fam.size(); ++i) {
            if (done[i]) continue;
            bool ready = true;
            for (std::size_t j = 0; j < fam.size(); ++j)
                if (j != i && !done[j] && c.leq[j][i]) ready = false;
            if (ready) {
                done[i] = true;
                order.push_back(i);
                break;
            }
        }
    }
    return order;
}

// Ex-learner for a finite Σ1-poset listed in inclusion-respecting order: the
// least member the fragment embeds into.
class ExMinEmbedLearner : public LearnerBase<ExMinEmbedLearner> {
public:
    explicit ExMinEmbedLearner(const Family& fam) : fam_(fam) {
        auto c = classify_family(fam);
        if (!c.is_partial_order()) throw ConfigurationError("ex_min_embed: " + fam.describe() + " is not a Σ1-partial order");
        for (std::size_t i = 0; i < fam.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (c.leq[i][j])
                    throw ConfigurationError("ex_min_embed: " + fam[i].to_string() + " sits below " + fam[j].to_string() +
                                             " but is listed after it");
    }

    Hypothesis next(const FiniteFragment& f, std::size_t) {
        for (std::size_t i = 0; i < fam_.size(); ++i)
            if (embeds_in_catalog(f, fam_[i])) return Hypothesis::conjecture(i);
        return kQuestion;
    }
    std::string id() const override { return "ex_min_embed"; }

private:
    Family fam_;
};

// PL-learner for the padded chains F*: repeats L̃_n while the longest chain
// stays n, and on growth picks ω̃ or ω̃* by comparing how long the bottom and
// top of the non-maximal / non-minimal parts have persisted.
class PlFstarLearner : public LearnerBase<PlFstarLearner> {
public:
    explicit PlFstarLearner(const Family& fam) {
        for (std::size_t c = 0; c < fam.size(); ++c) {
            if (!in_fstar(fam[c])) throw ConfigurationError("pl_fstar: " + fam[c].to_string() + " is not in F*");
            const auto& inner = fam[c].arg(0);
            if (inner.shape() == Shape::Chain) chains_[inner.param()] = c;
        }
        omega_ = learner_detail::require_code(fam, CatalogStructure::tilde(CatalogStructure::omega()), "pl_fstar");
        omega_star_ =
            learner_detail::require_code(fam, CatalogStructure::tilde(CatalogStructure::omega_star()), "pl_fstar");
    }

    Hypothesis next(const FiniteFragment& f, std::size_t s) {
        auto h = learner_detail::height(f);
        // endpoints of the elements below something / above something
        std::int64_t lo = learner_detail::kNone, hi = learner_detail::kNone;
        for (Element x = 0; x < f.size(); ++x) {
            if (f.out(0, x).size() > 1 && (lo == learner_detail::kNone || f.holds2(0, x, static_cast<Element>(lo)))) lo = x;
            if (f.in(0, x).size() > 1 && (hi == learner_detail::kNone || f.holds2(0, static_cast<Element>(hi), x))) hi = x;
        }
        Hypothesis out;
        if (s == 0) {
            out = Hypothesis::conjecture(omega_);
        } else if (h == prev_height_) {
            auto it = chains_.find(h);
            out = it == chains_.end() ? kQuestion : Hypothesis::conjecture(it->second);
        } else {
            out = Hypothesis::conjecture(prev_cmin_ >= prev_cmax_ ? omega_ : omega_star_);
        }
        prev_height_ = h;
        prev_cmin_ = mins_.push(lo);
        prev_cmax_ = maxs_.push(hi);
        return out;
    }
    std::string id() const override { return "pl_fstar"; }

private:
    std::map<std::size_t, std::size_t> chains_;
    std::size_t omega_ = 0, omega_star_ = 0;
    std::size_t prev_height_ = 0, prev_cmin_ = 0, prev_cmax_ = 0;
    learner_detail::ValueCounter mins_, maxs_;
};

}  // namespace sigmalab
