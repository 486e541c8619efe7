#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sigmalab/learners/learner.hpp"
#include "sigmalab/pairing.hpp"
#include "sigmalab/reductions/operator.hpp"

namespace sigmalab {

// Decisive wrapper: follows the inner learner except that it never moves to a
// value the inner learner has already shown before.
class NusToDec : public Learner {
public:
    explicit NusToDec(LearnerPtr inner) : inner_(std::move(inner)) {}
    NusToDec(const NusToDec& o) : inner_(o.inner_->clone()), seen_(o.seen_), last_inner_(o.last_inner_), out_(o.out_) {}

    Hypothesis step(const FiniteFragment& f) override { return feed(inner_->step(f)); }

    // The case table on a single inner output.
    Hypothesis feed(const Hypothesis& u) {
        if (!out_) {
            out_ = u;
        } else if (u == *out_ || (u != *last_inner_ && !seen_.count(u))) {
            out_ = u;
        }
        seen_.insert(u);
        last_inner_ = u;
        return *out_;
    }

    std::unique_ptr<Learner> clone() const override { return std::make_unique<NusToDec>(*this); }
    std::string id() const override { return "dec(" + inner_->id() + ")"; }

private:
    LearnerPtr inner_;
    std::set<Hypothesis> seen_;
    std::optional<Hypothesis> last_inner_;
    std::optional<Hypothesis> out_;
};

inline std::vector<Hypothesis> nus_to_dec_stream(const std::vector<Hypothesis>& inner) {
    NusToDec d(std::make_unique<ScriptedLearner>(std::vector<Hypothesis>{}));
    std::vector<Hypothesis> out;
    for (const auto& h : inner) out.push_back(d.feed(h));
    return out;
}

// Ex-learner for the pair {A_i, A_j} from a PL-learner: repeats the last of
// its outputs that names i or j.
class ExFromPl : public Learner {
public:
    ExFromPl(LearnerPtr pl, std::size_t i, std::size_t j) : pl_(std::move(pl)), i_(i), j_(j) {}
    ExFromPl(const ExFromPl& o) : pl_(o.pl_->clone()), i_(o.i_), j_(o.j_), last_(o.last_) {}

    Hypothesis step(const FiniteFragment& f) override { return feed(pl_->step(f)); }
    Hypothesis feed(const Hypothesis& h) {
        if (h.is(i_) || h.is(j_)) last_ = h;
        return last_;
    }

    std::unique_ptr<Learner> clone() const override { return std::make_unique<ExFromPl>(*this); }
    std::string id() const override { return "ex_from_pl(" + pl_->id() + ")"; }

private:
    LearnerPtr pl_;
    std::size_t i_, j_;
    Hypothesis last_;
};

// Duel learners for every pair i < j, emitting codes of the whole family.
using DuelMap = std::map<std::pair<std::size_t, std::size_t>, LearnerPtr>;

// PL-learner from pairwise Ex-learners. Slot <i,k> looks after code i and
// says i when some k' < k has: i said fewer than k' times so far, and every
// duel (i, j), j <= k', has said i more often than that within k stages.
class PlFromPairwise : public Learner {
public:
    PlFromPairwise(std::size_t members, DuelMap duels) : n_(members) {
        for (auto& [k, m] : duels) {
            if (k.first >= k.second || k.second >= n_ || !m) throw ConfigurationError("pl_pairwise: malformed duel map");
            duels_.push_back({k.first, k.second, std::move(m), {}, {}});
        }
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                if (!find(i, j)) throw ConfigurationError("pl_pairwise: missing duel for (" + std::to_string(i) + "," +
                                                          std::to_string(j) + ")");
        said_.assign(n_, 0);
    }
    PlFromPairwise(const PlFromPairwise& o) : n_(o.n_), said_(o.said_), stage_(o.stage_) {
        for (const auto& d : o.duels_) duels_.push_back({d.i, d.j, d.m->clone(), d.count_i, d.count_j});
    }

    Hypothesis step(const FiniteFragment& f) override {
        const std::size_t s = stage_++;
        for (auto& d : duels_) {
            auto h = d.m->step(f);
            d.count_i.push_back((d.count_i.empty() ? 0 : d.count_i.back()) + h.is(d.i));
            d.count_j.push_back((d.count_j.empty() ? 0 : d.count_j.back()) + h.is(d.j));
        }
        auto [i, k] = unpair(s);
        if (i >= n_ || k == 0) return kQuestion;
        const std::size_t c = said_[i];
        for (std::size_t kp = c + 1; kp < k; ++kp) {
            bool all = true;
            for (std::size_t j = 0; j <= kp && j < n_ && all; ++j) {
                if (j == i) continue;
                if (!(c < duel_count(i, j, k))) all = false;
            }
            if (all) {
                ++said_[i];
                return Hypothesis::conjecture(i);
            }
        }
        return kQuestion;
    }

    std::unique_ptr<Learner> clone() const override { return std::make_unique<PlFromPairwise>(*this); }
    std::string id() const override { return "pl_pairwise"; }

private:
    struct Duel {
        std::size_t i, j;
        LearnerPtr m;
        std::vector<std::size_t> count_i, count_j;  // cumulative per stage
    };

    Duel* find(std::size_t a, std::size_t b) {
        for (auto& d : duels_)
            if (d.i == a && d.j == b) return &d;
        return nullptr;
    }

    // Times the duel of i and j said i at stages <= k.
    std::size_t duel_count(std::size_t i, std::size_t j, std::size_t k) {
        auto* d = find(std::min(i, j), std::max(i, j));
        const auto& v = d->i == i ? d->count_i : d->count_j;
        return v.at(std::min(k, v.size() - 1));
    }

    std::size_t n_;
    std::vector<Duel> duels_;
    std::vector<std::size_t> said_;
    std::size_t stage_ = 0;
};

// co-learner from an Id-reduction: says the least code i not said before for
// which Γ(S↾s) already contradicts Γ(A_i↾s) on a canonical copy of A_i.
class IdToCo : public Learner {
public:
    IdToCo(const Family& fam, const ReductionOperator& g, std::uint64_t reference_seed = 0) : g_(g) {
        if (g.target != Relation::Id && g.target != Relation::EqN)
            throw ConfigurationError("id_to_co needs an operator into Id");
        for (const auto& m : fam.members) refs_.emplace_back(g, present(m, reference_seed));
        run_ = g.start();
        said_.assign(fam.size(), false);
        members_ = fam.members;
        seed_ = reference_seed;
    }
    IdToCo(IdToCo&&) = default;
    IdToCo(const IdToCo& o) : IdToCo(o.rebuild()) {}

    Hypothesis step(const FiniteFragment& f) override {
        last_ = f;
        const auto& out = run_->feed(f);
        const std::size_t s = stages_++;
        for (std::size_t i = 0; i < refs_.size(); ++i) {
            if (said_[i]) continue;
            if (inconsistent(out, refs_[i].at(s))) {
                said_[i] = true;
                return Hypothesis::conjecture(i);
            }
        }
        return kQuestion;
    }

    std::unique_ptr<Learner> clone() const override { return std::make_unique<IdToCo>(*this); }
    std::string id() const override { return "id_to_co(" + g_.name + ")"; }

private:
    // Operator runs are not copyable; a copy replays the stages seen so far.
    IdToCo rebuild() const {
        IdToCo c(Family{"", members_, false, std::nullopt}, g_, seed_);
        for (std::size_t n = 1; n <= stages_; ++n) c.step(last_.restrict(n));
        return c;
    }

    ReductionOperator g_;
    std::vector<CatalogStructure> members_;
    std::uint64_t seed_ = 0;
    std::vector<OperatorTrace> refs_;
    std::unique_ptr<OperatorRun> run_;
    std::vector<bool> said_;
    FiniteFragment last_;
    std::size_t stages_ = 0;
};

// Column and sequence of disagreement between pairs of members, to a finite
// depth. p[i][j][k] is a position in column d[i][j]; ref[i][j][k] is the value
// of Γ(A_i) there.
struct E3Tables {
    std::size_t depth = 0;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> d;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> p;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::uint64_t>> ref;

    nlohmann::json to_json() const {
        auto j = nlohmann::json::array();
        for (const auto& [k, col] : d)
            j.push_back({{"i", k.first}, {"j", k.second}, {"column", col}, {"positions", p.at(k)}, {"reference", ref.at(k)}});
        return {{"depth", depth}, {"pairs", j}};
    }
};

// Tables from Γ traces on canonical copies, `stages` stages each. A column
// counts as disagreeing when its last mismatch lies in the second half of the
// common prefix; with none such the pair is left out.
inline E3Tables compute_e3_tables(const Family& fam, const ReductionOperator& g, std::size_t stages,
                                  std::size_t depth = 64, std::uint64_t seed = 0) {
    if (g.target != Relation::E3) throw ConfigurationError("E3 tables need an operator into E3");
    std::vector<OutputPrefix> out;
    for (const auto& m : fam.members) {
        OperatorTrace t(g, present(m, seed));
        out.push_back(t.at(stages - 1));
    }
    E3Tables tab;
    tab.depth = depth;
    for (std::size_t i = 0; i < fam.size(); ++i)
        for (std::size_t j = 0; j < fam.size(); ++j) {
            if (i == j) continue;
            const auto& a = out[i].columns;
            const auto& b = out[j].columns;
            for (std::size_t m = 0; m < std::min(a.size(), b.size()); ++m) {
                auto g2 = agreement(a[m], b[m]);
                if (!g2.last_mismatch || 2 * (*g2.last_mismatch + 1) <= g2.common) continue;
                std::vector<std::size_t> pos{0};
                std::vector<std::uint64_t> ref{a[m].empty() ? 0 : a[m][0]};
                for (std::size_t k = 1; k < g2.common && pos.size() < depth; ++k)
                    if (a[m][k] != b[m][k]) {
                        pos.push_back(k);
                        ref.push_back(a[m][k]);
                    }
                tab.d[{i, j}] = m;
                tab.p[{i, j}] = std::move(pos);
                tab.ref[{i, j}] = std::move(ref);
                break;
            }
        }
    return tab;
}

// PL-learner from an E_3-reduction. Slot <i,k> looks after code i: the first
// time it says i unconditionally; the n-th time it needs, for every other code
// m < n, n consecutive entries of the disagreement sequence (i, m) on which
// Γ(S) matches Γ(A_i). Runs out of table depth into '?'.
class PlFromE3 : public Learner {
public:
    PlFromE3(std::size_t members, ReductionOperator g, E3Tables tables)
        : n_(members), g_(std::move(g)), tab_(std::move(tables)) {
        if (g_.target != Relation::E3) throw ConfigurationError("pl_e3 needs an operator into E3");
        run_ = g_.start();
        said_.assign(n_, 0);
    }
    PlFromE3(const PlFromE3& o) : PlFromE3(o.n_, o.g_, o.tab_) {
        for (std::size_t n = 1; n <= o.stages_; ++n) step(o.last_.restrict(n));
    }

    Hypothesis step(const FiniteFragment& f) override {
        last_ = f;
        const auto& out = run_->feed(f);
        auto [i, k] = unpair(stages_++);
        if (i >= n_) return kQuestion;
        const std::size_t n = said_[i] + 1;
        bool ok = true;
        if (n > 1) {
            for (std::size_t m = 0; m < std::min(n, n_) && ok; ++m) {
                if (m == i) continue;
                ok = agrees(out, i, m, n);
            }
        }
        if (!ok) return kQuestion;
        ++said_[i];
        return Hypothesis::conjecture(i);
    }

    std::unique_ptr<Learner> clone() const override { return std::make_unique<PlFromE3>(*this); }
    std::string id() const override { return "pl_e3(" + g_.name + ")"; }

    // Set when some check needed more table than was computed.
    bool exhausted() const { return exhausted_; }

private:
    bool agrees(const OutputPrefix& out, std::size_t i, std::size_t m, std::size_t n) {
        auto key = std::make_pair(i, m);
        auto dit = tab_.d.find(key);
        if (dit == tab_.d.end()) return false;
        const auto& pos = tab_.p.at(key);
        const auto& ref = tab_.ref.at(key);
        std::size_t run = 0;
        for (std::size_t idx = 0; idx < pos.size(); ++idx) {
            auto v = out.at(dit->second, pos[idx]);
            if (!v) return false;
            run = (*v == ref[idx]) ? run + 1 : 0;
            if (run >= n) return true;
        }
        if (pos.size() >= tab_.depth) exhausted_ = true;
        return false;
    }

    std::size_t n_;
    ReductionOperator g_;
    E3Tables tab_;
    std::unique_ptr<OperatorRun> run_;
    std::vector<std::size_t> said_;
    FiniteFragment last_;
    std::size_t stages_ = 0;
    bool exhausted_ = false;
};

}  // namespace sigmalab
