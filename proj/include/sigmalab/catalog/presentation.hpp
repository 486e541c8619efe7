#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "sigmalab/catalog/model.hpp"
#include "sigmalab/catalog/oracle.hpp"
#include "sigmalab/core/embedding.hpp"

namespace sigmalab {

// Handed to a step function. A step adds exactly one element and may only
// add atoms that mention it, so every stage extends the previous one.
class StageBuilder {
public:
    explicit StageBuilder(FiniteFragment& f) : f_(f), first_new_(static_cast<Element>(f.size())) {}

    Element add_element() {
        if (added_) throw ConstructionError("a stage adds exactly one element");
        added_ = true;
        return f_.add_element();
    }

    Element fresh() const {
        if (!added_) throw ConstructionError("no element added yet");
        return first_new_;
    }

    void relate(std::size_t rel, const Tuple& args) {
        if (!added_ || std::find(args.begin(), args.end(), first_new_) == args.end()) {
            throw ConstructionError("non-monotone step: atom does not mention the new element");
        }
        f_.add(rel, args);
    }

    void relate(Element a, Element b) { relate(0, {a, b}); }

    void edge(Element a, Element b) {
        relate(a, b);
        relate(b, a);
    }

    const FiniteFragment& current() const { return f_; }
    bool added() const { return added_; }

private:
    FiniteFragment& f_;
    Element first_new_;
    bool added_ = false;
};

using StepFn = std::function<void(StageBuilder&, std::size_t stage)>;

// A presentation revealed stage by stage. Stage s has domain {0..s}.
class Presentation {
public:
    Presentation(Signature sig, StepFn step, std::string label = "")
        : fragment_(std::move(sig)), step_(std::move(step)), label_(std::move(label)) {}

    const FiniteFragment& advance() {
        StageBuilder b(fragment_);
        step_(b, fragment_.size());
        if (!b.added()) throw ConstructionError("a stage adds exactly one element");
        return fragment_;
    }

    // Fragment of stage s; presentations only move forward.
    const FiniteFragment& at(std::size_t s) {
        if (fragment_.size() > s + 1) throw ConstructionError("presentation already past stage " + std::to_string(s));
        while (fragment_.size() < s + 1) advance();
        return fragment_;
    }

    FiniteFragment restrict(std::size_t s) {
        if (fragment_.size() < s + 1) at(s);
        return fragment_.restrict(s + 1);
    }

    const FiniteFragment& fragment() const { return fragment_; }
    std::size_t stages() const { return fragment_.size(); }
    const std::string& label() const { return label_; }

private:
    FiniteFragment fragment_;
    StepFn step_;
    std::string label_;
};

inline Presentation adversarial_presentation(Signature sig, StepFn builder, std::string label = "adversarial") {
    return Presentation(std::move(sig), std::move(builder), std::move(label));
}

// Reveals abstract elements of a model at new positions. Each new element is
// picked uniformly among the first `lookahead` unrevealed ones, except that
// the least unrevealed element is forced once it lags `max_lag` stages.
// Every abstract element a therefore appears by stage a + max_lag + lookahead.
class ModelCopy {
public:
    static constexpr std::size_t kLookahead = 4;
    static constexpr std::size_t kMaxLag = 8;

    ModelCopy(std::shared_ptr<const Model> model, std::uint64_t seed, bool shuffle = true)
        : model_(std::move(model)), rng_(seed), shuffle_(shuffle) {}

    // Positions already present in the fragment, mapped to abstract elements.
    void preload(const std::vector<std::size_t>& abs_of_pos) {
        for (std::size_t p = 0; p < abs_of_pos.size(); ++p) {
            mark(abs_of_pos[p]);
            pos_of_abs_[abs_of_pos[p]] = static_cast<Element>(p);
        }
        abs_of_pos_ = abs_of_pos;
    }

    void step(StageBuilder& b, std::size_t stage) {
        auto x = choose(stage);
        auto p = b.add_element();
        mark(x);
        abs_of_pos_.push_back(x);
        pos_of_abs_[x] = p;
        if (model_->related(x, x)) b.relate(p, p);
        auto nb = model_->neighbours(x);
        if (nb) {
            for (auto y : *nb) {
                auto it = pos_of_abs_.find(y);
                if (it == pos_of_abs_.end() || y == x) continue;
                link(b, p, x, it->second, y);
            }
        } else {
            for (Element q = 0; q < p; ++q) link(b, p, x, q, abs_of_pos_[q]);
        }
    }

    const std::vector<std::size_t>& abs_of_pos() const { return abs_of_pos_; }

private:
    void link(StageBuilder& b, Element p, std::size_t x, Element q, std::size_t y) {
        if (model_->related(x, y)) b.relate(p, q);
        if (model_->related(y, x)) b.relate(q, p);
    }

    void mark(std::size_t a) {
        if (a >= revealed_.size()) revealed_.resize(a + 1, false);
        revealed_[a] = true;
        while (frontier_ < revealed_.size() && revealed_[frontier_]) ++frontier_;
    }

    bool is_revealed(std::size_t a) const { return a < revealed_.size() && revealed_[a]; }

    std::size_t choose(std::size_t stage) {
        auto card = model_->cardinality();
        if (card && frontier_ >= *card) throw ConstructionError("finite structure has no further elements");
        if (!shuffle_ || stage >= frontier_ + kMaxLag) return frontier_;
        std::vector<std::size_t> cands;
        for (std::size_t a = frontier_; cands.size() < kLookahead; ++a) {
            if (card && a >= *card) break;
            if (!is_revealed(a)) cands.push_back(a);
        }
        return cands[rng_() % cands.size()];
    }

    std::shared_ptr<const Model> model_;
    std::mt19937_64 rng_;
    bool shuffle_;
    std::vector<bool> revealed_;
    std::size_t frontier_ = 0;
    std::vector<std::size_t> abs_of_pos_;
    std::unordered_map<std::size_t, Element> pos_of_abs_;
};

// Seeded presentation of a catalog structure with domain ℕ.
inline Presentation present(const CatalogStructure& target, std::uint64_t seed) {
    if (!target.infinite()) {
        throw ConstructionError(target.to_string() + " is finite and has no presentation with domain ℕ");
    }
    auto copy = std::make_shared<ModelCopy>(std::shared_ptr<const Model>(make_model(target)), seed);
    return Presentation(
        target.signature(), [copy](StageBuilder& b, std::size_t s) { copy->step(b, s); },
        target.to_string() + "#" + std::to_string(seed));
}

inline FiniteFragment realize(const CatalogStructure& target, std::uint64_t seed, std::size_t s) {
    auto p = present(target, seed);
    return p.restrict(s);
}

inline FiniteFragment restrict(Presentation& p, std::size_t s) { return p.restrict(s); }

// Continues an existing fragment as a copy of `target`: the fragment is
// embedded into a window of the target and the remaining abstract elements
// are revealed afterwards, in order.
class Continuation {
public:
    Continuation(const FiniteFragment& current, const CatalogStructure& target) : target_(target) {
        if (!target.infinite()) throw ConstructionError("continuation target must be infinite");
        std::optional<Embedding> h;
        for (std::size_t w = 2 * current.size() + 8; w <= 16 * current.size() + 64 && !h; w *= 2) {
            h = find_embedding(current, window(target, w));
        }
        if (!h) throw ConstructionError("fragment does not extend to " + target.to_string());
        copy_ = std::make_shared<ModelCopy>(std::shared_ptr<const Model>(make_model(target)), 0, false);
        std::vector<std::size_t> abs(h->begin(), h->end());
        copy_->preload(abs);
    }

    void step(StageBuilder& b, std::size_t stage) { copy_->step(b, stage); }
    const CatalogStructure& target() const { return target_; }

private:
    CatalogStructure target_;
    std::shared_ptr<ModelCopy> copy_;
};

// f is isomorphic to a finite substructure of one of the templates.
inline bool audit_shape(const FiniteFragment& f, const std::vector<CatalogStructure>& templates) {
    if (f.empty()) return true;
    for (const auto& t : templates) {
        if (!(t.signature() == f.signature())) continue;
        if (embeds_in_catalog(f, t)) return true;
    }
    return false;
}

}  // namespace sigmalab
