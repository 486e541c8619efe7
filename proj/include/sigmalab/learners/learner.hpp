#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sigmalab/catalog/family.hpp"
#include "sigmalab/catalog/presentation.hpp"
#include "sigmalab/core/fragment.hpp"
#include "sigmalab/errors.hpp"

namespace sigmalab {

// A conjectured code into the active family, or '?'.
class Hypothesis {
public:
    Hypothesis() = default;
    static Hypothesis question() { return {}; }
    static Hypothesis conjecture(std::size_t code) {
        Hypothesis h;
        h.code_ = code;
        return h;
    }

    bool is_question() const { return !code_.has_value(); }
    std::size_t code() const {
        if (!code_) throw Error("'?' carries no code");
        return *code_;
    }
    bool is(std::size_t c) const { return code_ && *code_ == c; }

    std::string to_string() const { return code_ ? std::to_string(*code_) : "?"; }
    static Hypothesis parse(const std::string& s) {
        if (s == "?") return question();
        try {
            std::size_t used = 0;
            auto v = std::stoull(s, &used);
            if (used != s.size()) throw ParseError("bad hypothesis '" + s + "'");
            return conjecture(v);
        } catch (const std::logic_error&) {
            throw ParseError("bad hypothesis '" + s + "'");
        }
    }

    nlohmann::json to_json() const { return code_ ? nlohmann::json(*code_) : nlohmann::json("?"); }
    static Hypothesis from_json(const nlohmann::json& j) {
        if (j.is_string() && j.get<std::string>() == "?") return question();
        if (j.is_number_unsigned()) return conjecture(j.get<std::size_t>());
        throw ParseError("bad hypothesis " + j.dump());
    }

    bool operator==(const Hypothesis&) const = default;
    auto operator<=>(const Hypothesis&) const = default;

private:
    std::optional<std::size_t> code_;
};

inline const Hypothesis kQuestion = Hypothesis::question();

// Stage-indexed, append-only list of outputs.
class Transcript {
public:
    Transcript() = default;
    explicit Transcript(std::vector<Hypothesis> h) : h_(std::move(h)) {}

    void append(const Hypothesis& h) { h_.push_back(h); }
    std::size_t size() const { return h_.size(); }
    const Hypothesis& operator[](std::size_t s) const { return h_.at(s); }
    const std::vector<Hypothesis>& entries() const { return h_; }
    auto begin() const { return h_.begin(); }
    auto end() const { return h_.end(); }

    std::size_t count(std::size_t code, std::size_t upto) const {
        std::size_t n = 0;
        for (std::size_t s = 0; s < std::min(upto, h_.size()); ++s) n += h_[s].is(code);
        return n;
    }
    std::size_t count(std::size_t code) const { return count(code, h_.size()); }

    // Non-'?' values that differ from the previous non-'?' value.
    std::size_t mind_changes() const {
        std::size_t n = 0;
        std::optional<std::size_t> last;
        for (const auto& h : h_) {
            if (h.is_question()) continue;
            if (last && *last != h.code()) ++n;
            last = h.code();
        }
        return n;
    }

    std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < h_.size(); ++i) s += (i ? "," : "") + h_[i].to_string();
        return s + "]";
    }

    // One {"stage", "hypothesis"} record per line.
    std::string to_jsonl() const {
        std::string out;
        for (std::size_t s = 0; s < h_.size(); ++s)
            out += nlohmann::json{{"stage", s}, {"hypothesis", h_[s].to_json()}}.dump() + "\n";
        return out;
    }

    static Transcript from_jsonl(const std::string& text) {
        Transcript t;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.contains("stage") || !j.contains("hypothesis"))
                throw ParseError("bad transcript line: " + line);
            if (j["stage"].get<std::size_t>() != t.size()) throw ParseError("transcript stages out of order");
            t.append(Hypothesis::from_json(j["hypothesis"]));
        }
        return t;
    }

    bool operator==(const Transcript&) const = default;

private:
    std::vector<Hypothesis> h_;
};

// A learner sees S↾0, S↾1, ... in order, one call per stage, and answers each.
// Its state is a deterministic function of the fragments seen.
class Learner {
public:
    virtual ~Learner() = default;
    virtual Hypothesis step(const FiniteFragment& f) = 0;
    virtual std::unique_ptr<Learner> clone() const = 0;
    virtual std::string id() const = 0;
};

using LearnerPtr = std::unique_ptr<Learner>;

// Base with stage bookkeeping: checks that fragment s has s+1 elements.
template <class Derived>
class LearnerBase : public Learner {
public:
    Hypothesis step(const FiniteFragment& f) final {
        if (f.size() != stage_ + 1)
            throw ConstructionError("learner expected a fragment with " + std::to_string(stage_ + 1) + " elements");
        auto h = static_cast<Derived*>(this)->next(f, stage_);
        ++stage_;
        return h;
    }
    std::unique_ptr<Learner> clone() const override {
        return std::make_unique<Derived>(static_cast<const Derived&>(*this));
    }
    std::size_t stage() const { return stage_; }

private:
    std::size_t stage_ = 0;
};

// Replays a fixed output list and ignores its input; '?' past the end.
class ScriptedLearner : public LearnerBase<ScriptedLearner> {
public:
    explicit ScriptedLearner(std::vector<Hypothesis> script, std::string name = "scripted")
        : script_(std::move(script)), name_(std::move(name)) {}
    Hypothesis next(const FiniteFragment&, std::size_t s) { return s < script_.size() ? script_[s] : kQuestion; }
    std::string id() const override { return name_; }

private:
    std::vector<Hypothesis> script_;
    std::string name_;
};

// Learner from a function of (fragment, stage). State, if any, lives in the
// captures and is copied on clone.
class FunctionLearner : public LearnerBase<FunctionLearner> {
public:
    using Fn = std::function<Hypothesis(const FiniteFragment&, std::size_t)>;
    FunctionLearner(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}
    Hypothesis next(const FiniteFragment& f, std::size_t s) { return fn_(f, s); }
    std::string id() const override { return name_; }

private:
    std::string name_;
    Fn fn_;
};

// Parses "?,1,0,?" style scripts.
inline std::vector<Hypothesis> parse_script(const std::string& text) {
    std::vector<Hypothesis> out;
    std::stringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
        while (!tok.empty() && tok.back() == ' ') tok.pop_back();
        if (!tok.empty()) out.push_back(Hypothesis::parse(tok));
    }
    return out;
}

// Renames the codes of an inner learner; unmapped codes become '?'.
class RemapLearner : public Learner {
public:
    RemapLearner(LearnerPtr inner, std::vector<std::size_t> to) : inner_(std::move(inner)), to_(std::move(to)) {}
    RemapLearner(const RemapLearner& o) : inner_(o.inner_->clone()), to_(o.to_) {}

    Hypothesis step(const FiniteFragment& f) override {
        auto h = inner_->step(f);
        if (h.is_question() || h.code() >= to_.size()) return kQuestion;
        return Hypothesis::conjecture(to_[h.code()]);
    }
    std::unique_ptr<Learner> clone() const override { return std::make_unique<RemapLearner>(*this); }
    std::string id() const override { return "remap(" + inner_->id() + ")"; }

private:
    LearnerPtr inner_;
    std::vector<std::size_t> to_;
};

inline Transcript run_learner(Learner& m, Presentation& p, std::size_t horizon) {
    Transcript t;
    for (std::size_t s = 0; s < horizon; ++s) t.append(m.step(p.at(s)));
    return t;
}

inline Transcript run_learner(const Learner& proto, const CatalogStructure& target, std::uint64_t seed,
                              std::size_t horizon) {
    auto m = proto.clone();
    auto p = present(target, seed);
    return run_learner(*m, p, horizon);
}

// Finite mind-change budget. `observe` charges one unit whenever the non-'?'
// output differs from the previous non-'?' output.
class MindChangeBudget {
public:
    explicit MindChangeBudget(std::size_t remaining) : remaining_(remaining) {}

    // False once a change is observed with nothing left to spend.
    bool observe(const Hypothesis& h) {
        if (h.is_question()) return !exhausted_;
        if (last_ && *last_ != h.code()) {
            if (remaining_ == 0) exhausted_ = true;
            else --remaining_;
        }
        last_ = h.code();
        return !exhausted_;
    }

    std::size_t remaining() const { return remaining_; }
    bool exhausted() const { return exhausted_; }

private:
    std::size_t remaining_;
    std::optional<std::size_t> last_;
    bool exhausted_ = false;
};

}  // namespace sigmalab
