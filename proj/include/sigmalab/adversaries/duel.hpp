#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sigmalab/adversaries/certificate.hpp"
#include "sigmalab/catalog/presentation.hpp"
#include "sigmalab/learners/learner.hpp"

namespace sigmalab {

// Waits that could last forever are cut at checkpoints initial, 2*initial,
// ... up to cap stages.
struct Escalation {
    std::size_t initial = 256;
    std::size_t cap = std::size_t(1) << 14;

    void validate() const {
        if (initial == 0 || cap < initial) throw ConfigurationError("escalation needs 0 < initial <= cap");
    }
    bool checkpoint(std::size_t stages) const {
        if (stages == cap) return true;
        for (std::size_t h = initial; h < cap; h *= 2)
            if (h == stages) return true;
        return false;
    }
};

// Presentation that replays a recorded fragment and then continues it as a
// copy of `limit`.
inline Presentation replay_presentation(const FiniteFragment& recorded, std::optional<CatalogStructure> limit,
                                        std::string label) {
    auto rec = std::make_shared<FiniteFragment>(recorded);
    auto cont = std::make_shared<std::optional<Continuation>>();
    return Presentation(
        recorded.signature(),
        [rec, cont, limit](StageBuilder& b, std::size_t s) {
            if (s < rec->size()) {
                auto x = b.add_element();
                for (std::size_t r = 0; r < rec->signature().size(); ++r) {
                    if (rec->signature()[r].arity != 2) throw ConfigurationError("replay supports binary signatures");
                    for (auto y : rec->out(r, x))
                        if (y <= x) b.relate(r, {x, y});
                    for (auto y : rec->in(r, x))
                        if (y < x) b.relate(r, {y, x});
                }
                return;
            }
            if (!limit) throw ConstructionError("duel recorded " + std::to_string(rec->size()) + " stages and has no limit");
            if (!*cont) cont->emplace(b.current(), *limit);
            (*cont)->step(b, s);
        },
        std::move(label));
}

struct DuelResult {
    std::string adversary, learner;
    std::uint64_t seed = 0;
    std::size_t cap = 0;
    std::size_t stages = 0;
    std::optional<FailureCertificate> certificate;
    std::string reason;  // when inconclusive
    Transcript transcript;
    FiniteFragment fragment;
    std::optional<CatalogStructure> limit;
    std::vector<std::string> audit;
    std::size_t audit_checks = 0, audit_violations = 0;
    nlohmann::json notes = nlohmann::json::object();

    bool refuted() const { return certificate.has_value(); }
    std::string outcome() const { return certificate ? "CERTIFICATE" : "INCONCLUSIVE"; }

    Presentation presentation() const { return replay_presentation(fragment, limit, adversary + "#" + std::to_string(seed)); }

    nlohmann::json to_json() const {
        nlohmann::json j{{"adversary", adversary}, {"learner", learner},     {"seed", seed},
                         {"cap", cap},             {"stages", stages},       {"outcome", outcome()},
                         {"audit_checks", audit_checks}, {"audit_violations", audit_violations},
                         {"audit", audit},         {"notes", notes}};
        if (certificate) j["certificate"] = certificate->to_json();
        if (!reason.empty()) j["reason"] = reason;
        if (limit) j["limit"] = limit->to_string();
        return j;
    }
};

// Runs an adaptive copy against a learner in lockstep: the adversary adds one
// element per stage, the learner answers on the new fragment.
class DuelDriver {
public:
    // `m` may be null for duels against operators; `who` names the opponent.
    DuelDriver(const Signature& sig, Learner* m, std::string who, std::string adversary, std::uint64_t seed,
               Escalation esc)
        : m_(m), esc_(esc) {
        esc_.validate();
        res_.adversary = std::move(adversary);
        res_.learner = std::move(who);
        res_.seed = seed;
        res_.cap = esc_.cap;
        res_.fragment = FiniteFragment(sig);
    }

    // One stage: `build` adds the new element and its atoms.
    const Hypothesis& stage(const std::function<void(StageBuilder&)>& build) {
        const std::size_t before = res_.fragment.size();
        StageBuilder b(res_.fragment);
        build(b);
        if (!b.added() || res_.fragment.size() != before + 1) throw ConstructionError("a stage adds exactly one element");
        res_.transcript.append(m_ ? m_->step(res_.fragment) : kQuestion);
        return res_.transcript[res_.transcript.size() - 1];
    }

    const FiniteFragment& fragment() const { return res_.fragment; }
    const Transcript& transcript() const { return res_.transcript; }
    std::size_t stages() const { return res_.fragment.size(); }
    bool at_checkpoint() const { return esc_.checkpoint(stages()); }
    bool exhausted() const { return stages() >= esc_.cap; }
    const Escalation& escalation() const { return esc_; }

    void check(bool ok, const std::string& what) {
        ++res_.audit_checks;
        if (ok) return;
        ++res_.audit_violations;
        if (res_.audit.size() < 20) res_.audit.push_back("stage " + std::to_string(stages() - 1) + ": " + what);
    }
    void note(const std::string& key, nlohmann::json v) { res_.notes[key] = std::move(v); }

    DuelResult certify(FailureCertificate c, std::optional<CatalogStructure> limit) {
        c.audit = res_.audit;
        c.audit.push_back("shape audit: " + std::to_string(res_.audit_checks) + " checks, " +
                          std::to_string(res_.audit_violations) + " violations");
        c.replay = replay_record();
        res_.certificate = std::move(c);
        return finish(std::move(limit));
    }

    DuelResult inconclusive(std::string why, std::optional<CatalogStructure> limit = std::nullopt) {
        res_.reason = std::move(why);
        return finish(std::move(limit));
    }

    FailureCertificate make(CertificateKind k, std::size_t from, std::size_t to, nlohmann::json details) const {
        FailureCertificate c;
        c.kind = k;
        c.details = std::move(details);
        c.take_excerpt(res_.transcript, from, to);
        return c;
    }

    // The learner's outputs since `since` have been one value other than
    // `want` for the last half of the wait (and at least `min_run` stages).
    std::optional<std::size_t> stuck_since(std::size_t since, const Hypothesis& want, std::size_t min_run = 64) const {
        const std::size_t n = res_.transcript.size();
        if (n <= since) return std::nullopt;
        const std::size_t run = std::max(min_run, (n - since) / 2);
        if (n - since < run) return std::nullopt;
        const std::size_t from = n - run;
        const auto& last = res_.transcript[n - 1];
        if (last == want) return std::nullopt;
        for (std::size_t s = from; s < n; ++s)
            if (!(res_.transcript[s] == last)) return std::nullopt;
        return from;
    }

private:
    nlohmann::json replay_record() const {
        return {{"adversary", res_.adversary}, {"learner", res_.learner}, {"seed", res_.seed}, {"horizon", esc_.cap}};
    }
    DuelResult finish(std::optional<CatalogStructure> limit) {
        res_.stages = stages();
        res_.limit = std::move(limit);
        return std::move(res_);
    }

    Learner* m_;
    Escalation esc_;
    DuelResult res_;
};

}  // namespace sigmalab
