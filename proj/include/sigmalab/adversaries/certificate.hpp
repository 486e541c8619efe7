#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sigmalab/learners/learner.hpp"

namespace sigmalab {

enum class CertificateKind {
    InfinitelyManyMindChanges,
    StuckWrong,
    AbandonReturn,
    CorrectCodeEmitted,
    MissingCode,
    NeverCommits,
    SecondCommitment,
    RecurrenceGap,
    WrongCodeRecurs,
    RangeViolation,
    PrefixDisagreement,
};

inline std::string to_string(CertificateKind k) {
    switch (k) {
        case CertificateKind::InfinitelyManyMindChanges: return "InfinitelyManyMindChanges";
        case CertificateKind::StuckWrong: return "StuckWrong";
        case CertificateKind::AbandonReturn: return "AbandonReturn";
        case CertificateKind::CorrectCodeEmitted: return "CorrectCodeEmitted";
        case CertificateKind::MissingCode: return "MissingCode";
        case CertificateKind::NeverCommits: return "NeverCommits";
        case CertificateKind::SecondCommitment: return "SecondCommitment";
        case CertificateKind::RecurrenceGap: return "RecurrenceGap";
        case CertificateKind::WrongCodeRecurs: return "WrongCodeRecurs";
        case CertificateKind::RangeViolation: return "RangeViolation";
        case CertificateKind::PrefixDisagreement: return "PrefixDisagreement";
    }
    return "?";
}

// Evidence that a learner or operator misses a criterion on a concrete run.
// `replay` names everything needed to regenerate it.
struct FailureCertificate {
    CertificateKind kind = CertificateKind::StuckWrong;
    nlohmann::json details = nlohmann::json::object();
    std::size_t excerpt_start = 0;
    std::vector<Hypothesis> excerpt;
    std::vector<std::string> audit;
    nlohmann::json replay = nlohmann::json::object();

    // Transcript window [from, to) as the excerpt.
    void take_excerpt(const Transcript& t, std::size_t from, std::size_t to) {
        excerpt_start = from;
        excerpt.clear();
        for (std::size_t s = from; s < std::min(to, t.size()); ++s) excerpt.push_back(t[s]);
    }

    nlohmann::json to_json() const {
        auto ex = nlohmann::json::array();
        for (const auto& h : excerpt) ex.push_back(h.to_json());
        return {{"kind", to_string(kind)}, {"details", details}, {"excerpt_start", excerpt_start},
                {"excerpt", ex},           {"audit", audit},     {"replay", replay}};
    }
    std::string dump() const { return to_json().dump(); }
};

}  // namespace sigmalab
