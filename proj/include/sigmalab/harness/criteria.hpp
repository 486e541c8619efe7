#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "sigmalab/adversaries/certificate.hpp"
#include "sigmalab/catalog/family.hpp"
#include "sigmalab/learners/learner.hpp"

namespace sigmalab {

enum class CriterionKind { Ex, Fin, AlphaFin, Co, PL, NUs, Dec };

inline std::string to_string(CriterionKind k) {
    switch (k) {
        case CriterionKind::Ex: return "Ex";
        case CriterionKind::Fin: return "Fin";
        case CriterionKind::AlphaFin: return "AlphaFin";
        case CriterionKind::Co: return "Co";
        case CriterionKind::PL: return "PL";
        case CriterionKind::NUs: return "NUs";
        case CriterionKind::Dec: return "Dec";
    }
    return "?";
}

inline CriterionKind parse_criterion(const std::string& s) {
    for (auto k : {CriterionKind::Ex, CriterionKind::Fin, CriterionKind::AlphaFin, CriterionKind::Co, CriterionKind::PL,
                   CriterionKind::NUs, CriterionKind::Dec}) {
        std::string a = to_string(k), b = s;
        std::transform(a.begin(), a.end(), a.begin(), ::tolower);
        std::transform(b.begin(), b.end(), b.begin(), ::tolower);
        if (a == b) return k;
    }
    throw ParseError("unknown criterion '" + s + "'");
}

// Finite-horizon reading of a criterion. "Eventually" is checked on the last
// `tail` stages, "infinitely often" as recurrence in every `window` of the
// final half, "finitely often" as a constant count over the final half.
struct CriterionSpec {
    CriterionKind kind = CriterionKind::Ex;
    std::size_t horizon = 512;
    std::size_t window = 50;
    std::size_t tail = 64;
    std::size_t budget = 0;  // AlphaFin

    void validate() const {
        if (!(horizon > window && window > 0)) throw ConfigurationError("criterion needs horizon > window > 0");
        if (tail == 0 || tail > horizon) throw ConfigurationError("criterion needs 0 < tail <= horizon");
    }

    nlohmann::json to_json() const {
        return {{"kind", to_string(kind)}, {"horizon", horizon}, {"window", window}, {"tail", tail}, {"budget", budget}};
    }
};

struct Verdict {
    enum class Outcome { Pass, Fail, Inconclusive, Skipped };
    Outcome outcome = Outcome::Pass;
    std::string reason;
    std::optional<FailureCertificate> certificate;

    static Verdict pass() { return {}; }
    static Verdict fail(FailureCertificate c, std::string why) { return {Outcome::Fail, std::move(why), std::move(c)}; }
    static Verdict inconclusive(std::string why) { return {Outcome::Inconclusive, std::move(why), std::nullopt}; }
    static Verdict skipped(std::string why) { return {Outcome::Skipped, std::move(why), std::nullopt}; }

    bool passed() const { return outcome == Outcome::Pass; }
    bool failed() const { return outcome == Outcome::Fail; }

    std::string name() const {
        switch (outcome) {
            case Outcome::Pass: return "PASS";
            case Outcome::Fail: return "FAIL";
            case Outcome::Inconclusive: return "INCONCLUSIVE";
            case Outcome::Skipped: return "SKIPPED";
        }
        return "?";
    }

    nlohmann::json to_json() const {
        nlohmann::json j{{"verdict", name()}};
        if (!reason.empty()) j["reason"] = reason;
        if (certificate) j["certificate"] = certificate->to_json();
        return j;
    }
};

namespace criteria_detail {

inline FailureCertificate cert(CertificateKind k, const Transcript& t, std::size_t from, std::size_t to,
                               nlohmann::json details) {
    FailureCertificate c;
    c.kind = k;
    c.details = std::move(details);
    c.take_excerpt(t, from, to);
    return c;
}

inline Verdict ex(const CriterionSpec& spec, const Transcript& t, std::size_t truth) {
    const std::size_t n = spec.horizon;
    const std::size_t from = n - spec.tail;
    for (std::size_t s = from; s < n; ++s) {
        if (t[s].is(truth)) continue;
        bool steady = true;
        for (std::size_t u = from; u < n; ++u) steady = steady && t[u] == t[n - 1];
        if (steady)
            return Verdict::fail(cert(CertificateKind::StuckWrong, t, from, n,
                                      {{"final", t[n - 1].to_json()}, {"truth", truth}}),
                                 "tail settles on " + t[n - 1].to_string());
        std::size_t changes = 0;
        for (std::size_t u = from + 1; u < n; ++u) changes += !(t[u] == t[u - 1]);
        return Verdict::fail(cert(CertificateKind::InfinitelyManyMindChanges, t, from, n,
                                  {{"changes_in_tail", changes}, {"truth", truth}}),
                             "tail is not constant on the truth");
    }
    return Verdict::pass();
}

// Stages a < b < c with h at a, a different value at b, h again at c.
inline std::optional<std::array<std::size_t, 3>> abandon_return(const Transcript& t, std::size_t upto) {
    std::map<std::size_t, std::size_t> left;  // code -> stage it was abandoned at
    for (std::size_t s = 0; s < upto; ++s) {
        if (s > 0 && !t[s - 1].is_question() && !(t[s] == t[s - 1]) && !left.count(t[s - 1].code()))
            left[t[s - 1].code()] = s;
        if (!t[s].is_question()) {
            auto it = left.find(t[s].code());
            if (it != left.end()) {
                std::size_t first = 0;
                for (std::size_t u = 0; u < it->second; ++u)
                    if (t[u].is(t[s].code())) first = u;
                return std::array<std::size_t, 3>{first, it->second, s};
            }
        }
    }
    return std::nullopt;
}

}  // namespace criteria_detail

// Judges a transcript against a criterion for a run whose true member is
// `truth`. Checks only the first `horizon` stages.
inline Verdict check(const CriterionSpec& spec, const Transcript& t, std::size_t truth, const Family& fam) {
    using namespace criteria_detail;
    spec.validate();
    if ((spec.kind == CriterionKind::Co || spec.kind == CriterionKind::PL) && fam.infinite && !fam.truncation)
        throw ConfigurationError(to_string(spec.kind) + " on an infinite family needs a truncation bound");
    if (t.size() < spec.horizon)
        return Verdict::inconclusive("transcript has " + std::to_string(t.size()) + " stages, horizon is " +
                                     std::to_string(spec.horizon));
    const std::size_t n = spec.horizon;
    switch (spec.kind) {
        case CriterionKind::Ex: return ex(spec, t, truth);
        case CriterionKind::Fin: {
            std::optional<std::size_t> first;
            for (std::size_t s = 0; s < n; ++s) {
                if (t[s].is_question()) {
                    if (first)
                        return Verdict::fail(cert(CertificateKind::SecondCommitment, t, *first, s + 1, {{"stage", s}}),
                                             "'?' after committing");
                    continue;
                }
                if (!first) {
                    first = s;
                } else if (!(t[s] == t[*first])) {
                    return Verdict::fail(cert(CertificateKind::SecondCommitment, t, *first, s + 1,
                                              {{"first", t[*first].code()}, {"second", t[s].code()}, {"stage", s}}),
                                         "two distinct non-'?' values");
                }
            }
            if (!first)
                return Verdict::fail(cert(CertificateKind::NeverCommits, t, n - std::min(n, spec.tail), n, {{"truth", truth}}),
                                     "never commits");
            // a second value outranks a wrong first one
            if (!t[*first].is(truth))
                return Verdict::fail(cert(CertificateKind::StuckWrong, t, *first, *first + 1,
                                          {{"committed", t[*first].code()}, {"truth", truth}, {"stage", *first}}),
                                     "committed to a wrong code");
            return Verdict::pass();
        }
        case CriterionKind::AlphaFin: {
            auto e = ex(spec, t, truth);
            if (!e.passed()) return e;
            Transcript head(std::vector<Hypothesis>(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(n)));
            MindChangeBudget b(spec.budget);
            for (std::size_t s = 0; s < n; ++s)
                if (!b.observe(head[s]))
                    return Verdict::fail(cert(CertificateKind::InfinitelyManyMindChanges, t, 0, s + 1,
                                              {{"budget", spec.budget}, {"mind_changes", head.mind_changes()}, {"stage", s}}),
                                         "mind-change budget exceeded");
            return Verdict::pass();
        }
        case CriterionKind::Co: {
            for (std::size_t s = 0; s < n; ++s)
                if (t[s].is(truth))
                    return Verdict::fail(cert(CertificateKind::CorrectCodeEmitted, t, s, s + 1, {{"stage", s}, {"code", truth}}),
                                         "the correct code appears");
            std::vector<std::size_t> missing;
            for (std::size_t c = 0; c < fam.size(); ++c)
                if (c != truth && t.count(c, n) == 0) missing.push_back(c);
            if (!missing.empty())
                return Verdict::fail(cert(CertificateKind::MissingCode, t, n - spec.tail, n, {{"missing", missing}}),
                                     "some other code never appears");
            return Verdict::pass();
        }
        case CriterionKind::PL: {
            const std::size_t half = n / 2;
            std::size_t gap = 0;
            for (std::size_t s = half; s < n; ++s) {
                gap = t[s].is(truth) ? 0 : gap + 1;
                if (gap >= spec.window)
                    return Verdict::fail(cert(CertificateKind::RecurrenceGap, t, s + 1 - spec.window, s + 1,
                                              {{"truth", truth}, {"window", spec.window}, {"stage", s}}),
                                         "correct code missing from a window");
            }
            std::set<std::size_t> codes;
            for (std::size_t s = 0; s < n; ++s)
                if (!t[s].is_question()) codes.insert(t[s].code());
            for (auto c : codes) {
                if (c == truth) continue;
                for (std::size_t s = half; s < n; ++s)
                    if (t[s].is(c))
                        return Verdict::fail(cert(CertificateKind::WrongCodeRecurs, t, s, s + 1, {{"code", c}, {"stage", s}}),
                                             "wrong code still counting in the final half");
            }
            return Verdict::pass();
        }
        case CriterionKind::NUs: {
            auto e = ex(spec, t, truth);
            if (!e.passed()) return e;
            for (std::size_t s = 0; s < n; ++s)
                if (t[s].is(truth)) {
                    for (std::size_t u = s + 1; u < n; ++u)
                        if (!t[u].is(truth))
                            return Verdict::fail(cert(CertificateKind::AbandonReturn, t, s, u + 1,
                                                      {{"code", truth}, {"emitted", s}, {"abandoned", u}}),
                                                 "correct code abandoned");
                    break;
                }
            return Verdict::pass();
        }
        case CriterionKind::Dec: {
            if (auto r = abandon_return(t, n))
                return Verdict::fail(cert(CertificateKind::AbandonReturn, t, (*r)[0], (*r)[2] + 1,
                                          {{"code", t[(*r)[2]].code()}, {"stages", {(*r)[0], (*r)[1], (*r)[2]}}}),
                                     "returns to an abandoned code");
            return ex(spec, t, truth);
        }
    }
    return Verdict::inconclusive("unknown criterion");
}

}  // namespace sigmalab
