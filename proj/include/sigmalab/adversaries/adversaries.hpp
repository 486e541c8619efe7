#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sigmalab/adversaries/duel.hpp"
#include "sigmalab/learners/constructions.hpp"
#include "sigmalab/reductions/operator.hpp"

namespace sigmalab {

namespace adversary_detail {

inline std::shared_ptr<ModelCopy> copy_of(const CatalogStructure& s, std::uint64_t seed) {
    return std::make_shared<ModelCopy>(std::shared_ptr<const Model>(make_model(s)), seed);
}

inline std::string code_name(const Family& fam, const CatalogStructure& s) {
    auto c = fam.code_of(s);
    return c ? std::to_string(*c) : "none";
}

inline nlohmann::json code_json(const Family& fam, const CatalogStructure& s) {
    auto c = fam.code_of(s);
    return c ? nlohmann::json(*c) : nlohmann::json(nullptr);
}

// Length of the path that starts at `start`, or 0 when the component of
// `start` is not a path with `start` as an end.
inline std::size_t path_length(const FiniteFragment& f, Element start) {
    if (start >= f.size()) return 0;
    std::size_t len = 1;
    Element prev = start, cur = start;
    if (f.out(0, start).size() > 1) return 0;
    while (true) {
        std::optional<Element> next;
        for (auto y : f.out(0, cur))
            if (y != prev && y != cur) next = y;
        if (f.out(0, cur).size() > 2) return 0;
        if (!next) return len;
        prev = cur;
        cur = *next;
        ++len;
        if (len > f.size()) return 0;
    }
}

}  // namespace adversary_detail

// Against Ex on {R_n ⊕ I} ∪ {R ⊕ I}: stages 0-2 lay out R_2 ⊕ I_1, odd stages
// add an isolated vertex, stage 2s+2 extends the ray iff the learner named
// the current finite ray at stage 2s.
inline DuelResult adv_vs_ex_rays(Learner& m, const Family& fam, std::uint64_t seed = 0, Escalation esc = {}) {
    using namespace adversary_detail;
    auto ray_member = [](std::size_t n) { return CatalogStructure::du(CatalogStructure::ray(n), CatalogStructure::iso_inf()); };
    const auto limit_inf = CatalogStructure::du(CatalogStructure::ray(), CatalogStructure::iso_inf());
    if (!(fam.signature() == Signature::graph())) throw ConfigurationError("adv_vs_ex_rays needs a graph family");

    DuelDriver d(Signature::graph(), &m, m.id(), "ex_rays", seed, esc);
    std::size_t n = 0, t = 0;
    Element end = 0;
    std::vector<std::size_t> expansionary;
    auto ray_code = [&](std::size_t len) -> std::optional<std::size_t> { return fam.code_of(ray_member(len)); };

    while (true) {
        const std::size_t s = d.stages();
        bool extend = false;
        if (s < 2) {
            extend = true;
        } else if (s % 2 == 0 && s >= 4) {
            auto c = ray_code(n);
            extend = c && d.transcript()[s - 2].is(*c);
            if (extend) expansionary.push_back(s - 2);
        }
        d.stage([&](StageBuilder& b) {
            auto x = b.add_element();
            if (extend) {
                if (n > 0) b.edge(x, end);
                end = x;
                ++n;
            } else {
                ++t;
            }
        });
        // S↾s ≅ R_n ⊕ I_t
        d.check(path_length(d.fragment(), 0) == n && d.fragment().size() == n + t,
                "not R_" + std::to_string(n) + " ⊕ I_" + std::to_string(t));
        if (d.stages() < 4 || !d.at_checkpoint()) continue;

        const std::size_t h = d.stages(), half = h / 2;
        std::vector<std::size_t> late;
        for (auto e : expansionary)
            if (e >= half) late.push_back(e);
        if (late.size() >= 2) {
            auto c = d.make(CertificateKind::InfinitelyManyMindChanges, late.front(), h,
                            {{"expansionary_stages", late}, {"ray_length", n}, {"limit", limit_inf.to_string()}});
            return d.certify(std::move(c), limit_inf);
        }
        if (late.empty()) {
            const auto truth = ray_member(n);
            const std::size_t from = expansionary.empty() ? half : std::max(half, expansionary.back() + 1);
            const auto& tr = d.transcript();
            bool constant = true;
            std::size_t changes = 0;
            for (std::size_t u = from + 1; u < h; ++u) {
                constant = constant && tr[u] == tr[from];
                changes += !(tr[u] == tr[u - 1]);
            }
            nlohmann::json det{{"truth", truth.to_string()},
                               {"truth_code", code_json(fam, truth)},
                               {"expansionary_stages", expansionary},
                               {"final", tr[h - 1].to_json()}};
            if (constant && !(ray_code(n) && tr[from].is(*ray_code(n))))
                return d.certify(d.make(CertificateKind::StuckWrong, from, h, det), truth);
            det["changes"] = changes;
            return d.certify(d.make(CertificateKind::InfinitelyManyMindChanges, from, h, det), truth);
        }
        if (d.exhausted()) return d.inconclusive("expansionary stages neither stop nor recur within the cap");
    }
}

// Against nUs on 𝔓: build P̃_0 until the learner says it, detour to P̃_k with
// k above the current size until it says that, then resume P̃_0.
inline DuelResult adv_vs_nus_poset(Learner& m, const Family& fam, std::uint64_t seed = 0, Escalation esc = {}) {
    auto by_k = poset_family_codes(fam);
    const auto p0 = CatalogStructure::tilde(CatalogStructure::poset_p(0));
    const std::size_t c0 = by_k.at(0);
    DuelDriver d(Signature::order(), &m, m.id(), "nus_poset", seed, esc);

    std::function<void(StageBuilder&, std::size_t)> builder;
    auto copy = adversary_detail::copy_of(p0, seed);
    builder = [copy](StageBuilder& b, std::size_t s) { copy->step(b, s); };
    CatalogStructure target = p0;
    std::optional<Continuation> cont;

    // phase 0: P̃_0 until ⌜P̃_0⌝; 1: P̃_k until ⌜P̃_k⌝; 2: P̃_0 until ⌜P̃_0⌝ again
    int phase = 0;
    std::size_t since = 0, s0 = 0, k = 0;
    Hypothesis want = Hypothesis::conjecture(c0);
    while (true) {
        const auto& h = d.stage([&](StageBuilder& b) {
            if (cont)
                cont->step(b, d.stages());
            else
                builder(b, d.stages());
        });
        const std::size_t s = d.stages() - 1;
        if (s < 64 || d.at_checkpoint() || h == want)
            d.check(audit_shape(d.fragment(), {target}), "fragment leaves " + target.to_string());

        if (h == want) {
            if (phase == 0) {
                s0 = s;
                k = d.stages() + 1;
                if (!by_k.count(k))
                    return d.inconclusive("family is truncated below P̃_" + std::to_string(k) + ", needed after stage " +
                                          std::to_string(s0));
                target = CatalogStructure::tilde(CatalogStructure::poset_p(k));
                cont.emplace(d.fragment(), target);
                want = Hypothesis::conjecture(by_k.at(k));
                phase = 1;
                since = d.stages();
                d.note("detour", {{"stage", s0}, {"k", k}});
                continue;
            }
            if (phase == 1) {
                target = p0;
                cont.emplace(d.fragment(), target);
                want = Hypothesis::conjecture(c0);
                phase = 2;
                since = d.stages();
                d.note("resume", {{"stage", s}});
                continue;
            }
            std::size_t left = s0;
            while (left < s && d.transcript()[left].is(c0)) ++left;
            auto c = d.make(CertificateKind::AbandonReturn, s0, s + 1,
                            {{"code", c0}, {"stages", {s0, left, s}}, {"truth", p0.to_string()}});
            return d.certify(std::move(c), p0);
        }
        if (!d.at_checkpoint()) continue;
        if (auto from = d.stuck_since(since, want)) {
            auto c = d.make(CertificateKind::StuckWrong, *from, d.stages(),
                            {{"truth", target.to_string()},
                             {"truth_code", want.code()},
                             {"final", d.transcript()[d.stages() - 1].to_json()},
                             {"phase", phase}});
            return d.certify(std::move(c), target);
        }
        if (d.exhausted()) return d.inconclusive("learner neither names " + target.to_string() + " nor settles within the cap");
    }
}

// Against co on a comparable pair Th(A) ⊊ Th(B): build A; once ⌜B⌝ shows,
// continue the copy as B.
inline DuelResult adv_vs_co_comparable(Learner& m, const Family& fam, std::size_t a, std::size_t b,
                                       std::uint64_t seed = 0, Escalation esc = {}) {
    if (a >= fam.size() || b >= fam.size() || a == b) throw ConfigurationError("adv_vs_co_comparable: bad codes");
    auto c = classify_family(fam);
    if (!c.leq[a][b] || c.leq[b][a])
        throw ConfigurationError("adv_vs_co_comparable: " + fam[a].to_string() + " is not strictly Σ1-below " +
                                 fam[b].to_string());
    DuelDriver d(fam.signature(), &m, m.id(), "co_comparable", seed, esc);
    auto copy = adversary_detail::copy_of(fam[a], seed);
    while (true) {
        const auto& h = d.stage([&](StageBuilder& bld) { copy->step(bld, d.stages()); });
        const std::size_t s = d.stages() - 1;
        if (s < 64 || d.at_checkpoint()) d.check(audit_shape(d.fragment(), {fam[a]}), "fragment leaves " + fam[a].to_string());
        if (h.is(a))
            return d.certify(d.make(CertificateKind::CorrectCodeEmitted, s, s + 1,
                                    {{"stage", s}, {"code", a}, {"truth", fam[a].to_string()}}),
                             fam[a]);
        if (h.is(b)) {
            // S↾s extends to a copy of B
            Continuation cont(d.fragment(), fam[b]);
            const std::size_t until = s + 32;
            while (d.stages() <= until) d.stage([&](StageBuilder& bld) { cont.step(bld, d.stages()); });
            d.check(audit_shape(d.fragment(), {fam[b]}), "continuation leaves " + fam[b].to_string());
            return d.certify(d.make(CertificateKind::CorrectCodeEmitted, s, s + 1,
                                    {{"stage", s}, {"code", b}, {"truth", fam[b].to_string()}, {"switched_at", s}}),
                             fam[b]);
        }
        if (d.exhausted())
            return d.certify(d.make(CertificateKind::MissingCode, d.stages() - std::min<std::size_t>(64, d.stages()),
                                    d.stages(), {{"missing", {b}}, {"truth", fam[a].to_string()}, {"horizon", d.stages()}}),
                             fam[a]);
    }
}

// Against Fin: build A until the learner commits; if it commits to ⌜A⌝,
// continue the same fragment as the first candidate B it extends to.
inline DuelResult adv_vs_fin(Learner& m, const Family& fam, std::size_t a, const std::vector<std::size_t>& candidates,
                             std::uint64_t seed = 0, Escalation esc = {}) {
    if (a >= fam.size()) throw ConfigurationError("adv_vs_fin: bad code");
    for (auto b : candidates)
        if (b >= fam.size() || b == a) throw ConfigurationError("adv_vs_fin: bad candidate code");
    DuelDriver d(fam.signature(), &m, m.id(), "fin", seed, esc);
    auto copy = adversary_detail::copy_of(fam[a], seed);
    while (true) {
        const auto& h = d.stage([&](StageBuilder& bld) { copy->step(bld, d.stages()); });
        const std::size_t s = d.stages() - 1;
        if (s < 64 || d.at_checkpoint()) d.check(audit_shape(d.fragment(), {fam[a]}), "fragment leaves " + fam[a].to_string());
        if (!h.is_question() && !h.is(a))
            return d.certify(d.make(CertificateKind::StuckWrong, s, s + 1,
                                    {{"committed", h.code()}, {"truth", fam[a].to_string()}, {"truth_code", a}, {"stage", s}}),
                             fam[a]);
        if (h.is(a)) {
            for (auto b : candidates) {
                std::optional<Continuation> cont;
                try {
                    cont.emplace(d.fragment(), fam[b]);
                } catch (const ConstructionError&) {
                    continue;
                }
                // keep going to the next checkpoint to see whether it revises
                const std::size_t until = std::max(d.escalation().initial, 2 * d.stages());
                while (d.stages() < until) d.stage([&](StageBuilder& bld) { cont->step(bld, d.stages()); });
                d.check(audit_shape(d.fragment(), {fam[b]}), "continuation leaves " + fam[b].to_string());
                std::optional<std::size_t> revised;
                for (std::size_t u = s + 1; u < d.stages() && !revised; ++u)
                    if (!d.transcript()[u].is(a)) revised = u;
                nlohmann::json det{{"committed", a}, {"stage", s}, {"truth", fam[b].to_string()}, {"truth_code", b}};
                if (revised) {
                    det["revised_at"] = *revised;
                    return d.certify(d.make(CertificateKind::SecondCommitment, s, *revised + 1, det), fam[b]);
                }
                return d.certify(d.make(CertificateKind::StuckWrong, s, d.stages(), det), fam[b]);
            }
            return d.inconclusive("precondition fails: S↾" + std::to_string(s) + " extends to no candidate", fam[a]);
        }
        if (d.exhausted())
            return d.certify(d.make(CertificateKind::NeverCommits, d.stages() - std::min<std::size_t>(64, d.stages()),
                                    d.stages(), {{"truth", fam[a].to_string()}, {"horizon", d.stages()}}),
                             fam[a]);
    }
}

// Against a total Id-operator for {A_0, A_1}: feed isolated points until Γ(S)
// leaves Γ(A_0) or Γ(A_1), then complete S as that member.
inline DuelResult adv_vs_total_id_operator(const ReductionOperator& g, const Family& fam, std::uint64_t seed = 0,
                                           Escalation esc = {}) {
    if (fam.size() != 2) throw ConfigurationError("adv_vs_total_id_operator needs a two-member family");
    if (g.target != Relation::Id && g.target != Relation::EqN)
        throw ConfigurationError("adv_vs_total_id_operator needs an operator into Id");
    if (!g.total) throw ConfigurationError(g.name + " is only defined on copies of family members");
    // probe on a stream of isolated points
    try {
        auto probe = g.start();
        FiniteFragment f(fam.signature());
        for (int i = 0; i < 8; ++i) {
            f.add_element();
            probe->feed(f);
        }
    } catch (const Error& e) {
        throw ConfigurationError(g.name + " fails on isolated points: " + e.what());
    }

    DuelDriver d(fam.signature(), nullptr, g.name, "total_id_operator", seed, esc);
    auto run = g.start();
    std::vector<OperatorTrace> refs;
    for (const auto& mem : fam.members) refs.emplace_back(g, present(mem, seed));
    std::vector<std::uint64_t> out;
    while (true) {
        d.stage([](StageBuilder& b) { b.add_element(); });
        const std::size_t s = d.stages() - 1;
        d.check(d.fragment().atoms().empty(), "isolated phase has an atom");
        out = run->feed(d.fragment()).flat;
        for (std::size_t i = 0; i < 2; ++i) {
            const auto& ref = refs[i].at(s).flat;
            for (std::size_t k = 0; k < std::min(out.size(), ref.size()); ++k) {
                if (out[k] == ref[k]) continue;
                // complete S as A_i; position k of Γ(S) is already fixed
                Continuation cont(d.fragment(), fam[i]);
                const std::size_t until = std::max<std::size_t>(2 * d.stages(), d.stages() + 64);
                const OutputPrefix* last = nullptr;
                while (d.stages() < until) {
                    d.stage([&](StageBuilder& b) { cont.step(b, d.stages()); });
                    last = &run->feed(d.fragment());
                }
                d.check(audit_shape(d.fragment(), {fam[i]}), "completion leaves " + fam[i].to_string());
                d.check(last && last->flat.size() > k && last->flat[k] == out[k], "Γ revised a fixed position");
                nlohmann::json det{{"position", k},
                                   {"gamma_value", out[k]},
                                   {"reference_value", ref[k]},
                                   {"reference", fam[i].to_string() + "#" + std::to_string(seed)},
                                   {"deviation_stage", s},
                                   {"completed_as", fam[i].to_string()},
                                   {"stages_built", d.stages()}};
                auto c = d.make(CertificateKind::PrefixDisagreement, 0, 0, det);
                return d.certify(std::move(c), fam[i]);
            }
        }
        if (d.exhausted()) return d.inconclusive("Γ on isolated points agrees with both references up to the cap");
    }
}

// Against an E_3-operator for F*: grow a chain inside a padded ω (or ω*),
// lengthening it only after column 0 of Γ(S) shows a fresh disagreement with
// Γ of the reference copy. Chain lengths with no disagreement within `patience`
// stages are skipped.
inline DuelResult adv_vs_e3_operator_fstar(const ReductionOperator& g, const Family& fam, std::uint64_t seed = 0,
                                           Escalation esc = {}, std::size_t wanted = 10, std::size_t patience = 64) {
    if (g.target != Relation::E3) throw ConfigurationError("adv_vs_e3_operator_fstar needs an operator into E3");
    const auto up = CatalogStructure::tilde(CatalogStructure::omega());
    const auto down = CatalogStructure::tilde(CatalogStructure::omega_star());
    if (!fam.code_of(up) || !fam.code_of(down)) throw ConfigurationError("adv_vs_e3_operator_fstar needs F*");

    nlohmann::json probes = nlohmann::json::array();
    for (int branch = 0; branch < 2; ++branch) {
        const auto& limit = branch == 0 ? up : down;
        DuelDriver d(Signature::order(), nullptr, g.name, "e3_fstar", seed, esc);
        d.note("branch", limit.to_string());
        auto run = g.start();
        OperatorTrace ref(g, present(limit, seed));
        std::vector<Element> chain;
        std::vector<std::size_t> found;
        std::size_t waited = 0, skipped = 0, next = 0;
        bool grow = true;
        while (!d.exhausted()) {
            d.stage([&](StageBuilder& b) {
                auto x = b.add_element();
                b.relate(x, x);
                if (!grow) return;
                for (auto y : chain) branch == 0 ? b.relate(y, x) : b.relate(x, y);
                chain.push_back(x);
            });
            if (grow) {
                d.check(audit_shape(d.fragment(), {CatalogStructure::tilde(CatalogStructure::chain(chain.size()))}),
                        "not a padded chain of length " + std::to_string(chain.size()));
                grow = false;
            }
            const std::size_t s = d.stages() - 1;
            const auto& a = run->feed(d.fragment());
            const auto& r = ref.at(s);
            if (a.columns.empty() || r.columns.empty()) throw ConfigurationError(g.name + " has no column 0");
            const auto& c = a.columns[0];
            const auto& rc = r.columns[0];
            bool hit = false;
            for (; next < std::min(c.size(), rc.size()); ++next)
                if (c[next] != rc[next]) {
                    found.push_back(next++);
                    hit = true;
                    break;
                }
            if (hit || ++waited >= patience) {
                skipped += !hit;
                waited = 0;
                grow = true;
            }
            if (found.size() >= wanted) {
                d.check(audit_shape(d.fragment(), {limit}), "fragment leaves " + limit.to_string());
                nlohmann::json det{{"column", 0},
                                   {"disagreements", found},
                                   {"branch", limit.to_string()},
                                   {"chain_length", chain.size()},
                                   {"skipped_lengths", skipped},
                                   {"earlier_probes", probes}};
                return d.certify(d.make(CertificateKind::PrefixDisagreement, 0, 0, det), limit);
            }
        }
        probes.push_back({{"branch", limit.to_string()}, {"disagreements", found.size()}});
        if (branch == 1)
            return d.inconclusive("fewer than " + std::to_string(wanted) + " column-0 disagreements on either branch", limit);
    }
    return DuelResult{};
}

}  // namespace sigmalab
