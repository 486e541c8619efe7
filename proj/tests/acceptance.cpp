// One line per acceptance criterion; exit status 1 if any of them fails.
// Checks lean on independent counts and brute-force oracles rather than on
// the checkers under test where that is cheap.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sigmalab/harness/registry.hpp"

using namespace sigmalab;
using CS = CatalogStructure;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

// Collects failures without stopping at the first one.
struct Tally {
    std::size_t runs = 0, bad = 0;
    std::string first;
    void expect(bool ok, const std::string& what) {
        ++runs;
        if (ok) return;
        if (!bad++) first = what;
    }
    Outcome result(const std::string& summary) const {
        if (!bad) return {true, summary + " (" + std::to_string(runs) + " checks)"};
        return {false, std::to_string(bad) + "/" + std::to_string(runs) + " checks failed; first: " + first};
    }
};

CriterionSpec spec(CriterionKind k, std::size_t horizon, std::size_t window = 50, std::size_t tail = 64) {
    CriterionSpec c;
    c.kind = k;
    c.horizon = horizon;
    c.window = window;
    c.tail = tail;
    return c;
}

std::string show(const Verdict& v) { return v.to_json().dump().substr(0, 300); }

std::set<std::size_t> distinct_codes(const Transcript& t) {
    std::set<std::size_t> s;
    for (const auto& h : t)
        if (!h.is_question()) s.insert(h.code());
    return s;
}

// Once a value shows and something else follows, it never shows again.
bool no_abandon_return(const std::vector<Hypothesis>& out) {
    std::set<Hypothesis> abandoned;
    for (std::size_t s = 0; s < out.size(); ++s) {
        if (!out[s].is_question() && abandoned.count(out[s])) return false;
        if (s > 0 && !out[s - 1].is_question() && !(out[s] == out[s - 1])) abandoned.insert(out[s - 1]);
    }
    return true;
}

Outcome c1_ex_omega() {
    auto fam = registry::family("omega_pair");
    ExMinMaxLearner m(fam);
    Tally t;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            auto tr = run_learner(m, fam[i], seed, 512);
            auto v = check(spec(CriterionKind::Ex, 512), tr, i, fam);
            bool tail_ok = true;
            for (std::size_t s = 512 - 64; s < 512; ++s) tail_ok = tail_ok && tr[s].is(i);
            t.expect(v.passed() && tail_ok, fam[i].to_string() + " seed " + std::to_string(seed) + ": " + show(v));
        }
    return t.result("ex_minmax passes Ex on 20 presentations of ω and ω*");
}

Outcome c2_fin_strong_antichain() {
    auto fam = registry::family("cycles34");
    Tally t;
    auto c = classify_family(fam);
    t.expect(c.level == Level::StrongAntichain, "classified " + to_string(c.level));
    auto m = FinLearner::from_classifier(fam);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            auto tr = run_learner(m, fam[i], seed, 512);
            auto v = check(spec(CriterionKind::Fin, 512), tr, i, fam);
            auto codes = distinct_codes(tr);
            t.expect(v.passed() && codes == std::set<std::size_t>{i},
                     fam[i].to_string() + " seed " + std::to_string(seed) + ": " + show(v));
        }
    return t.result("StrongAntichain; fin commits once, correctly, on 10 runs");
}

Outcome c3_co() {
    auto fam = registry::family("cyc_comp");
    auto m = CoLearner::from_classifier(fam);
    Tally t;
    for (std::size_t i = 0; i < fam.size(); ++i)
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            auto tr = run_learner(m, fam[i], seed, 1024);
            auto v = check(spec(CriterionKind::Co, 1024), tr, i, fam);
            std::set<std::size_t> others;
            for (std::size_t j = 0; j < fam.size(); ++j)
                if (j != i) others.insert(j);
            t.expect(v.passed() && distinct_codes(tr) == others,
                     fam[i].to_string() + " seed " + std::to_string(seed) + ": " + show(v));
        }
    return t.result("co omits exactly the true code on 4 members x 3 seeds");
}

Outcome c4_nus_dec() {
    auto fam = registry::family("tl34");
    auto m = NusLearner::from_classifier(fam);
    Tally t;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            auto tr = run_learner(m, fam[i], seed, 512);
            auto v = check(spec(CriterionKind::NUs, 512), tr, i, fam);
            t.expect(v.passed(), fam[i].to_string() + " seed " + std::to_string(seed) + ": " + show(v));
        }
    // every stream of length <= 6 over three codes
    std::size_t swept = 0;
    for (std::size_t len = 0; len <= 6; ++len) {
        std::size_t total = 1;
        for (std::size_t k = 0; k < len; ++k) total *= 3;
        for (std::size_t n = 0; n < total; ++n) {
            std::vector<Hypothesis> in;
            for (std::size_t k = 0, x = n; k < len; ++k, x /= 3) in.push_back(Hypothesis::conjecture(x % 3));
            auto out = nus_to_dec_stream(in);
            t.expect(out.size() == in.size() && no_abandon_return(out), "stream #" + std::to_string(n) + " of length " +
                                                                           std::to_string(len));
            ++swept;
        }
    }
    std::mt19937_64 rng(2024);
    for (int r = 0; r < 1000; ++r) {
        std::vector<Hypothesis> in(1 + rng() % 60);
        for (auto& h : in) {
            auto x = rng() % 4;
            h = x == 3 ? kQuestion : Hypothesis::conjecture(x);
        }
        auto out = nus_to_dec_stream(in);
        t.expect(out.size() == in.size() && no_abandon_return(out), "random stream " + std::to_string(r));
    }
    return t.result("nus passes NUs on 10 runs; dec transform clean on " + std::to_string(swept) +
                    " exhaustive + 1000 random streams");
}

Outcome c5_pl_pairwise() {
    auto fam = registry::family("omega_pair");
    auto m = registry::make_learner("pl_pairwise", fam);
    Tally t;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            auto tr = run_learner(*m, fam[i], seed, 1024);
            auto v = check(spec(CriterionKind::PL, 1024, 50), tr, i, fam);
            const std::size_t wrong = 1 - i;
            t.expect(v.passed() && tr.count(wrong, 512) == tr.count(wrong, 1024),
                     fam[i].to_string() + " seed " + std::to_string(seed) + ": " + show(v));
        }
    return t.result("pl_pairwise passes PL at 1024, W 50; wrong counts flat over the final half");
}

Outcome c6_pl_fstar() {
    auto fam = registry::family("fstar");
    PlFstarLearner m(fam);
    Tally t;
    for (std::size_t i = 0; i < fam.size(); ++i)
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            auto tr = run_learner(m, fam[i], seed, 1024);
            auto v = check(spec(CriterionKind::PL, 1024, 50), tr, i, fam);
            t.expect(v.passed(), fam[i].to_string() + " seed " + std::to_string(seed) + ": " + show(v));
        }
    return t.result("pl_fstar passes PL on 7 members x 3 seeds");
}

Outcome c7_erange() {
    auto fam = registry::family("tl34");
    auto g = gamma_erange(fam);
    Tally t;
    auto rep = verify_reduction(g, fam, 100, {0, 1, 2});
    t.expect(rep.pass && rep.same_member_failures == 0 && rep.cross_unseparated == 0, rep.to_json().dump().substr(0, 300));
    // separation through <1,0>: in the range for L̃_4, never for L̃_3
    const std::uint64_t sep = pair(1, 0);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        OperatorTrace lo(g, present(fam[0], seed)), hi(g, present(fam[1], seed));
        t.expect(!lo.at(99).range().count(sep), "L̃_3 seed " + std::to_string(seed) + " reaches <1,0>");
        t.expect(hi.at(99).range().count(sep), "L̃_4 seed " + std::to_string(seed) + " misses <1,0>");
    }
    bool rejected = false;
    try {
        gamma_erange(registry::family("omega_pair"));
    } catch (const ConfigurationError&) {
        rejected = true;
    }
    t.expect(rejected, "gamma_erange accepted {ω, ω*}");
    return t.result("gamma_erange verified on L̃_3, L̃_4 at 100 stages; {ω, ω*} rejected");
}

std::vector<FailureCertificate> certificates;

Outcome c8_duels() {
    Tally t;
    auto rays = run_duel("ex_rays", "ex_min_embed", 0);
    t.expect(rays.refuted() && rays.audit_violations == 0, "rays: " + rays.to_json().dump().substr(0, 300));
    auto nus = run_duel("nus_poset", "ex_poset", 0);
    t.expect(nus.refuted() && nus.certificate->kind == CertificateKind::AbandonReturn && nus.audit_violations == 0,
             "ex_poset: " + nus.to_json().dump().substr(0, 300));
    auto dec = run_duel("nus_poset", "dec_ex_poset", 0);
    t.expect(dec.refuted() && dec.certificate->kind == CertificateKind::StuckWrong && dec.audit_violations == 0,
             "dec_ex_poset: " + dec.to_json().dump().substr(0, 300));
    std::string kinds;
    for (auto* r : {&rays, &nus, &dec}) {
        if (!r->refuted()) continue;
        certificates.push_back(*r->certificate);
        kinds += (kinds.empty() ? "" : ", ") + to_string(r->certificate->kind);
        // the duel's presentation reproduces the fragment it was run on
        auto p = r->presentation();
        t.expect(p.restrict(r->stages - 1) == r->fragment, r->adversary + " presentation does not replay");
    }
    return t.result("certificates " + kinds);
}

Outcome c9_total_operator() {
    Tally t;
    auto r = run_duel("total_id_operator", "fin_to_eqnat_total", 0);
    t.expect(r.refuted() && r.certificate->kind == CertificateKind::PrefixDisagreement && r.audit_violations == 0,
             r.to_json().dump().substr(0, 300));
    if (r.refuted() && r.limit) {
        certificates.push_back(*r.certificate);
        // recompute both sides from scratch
        auto fam = registry::family("cycles34");
        auto g = registry::make_operator("fin_to_eqnat_total", fam);
        const std::size_t k = r.certificate->details["position"];
        auto mine = g.apply(r.fragment);
        OperatorTrace ref(g, present(*r.limit, 0));
        const auto& theirs = ref.at(r.stages - 1);
        t.expect(mine.flat.size() > k && theirs.flat.size() > k && mine.flat[k] != theirs.flat[k],
                 "position " + std::to_string(k) + " agrees on recomputation");
        t.expect(embeds_in_catalog(r.fragment, *r.limit), "fragment is not a piece of " + r.limit->to_string());
    }
    return t.result("PrefixDisagreement against fin_to_eqnat_total");
}

Outcome c10_oracles() {
    Tally t;
    // catalog fragments of size <= 6: windows and seeded restrictions, deduplicated
    std::vector<FiniteFragment> orders, graphs;
    auto add = [](std::vector<FiniteFragment>& v, FiniteFragment f) {
        for (const auto& g : v)
            if (g == f) return;
        v.push_back(std::move(f));
    };
    auto collect = [&](std::vector<FiniteFragment>& v, const std::vector<CatalogStructure>& atoms) {
        for (const auto& a : atoms)
            for (std::size_t n = 1; n <= 6; ++n) {
                add(v, window(a, n));
                if (a.infinite()) add(v, realize(a, 1, n - 1));
            }
    };
    collect(orders, oracles::order_atoms());
    collect(graphs, oracles::graph_atoms());
    std::size_t pairs = 0;
    for (const auto* v : {&orders, &graphs})
        for (const auto& f : *v)
            for (const auto& g : *v) {
                ++pairs;
                t.expect(embed_finite(f, g) == oracles::brute_embeds(f, g),
                         "embedding disagrees on sizes " + std::to_string(f.size()) + "," + std::to_string(g.size()));
            }
    std::size_t leq = 0;
    for (const auto& atoms : {oracles::order_atoms(), oracles::graph_atoms()}) {
        std::vector<oracles::AgeSample> ages;
        std::vector<FiniteFragment> hosts;
        for (const auto& a : atoms) {
            ages.push_back(oracles::sample_age(a));
            hosts.push_back(oracles::host_window(a));
        }
        for (std::size_t i = 0; i < atoms.size(); ++i)
            for (std::size_t j = 0; j < atoms.size(); ++j) {
                ++leq;
                t.expect(sigma1_leq(atoms[i], atoms[j]) == oracles::brute_age_leq(ages[i], hosts[j]),
                         atoms[i].to_string() + " <= " + atoms[j].to_string());
            }
    }
    return t.result(std::to_string(pairs) + " fragment pairs and " + std::to_string(leq) + " catalog pairs agree");
}

Outcome c11_replay() {
    Tally t;
    t.expect(certificates.size() == 4, std::to_string(certificates.size()) + " certificates from criteria 8-9, wanted 4");
    for (const auto& c : certificates) {
        auto again = replay_duel(c);
        t.expect(again.certificate && again.certificate->dump() == c.dump(), "replay of " + c.replay.dump() + " differs");
    }
    return t.result(std::to_string(certificates.size()) + " certificates regenerate bit-identically");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"Ex on {ω, ω*}", c1_ex_omega},
        {"Fin on a strong antichain", c2_fin_strong_antichain},
        {"co on cycle complements", c3_co},
        {"nUs and Dec", c4_nus_dec},
        {"PL from pairwise Ex", c5_pl_pairwise},
        {"PL on F*", c6_pl_fstar},
        {"E_range reduction", c7_erange},
        {"incomparability duels", c8_duels},
        {"total-operator counterexample", c9_total_operator},
        {"oracle equivalence", c10_oracles},
        {"determinism and replay", c11_replay},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%-4s criterion %2zu  %-30s %s  [%.1fs]\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.ok;
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed ? 1 : 0;
}
