// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "fanlab/cli.hpp"
#include "fanlab/contfun.hpp"
#include "fanlab/csets.hpp"
#include "fanlab/heineborel.hpp"
#include "fanlab/kleene.hpp"
#include "fanlab/realfun.hpp"
#include "fanlab/reals.hpp"
#include "fanlab/seqcode.hpp"
#include "oracles.hpp"

using namespace fanlab;
using oracle::Q;

namespace {

struct Failed {
    std::string why;
};

void require(bool ok, const std::string& why)
{
    if (!ok)
        throw Failed{why};
}

FinSeq fs(const oracle::Seq& s)
{
    FinSeq out;
    for (auto v : s)
        out.push_back(Nat(v));
    return out;
}

std::vector<FinSeq> fs_all(const std::vector<oracle::Seq>& xs)
{
    std::vector<FinSeq> out;
    for (const auto& s : xs)
        out.push_back(fs(s));
    return out;
}

std::vector<FinSeq> binary_upto(std::size_t n)
{
    std::vector<FinSeq> out;
    for (std::size_t len = 0; len <= n; ++len)
        for (const auto& s : oracle::binary_level(len))
            out.push_back(fs(s));
    return out;
}

Rat to_rat(const Q& q) { return make_rat(Int(q.numerator()), Int(q.denominator())); }
Q to_q(const Rat& r) { return Q(static_cast<long long>(num(r)), static_cast<long long>(den(r))); }

bool within(const Real& x, const Rat& q, std::uint64_t n)
{
    const Seg s = x.at(n);
    return s.contains_rat(q) && s.length() <= pow2(-long(n));
}

// ---------------------------------------------------------------------------

std::string coding()
{
    std::size_t cases = 0;
    std::set<Nat> codes;
    std::function<void(oracle::Seq&)> walk = [&](oracle::Seq& s) {
        const FinSeq f = fs(s);
        const SeqCode c = encode(f);
        require(c.value == oracle::code_of(s), "encode disagrees with prime powers at " + f.str());
        require(decode(c) == f, "decode(encode) differs at " + f.str());
        codes.insert(c.value);
        ++cases;
        if (s.size() == 5)
            return;
        for (std::uint64_t v = 0; v <= 5; ++v) {
            s.push_back(v);
            walk(s);
            s.pop_back();
        }
    };
    oracle::Seq root;
    walk(root);
    require(codes.size() == cases, "encode is not injective");
    for (std::uint64_t a = 0; a < 5000; ++a) {
        require(encode(decode(a)).value == a, "encode(decode) differs at " + std::to_string(a));
        require(decode(a) == fs(oracle::seq_of(a)), "decode disagrees with factorization at " + std::to_string(a));
    }
    return std::to_string(cases) + " sequences, 5000 codes";
}

std::string kleene_suite()
{
    using namespace kleene;
    const ExperimentReport rep = experiment({});
    // (a) alpha-bar(k+1) in B, k = max(e, z), witnessed by T(e, e, z) and alpha(e) = U(z).
    std::size_t hits = 0;
    for (const auto& c : rep.catalog) {
        require(c.halted, c.name + " did not halt");
        const auto prog = Program::from_code(c.e);
        const Run r = run_bounded(prog, c.e, 100000);
        const bool witness = r.halted && T(c.e, c.e, c.z) && U(c.z) == r.output && r.output < 2 &&
                             c.k == std::max(c.e, c.z);
        if (c.verified && witness && c.hit_depth <= c.k + 1)
            ++hits;
    }
    require(rep.catalog.size() >= 10 && hits >= 10, "only " + std::to_string(hits) + " catalog hits");
    // (b)
    for (std::size_t n = 0; n <= 32; ++n) {
        const FinSeq s = avoid_finite(n);
        require(s.size() == n && s.is_binary(), "avoid_finite(" + std::to_string(n) + ") has the wrong shape");
        for (std::size_t i = 0; i <= n; ++i)
            require(!bar_B(s.prefix(i)), "avoid_finite(" + std::to_string(n) + ") meets B");
    }
    // (c)
    for (std::uint64_t e = 0; e < 40; ++e)
        for (std::uint64_t n = 0; n < 3; ++n) {
            int count = 0;
            for (std::uint64_t z = 0; z < 2048; ++z)
                count += T(e, n, z);
            require(count <= 1, "two traces for e=" + std::to_string(e) + " n=" + std::to_string(n));
        }
    // (d) sum 2^(L - len) <= 2^L - 2^(L - |D'|) in integers.
    std::size_t measures = 0;
    for (const auto& m : rep.measures) {
        std::size_t L = m.subset.size();
        for (const auto& s : m.subset) {
            require(bar_D(s), s.str() + " is not in D");
            L = std::max(L, s.size());
        }
        oracle::Big lhs = 0;
        for (const auto& s : m.subset)
            lhs += oracle::Big(1) << (L - s.size());
        const oracle::Big rhs = (oracle::Big(1) << L) - (oracle::Big(1) << (L - m.subset.size()));
        require(lhs <= rhs && m.holds, "measure bound fails");
        ++measures;
    }
    require(measures >= 5, "only " + std::to_string(measures) + " measure checks");
    return std::to_string(hits) + " catalog hits, avoidance to 32, T unique, " + std::to_string(measures) +
           " measure bounds";
}

std::string bar_converters()
{
    const auto bars = oracle::minimal_bars(4);
    require(bars.size() == 677, "expected 677 minimal bars, got " + std::to_string(bars.size()));
    const auto f = fans::cantor(5);
    const auto leaves = oracle::binary_level(4);
    for (const auto& raw : bars) {
        const auto bar = fs_all(raw);
        const SeqPredicate X = finite_set_predicate(std::set<FinSeq>(bar.begin(), bar.end()));
        const SeqPredicate beta = enum_bar_to_dec_bar(finite_enumeration(bar));
        const PartialNFun phi = first_hit_fn(X, f);
        const std::size_t L = std::max<std::size_t>(bar.size(), 4) + 1;
        for (const auto& leaf : leaves) {
            std::optional<std::size_t> n;
            for (std::size_t k = 0; k <= leaf.size() && !n; ++k)
                if (std::find(raw.begin(), raw.end(), oracle::Seq(leaf.begin(), leaf.begin() + long(k))) != raw.end())
                    n = k;
            require(n.has_value(), "oracle bar misses a leaf");
            const SeqOracle alpha = oracles::table(fs(leaf).items(), 0);
            bool hit = false;
            for (std::size_t m = 0; m <= L && !hit; ++m)
                hit = beta(oracle_seq(alpha, m));
            require(hit, "enum_bar_to_dec_bar misses " + fs(leaf).str());
            const Nat code = encode(fs(leaf).prefix(*n)).value;
            require(bounded_subbar_member(X, OraclePrefixView{alpha, code}), "bounded_subbar misses " + fs(leaf).str());
            const auto r = apply_n(phi, alpha, 64);
            require(r.value && *r.value == Nat(*n), "first_hit_fn wrong on " + fs(leaf).str());
        }
    }
    return "677 bars x 16 leaves";
}

std::string dini()
{
    for (std::size_t n = 1; n <= 8; ++n) {
        const auto f = fans::cantor(n);
        const SeqPredicate B = [n](const FinSeq& s) { return s.size() == n; };
        const FunSequence phi = dini_build(B, f);
        const std::uint64_t budget = std::uint64_t{2} << n;
        bool positive_before = false;
        const auto level = f.level(n);
        for (const auto& leaf : level) {
            const SeqOracle alpha = oracles::from_prefix(leaf);
            require(*apply_n(phi(n), alpha, budget).value == 0, "phi^n nonzero at depth " + std::to_string(n));
            positive_before = positive_before || *apply_n(phi(n - 1), alpha, budget).value > 0;
        }
        require(positive_before, "phi^(n-1) vanishes at depth " + std::to_string(n));
    }
    const auto f = fans::cantor(6);
    const SeqPredicate D = [](const FinSeq& s) { return !s.empty() && kleene::bar_D(s); };
    const auto dc = dini_counterexample(D, f, 6);
    require(dc.witnesses.size() == 7, "expected witnesses for n = 0..6");
    for (std::size_t n = 0; n <= 6; ++n) {
        const auto r = apply_n(dc.phi(n), oracles::from_prefix(dc.witnesses[n]), 1u << 8);
        require(r.value && *r.value != 0, "no nonzero witness at " + std::to_string(n));
    }
    return "uniform bars n<=8, Kleene D witnesses n<=6";
}

std::string reals_suite()
{
    std::mt19937_64 rng(30);
    auto rq = [&] {
        return Q(static_cast<long long>(rng() % 101) - 50, 1 + static_cast<long long>(rng() % 20));
    };
    for (int i = 0; i < 500; ++i) {
        const Q a = rq(), b = rq(), c = rq();
        const Real x = real_from_rat(to_rat(a)), y = real_from_rat(to_rat(b)), z = real_from_rat(to_rat(c));
        require(within(x + y, to_rat(a + b), 30) && within(x - y, to_rat(a - b), 30) &&
                    within(x * y, to_rat(a * b), 30) && within((x + y) * z, to_rat((a + b) * c), 30),
                "arithmetic off at 2^-30");
    }
    const RealSeq lo([](std::uint64_t n) { return real_from_rat(make_rat(-1, Int(n + 1))); });
    const RealSeq hi([](std::uint64_t n) { return real_from_rat(make_rat(1, Int(n + 1))); });
    const Real x = cantor_intersection(lo, hi, [](std::uint64_t n) { return std::uint64_t{1} << (n + 1); });
    require(not_separated(real_compare(x, real_from_rat(0), 20)), "intersection separated from 0");
    for (int i = 0; i < 1000; ++i) {
        auto seg = [&] {
            Q p = rq(), q = rq();
            if (q < p)
                std::swap(p, q);
            return std::make_pair(p, q);
        };
        const auto [p, q] = seg();
        const auto [r, s] = seg();
        const Q t1(static_cast<long long>(rng() % 1001), 1000), t2(static_cast<long long>(rng() % 1001), 1000);
        const Q u = p + t1 * (q - p), v = r + t2 * (s - r);
        const Seg A(to_rat(p), to_rat(q)), B(to_rat(r), to_rat(s));
        require((A + B).contains_rat(to_rat(u + v)) && (A - B).contains_rat(to_rat(u - v)) &&
                    (A * B).contains_rat(to_rat(u * v)),
                "segment containment fails");
    }
    return "500 triples at 2^-30, intersection at 2^-20, 1000 containments";
}

std::string covering()
{
    const std::vector<Seg> pair{Seg(0, make_rat(3, 5)), Seg(make_rat(2, 5), 1)};
    const auto sub = finite_subcover_search(covers::finite(pair), 6);
    require(std::holds_alternative<Subcover>(sub) && std::get<Subcover>(sub).segs == pair, "subcover not found");
    const auto L = lebesgue_number(pair, 6);
    // Brute force on the 2^-(p+3) grid of the certified hull.
    const long long N = 1LL << (L.p + 3);
    std::vector<Q> pts;
    for (long long k = 0; k <= N; ++k)
        if (to_q(L.hull.lo) <= Q(k, N) && Q(k, N) <= to_q(L.hull.hi))
            pts.emplace_back(k, N);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i; j < pts.size() && pts[j] - pts[i] < Q(1, 1LL << L.p); ++j) {
            bool ok = false;
            for (const auto& t : pair)
                ok = ok || (to_q(t.lo) < pts[i] && pts[j] < to_q(t.hi));
            require(ok, "Lebesgue pair fails");
        }
    // sup of the two tents at 1/2.
    const Q want = std::max(std::min(Q(1, 2), Q(3, 5) - Q(1, 2)), std::min(Q(1, 2) - Q(2, 5), Q(1, 2)));
    const Real y = real_apply(envelope(covers::finite(pair)), real_from_rat(make_rat(1, 2)));
    require(want == Q(1, 10) && within(y, make_rat(1, 10), 15), "envelope at 1/2 is " + y.at(15).str());
    return "subcover at 2^-6, p = " + std::to_string(L.p) + ", envelope(1/2) in " + y.at(15).str();
}

std::string translation()
{
    const auto bars = oracle::minimal_bars(4);
    for (const auto& raw : bars) {
        const auto X = fs_all(raw);
        const auto Y = bar_to_special(X);
        require(special_validate(Y, 6).valid, "invalid special cover");
        require(special_to_bar(Y) == X, "round trip differs");
        for (std::size_t i = 0; i < raw.size(); ++i) {
            const auto [lo, hi] = oracle::bisect(raw[i]);
            require(to_q(Y[i].lo) == lo && to_q(Y[i].hi) == hi, "dyadic segment differs from bisection");
        }
    }
    std::mt19937_64 rng(20);
    int scenarios = 0;
    while (scenarios < 20) {
        std::vector<oracle::Seq> bar;
        std::function<void(const oracle::Seq&)> grow = [&](const oracle::Seq& s) {
            if (s.size() == 5 || rng() % 3 == 0) {
                bar.push_back(s);
                return;
            }
            for (std::uint64_t b : {0u, 1u}) {
                auto t = s;
                t.push_back(b);
                grow(t);
            }
        };
        grow({});
        if (bar.size() < 2)
            continue;
        std::vector<oracle::Seq> frag;
        const std::size_t drop = rng() % bar.size();
        for (std::size_t i = 0; i < bar.size(); ++i)
            if (i != drop && rng() % 4 != 0)
                frag.push_back(bar[i]);
        const auto Xf = fs_all(frag);
        const auto pf = positive_failure_witness(fans::cantor(5), std::set<FinSeq>(Xf.begin(), Xf.end()), 5);
        require(std::holds_alternative<FailureWitness>(pf), "no surviving prefix");
        const FinSeq prefix = std::get<FailureWitness>(pf).prefix;
        const auto Y = bar_to_special(Xf);
        const auto w = midpoint_witness(Y, prefix);
        oracle::Seq b;
        for (const auto& d : prefix)
            b.push_back(static_cast<std::uint64_t>(d));
        const auto [lo, hi] = oracle::bisect(b);
        const Q m = (lo + hi) / 2;
        require(to_q(w.value) == m, "midpoint differs");
        for (std::size_t i = 0; i < Y.size(); ++i) {
            const Seg a = w.x(w.apart_at[i]);
            require(m < to_q(Y[i].lo) || to_q(Y[i].hi) < m, "midpoint inside a removed element");
            require(to_q(a.hi) < to_q(Y[i].lo) || to_q(Y[i].hi) < to_q(a.lo), "apartness witness fails");
        }
        ++scenarios;
    }
    return "677 round trips, 20 midpoint scenarios";
}

std::string covering_maps()
{
    const auto f = fans::nary(3, 3);
    const auto cover = fan_to_cantor_cover(f);
    std::set<FinSeq> hit;
    for (const auto& b : binary_upto(12)) {
        if (std::count(b.begin(), b.end(), Nat(1)) > 4)
            continue;
        const FinSeq a = cover.image(b);
        require(f.spread().admissible(a), "cover leaves the fan at " + a.str());
        if (a.size() >= 3)
            hit.insert(a.prefix(3));
    }
    require(hit.size() == 27, "ternary cover hits " + std::to_string(hit.size()) + " of 27");

    const auto pc = perfect_spread_onto_cantor(spreads::baire(), splits::binary());
    const auto ternary = fans::nary(3, 5);
    std::set<FinSeq> zs;
    const auto level = ternary.level(5);
    for (const auto& s : level) {
        const FinSeq z = pc.zeta(s);
        require(z.is_binary() && z.size() == 5, "zeta leaves depth 5");
        zs.insert(z);
    }
    require(zs.size() == 32, "perfect cover attains " + std::to_string(zs.size()) + " of 32");

    const Spread one{[](const FinSeq& s) { return s.is_binary() && (s.empty() || s[0] == 1); }};
    const auto R = retraction(one, spreads::cantor());
    std::mt19937_64 rng(8);
    for (int i = 0; i < 50; ++i) {
        std::vector<Nat> bits;
        for (int j = 0; j < 40; ++j)
            bits.push_back(rng() & 1);
        const SeqOracle once = R.apply(oracles::table(bits, 0));
        const FinSeq a = oracle_seq(once, 30);
        require(a == oracle_seq(R.apply(once), 30) && one.admissible(a), "retraction not idempotent");
    }
    return "27 ternary prefixes, 32 binary prefixes, 50 idempotent paths";
}

std::string determinism()
{
    cli::RunConfig cfg;
    cfg.seed = 7;
    const std::string a = cli::cmd_kleene(cfg).report.dump(2), b = cli::cmd_kleene(cfg).report.dump(2);
    require(a == b, "reports differ");
    return std::to_string(a.size()) + " identical bytes";
}

} // namespace

int main()
{
    const std::pair<const char*, std::function<std::string()>> criteria[] = {
        {"coding", coding},       {"kleene", kleene_suite}, {"bar-converters", bar_converters},
        {"dini", dini},           {"reals", reals_suite},   {"covering", covering},
        {"translation", translation}, {"covering-maps", covering_maps}, {"determinism", determinism},
    };
    int failed = 0, index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        const auto t0 = std::chrono::steady_clock::now();
        std::string status = "PASS", detail;
        try {
            detail = run();
        } catch (const Failed& f) {
            status = "FAIL";
            detail = f.why;
        } catch (const std::exception& e) {
            status = "FAIL";
            detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += status == "FAIL";
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.2fs", secs);
        std::cout << status << " " << index << " " << name << ": " << detail << " (" << timing << ")" << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
