#pragma once

// Composition, restriction and retraction of enumerable continuous functions,
// and the two covering maps between fans, perfect spreads and Cantor space.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <utility>
#include <variant>
#include <vector>

#include "fanlab/csets.hpp"
#include "fanlab/fungraph.hpp"

namespace fanlab {

// ---------------------------------------------------------------------------
// Composition

// gamma(m) lists the first pair <a, c>, by code, with a, c < m, such that for
// some i, j, b < m: inner(i) = <a, b> + 1, outer(j) = <b, c> + 1, and gamma has
// not listed it before m. Otherwise gamma(m) = 0.
inline SeqOracle comp_enum(const SeqOracle& outer, const SeqOracle& inner)
{
    struct State {
        std::mutex mu;
        std::vector<Nat> gamma;
        std::set<Nat> listed;
    };
    auto st = std::make_shared<State>();
    return SeqOracle([outer, inner, st](std::uint64_t m) -> Nat {
        std::lock_guard lock(st->mu);
        while (st->gamma.size() <= m) {
            const std::uint64_t k = st->gamma.size();
            const Nat bound = k;
            std::multimap<Nat, Nat> by_b; // b -> a
            for (std::uint64_t i = 0; i < k; ++i) {
                const Nat v = inner(i);
                if (v == 0)
                    continue;
                const Pair ab = unpair(v - 1);
                if (ab.left < bound && ab.right < bound)
                    by_b.emplace(ab.right, ab.left);
            }
            std::optional<Nat> best;
            for (std::uint64_t j = 0; j < k; ++j) {
                const Nat v = outer(j);
                if (v == 0)
                    continue;
                const Pair bc = unpair(v - 1);
                if (bc.right >= bound)
                    continue;
                auto [lo, hi] = by_b.equal_range(bc.left);
                for (auto it = lo; it != hi; ++it) {
                    const Nat code = pair(it->second, bc.right);
                    if (!st->listed.count(code) && (!best || code < *best))
                        best = code;
                }
            }
            if (best) {
                st->listed.insert(*best);
                st->gamma.push_back(*best + 1);
            } else
                st->gamma.push_back(0);
        }
        return st->gamma[m];
    });
}

// Comp[X, Y] on structured graphs, dovetailed over (entry of Y, entry of X).
inline PartialSeqFun compose(const PartialSeqFun& X, const PartialSeqFun& Y)
{
    return {Enumeration<SEntry>([X, Y](std::uint64_t k) -> std::optional<SEntry> {
        auto [i, j] = unpair_index(k);
        auto ab = Y.graph(i);
        if (!ab)
            return std::nullopt;
        auto bc = X.graph(j);
        if (!bc || bc->input != ab->output)
            return std::nullopt;
        return SEntry{ab->input, bc->output};
    })};
}

inline PartialNFun compose(const PartialNFun& X, const PartialSeqFun& Y)
{
    return {Enumeration<NEntry>([X, Y](std::uint64_t k) -> std::optional<NEntry> {
        auto [i, j] = unpair_index(k);
        auto ab = Y.graph(i);
        if (!ab)
            return std::nullopt;
        auto bc = X.graph(j);
        if (!bc || bc->input != ab->output)
            return std::nullopt;
        return NEntry{ab->input, bc->value};
    })};
}

// ---------------------------------------------------------------------------
// Restriction to a closed-and-separable set

// psi(J(m, n)) = <t, p> when phi(m) = <s, p>, the n-th frame item is t and s is
// an initial part of t. Values in N carry no length condition.
inline PartialNFun restrict_to_cs(const PartialNFun& phi, const Enumeration<FinSeq>& frame)
{
    return {Enumeration<NEntry>([phi, frame](std::uint64_t k) -> std::optional<NEntry> {
        auto [m, n] = unpair_index(k);
        auto e = phi.graph(m);
        if (!e)
            return std::nullopt;
        auto t = frame(n);
        if (!t || !e->input.is_initial_of(*t))
            return std::nullopt;
        return NEntry{*t, e->value};
    })};
}

// As above with the extra condition length(t) >= length(p).
inline PartialSeqFun restrict_to_cs(const PartialSeqFun& phi, const Enumeration<FinSeq>& frame)
{
    return {Enumeration<SEntry>([phi, frame](std::uint64_t k) -> std::optional<SEntry> {
        auto [m, n] = unpair_index(k);
        auto e = phi.graph(m);
        if (!e)
            return std::nullopt;
        auto t = frame(n);
        if (!t || !e->input.is_initial_of(*t) || t->size() < e->output.size())
            return std::nullopt;
        return SEntry{*t, e->output};
    })};
}

inline PartialNFun restrict_to_cs(const PartialNFun& phi, const CSSet& F) { return restrict_to_cs(phi, frame_enum(F)); }
inline PartialSeqFun restrict_to_cs(const PartialSeqFun& phi, const CSSet& F)
{
    return restrict_to_cs(phi, frame_enum(F));
}

// The two readings of "continuous function on F". For maps into N the set
// need only lie inside Dom(X); for maps into Baire space dom(X) must coincide
// with F. Both are checked on samples and a graph prefix only.
inline bool defined_on_samples(const PartialNFun& X, const std::vector<SeqOracle>& samples, std::uint64_t budget)
{
    return std::all_of(samples.begin(), samples.end(),
                       [&](const SeqOracle& a) { return !apply_n(X, a, budget).timed_out(); });
}

inline bool domain_coincides(const PartialSeqFun& X, const Spread& F, const std::vector<SeqOracle>& samples,
                             std::size_t depth, std::uint64_t budget)
{
    for (std::uint64_t p = 0; p < budget; ++p)
        if (auto e = X.graph(p); e && !F.admissible(e->input))
            return false;
    try {
        for (const auto& a : samples)
            oracle_seq(apply_seq(X, a, budget), depth);
    } catch (const BudgetExhausted&) {
        return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Retraction

// Frame inclusion F in G, checked on F-nodes with items below `width` up to
// `depth`. Returns an F-admissible node outside G, if any.
inline std::optional<FinSeq> check_inclusion(const Spread& F, const Spread& G, std::size_t depth, std::uint64_t width)
{
    std::vector<FinSeq> layer;
    if (F.admissible(FinSeq{}))
        layer.push_back(FinSeq{});
    for (std::size_t d = 0; d <= depth && !layer.empty(); ++d) {
        std::vector<FinSeq> next;
        for (const auto& s : layer) {
            if (!G.admissible(s))
                return s;
            if (d < depth)
                for (std::uint64_t i = 0; i < width; ++i)
                    if (FinSeq t = s.append(i); F.admissible(t))
                        next.push_back(std::move(t));
        }
        layer = std::move(next);
    }
    return std::nullopt;
}

// r(<>) = <>; r(b * <i>) = r(b) * <i> if F admits it, else r(b) * <i0> with i0
// least such that F admits it. R holds <s, r(s)> for G-admissible s.
class Retraction {
public:
    Retraction(Spread F, Spread G, Enumeration<FinSeq> g_frame, std::uint64_t search_width)
        : F_(std::move(F)), G_(std::move(G)), g_frame_(std::move(g_frame)), width_(search_width)
    {
    }

    FinSeq r(const FinSeq& b) const
    {
        if (!G_.admissible(b))
            throw PreconditionError("retraction applied outside G at " + b.str());
        FinSeq out;
        for (const Nat& i : b) {
            if (F_.admissible(out.append(i))) {
                out.push_back(i);
                continue;
            }
            bool found = false;
            for (std::uint64_t j = 0; j < width_ && !found; ++j)
                if (F_.admissible(out.append(j))) {
                    out.push_back(j);
                    found = true;
                }
            if (!found)
                throw FrameLawViolation("no admissible prolongation of " + out.str() + " below " +
                                        std::to_string(width_));
        }
        return out;
    }

    PartialSeqFun graph() const
    {
        auto self = *this;
        return {Enumeration<SEntry>([self](std::uint64_t m) -> std::optional<SEntry> {
            auto s = self.g_frame_(m);
            if (!s || !self.G_.admissible(*s))
                return std::nullopt;
            return SEntry{*s, self.r(*s)};
        })};
    }

    // R|alpha computed directly; index n reads alpha-bar(n+1).
    SeqOracle apply(const SeqOracle& alpha) const
    {
        auto self = *this;
        return SeqOracle([self, alpha](std::uint64_t n) { return self.r(oracle_seq(alpha, n + 1))[n]; });
    }

    const Spread& target() const { return F_; }
    const Spread& source() const { return G_; }

private:
    Spread F_;
    Spread G_;
    Enumeration<FinSeq> g_frame_;
    std::uint64_t width_;
};

// Checks F in G to (check_depth, search_width) before building.
inline Retraction retraction(const Spread& F, const Spread& G, const Enumeration<FinSeq>& g_frame,
                             std::uint64_t search_width = 64, std::size_t check_depth = 6)
{
    if (!F.admissible(FinSeq{}))
        throw FrameLawViolation("target spread is empty");
    if (auto bad = check_inclusion(F, G, check_depth, std::min<std::uint64_t>(search_width, 4)))
        throw FrameLawViolation("target frame is not inside the source frame at " + bad->str());
    return Retraction(F, G, g_frame, search_width);
}

inline Retraction retraction(const Spread& F, const Spread& G, std::uint64_t search_width = 64)
{
    return retraction(F, G, spread_enumeration(G), search_width);
}

// ---------------------------------------------------------------------------
// Cantor space covers a manifest fan

// X = { <D(a) * c, a> : a admissible in F, c binary }, and the retraction Y of
// Cantor space onto dom(X). The cover is Comp[X, Y].
class CantorCover {
public:
    explicit CantorCover(ManifestFan F) : F_(std::move(F)) {}

    // b contains a member of dom(X). All zeros: length(b) <= delta(0).
    // Otherwise b = D(a) * 0^k with a admissible and some admissible a * <i>,
    // k <= i <= delta(length(a)).
    bool dom_frame(const FinSeq& b) const
    {
        if (!b.is_binary())
            return false;
        std::size_t k = 0;
        while (k < b.size() && b[b.size() - 1 - k] == 0)
            ++k;
        if (k == b.size())
            return Nat(k) <= F_.delta(0);
        const FinSeq a = bin_decode_complete(b);
        if (!F_.spread().admissible(a))
            return false;
        const Nat top = F_.delta(a.size());
        for (Nat i = k; i <= top; ++i)
            if (F_.spread().admissible(a.append(i)))
                return true;
        return false;
    }

    Spread domain() const
    {
        auto self = *this;
        return {[self](const FinSeq& b) { return self.dom_frame(b); }};
    }

    // Entry J(m, q): the m-th level-order node a and the q-th binary string c.
    PartialSeqFun X() const
    {
        auto nodes = level_enumeration(F_);
        return {Enumeration<SEntry>([nodes](std::uint64_t k) -> std::optional<SEntry> {
            auto [m, q] = unpair_index(k);
            auto a = nodes(m);
            if (!a)
                return std::nullopt;
            return SEntry{concat(bin_encode(*a), binary_string(q)), *a};
        })};
    }

    Retraction Y() const
    {
        return Retraction(domain(), spreads::cantor(), level_enumeration(fans::cantor(0)), 2);
    }

    // Comp[X, Y] listed directly: <b, a> with r(b) = D(a) * 0^k.
    PartialSeqFun cover() const
    {
        auto y = Y();
        auto binary = level_enumeration(fans::cantor(0));
        return {Enumeration<SEntry>([y, binary](std::uint64_t m) -> std::optional<SEntry> {
            auto b = binary(m);
            if (!b)
                return std::nullopt;
            return SEntry{*b, bin_decode_complete(y.r(*b))};
        })};
    }

    // Image prefix of the finite binary input b.
    FinSeq image(const FinSeq& b) const { return bin_decode_complete(Y().r(b)); }

    // The image of alpha, lazily; index n reads alpha until n+1 items decode.
    SeqOracle apply(const SeqOracle& alpha, std::uint64_t input_budget) const
    {
        auto y = Y();
        return SeqOracle([y, alpha, input_budget](std::uint64_t n) {
            FinSeq b;
            for (std::uint64_t i = 0; i < input_budget; ++i) {
                b.push_back(alpha(i));
                if (alpha(i) == 1) {
                    FinSeq a = bin_decode_complete(y.r(b));
                    if (a.size() > n)
                        return a[n];
                }
            }
            throw BudgetExhausted("cantor cover: index " + std::to_string(n) + " not determined within " +
                                  std::to_string(input_budget) + " input digits");
        });
    }

    const ManifestFan& fan() const { return F_; }

    // q-th binary string in length-then-lexicographic order.
    static FinSeq binary_string(std::uint64_t q)
    {
        const std::uint64_t v = q + 1;
        unsigned len = 0;
        while ((v >> (len + 1)) != 0)
            ++len;
        FinSeq out;
        for (unsigned i = len; i-- > 0;)
            out.push_back((v >> i) & 1);
        return out;
    }

private:
    ManifestFan F_;
};

inline CantorCover fan_to_cantor_cover(const ManifestFan& F) { return CantorCover(F); }

// ---------------------------------------------------------------------------
// A perfect spread covers Cantor space

using SplitWitness = std::function<PerfectWitness(const FinSeq&)>;

namespace splits {

inline SplitWitness binary()
{
    return [](const FinSeq& s) { return PerfectWitness{s.append(0), s.append(1)}; };
}

// Splits found in the dense family of F; throws when none is found.
inline SplitWitness from_cs(const CSSet& F, std::uint64_t budget, std::size_t depth_cap = 32)
{
    return [F, budget, depth_cap](const FinSeq& s) {
        auto w = perfect_witness(F, s, budget, depth_cap);
        if (!w)
            throw WitnessViolation("no perfect split above " + s.str() + " within budget");
        return *w;
    };
}

} // namespace splits

// E: the tree generated from <> by gamma and delta. zeta(gamma(p)) =
// zeta(p) * <0>, zeta(delta(p)) = zeta(p) * <1>; a node strictly between E
// nodes keeps the value of its last E ancestor; a node off the tree gets
// zeta(q) * <0>, q its immediate shortening.
class PerfectCover {
public:
    PerfectCover(Spread F, SplitWitness split, std::size_t depth_cap)
        : st_(std::make_shared<State>(std::move(F), std::move(split), depth_cap))
    {
        if (!st_->F.admissible(FinSeq{}))
            throw PreconditionError("perfect cover needs an inhabited spread");
    }

    FinSeq zeta(const FinSeq& s) const
    {
        if (!st_->F.admissible(s))
            throw PreconditionError("zeta applied to non-admissible " + s.str());
        FinSeq e, z;
        for (std::size_t step = 0;; ++step) {
            if (step > st_->depth_cap)
                throw BudgetExhausted("perfect cover: split tree deeper than " + std::to_string(st_->depth_cap));
            const PerfectWitness w = split(e);
            if (w.t.is_initial_of(s)) {
                e = w.t;
                z.push_back(0);
                continue;
            }
            if (w.u.is_initial_of(s)) {
                e = w.u;
                z.push_back(1);
                continue;
            }
            if (s.is_initial_of(w.t) || s.is_initial_of(w.u))
                return z;
            // s leaves the tree at the first j > length(e) where s-bar(j) is
            // below neither split.
            std::size_t j = e.size() + 1;
            while (s.prefix(j).is_initial_of(w.t) || s.prefix(j).is_initial_of(w.u))
                ++j;
            for (std::size_t i = j; i <= s.size(); ++i)
                z.push_back(0);
            return z;
        }
    }

    // Is s in E?
    bool in_tree(const FinSeq& s) const
    {
        FinSeq e;
        while (e.size() < s.size()) {
            const PerfectWitness w = split(e);
            if (w.t.is_initial_of(s))
                e = w.t;
            else if (w.u.is_initial_of(s))
                e = w.u;
            else
                return false;
        }
        return e == s;
    }

    PartialSeqFun graph(const Enumeration<FinSeq>& frame) const
    {
        auto self = *this;
        return {Enumeration<SEntry>([self, frame](std::uint64_t m) -> std::optional<SEntry> {
            auto s = frame(m);
            if (!s || !self.st_->F.admissible(*s))
                return std::nullopt;
            return SEntry{*s, self.zeta(*s)};
        })};
    }

    // Index n reads alpha until zeta outgrows n; zeta grows by at least one
    // item per input item off the split tree and per split inside it.
    SeqOracle apply(const SeqOracle& alpha, std::uint64_t input_budget) const
    {
        auto self = *this;
        return SeqOracle([self, alpha, input_budget](std::uint64_t n) {
            for (std::uint64_t len = n + 1; len <= input_budget; ++len) {
                FinSeq z = self.zeta(oracle_seq(alpha, len));
                if (z.size() > n)
                    return z[n];
            }
            throw BudgetExhausted("perfect cover: index " + std::to_string(n) + " not determined");
        });
    }

private:
    struct State {
        State(Spread f, SplitWitness s, std::size_t cap) : F(std::move(f)), split(std::move(s)), depth_cap(cap) {}
        Spread F;
        SplitWitness split;
        std::size_t depth_cap;
        std::mutex mu;
        std::map<FinSeq, PerfectWitness> memo;
    };

    PerfectWitness split(const FinSeq& e) const
    {
        {
            std::lock_guard lock(st_->mu);
            if (auto it = st_->memo.find(e); it != st_->memo.end())
                return it->second;
        }
        PerfectWitness w = st_->split(e);
        if (!(e.size() < w.t.size() && e.is_initial_of(w.t)) || !(e.size() < w.u.size() && e.is_initial_of(w.u)))
            throw WitnessViolation("split of " + e.str() + " is not a pair of proper prolongations");
        if (!incompatible(w.t, w.u))
            throw WitnessViolation("split of " + e.str() + " is not incompatible");
        if (!st_->F.admissible(w.t) || !st_->F.admissible(w.u))
            throw WitnessViolation("split of " + e.str() + " leaves the spread");
        std::lock_guard lock(st_->mu);
        return st_->memo.emplace(e, std::move(w)).first->second;
    }

    std::shared_ptr<State> st_;
};

inline PerfectCover perfect_spread_onto_cantor(const Spread& F, const SplitWitness& split, std::size_t depth_cap = 64)
{
    PerfectCover pc(F, split, depth_cap);
    pc.zeta(FinSeq{}); // validates the first split
    return pc;
}

// ---------------------------------------------------------------------------
// Modulus of uniform continuity

struct Modulus {
    std::size_t n;     // equal length-n prefixes give equal values
    std::size_t depth; // every node at this level carries a graph entry
};
struct UCViolation {
    FinSeq a, b; // incompatible entry inputs agreeing below the cap
    Nat value_a, value_b;
};
struct Undetermined {};
using UCResult = std::variant<Modulus, UCViolation, Undetermined>;

// Reads the first `budget` graph entries with admissible inputs. If they bar
// some level D <= depth_cap, the least modulus is read off level D. Otherwise a
// pair of entries with different values agreeing on their first depth_cap
// items is sought.
inline UCResult uc_modulus_search(const PartialNFun& X, const ManifestFan& F, std::size_t depth_cap,
                                  std::uint64_t budget)
{
    std::vector<NEntry> es;
    for (std::uint64_t p = 0; p < budget; ++p)
        if (auto e = X.graph(p); e && F.spread().admissible(e->input))
            es.push_back(*e);

    auto value_at = [&](const FinSeq& s) -> std::optional<Nat> {
        for (const auto& e : es)
            if (e.input.is_initial_of(s))
                return e.value;
        return std::nullopt;
    };

    for (std::size_t D = 0; D <= depth_cap; ++D) {
        const auto& lv = F.level(D);
        std::vector<Nat> vals;
        bool covered = true;
        for (const auto& s : lv) {
            auto v = value_at(s);
            if (!v) {
                covered = false;
                break;
            }
            vals.push_back(*v);
        }
        if (!covered)
            continue;
        for (std::size_t n = 0; n <= D; ++n) {
            std::map<FinSeq, Nat> seen;
            bool ok = true;
            for (std::size_t i = 0; i < lv.size() && ok; ++i) {
                auto [it, fresh] = seen.emplace(lv[i].prefix(n), vals[i]);
                ok = fresh || it->second == vals[i];
            }
            if (ok)
                return Modulus{n, D};
        }
    }

    for (std::size_t i = 0; i < es.size(); ++i)
        for (std::size_t j = i + 1; j < es.size(); ++j) {
            const auto& a = es[i];
            const auto& b = es[j];
            if (a.value == b.value || !incompatible(a.input, b.input))
                continue;
            std::size_t d = 0;
            while (a.input[d] == b.input[d])
                ++d;
            if (d >= depth_cap)
                return UCViolation{a.input, b.input, a.value, b.value};
        }
    return Undetermined{};
}

} // namespace fanlab
