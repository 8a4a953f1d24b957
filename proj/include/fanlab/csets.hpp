#pragma once

// Closed-and-separable subsets of Baire space, spreads and fans, bar checks,
// and the proof constructions converting between bar formats.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fanlab/fungraph.hpp"
#include "fanlab/streams.hpp"

namespace fanlab {

// ---------------------------------------------------------------------------
// Spreads and fans

struct Spread {
    SeqPredicate frame;
    bool admissible(const FinSeq& s) const { return frame(s); }
};

namespace spreads {

inline Spread baire() { return {[](const FinSeq&) { return true; }}; }

// Sequences with every item below k.
inline Spread nary(std::uint64_t k)
{
    return {[k](const FinSeq& s) {
        return std::all_of(s.begin(), s.end(), [k](const Nat& v) { return v < k; });
    }};
}

inline Spread cantor() { return nary(2); }

// Prefixes of a single point.
inline Spread singleton(SeqOracle alpha)
{
    return {[alpha](const FinSeq& s) { return passes_through(alpha, s); }};
}

} // namespace spreads

// Frame law at s: s admissible iff some s*<i>, i < width, is admissible.
// Returns the first violating sequence among admissible prefixes up to depth.
inline std::optional<FinSeq> check_frame_law(const Spread& sp, std::size_t depth, std::uint64_t width)
{
    std::vector<FinSeq> level{FinSeq{}};
    if (!sp.admissible(FinSeq{}))
        return FinSeq{};
    for (std::size_t d = 0; d < depth; ++d) {
        std::vector<FinSeq> next;
        for (const auto& s : level) {
            bool any = false;
            for (std::uint64_t i = 0; i < width; ++i) {
                FinSeq t = s.append(i);
                if (sp.admissible(t)) {
                    any = true;
                    next.push_back(std::move(t));
                }
            }
            if (!any)
                return s;
        }
        level = std::move(next);
    }
    return std::nullopt;
}

// A spread whose admissible immediate prolongations all have values < width.
struct Fan {
    Spread spread;
    std::uint64_t width;
};

// A fan together with its explicit level enumeration.
class ManifestFan {
public:
    ManifestFan(Fan fan, std::size_t max_level_size)
        : state_(std::make_shared<State>(std::move(fan), max_level_size))
    {
    }

    const Fan& fan() const { return state_->fan; }
    const Spread& spread() const { return state_->fan.spread; }

    // All admissible sequences of length n, in lexicographic order.
    const std::vector<FinSeq>& level(std::size_t n) const
    {
        std::lock_guard lock(state_->mu);
        auto& levels = state_->levels;
        while (levels.size() <= n) {
            const auto& prev = levels.back();
            std::vector<FinSeq> next;
            for (const auto& s : prev)
                for (std::uint64_t i = 0; i < state_->fan.width; ++i) {
                    FinSeq t = s.append(i);
                    if (state_->fan.spread.admissible(t))
                        next.push_back(std::move(t));
                }
            if (next.size() > state_->max_level_size)
                throw BudgetExhausted("fan level " + std::to_string(levels.size()) + " exceeds " +
                                      std::to_string(state_->max_level_size) + " nodes");
            levels.push_back(std::move(next));
        }
        return levels[n];
    }

    // delta(n): the largest value s(n) over admissible s of length n+1.
    Nat delta(std::size_t n) const
    {
        Nat best = 0;
        for (const auto& s : level(n + 1))
            best = std::max(best, s[n]);
        return best;
    }

    // Admissible immediate prolongations of s.
    std::vector<FinSeq> children(const FinSeq& s) const
    {
        std::vector<FinSeq> out;
        for (std::uint64_t i = 0; i < state_->fan.width; ++i) {
            FinSeq t = s.append(i);
            if (state_->fan.spread.admissible(t))
                out.push_back(std::move(t));
        }
        return out;
    }

private:
    struct State {
        State(Fan f, std::size_t cap) : fan(std::move(f)), max_level_size(cap)
        {
            if (fan.spread.admissible(FinSeq{}))
                levels.push_back({FinSeq{}});
            else
                levels.push_back({});
        }
        Fan fan;
        std::size_t max_level_size;
        std::mutex mu;
        std::vector<std::vector<FinSeq>> levels;
    };
    std::shared_ptr<State> state_;
};

// Manifests a fan to the given depth. The declared width must not exceed
// width_bound, every admissible node must have a prolongation, and no value
// at or beyond the declared width may be admissible (spot-checked up to
// width_bound).
inline ManifestFan fan_manifest(const Fan& fan, std::uint64_t width_bound, std::size_t depth,
                                std::size_t max_level_size = 1u << 20)
{
    if (fan.width > width_bound)
        throw BudgetExhausted("fan width " + std::to_string(fan.width) + " exceeds bound " + std::to_string(width_bound));
    if (!fan.spread.admissible(FinSeq{}))
        throw PreconditionError("fan has no inhabitant");
    ManifestFan mf(fan, max_level_size);
    for (std::size_t n = 0; n < depth; ++n) {
        for (const auto& s : mf.level(n)) {
            if (mf.children(s).empty())
                throw FrameLawViolation("admissible node " + s.str() + " has no admissible prolongation");
            for (std::uint64_t i = fan.width; i < width_bound; ++i)
                if (fan.spread.admissible(s.append(i)))
                    throw BudgetExhausted("node " + s.str() + " has a prolongation beyond the declared width");
        }
    }
    mf.level(depth);
    return mf;
}

namespace fans {

inline ManifestFan cantor(std::size_t depth = 8) { return fan_manifest({spreads::cantor(), 2}, 2, depth); }
inline ManifestFan nary(std::uint64_t k, std::size_t depth = 4) { return fan_manifest({spreads::nary(k), k}, k, depth); }

} // namespace fans

// Levels of a manifest fan concatenated: a frame enumeration in level order.
inline Enumeration<FinSeq> level_enumeration(const ManifestFan& mf)
{
    return Enumeration<FinSeq>([mf](std::uint64_t m) -> std::optional<FinSeq> {
        std::uint64_t base = 0;
        for (std::size_t n = 0;; ++n) {
            const auto& lv = mf.level(n);
            if (lv.empty())
                return std::nullopt;
            if (m < base + lv.size())
                return lv[m - base];
            base += lv.size();
        }
    });
}

// A bijection N -> finite sequences ordered by weight length + sum of items.
// Index 0 is <>; weight w >= 1 occupies [2^(w-1), 2^w), and the w-1 bits of
// the offset mark the cuts of w into positive parts (item + 1).
inline FinSeq weighted_sequence(std::uint64_t m)
{
    if (m == 0)
        return {};
    unsigned w = 0;
    while (w < 63 && (std::uint64_t{1} << w) <= m)
        ++w;
    const std::uint64_t offset = m - (std::uint64_t{1} << (w - 1));
    FinSeq out;
    std::uint64_t part = 1;
    for (unsigned bit = 0; bit + 1 < w; ++bit) {
        if ((offset >> (w - 2 - bit)) & 1) {
            out.push_back(part - 1);
            part = 1;
        } else
            ++part;
    }
    out.push_back(part - 1);
    return out;
}

// Frame enumeration of an arbitrary spread in weight order.
inline Enumeration<FinSeq> spread_enumeration(const Spread& sp)
{
    return Enumeration<FinSeq>([sp](std::uint64_t m) -> std::optional<FinSeq> {
        FinSeq s = weighted_sequence(m);
        if (sp.admissible(s))
            return s;
        return std::nullopt;
    });
}

// ---------------------------------------------------------------------------
// Closed-and-separable sets

// CS_alpha: the closure of the dense family alpha^0, alpha^1, ...
class CSSet {
public:
    explicit CSSet(SeqOracle gen) : gen_(std::move(gen)) {}
    const SeqOracle& gen() const { return gen_; }
    SeqOracle member(std::uint64_t m) const { return project(gen_, m); }

private:
    SeqOracle gen_;
};

// beta(J(m,n)) = alpha^m-bar(n).
inline Enumeration<FinSeq> frame_enum(const CSSet& F)
{
    return Enumeration<FinSeq>([F](std::uint64_t k) -> std::optional<FinSeq> {
        auto [m, n] = unpair_index(k);
        return oracle_seq(F.member(m), n);
    });
}

inline EnumerableSet frame_enum_codes(const CSSet& F) { return as_code_enumeration(frame_enum(F)); }

using ChildFn = std::function<std::optional<FinSeq>(const FinSeq&)>;

// Builds alpha from a frame enumeration E: alpha^n passes through E(n) (or the
// first nonempty item when E(n) is empty) and then extends by the item of
// the least-index immediate prolongation in E. Searches are bounded by budget.
// `least_child`, when given, must return that prolongation without scanning E.
inline CSSet cs_from_frame(const Enumeration<FinSeq>& E, std::uint64_t budget, ChildFn least_child = {})
{
    struct State {
        Enumeration<FinSeq> E;
        std::uint64_t budget;
        std::uint64_t first_nonempty = 0;
        std::mutex mu;
        std::uint64_t scanned = 0;
        std::map<FinSeq, FinSeq> first_child; // parent -> least-index prolongation
        std::map<std::uint64_t, FinSeq> paths;
        ChildFn least_child;

        FinSeq child_of(const FinSeq& t)
        {
            if (least_child) {
                if (auto c = least_child(t))
                    return *c;
                throw FrameLawViolation("no immediate prolongation of " + t.str());
            }
            if (auto it = first_child.find(t); it != first_child.end())
                return it->second;
            while (scanned < budget) {
                auto s = E(scanned++);
                if (!s || s->empty())
                    continue;
                first_child.emplace(s->shortening(), *s);
                if (s->size() == t.size() + 1 && t.is_initial_of(*s))
                    return *s;
            }
            throw FrameLawViolation("no immediate prolongation of " + t.str() + " within " +
                                    std::to_string(budget) + " enumeration steps");
        }

        Nat at(std::uint64_t n, std::uint64_t m)
        {
            std::lock_guard lock(mu);
            auto it = paths.find(n);
            if (it == paths.end()) {
                auto s = E(n);
                it = paths.emplace(n, s ? *s : *E(first_nonempty)).first;
            }
            FinSeq& path = it->second;
            while (path.size() <= m)
                path = child_of(path);
            return path[m];
        }
    };
    auto st = std::make_shared<State>();
    st->E = E;
    st->budget = budget;
    st->least_child = std::move(least_child);
    bool found = false;
    for (std::uint64_t k = 0; k < budget && !found; ++k)
        if (E(k)) {
            st->first_nonempty = k;
            found = true;
        }
    if (!found)
        throw PreconditionError("frame enumeration has no inhabitant within " + std::to_string(budget) + " steps");
    return CSSet(SeqOracle([st](std::uint64_t k) {
        auto [n, m] = unpair_index(k);
        return st->at(n, m);
    }));
}

namespace csets {

// Levels are lexicographic, so the least-index prolongation is the first child.
inline CSSet from_manifest(const ManifestFan& mf, std::uint64_t budget = 1u << 22)
{
    return cs_from_frame(level_enumeration(mf), budget, [mf](const FinSeq& t) -> std::optional<FinSeq> {
        auto cs = mf.children(t);
        if (cs.empty())
            return std::nullopt;
        return cs.front();
    });
}

inline CSSet cantor() { return from_manifest(fans::cantor()); }

inline CSSet from_spread(const Spread& sp, std::uint64_t budget = 1u << 22)
{
    return cs_from_frame(spread_enumeration(sp), budget);
}

inline CSSet singleton(const SeqOracle& alpha)
{
    return CSSet(SeqOracle([alpha](std::uint64_t k) { return alpha(unpair_index(k).second); }));
}

} // namespace csets

// ---------------------------------------------------------------------------
// Bar checks

struct PathVerdict {
    std::uint64_t sample = 0;
    std::optional<std::size_t> hit_depth;
    std::optional<FinSeq> hit_prefix;
    bool hit() const { return hit_depth.has_value(); }
};

struct BarReport {
    std::vector<PathVerdict> paths;
    std::size_t hits = 0;
    std::size_t exhausted = 0;
    std::size_t max_hit_depth = 0;
    bool all_hit() const { return exhausted == 0; }
};

namespace detail {

inline void tally(BarReport& r, PathVerdict v)
{
    if (v.hit()) {
        ++r.hits;
        r.max_hit_depth = std::max(r.max_hit_depth, *v.hit_depth);
    } else
        ++r.exhausted;
    r.paths.push_back(std::move(v));
}

} // namespace detail

// Least n <= depth with alpha-bar(n) in B, per sample path.
inline BarReport bar_check(const std::vector<SeqOracle>& samples, const SeqPredicate& B, std::size_t depth)
{
    BarReport r;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        PathVerdict v{i, std::nullopt, std::nullopt};
        FinSeq s;
        for (std::size_t n = 0; n <= depth; ++n) {
            if (n > 0)
                s.push_back(samples[i](n - 1));
            if (B(s)) {
                v.hit_depth = n;
                v.hit_prefix = s;
                break;
            }
        }
        detail::tally(r, std::move(v));
    }
    return r;
}

// Enumerable bar: membership semi-decided within the first `budget` items.
inline BarReport bar_check(const std::vector<SeqOracle>& samples, const Enumeration<FinSeq>& B, std::size_t depth,
                           std::uint64_t budget)
{
    const auto items = collect(B, budget);
    const std::set<FinSeq> known(items.begin(), items.end());
    return bar_check(samples, finite_set_predicate(known), depth);
}

inline std::vector<SeqOracle> dense_samples(const CSSet& F, std::size_t count)
{
    std::vector<SeqOracle> out;
    for (std::size_t m = 0; m < count; ++m)
        out.push_back(F.member(m));
    return out;
}

inline BarReport bar_check(const CSSet& F, const SeqPredicate& B, std::size_t samples, std::size_t depth)
{
    return bar_check(dense_samples(F, samples), B, depth);
}

inline BarReport bar_check(const CSSet& F, const Enumeration<FinSeq>& B, std::size_t samples, std::size_t depth,
                           std::uint64_t budget)
{
    return bar_check(dense_samples(F, samples), B, depth, budget);
}

// ---------------------------------------------------------------------------
// Converters

// beta(s) = 1 iff gamma(j) = s-bar(k) for some j, k < length(s).
inline SeqPredicate enum_bar_to_dec_bar(const Enumeration<FinSeq>& gamma)
{
    return [gamma](const FinSeq& s) {
        for (std::uint64_t j = 0; j < s.size(); ++j) {
            auto t = gamma(j);
            if (t && t->size() < s.size() && t->is_initial_of(s))
                return true;
        }
        return false;
    };
}

// Which bound on i the bounded-subbar construction uses.
enum class SubbarBound {
    inclusive, // i <= length(s): keeps alpha-bar(n) in X iff alpha-bar(code) in Y
    printed,   // i < length(s) as printed; fails where code(s) = length(s)
};

// Read access to a possibly astronomically long sequence.
struct FinSeqView {
    const FinSeq& s;
    Nat length() const { return Nat(s.size()); }
    Nat at(std::size_t i) const { return s[i]; }
};

struct OraclePrefixView {
    SeqOracle alpha;
    Nat len;
    Nat length() const { return len; }
    Nat at(std::size_t i) const { return alpha(i); }
};

// s in Y iff some prefix s-bar(i) has code equal to length(s) and lies in X.
// Prefix codes strictly increase with i, so at most one i qualifies and the
// scan stops once the code passes length(s).
template <class View>
bool bounded_subbar_member(const SeqPredicate& X, const View& s, SubbarBound bound = SubbarBound::inclusive)
{
    const Nat len = s.length();
    FinSeq pre;
    for (std::size_t i = 0;; ++i) {
        const bool in_range = bound == SubbarBound::inclusive ? Nat(i) <= len : Nat(i) < len;
        if (!in_range)
            return false;
        const Nat code = encode(pre).value;
        if (code == len)
            return X(pre);
        if (code > len || Nat(i) == len)
            return false;
        pre.push_back(s.at(i));
    }
}

inline SeqPredicate bounded_subbar(const SeqPredicate& X, SubbarBound bound = SubbarBound::inclusive)
{
    return [X, bound](const FinSeq& s) { return bounded_subbar_member(X, FinSeqView{s}, bound); };
}

// Outcome of an exhaustive fan walk.
struct FiniteSubbar {
    std::vector<FinSeq> hits; // minimal hits, in walk order
};
struct SurvivingPrefix {
    FinSeq prefix;
};
using SubbarResult = std::variant<FiniteSubbar, SurvivingPrefix>;

// Walks the fan tree; stops descending at the first prefix in B.
inline SubbarResult finite_subbar_bruteforce(const ManifestFan& fan, const SeqPredicate& B, std::size_t depth_cap,
                                             std::size_t node_budget = 1u << 22)
{
    FiniteSubbar found;
    std::size_t visited = 0;
    std::vector<FinSeq> stack{FinSeq{}};
    while (!stack.empty()) {
        FinSeq s = std::move(stack.back());
        stack.pop_back();
        if (++visited > node_budget)
            throw BudgetExhausted("finite_subbar_bruteforce visited more than " + std::to_string(node_budget) + " nodes");
        if (B(s)) {
            found.hits.push_back(s);
            continue;
        }
        if (s.size() >= depth_cap)
            return SurvivingPrefix{s};
        auto kids = fan.children(s);
        for (auto it = kids.rbegin(); it != kids.rend(); ++it)
            stack.push_back(std::move(*it));
    }
    return found;
}

inline bool has_proper_prefix_in(const SeqPredicate& B, const FinSeq& s)
{
    for (std::size_t i = 0; i < s.size(); ++i)
        if (B(s.prefix(i)))
            return true;
    return false;
}

inline bool is_minimal_hit(const SeqPredicate& B, const FinSeq& s) { return B(s) && !has_proper_prefix_in(B, s); }

// phi enumerates <s, length(s)> for minimal s in B, over a frame enumeration.
inline PartialNFun first_hit_fn(const SeqPredicate& B, const Enumeration<FinSeq>& frame)
{
    return {Enumeration<NEntry>([B, frame](std::uint64_t k) -> std::optional<NEntry> {
        auto s = frame(k);
        if (!s || !is_minimal_hit(B, *s))
            return std::nullopt;
        return NEntry{*s, Nat(s->size())};
    })};
}

inline PartialNFun first_hit_fn(const SeqPredicate& B, const CSSet& F) { return first_hit_fn(B, frame_enum(F)); }
inline PartialNFun first_hit_fn(const SeqPredicate& B, const ManifestFan& F)
{
    return first_hit_fn(B, level_enumeration(F));
}

// phi^n enumerates <s, max(length(s) - n, 0)> for minimal s in B, so
// phi^n(alpha) = max(phi^0(alpha) - n, 0).
using FunSequence = std::function<PartialNFun(std::uint64_t)>;

inline FunSequence dini_build(const SeqPredicate& B, const Enumeration<FinSeq>& frame)
{
    return [B, frame](std::uint64_t n) {
        return PartialNFun{Enumeration<NEntry>([B, frame, n](std::uint64_t k) -> std::optional<NEntry> {
            auto s = frame(k);
            if (!s || !is_minimal_hit(B, *s))
                return std::nullopt;
            const std::uint64_t len = s->size();
            return NEntry{*s, Nat(len > n ? len - n : 0)};
        })};
    };
}

inline FunSequence dini_build(const SeqPredicate& B, const CSSet& F) { return dini_build(B, frame_enum(F)); }
inline FunSequence dini_build(const SeqPredicate& B, const ManifestFan& F)
{
    return dini_build(B, level_enumeration(F));
}

// phi^n enumerates <s, i> for s of length n admissible in F, with i = 0 iff
// some s-bar(j), j <= n, is in X. Positive failure of each length-<=n layer is
// checked up to check_depth: a level-n node with value 1 must exist.
struct DiniCounterexample {
    FunSequence phi;
    std::vector<FinSeq> witnesses; // witnesses[n]: a level-n node with phi^n = 1
};

inline DiniCounterexample dini_counterexample(const SeqPredicate& X, const ManifestFan& F, std::size_t check_depth)
{
    auto value = [X](const FinSeq& s) {
        for (std::size_t j = 0; j <= s.size(); ++j)
            if (X(s.prefix(j)))
                return 0;
        return 1;
    };
    DiniCounterexample out;
    for (std::size_t n = 0; n <= check_depth; ++n) {
        std::optional<FinSeq> w;
        for (const auto& s : F.level(n))
            if (value(s) == 1) {
                w = s;
                break;
            }
        if (!w)
            throw PreconditionError("the length-<=" + std::to_string(n) +
                                    " layer of X bars F; positive failure does not hold");
        out.witnesses.push_back(*w);
    }
    out.phi = [F, value](std::uint64_t n) {
        return PartialNFun{Enumeration<NEntry>([F, n, value](std::uint64_t k) -> std::optional<NEntry> {
            const auto& lv = F.level(n);
            if (k >= lv.size())
                return std::nullopt;
            return NEntry{lv[k], Nat(value(lv[k]))};
        })};
    };
    return out;
}

// A depth-length admissible prefix avoiding B_finite.
struct FailureWitness {
    FinSeq prefix;
};
struct AllBarred {};
struct UnknownWithinBudget {};
using PositiveFailure = std::variant<FailureWitness, AllBarred, UnknownWithinBudget>;

inline bool avoids(const std::set<FinSeq>& B, const FinSeq& s)
{
    for (std::size_t i = 0; i <= s.size(); ++i)
        if (B.count(s.prefix(i)))
            return false;
    return true;
}

// Exhaustive over the fan level.
inline PositiveFailure positive_failure_witness(const ManifestFan& F, const std::set<FinSeq>& B, std::size_t depth)
{
    for (const auto& s : F.level(depth))
        if (avoids(B, s))
            return FailureWitness{s};
    return AllBarred{};
}

// Searches the dense family; cannot conclude that everything is barred.
inline PositiveFailure positive_failure_witness(const CSSet& F, const std::set<FinSeq>& B, std::size_t depth,
                                                std::uint64_t budget)
{
    for (std::uint64_t m = 0; m < budget; ++m) {
        FinSeq s = oracle_seq(F.member(m), depth);
        if (avoids(B, s))
            return FailureWitness{s};
    }
    return UnknownWithinBudget{};
}

struct PerfectWitness {
    FinSeq t;
    FinSeq u;
};

// Two incompatible admissible proper extensions of s found among the first
// `budget` members of the dense family, compared up to depth_cap.
inline std::optional<PerfectWitness> perfect_witness(const CSSet& F, const FinSeq& s, std::uint64_t budget,
                                                     std::size_t depth_cap = 32)
{
    std::vector<FinSeq> through;
    const std::size_t len = std::max(depth_cap, s.size() + 1);
    for (std::uint64_t m = 0; m < budget; ++m) {
        FinSeq p = oracle_seq(F.member(m), len);
        if (!s.is_initial_of(p))
            continue;
        for (const auto& q : through) {
            std::size_t d = s.size();
            while (d < len && p[d] == q[d])
                ++d;
            if (d < len)
                return PerfectWitness{q.prefix(d + 1), p.prefix(d + 1)};
        }
        through.push_back(std::move(p));
    }
    return std::nullopt;
}

} // namespace fanlab
