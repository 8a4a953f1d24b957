#pragma once

// Coverings of subsets of R by rational segments. "x is contained in s" is
// always strict: some approximation x(n) lies strictly inside s. Searches on
// [0,1] therefore walk interior dyadic grids: at resolution r the cells are
// [c - 2^-(r+1), c + 2^-(r+1)] for c = k/2^r, 0 < k < 2^r.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fanlab/realfun.hpp"
#include "fanlab/seqcode.hpp"

namespace fanlab {

// An enumeration of segments. `size` is set when the enumeration is known to
// be finite; `tail(m)` bounds the index beyond which every listed segment is
// narrower than 2^-m.
struct RealCover {
    Enumeration<Seg> segs;
    std::optional<std::uint64_t> size;
    std::function<std::uint64_t(std::uint64_t)> tail;
};

namespace covers {

inline RealCover finite(std::vector<Seg> xs)
{
    const std::uint64_t n = xs.size();
    auto data = std::make_shared<const std::vector<Seg>>(std::move(xs));
    return RealCover{Enumeration<Seg>([data](std::uint64_t i) -> std::optional<Seg> {
                         if (i >= data->size())
                             return std::nullopt;
                         return (*data)[i];
                     }),
                     n, nullptr};
}

inline RealCover enumerated(Enumeration<Seg> e) { return RealCover{std::move(e), std::nullopt, nullptr}; }

} // namespace covers

inline std::vector<Seg> collect_cover(const RealCover& C, std::uint64_t budget)
{
    std::vector<Seg> out;
    const std::uint64_t n = C.size ? std::min(*C.size, budget) : budget;
    for (std::uint64_t i = 0; i < n; ++i)
        if (auto s = C.segs(i))
            out.push_back(*s);
    return out;
}

// ---------------------------------------------------------------------------
// Coverage of sampled members.

struct CoverHit {
    std::uint64_t index; // segment index
    std::uint64_t n;     // x(n) is strictly inside the segment
};
struct CoverExhausted {};
using CoverOutcome = std::variant<CoverHit, CoverExhausted>;

struct CoverReport {
    std::vector<CoverOutcome> outcomes; // one per sampled member
    bool all_hit() const
    {
        return std::all_of(outcomes.begin(), outcomes.end(),
                           [](const CoverOutcome& o) { return std::holds_alternative<CoverHit>(o); });
    }
};

inline CoverReport cover_check(const CSReal& H, const RealCover& C, std::uint64_t samples, std::uint64_t precision,
                               std::uint64_t budget)
{
    const auto segs = collect_cover(C, budget);
    CoverReport rep;
    for (std::uint64_t m = 0; m < samples; ++m) {
        const Real x = H.member(m);
        const Seg fine = x(precision);
        CoverOutcome out = CoverExhausted{};
        for (std::uint64_t p = 0; p < segs.size(); ++p) {
            if (!strictly_inside(fine, segs[p]))
                continue;
            std::uint64_t n = 0;
            while (!strictly_inside(x(n), segs[p]))
                ++n;
            out = CoverHit{p, n};
            break;
        }
        rep.outcomes.push_back(out);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Finite subcovers of [0,1].

inline Seg grid_cell(unsigned r, std::uint64_t k)
{
    const Rat c = Rat(Int(k)) * pow2(-long(r));
    return Seg(c - pow2(-long(r) - 1), c + pow2(-long(r) - 1));
}

struct Subcover {
    std::vector<std::uint64_t> indices; // ascending
    std::vector<Seg> segs;
};
struct SurvivingCell {
    Rat point;
    Seg cell;
    bool refuted; // false when the search stopped at the budget of a possibly longer enumeration
};
using SubcoverResult = std::variant<Subcover, SurvivingCell>;

// Each interior grid cell is assigned the least-index segment strictly
// containing it. The first cell with no such segment is returned.
inline SubcoverResult finite_subcover_search(const RealCover& C, unsigned resolution, std::uint64_t budget = 4096)
{
    const auto segs = collect_cover(C, budget);
    const bool complete = C.size && *C.size <= budget;
    std::set<std::uint64_t> used;
    const std::uint64_t top = std::uint64_t{1} << resolution;
    for (std::uint64_t k = 1; k < top; ++k) {
        const Seg cell = grid_cell(resolution, k);
        bool hit = false;
        for (std::uint64_t p = 0; p < segs.size() && !hit; ++p)
            if (strictly_inside(cell, segs[p])) {
                used.insert(p);
                hit = true;
            }
        if (!hit)
            return SurvivingCell{cell.midpoint(), cell, complete};
    }
    Subcover out;
    for (auto p : used) {
        out.indices.push_back(p);
        out.segs.push_back(segs[p]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Lebesgue numbers.

struct LebesgueResult {
    unsigned p;
    std::vector<Seg> shrunk; // C': each element strictly inside an element of B
    Seg hull;                // the part of [0,1] certified by the grid
};

// B must finitely cover the interior grid at `resolution`. Elements of B are
// shrunk by 2^-j at both ends until the shrunken family still covers the grid;
// then any u of length < 2^-j touching a shrunken s lies inside its parent.
inline LebesgueResult lebesgue_number(const std::vector<Seg>& B, unsigned resolution, unsigned max_shrink = 64)
{
    const auto pre = finite_subcover_search(covers::finite(B), resolution, B.size());
    if (const auto* bad = std::get_if<SurvivingCell>(&pre))
        throw PreconditionError("cover does not strictly contain the grid cell " + bad->cell.str());
    const std::uint64_t top = std::uint64_t{1} << resolution;
    for (unsigned j = 0; j <= max_shrink; ++j) {
        const Rat eta = pow2(-long(j));
        std::vector<Seg> shrunk;
        for (const auto& t : B)
            if (t.hi - t.lo > 2 * eta)
                shrunk.emplace_back(t.lo + eta, t.hi - eta);
        bool ok = true;
        for (std::uint64_t k = 1; k < top && ok; ++k) {
            const Seg cell = grid_cell(resolution, k);
            ok = std::any_of(shrunk.begin(), shrunk.end(), [&](const Seg& s) { return strictly_inside(cell, s); });
        }
        if (ok)
            return LebesgueResult{j, shrunk, Seg(pow2(-long(resolution) - 1), 1 - pow2(-long(resolution) - 1))};
    }
    throw BudgetExhausted("lebesgue_number: no shrink up to 2^-" + std::to_string(max_shrink));
}

// Brute force over grid points k/2^(p+extra) in `hull`: every pair closer than
// 2^-p lies strictly inside a common element of B. Returns a failing pair.
inline std::optional<std::pair<Rat, Rat>> verify_lebesgue(const std::vector<Seg>& B, unsigned p, const Seg& hull,
                                                          unsigned extra = 3)
{
    const unsigned g = p + extra;
    const Rat step = pow2(-long(g));
    const Int first = ceil_rat(hull.lo / step), last = floor_rat(hull.hi / step);
    const Int window = Int(1) << extra; // pairs with |x - y| < 2^-p differ by fewer steps
    for (Int a = first; a <= last; ++a)
        for (Int b = a; b <= last && b - a < window; ++b) {
            const Rat x = Rat(a) * step, y = Rat(b) * step;
            const bool ok = std::any_of(B.begin(), B.end(),
                                        [&](const Seg& t) { return t.interior_rat(x) && t.interior_rat(y); });
            if (!ok)
                return std::make_pair(x, y);
        }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Refinement into narrow overlapping pieces.

namespace detail {

// Least N = 2^e >= 2 with 2 (q - p) / N < 2^-k.
inline std::uint64_t refine_parts(const Seg& s, std::uint64_t k)
{
    std::uint64_t N = 2;
    while (2 * s.length() / Rat(Int(N)) >= pow2(-long(k)))
        N *= 2;
    return N;
}

} // namespace detail

// gamma(J(k, i)) = <p_i, p_(i+2)> where p_i = p + i (q - p) / N splits
// beta(k) = <p, q>. Consecutive pieces overlap, so a point strictly inside
// beta(k) is strictly inside some piece. Pieces of block k are narrower than
// 2^-k. Degenerate segments contribute nothing.
inline RealCover refine_cover(const RealCover& beta)
{
    auto segs = beta.segs;
    Enumeration<Seg> gamma([segs](std::uint64_t idx) -> std::optional<Seg> {
        const auto [k, i] = unpair_index(idx);
        const auto b = segs(k);
        if (!b || b->length() == 0)
            return std::nullopt;
        const std::uint64_t N = detail::refine_parts(*b, k);
        if (i + 2 > N)
            return std::nullopt;
        const Rat h = b->length() / Rat(Int(N));
        return Seg(b->lo + Rat(Int(i)) * h, b->lo + Rat(Int(i + 2)) * h);
    });
    auto size = beta.size;
    auto tail = [segs, size](std::uint64_t m) {
        std::uint64_t t = 0;
        const std::uint64_t kmax = size ? std::min<std::uint64_t>(m, *size) : m;
        for (std::uint64_t k = 0; k < kmax; ++k)
            if (auto b = segs(k); b && b->length() > 0)
                t = std::max(t, pair_index(k, detail::refine_parts(*b, k) - 2));
        return t;
    };
    std::optional<std::uint64_t> gsize;
    if (size) {
        std::uint64_t t = 0;
        for (std::uint64_t k = 0; k < *size; ++k)
            if (auto b = segs(k); b && b->length() > 0)
                t = std::max(t, pair_index(k, detail::refine_parts(*b, k) - 2) + 1);
        gsize = t;
    }
    return RealCover{std::move(gamma), gsize, tail};
}

// ---------------------------------------------------------------------------
// Tents and envelopes.

// f_s(t) = max(0, min(t - p, q - t)).
inline Rat tent_value(const Seg& s, const Rat& t) { return std::max(Rat(0), std::min(Rat(t - s.lo), Rat(s.hi - t))); }

// Exact range of f_s over r. f_s is quasi-concave with its peak at the
// midpoint, so the minimum is at an endpoint of r.
inline Seg tent_range(const Seg& s, const Seg& r)
{
    const Rat lo = std::min(tent_value(s, r.lo), tent_value(s, r.hi));
    const Rat c = std::clamp(s.midpoint(), r.lo, r.hi);
    return Seg(lo, tent_value(s, c));
}

inline PartialRealFun tent(const Seg& s, std::optional<Seg> domain = std::nullopt)
{
    const Seg d = domain ? *domain : Seg(s.lo - s.length() - 1, s.hi + s.length() + 1);
    return PartialRealFun::grid(d, [s](const Seg& r) { return std::optional<Seg>(tent_range(s, r)); });
}

// f_gamma = sup over gamma of f_s. A finite gamma is used as listed; otherwise
// the tail schedule bounds the unlisted tents by 2^-(m+1).
inline PartialRealFun envelope(const RealCover& gamma, const Seg& domain = Seg(0, 1))
{
    if (!gamma.size && !gamma.tail)
        throw PreconditionError("envelope needs a finite cover or a tail schedule");
    return PartialRealFun::grid(domain, [gamma](const Seg& r) -> std::optional<Seg> {
        std::uint64_t count = 0;
        Rat tail_bound = 0;
        if (gamma.size) {
            count = *gamma.size;
        } else {
            std::uint64_t m = 0;
            while (pow2(-long(m) - 1) > r.length() && m < 120)
                ++m;
            count = gamma.tail(m) + 1;
            tail_bound = pow2(-long(m) - 1);
        }
        Rat lo = 0, hi = tail_bound;
        for (std::uint64_t i = 0; i < count; ++i)
            if (auto s = gamma.segs(i)) {
                const Seg t = tent_range(*s, r);
                lo = std::max(lo, t.lo);
                hi = std::max(hi, t.hi);
            }
        return Seg(lo, std::max(lo, hi));
    });
}

// ---------------------------------------------------------------------------
// Dyadic segments and special coverings.

// B(<>) = <0, 1>; each digit keeps the left (0) or right (1) half.
inline Seg dyadic_map(const FinSeq& b)
{
    if (!b.is_binary())
        throw InvalidInput("dyadic_map needs a binary sequence, got " + b.str());
    Rat lo = 0, w = 1;
    for (const auto& d : b) {
        w /= 2;
        if (d == 1)
            lo += w;
    }
    return Seg(lo, lo + w);
}

// Inverse of dyadic_map on segments [k/2^n, (k+1)/2^n] inside [0,1].
inline FinSeq dyadic_unmap(const Seg& s)
{
    const Rat w = s.length();
    if (w <= 0 || num(w) != 1 || !is_dyadic(w) || s.lo < 0 || s.hi > 1)
        throw InvalidInput("not a dyadic bisection segment: " + s.str());
    const Int N = den(w);
    const Rat kq = s.lo * Rat(N);
    if (den(kq) != 1)
        throw InvalidInput("not a dyadic bisection segment: " + s.str());
    Int k = num(kq);
    unsigned n = 0;
    while ((Int(1) << n) < N)
        ++n;
    std::vector<Nat> digits(n);
    for (unsigned i = 0; i < n; ++i)
        digits[n - 1 - i] = Nat(static_cast<unsigned>(bit_test(k, i) ? 1 : 0));
    return FinSeq(std::move(digits));
}

struct SpecialVerdict {
    bool valid = true;
    std::string reason;
};

inline std::vector<Seg> distinct_segs(const std::vector<Seg>& X)
{
    std::vector<Seg> out;
    for (const auto& s : X)
        if (std::none_of(out.begin(), out.end(), [&](const Seg& t) { return t.lo == s.lo && t.hi == s.hi; }))
            out.push_back(s);
    return out;
}

// Overlap law exact; interior coverage sampled at (k + 1/3)/2^r; dyadic grid
// points k/2^r either lie strictly inside an element or are endpoints of
// exactly two elements (one at 0 and 1).
inline SpecialVerdict special_validate(const std::vector<Seg>& Xin, unsigned resolution)
{
    const auto X = distinct_segs(Xin);
    for (const auto& s : X)
        if (!is_dyadic(s.lo) || !is_dyadic(s.hi) || s.length() <= 0)
            return {false, "element " + s.str() + " is not a proper dyadic segment"};
    for (std::size_t i = 0; i < X.size(); ++i)
        for (std::size_t j = i + 1; j < X.size(); ++j)
            if (!(X[i].hi <= X[j].lo || X[j].hi <= X[i].lo))
                return {false, "elements " + X[i].str() + " and " + X[j].str() + " overlap beyond an endpoint"};
    const std::uint64_t top = std::uint64_t{1} << resolution;
    const Rat step = pow2(-long(resolution));
    for (std::uint64_t k = 0; k < top; ++k) {
        const Rat x = (Rat(Int(k)) + Rat(1, 3)) * step;
        if (std::none_of(X.begin(), X.end(), [&](const Seg& s) { return s.interior_rat(x); }))
            return {false, "point " + rat_str(x) + " lies in no element"};
    }
    for (std::uint64_t k = 0; k <= top; ++k) {
        const Rat x = Rat(Int(k)) * step;
        if (std::any_of(X.begin(), X.end(), [&](const Seg& s) { return s.interior_rat(x); }))
            continue;
        const auto ends =
            std::count_if(X.begin(), X.end(), [&](const Seg& s) { return s.lo == x || s.hi == x; });
        const long want = (k == 0 || k == top) ? 1 : 2;
        if (ends != want)
            return {false, "dyadic point " + rat_str(x) + " is an endpoint of " + std::to_string(ends) +
                               " elements, expected " + std::to_string(want)};
    }
    return {};
}

// X together with <(p+q)/2, (q+r)/2> for every <p,q>, <q,r> in X.
inline std::vector<Seg> x_plus(const std::vector<Seg>& Xin)
{
    const auto X = distinct_segs(Xin);
    std::vector<Seg> out = X;
    for (const auto& s : X)
        for (const auto& t : X)
            if (s.hi == t.lo)
                out.emplace_back(s.midpoint(), t.midpoint());
    return out;
}

// Enumerable form: even indices list X, odd index 2 J(i,j) + 1 lists the
// bridge between X(i) and X(j) when they are adjacent.
inline RealCover x_plus(const RealCover& X)
{
    auto segs = X.segs;
    return covers::enumerated(Enumeration<Seg>([segs](std::uint64_t n) -> std::optional<Seg> {
        if (n % 2 == 0)
            return segs(n / 2);
        const auto [i, j] = unpair_index(n / 2);
        auto s = segs(i), t = segs(j);
        if (!s || !t || s->hi != t->lo)
            return std::nullopt;
        return Seg(s->midpoint(), t->midpoint());
    }));
}

// Minimal binary bar to its dyadic segments, order kept.
inline std::vector<Seg> bar_to_special(const std::vector<FinSeq>& X)
{
    for (std::size_t i = 0; i < X.size(); ++i)
        for (std::size_t j = 0; j < X.size(); ++j)
            if (i != j && X[i].is_initial_of(X[j]))
                throw PreconditionError("bar is not minimal: " + X[i].str() + " is an initial part of " + X[j].str());
    std::vector<Seg> out;
    out.reserve(X.size());
    for (const auto& s : X)
        out.push_back(dyadic_map(s));
    return out;
}

// The binary sequences s with B(s) in Y.
inline std::vector<FinSeq> special_to_bar(const std::vector<Seg>& Y)
{
    std::vector<FinSeq> out;
    out.reserve(Y.size());
    for (const auto& s : Y)
        out.push_back(dyadic_unmap(s));
    return out;
}

struct MidpointWitness {
    Rat value;
    Real x;
    std::vector<std::uint64_t> apart_at; // per element of Y: some n with x(n) apart from it
};

// The midpoint of B(prefix), with an apartness witness against each element.
inline MidpointWitness midpoint_witness(const std::vector<Seg>& Y, const FinSeq& prefix, std::uint64_t precision = 64)
{
    const Rat c = dyadic_map(prefix).midpoint();
    MidpointWitness w{c, real_from_rat(c), {}};
    for (const auto& s : Y) {
        std::optional<std::uint64_t> at;
        for (std::uint64_t n = 0; n <= precision && !at; ++n)
            if (apart_s(w.x(n), s))
                at = n;
        if (!at)
            throw WitnessViolation("midpoint " + rat_str(c) + " of " + prefix.str() + " is not apart from " + s.str());
        w.apart_at.push_back(*at);
    }
    return w;
}

// x |-> 1/phi(x), after checking phi(x) > 2^-m at the samples. Output
// segments straddling 0 are skipped as too coarse; a nonpositive one is a
// witness violation.
inline PartialRealFun reciprocal_demo(const PartialRealFun& phi, unsigned m, const std::vector<Rat>& samples,
                                      std::uint64_t precision = 40)
{
    const Real bound = real_from_rat(pow2(-long(m)));
    for (const auto& q : samples) {
        const auto c = real_compare(real_apply(phi, real_from_rat(q)), bound, precision);
        if (!is_greater(c))
            throw WitnessViolation("value at " + rat_str(q) + " is not shown to exceed 2^-" + std::to_string(m));
    }
    auto recip = [](const Seg& o) -> std::optional<Seg> {
        if (o.hi <= 0)
            throw WitnessViolation("nonpositive output segment " + o.str());
        if (o.lo <= 0)
            return std::nullopt;
        return recip_s(o);
    };
    if (phi.is_grid())
        return PartialRealFun::grid(phi.domain(), [phi, recip](const Seg& r) -> std::optional<Seg> {
            const auto o = phi.image(r);
            if (!o)
                return std::nullopt;
            return recip(*o);
        });
    std::vector<SegEntry> es;
    for (std::uint64_t p = 0; p < phi.list_size(); ++p)
        if (auto e = phi.entry(p))
            if (auto r = recip(e->out))
                es.push_back(SegEntry{e->in, *r});
    return PartialRealFun::list(std::move(es));
}

// ---------------------------------------------------------------------------
// Text format: one "[p, q]" per line.

inline std::vector<Seg> parse_special(const std::string& text)
{
    std::vector<Seg> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string::npos)
            end = text.size();
        std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        out.push_back(parse_seg(line));
    }
    return out;
}

inline std::string format_special(const std::vector<Seg>& X)
{
    std::string out;
    for (const auto& s : X)
        out += s.dyadic() + "\n";
    return out;
}

} // namespace fanlab
