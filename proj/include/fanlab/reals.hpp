#pragma once

// Rational segments and real numbers as strictly nested segment sequences
// carrying an explicit modulus: width(approx(modulus(n))) <= 2^-n.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fanlab/rat.hpp"
#include "fanlab/streams.hpp"

namespace fanlab {

// ---------------------------------------------------------------------------
// Segments

struct Seg {
    Rat lo = 0;
    Rat hi = 0;

    Seg() = default;
    Seg(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h))
    {
        if (hi < lo)
            throw InvalidInput("segment with lo > hi: [" + rat_str(lo) + ", " + rat_str(hi) + "]");
    }
    static Seg point(const Rat& q) { return {q, q}; }

    Rat length() const { return hi - lo; }
    Rat midpoint() const { return (lo + hi) / 2; }
    bool contains_rat(const Rat& q) const { return lo <= q && q <= hi; }
    bool interior_rat(const Rat& q) const { return lo < q && q < hi; }

    std::string str() const { return "[" + rat_str(lo) + ", " + rat_str(hi) + "]"; }
    std::string dyadic() const { return "[" + dyadic_str(lo) + ", " + dyadic_str(hi) + "]"; }

    friend bool operator==(const Seg&, const Seg&) = default;
};

// Accepts "[p, q]" with rationals in any parse_rat form.
inline Seg parse_seg(std::string_view text)
{
    std::string t(text);
    auto open = t.find('[');
    auto comma = t.find(',');
    auto close = t.find(']');
    if (open == std::string::npos || comma == std::string::npos || close == std::string::npos || !(open < comma) ||
        !(comma < close))
        throw InvalidInput("bad segment '" + t + "'");
    return Seg(parse_rat(t.substr(open + 1, comma - open - 1)), parse_rat(t.substr(comma + 1, close - comma - 1)));
}

inline Seg operator+(const Seg& a, const Seg& b) { return {a.lo + b.lo, a.hi + b.hi}; }

// <p, q> - <r, s> = <p - s, q - r>.
inline Seg operator-(const Seg& a, const Seg& b) { return {a.lo - b.hi, a.hi - b.lo}; }

inline Seg operator*(const Seg& a, const Seg& b)
{
    const Rat c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

inline Seg min_s(const Seg& a, const Seg& b)
{
    if (a.hi < b.lo)
        return a;
    if (b.hi < a.lo)
        return b;
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline Seg max_s(const Seg& a, const Seg& b)
{
    if (a.hi < b.lo)
        return b;
    if (b.hi < a.lo)
        return a;
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

// Same midpoint, twice the length.
inline Seg double_seg(const Seg& s)
{
    const Rat h = s.length() / 2;
    return {s.lo - h, s.hi + h};
}

inline Seg hull(const Seg& a, const Seg& b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

// Only for segments of positive numbers.
inline Seg recip_s(const Seg& s)
{
    if (s.lo <= 0)
        throw WitnessViolation("reciprocal of a segment reaching 0: " + s.str());
    return {1 / s.hi, 1 / s.lo};
}

inline bool lt_s(const Seg& a, const Seg& b) { return a.hi < b.lo; }
inline bool le_s(const Seg& a, const Seg& b) { return a.lo <= b.hi; }
inline bool apart_s(const Seg& a, const Seg& b) { return lt_s(a, b) || lt_s(b, a); }
inline bool touches_s(const Seg& a, const Seg& b) { return le_s(a, b) && le_s(b, a); }
inline bool strictly_inside(const Seg& a, const Seg& b) { return b.lo < a.lo && a.hi < b.hi; }
inline bool inside(const Seg& a, const Seg& b) { return b.lo <= a.lo && a.hi <= b.hi; }

struct SegRelation {
    bool lt, le, apart, touches, strictly_inside, inside;
};

inline SegRelation seg_relate(const Seg& a, const Seg& b)
{
    return {lt_s(a, b), le_s(a, b), apart_s(a, b), touches_s(a, b), strictly_inside(a, b), inside(a, b)};
}

// ---------------------------------------------------------------------------
// Reals

class Real {
public:
    Real() : Real(Oracle<Seg>([](std::uint64_t n) { return Seg(-pow2(-long(n)), pow2(-long(n))); }),
                  Oracle<std::uint64_t>([](std::uint64_t n) { return n + 1; }))
    {
    }
    Real(Oracle<Seg> approx, Oracle<std::uint64_t> modulus) : approx_(std::move(approx)), modulus_(std::move(modulus)) {}

    Seg operator()(std::uint64_t n) const { return approx_(n); }
    std::uint64_t modulus(std::uint64_t n) const { return modulus_(n); }
    // A segment of width at most 2^-n.
    Seg at(std::uint64_t n) const { return approx_(modulus_(n)); }

    const Oracle<Seg>& approx() const { return approx_; }

private:
    Oracle<Seg> approx_;
    Oracle<std::uint64_t> modulus_;
};

inline Real real_from_rat(const Rat& q)
{
    return Real(Oracle<Seg>([q](std::uint64_t n) { return Seg(q - pow2(-long(n)), q + pow2(-long(n))); }),
                Oracle<std::uint64_t>([](std::uint64_t n) { return n + 1; }));
}

namespace detail {

inline Real pointwise(const Real& x, const Real& y, Seg (*op)(const Seg&, const Seg&))
{
    return Real(Oracle<Seg>([x, y, op](std::uint64_t n) { return op(x(n), y(n)); }),
                Oracle<std::uint64_t>(
                    [x, y](std::uint64_t n) { return std::max(x.modulus(n + 1), y.modulus(n + 1)); }));
}

inline Seg add(const Seg& a, const Seg& b) { return a + b; }
inline Seg sub(const Seg& a, const Seg& b) { return a - b; }
inline Seg mul(const Seg& a, const Seg& b) { return a * b; }

// Least e >= 0 with |endpoint| <= 2^e for both endpoints of s.
inline std::uint64_t bound_exp(const Seg& s)
{
    const Rat m = std::max(abs_rat(s.lo), abs_rat(s.hi));
    std::uint64_t e = 0;
    while (pow2(long(e)) < m)
        ++e;
    return e;
}

} // namespace detail

inline Real operator+(const Real& x, const Real& y) { return detail::pointwise(x, y, detail::add); }
inline Real operator-(const Real& x, const Real& y) { return detail::pointwise(x, y, detail::sub); }
inline Real sup(const Real& x, const Real& y) { return detail::pointwise(x, y, max_s); }
inline Real inf(const Real& x, const Real& y) { return detail::pointwise(x, y, min_s); }

// width(x(k) * y(k)) <= wx * 2^by + wy * 2^bx, with bounds read off x(0), y(0).
inline Real operator*(const Real& x, const Real& y)
{
    const std::uint64_t bx = detail::bound_exp(x(0));
    const std::uint64_t by = detail::bound_exp(y(0));
    return Real(Oracle<Seg>([x, y](std::uint64_t n) { return x(n) * y(n); }),
                Oracle<std::uint64_t>([x, y, bx, by](std::uint64_t n) {
                    return std::max(x.modulus(n + 1 + by), y.modulus(n + 1 + bx));
                }));
}

// Indices 0..upto where approx(n+1) is not strictly inside approx(n), if any.
inline std::optional<std::uint64_t> check_nesting(const Real& x, std::uint64_t upto)
{
    for (std::uint64_t n = 0; n < upto; ++n)
        if (!strictly_inside(x(n + 1), x(n)))
            return n;
    return std::nullopt;
}

struct Less {
    std::uint64_t k;
};
struct Greater {
    std::uint64_t k;
};
struct NotSeparated {};
using Comparison = std::variant<Less, Greater, NotSeparated>;

// Searches indices up to max(modulus_x(n), modulus_y(n)).
inline Comparison real_compare(const Real& x, const Real& y, std::uint64_t n)
{
    const std::uint64_t top = std::max(x.modulus(n), y.modulus(n));
    for (std::uint64_t k = 0; k <= top; ++k) {
        const Seg a = x(k), b = y(k);
        if (lt_s(a, b))
            return Less{k};
        if (lt_s(b, a))
            return Greater{k};
    }
    return NotSeparated{};
}

inline bool is_less(const Comparison& c) { return std::holds_alternative<Less>(c); }
inline bool is_greater(const Comparison& c) { return std::holds_alternative<Greater>(c); }
inline bool not_separated(const Comparison& c) { return std::holds_alternative<NotSeparated>(c); }

// Refutes x <= y at indices up to k: some x(j) lies to the right of y(j).
inline std::optional<std::uint64_t> refute_le(const Real& x, const Real& y, std::uint64_t k)
{
    for (std::uint64_t j = 0; j <= k; ++j)
        if (!le_s(x(j), y(j)))
            return j;
    return std::nullopt;
}

// beta(m) = <alpha(gamma(m)) - 2^(1-m), alpha(gamma(m)) + 2^(1-m)>. The
// modulus is spot-checked for m <= check_m on `samples` later indices.
inline Real cauchy_to_real(std::function<Rat(std::uint64_t)> alpha, std::function<std::uint64_t(std::uint64_t)> gamma,
                           std::uint64_t check_m = 12, std::uint64_t samples = 16)
{
    for (std::uint64_t m = 0; m <= check_m; ++m) {
        const std::uint64_t g = gamma(m);
        const Rat a = alpha(g);
        for (std::uint64_t p = g + 1; p <= g + samples; ++p)
            if (abs_rat(a - alpha(p)) > pow2(-long(m)))
                throw WitnessViolation("Cauchy modulus fails at m = " + std::to_string(m) + ", p = " +
                                       std::to_string(p));
    }
    return Real(Oracle<Seg>([alpha, gamma](std::uint64_t m) {
                    const Rat a = alpha(gamma(m));
                    const Rat r = pow2(1 - long(m));
                    return Seg(a - r, a + r);
                }),
                Oracle<std::uint64_t>([](std::uint64_t n) { return n + 2; }));
}

// A sequence of reals; Oracle memoizes each member.
using RealSeq = Oracle<Real>;

// x(n) = [a^p(k).lo - 2^-n, b^p(k).hi + 2^-n] with p = wm(n+3) and k read at
// precision n+4, where wm(n) gives p with b^p - a^p <= 2^-n. The monotonicity
// hypotheses are spot-checked on the first `check_count` indices.
inline Real cantor_intersection(const RealSeq& a, const RealSeq& b, std::function<std::uint64_t(std::uint64_t)> wm,
                                std::uint64_t check_count = 8, std::uint64_t check_precision = 12)
{
    for (std::uint64_t n = 0; n < check_count; ++n) {
        const Real an = a(n), an1 = a(n + 1), bn = b(n), bn1 = b(n + 1);
        const std::uint64_t k = check_precision + 8;
        if (refute_le(an, an1, k) || refute_le(an1, bn1, k) || refute_le(bn1, bn, k))
            throw PreconditionError("segment sequence is not nested at n = " + std::to_string(n));
    }
    for (std::uint64_t n = 0; n < check_count; ++n) {
        const std::uint64_t p = wm(n);
        const Real w = b(p) - a(p);
        if (refute_le(w, real_from_rat(pow2(-long(n))), check_precision + 8))
            throw PreconditionError("width modulus fails at n = " + std::to_string(n));
    }
    return Real(Oracle<Seg>([a, b, wm](std::uint64_t n) {
                    const std::uint64_t p = wm(n + 3);
                    const Real ap = a(p), bp = b(p);
                    const Seg sa = ap.at(n + 4), sb = bp.at(n + 4);
                    const Rat e = pow2(-long(n));
                    return Seg(sa.lo - e, std::max(sb.hi, sa.lo) + e);
                }),
                Oracle<std::uint64_t>([](std::uint64_t n) { return n + 2; }));
}

// ---------------------------------------------------------------------------
// Closed-and-separable subsets of R

// H_alpha: reals whose every approximation contains some generator.
class CSReal {
public:
    explicit CSReal(RealSeq gen) : gen_(std::move(gen)) {}
    Real member(std::uint64_t m) const { return gen_(m); }
    const RealSeq& gen() const { return gen_; }

private:
    RealSeq gen_;
};

namespace csreals {

inline CSReal from_rats(std::vector<Rat> qs)
{
    if (qs.empty())
        throw PreconditionError("a closed-and-separable set needs a generator");
    return CSReal(RealSeq([qs = std::move(qs)](std::uint64_t m) { return real_from_rat(qs[m % qs.size()]); }));
}

// Dyadic rationals of [0,1], breadth first: 0, 1, 1/2, 1/4, 3/4, 1/8, ...
inline Rat dyadic_unit(std::uint64_t i)
{
    if (i < 2)
        return Rat(i);
    unsigned d = 0;
    while ((std::uint64_t{1} << (d + 1)) + 1 <= i)
        ++d;
    // level d+1 holds odd k / 2^(d+1), 2^d of them, starting at index 2^d + 1
    const std::uint64_t k = 2 * (i - ((std::uint64_t{1} << d) + 1)) + 1;
    return make_rat(Int(k), Int(1) << (d + 1));
}

inline CSReal unit_interval()
{
    return CSReal(RealSeq([](std::uint64_t m) { return real_from_rat(dyadic_unit(m)); }));
}

} // namespace csreals

// Some generator belongs to s: alpha^m(k) strictly inside s for m < budget,
// k <= precision.
inline std::optional<std::uint64_t> generator_in(const CSReal& H, const Seg& s, std::uint64_t budget,
                                                 std::uint64_t precision)
{
    for (std::uint64_t m = 0; m < budget; ++m) {
        const Real g = H.member(m);
        for (std::uint64_t k = 0; k <= precision; ++k)
            if (strictly_inside(g(k), s))
                return m;
    }
    return std::nullopt;
}

// Membership of x in H at precision n: a generator inside x(n).
inline std::optional<std::uint64_t> member_at(const CSReal& H, const Real& x, std::uint64_t n, std::uint64_t budget,
                                              std::uint64_t precision)
{
    return generator_in(H, x(n), budget, precision);
}

namespace detail {

// Zigzag integer then denominator: J(u, d) |-> z(u) / (d+1).
inline Rat rat_at(std::uint64_t i)
{
    auto [u, d] = unpair_index(i);
    const Int z = (u % 2 == 0) ? Int(u / 2) : Int(-Int((u + 1) / 2));
    return make_rat(z, Int(d + 1));
}

} // namespace detail

// Every rational segment: J(i, j) |-> <q_i, q_i + |q_j|>.
inline Seg seg_at(std::uint64_t c)
{
    auto [i, j] = unpair_index(c);
    const Rat p = detail::rat_at(i);
    return {p, p + abs_rat(detail::rat_at(j))};
}

// Frame of H: J(J(m, n), c) lists segment c when alpha^m(n) is strictly
// inside it.
inline Enumeration<Seg> real_frame_enum(const CSReal& H)
{
    return Enumeration<Seg>([H](std::uint64_t k) -> std::optional<Seg> {
        auto [mn, c] = unpair_index(k);
        auto [m, n] = unpair_index(mn);
        const Seg s = seg_at(c);
        if (strictly_inside(H.member(m)(n), s))
            return s;
        return std::nullopt;
    });
}

// H intersected with [x, y]: gamma^n = inf(y, sup(x, alpha^n)).
inline CSReal clamp_intersect(const CSReal& H, const Real& x, const Real& y)
{
    return CSReal(RealSeq([H, x, y](std::uint64_t n) { return inf(y, sup(x, H.member(n))); }));
}

// Total boundedness of a generator sequence, checked on samples.
struct TBPass {};
struct TBFail {
    std::uint64_t m;
    std::uint64_t i; // no j < delta(m) is within 2^-m of gamma^i
};
using TBVerdict = std::variant<TBPass, TBFail>;

// |x - y| < 2^-m witnessed at a finite precision.
inline bool close_within(const Real& x, const Real& y, std::uint64_t m)
{
    const Seg d = x.at(m + 2) - y.at(m + 2);
    return std::max(abs_rat(d.lo), abs_rat(d.hi)) < pow2(-long(m));
}

inline TBVerdict totally_bounded_check(const RealSeq& gamma, const std::function<std::uint64_t(std::uint64_t)>& delta,
                                       std::uint64_t m_max, std::uint64_t samples)
{
    for (std::uint64_t m = 0; m <= m_max; ++m) {
        const std::uint64_t d = delta(m);
        for (std::uint64_t i = d + 1; i <= d + samples; ++i) {
            bool ok = false;
            for (std::uint64_t j = 0; j < d && !ok; ++j)
                ok = close_within(gamma(i), gamma(j), m);
            if (!ok)
                return TBFail{m, i};
        }
    }
    return TBPass{};
}

// Level covers: level(n) lists segments of width exactly 2^-n, each holding
// a member of H, together covering H.
using LevelCover = std::function<std::vector<Seg>(std::uint64_t)>;

namespace levelcovers {

// Width-2^-n segments centred on the grid k/2^(n+1) of [lo, hi]; lo, hi dyadic
// with hi - lo a multiple of 2^-(n+1).
inline LevelCover dyadic_interval(Rat lo, Rat hi)
{
    return [lo, hi](std::uint64_t n) {
        std::vector<Seg> out;
        const Rat step = pow2(-long(n) - 1);
        for (Rat c = lo; c <= hi; c += step)
            out.emplace_back(c - step, c + step);
        return out;
    };
}

inline LevelCover around_points(std::vector<Rat> pts)
{
    return [pts = std::move(pts)](std::uint64_t n) {
        std::vector<Seg> out;
        const Rat r = pow2(-long(n) - 1);
        for (const auto& p : pts)
            out.emplace_back(p - r, p + r);
        return out;
    };
}

} // namespace levelcovers

enum class Extremum { min, max };

// beta(n): the first s in level(n) with s <=_S t for every t in level(n) (for
// max: t <=_S s). x(n) = double(beta(2n)).
inline Real extremum(const LevelCover& level, Extremum which)
{
    auto pick = [level, which](std::uint64_t n) {
        const auto segs = level(n);
        if (segs.empty())
            throw WitnessViolation("empty level cover at " + std::to_string(n));
        for (const auto& s : segs)
            if (s.length() != pow2(-long(n)))
                throw WitnessViolation("level " + std::to_string(n) + " segment " + s.str() +
                                       " does not have width 2^-" + std::to_string(n));
        // s <=_S t for all t iff s.lo <= min t.hi; linear instead of pairwise.
        Rat bound = which == Extremum::min ? segs.front().hi : segs.front().lo;
        for (const auto& t : segs)
            bound = which == Extremum::min ? std::min(bound, t.hi) : std::max(bound, t.lo);
        for (const auto& s : segs)
            if (which == Extremum::min ? s.lo <= bound : bound <= s.hi)
                return s;
        throw WitnessViolation("no extreme segment at level " + std::to_string(n));
    };
    return Real(Oracle<Seg>([pick](std::uint64_t n) { return double_seg(pick(2 * n)); }),
                Oracle<std::uint64_t>([](std::uint64_t k) { return (k + 2) / 2; }));
}

// Freudenthal dichotomy oracle: decide(s, t) for s strictly inside t says
// either t holds a member of H (true) or s holds none (false). Claims are
// checked against a generator search; returns the first refuted pair.
struct DichotomyViolation {
    Seg s, t;
    bool claimed;
};

inline std::optional<DichotomyViolation> freudenthal_check(const CSReal& H,
                                                           const std::function<bool(const Seg&, const Seg&)>& decide,
                                                           const std::vector<std::pair<Seg, Seg>>& pairs,
                                                           std::uint64_t budget, std::uint64_t precision)
{
    for (const auto& [s, t] : pairs) {
        if (!strictly_inside(s, t))
            throw PreconditionError("dichotomy pair is not strictly nested: " + s.str() + " in " + t.str());
        const bool claim = decide(s, t);
        if (claim && !generator_in(H, t, budget, precision))
            return DichotomyViolation{s, t, claim};
        if (!claim && generator_in(H, s, budget, precision))
            return DichotomyViolation{s, t, claim};
    }
    return std::nullopt;
}

} // namespace fanlab
