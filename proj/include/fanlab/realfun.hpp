#pragma once

// Partial continuous functions from R to R as enumerations of segment pairs
// <r, s>. Grid graphs list, at level d, the inputs [lo + (a-1)h, lo + (a+1)h]
// for a = 0..2^d, h = W / 2^d, paired with an enclosure of the image. Entries
// implied by the closure clauses (shrinking inputs, widening outputs) are not
// listed.

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <optional>
#include <utility>
#include <vector>

#include "fanlab/reals.hpp"

namespace fanlab {

struct SegEntry {
    Seg in;
    Seg out;
};

using Enclosure = std::function<std::optional<Seg>(const Seg&)>;

class PartialRealFun {
public:
    // Grid graph over [lo, lo + W].
    static PartialRealFun grid(const Seg& domain, Enclosure enclose)
    {
        if (domain.length() <= 0)
            throw PreconditionError("grid domain must have positive width");
        PartialRealFun f;
        f.grid_ = domain;
        f.enclose_ = std::move(enclose);
        return f;
    }

    static PartialRealFun list(std::vector<SegEntry> entries)
    {
        PartialRealFun f;
        f.list_ = std::make_shared<const std::vector<SegEntry>>(std::move(entries));
        return f;
    }

    // Keeps only entries satisfying `keep`.
    PartialRealFun filtered(std::function<bool(const SegEntry&)> keep) const
    {
        PartialRealFun f = *this;
        auto prev = keep_;
        f.keep_ = [prev, keep](const SegEntry& e) { return (!prev || prev(e)) && keep(e); };
        return f;
    }

    bool is_grid() const { return grid_.has_value(); }
    const Seg& domain() const { return *grid_; }
    std::size_t list_size() const { return list_ ? list_->size() : 0; }

    static std::uint64_t level_base(unsigned d) { return (std::uint64_t{1} << d) - 1 + d; }

    // Entry at index p, or nullopt for an empty slot.
    std::optional<SegEntry> entry(std::uint64_t p) const
    {
        if (list_) {
            if (p >= list_->size())
                return std::nullopt;
            return kept((*list_)[p]);
        }
        unsigned d = 0;
        while (level_base(d + 1) <= p)
            ++d;
        return grid_entry(d, p - level_base(d));
    }

    Enumeration<SegEntry> graph() const
    {
        auto self = *this;
        return Enumeration<SegEntry>([self](std::uint64_t p) { return self.entry(p); });
    }

    struct Match {
        std::uint64_t index;
        SegEntry entry;
    };

    // Least index p such that some approximation of x lies inside the input
    // and the output satisfies pred. Grid level d reads x at width <= h/4 and
    // visits only the inputs that can include it; lists read x at
    // max_precision.
    std::optional<Match> first_match(const Real& x, const std::function<bool(const Seg&)>& pred, unsigned max_level,
                                     std::uint64_t max_precision = 200) const
    {
        if (list_) {
            const Seg xs = x.at(max_precision);
            for (std::uint64_t p = 0; p < list_->size(); ++p)
                if (auto e = kept((*list_)[p]); e && inside(xs, e->in) && pred(e->out))
                    return Match{p, *e};
            return std::nullopt;
        }
        const Rat lo = grid_->lo, W = grid_->length();
        for (unsigned d = 0; d <= max_level; ++d) {
            const Rat h = W / Rat(Int(1) << d);
            std::uint64_t k = 0;
            while (k < max_precision && pow2(-long(k)) > h / 4)
                ++k;
            const Seg xs = x.at(k);
            const Int top = Int(1) << d;
            // lo + (a-1)h <= xs.lo and xs.hi <= lo + (a+1)h
            Int a_min = ceil_rat((xs.hi - lo) / h) - 1;
            Int a_max = floor_rat((xs.lo - lo) / h) + 1;
            if (a_min < 0)
                a_min = 0;
            if (a_max > top)
                a_max = top;
            for (Int a = a_min; a <= a_max; ++a) {
                auto e = grid_entry(d, a.convert_to<std::uint64_t>());
                if (e && inside(xs, e->in) && pred(e->out))
                    return Match{level_base(d) + a.convert_to<std::uint64_t>(), *e};
            }
        }
        return std::nullopt;
    }

    // An enclosure of the image of r. Grid graphs evaluate their enclosure on
    // r itself; lists return the narrowest output among entries including r.
    std::optional<Seg> image(const Seg& r) const
    {
        if (grid_) {
            auto out = enclose_(r);
            if (out && keep_ && !keep_(SegEntry{r, *out}))
                return std::nullopt;
            return out;
        }
        std::optional<Seg> best;
        for (const auto& raw : *list_)
            if (auto e = kept(raw); e && inside(r, e->in) && (!best || e->out.length() < best->length()))
                best = e->out;
        return best;
    }

private:
    std::optional<SegEntry> kept(const SegEntry& e) const
    {
        if (keep_ && !keep_(e))
            return std::nullopt;
        return e;
    }

    std::optional<SegEntry> grid_entry(unsigned d, std::uint64_t a) const
    {
        if (a > (std::uint64_t{1} << d))
            return std::nullopt;
        const Rat h = grid_->length() / Rat(Int(1) << d);
        const Rat c = grid_->lo + Rat(Int(a)) * h;
        const Seg in(c - h, c + h);
        auto out = enclose_(in);
        if (!out)
            return std::nullopt;
        return kept(SegEntry{in, *out});
    }

    std::optional<Seg> grid_;
    Enclosure enclose_;
    std::shared_ptr<const std::vector<SegEntry>> list_;
    std::function<bool(const SegEntry&)> keep_;
};

namespace realfuns {

inline PartialRealFun identity(const Seg& domain)
{
    return PartialRealFun::grid(domain, [](const Seg& r) { return std::optional<Seg>(r); });
}

// t |-> a t + b.
inline PartialRealFun affine(const Seg& domain, Rat a, Rat b)
{
    return PartialRealFun::grid(domain, [a, b](const Seg& r) {
        const Rat u = a * r.lo + b, v = a * r.hi + b;
        return std::optional<Seg>(Seg(std::min(u, v), std::max(u, v)));
    });
}

inline PartialRealFun constant(const Seg& domain, Rat c)
{
    return PartialRealFun::grid(domain, [c](const Seg&) { return std::optional<Seg>(Seg::point(c)); });
}

inline PartialRealFun empty() { return PartialRealFun::list({}); }

} // namespace realfuns

// Entries with the same input have touching outputs; entries are compared
// when one input includes the other. Returns the first offending pair.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> check_real_consistency(const PartialRealFun& f,
                                                                                     std::uint64_t budget)
{
    std::vector<std::pair<std::uint64_t, SegEntry>> es;
    for (std::uint64_t p = 0; p < budget; ++p)
        if (auto e = f.entry(p))
            es.emplace_back(p, *e);
    for (std::size_t i = 0; i < es.size(); ++i)
        for (std::size_t j = i + 1; j < es.size(); ++j) {
            const auto& a = es[i].second;
            const auto& b = es[j].second;
            if ((inside(a.in, b.in) || inside(b.in, a.in)) && !touches_s(a.out, b.out))
                return std::make_pair(es[i].first, es[j].first);
        }
    return std::nullopt;
}

struct ApplyBudget {
    unsigned max_level = 48;
    std::uint64_t max_precision = 200;
};

// y(n): the output r of the least entry <x(k), r>, widened by 2^-(n+3) at
// both ends (a graph entry by the widening closure clause), with the widened
// segment shorter than 2^-n and strictly inside y(n-1). Widening lets point
// outputs of constant maps nest strictly. The search is bounded by graph
// level and input precision.
inline Real real_apply(const PartialRealFun& phi, const Real& x, ApplyBudget budget = {})
{
    struct State {
        std::mutex mu;
        std::vector<Seg> ys;
    };
    auto st = std::make_shared<State>();
    auto step = [phi, x, budget](std::uint64_t n, const std::optional<Seg>& prev) -> Seg {
        const Rat bound = pow2(-long(n)), pad = pow2(-long(n) - 3);
        auto widen = [&](const Seg& r) { return Seg(r.lo - pad, r.hi + pad); };
        auto m = phi.first_match(
            x,
            [&](const Seg& r) {
                const Seg t = widen(r);
                return t.length() < bound && (!prev || strictly_inside(t, *prev));
            },
            budget.max_level, budget.max_precision);
        if (!m)
            throw BudgetExhausted("real_apply: no graph entry at precision " + std::to_string(n) + " within level " +
                                  std::to_string(budget.max_level));
        return widen(m->entry.out);
    };
    return Real(Oracle<Seg>([st, step](std::uint64_t n) {
                    std::lock_guard lock(st->mu);
                    while (st->ys.size() <= n) {
                        const std::uint64_t k = st->ys.size();
                        std::optional<Seg> prev;
                        if (k > 0)
                            prev = st->ys.back();
                        st->ys.push_back(step(k, prev));
                    }
                    return st->ys[n];
                }),
                Oracle<std::uint64_t>([](std::uint64_t n) { return n; }));
}

// Keeps entries whose input holds a member of H (generator search bounded by
// budget and precision).
inline PartialRealFun real_restrict(const PartialRealFun& phi, const CSReal& H, std::uint64_t budget = 64,
                                    std::uint64_t precision = 40)
{
    return phi.filtered(
        [H, budget, precision](const SegEntry& e) { return generator_in(H, e.in, budget, precision).has_value(); });
}

// psi(u) = phi(inf(sup(u, x), y)) as a grid graph over `domain`. x and y are
// read at a precision a quarter of the input width.
inline PartialRealFun real_extend_clamp(const PartialRealFun& phi, const Real& x, const Real& y, const Seg& domain)
{
    return PartialRealFun::grid(domain, [phi, x, y](const Seg& r) -> std::optional<Seg> {
        std::uint64_t n = 2;
        while (r.length() > 0 && pow2(-long(n)) > r.length() / 4 && n < 200)
            ++n;
        const Seg c = min_s(max_s(r, x.at(n)), y.at(n));
        return phi.image(c);
    });
}

} // namespace fanlab
