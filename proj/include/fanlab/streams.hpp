#pragma once

// Infinite sequences as memoizing oracles, and the subsets of N they present.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "fanlab/seqcode.hpp"

namespace fanlab {

// A deterministic total map N -> T with a memo and an inspectable query trace.
// Copies share state. Concurrent duplicate evaluation of one index may happen;
// the first stored answer wins.
template <class T>
class Oracle {
public:
    using Rule = std::function<T(std::uint64_t)>;

    Oracle() : Oracle([](std::uint64_t) { return T{}; }) {}
    explicit Oracle(Rule rule) : state_(std::make_shared<State>(std::move(rule))) {}

    T operator()(std::uint64_t n) const
    {
        {
            std::lock_guard lock(state_->mu);
            state_->trace.insert(n);
            if (auto it = state_->memo.find(n); it != state_->memo.end())
                return it->second;
        }
        T value = state_->rule(n);
        std::lock_guard lock(state_->mu);
        return state_->memo.emplace(n, std::move(value)).first->second;
    }

    std::set<std::uint64_t> trace() const
    {
        std::lock_guard lock(state_->mu);
        return state_->trace;
    }

    // Largest queried index plus one; 0 if never queried.
    std::uint64_t queried_extent() const
    {
        std::lock_guard lock(state_->mu);
        return state_->trace.empty() ? 0 : *state_->trace.rbegin() + 1;
    }

    void clear_trace() const
    {
        std::lock_guard lock(state_->mu);
        state_->trace.clear();
    }

private:
    struct State {
        explicit State(Rule r) : rule(std::move(r)) {}
        Rule rule;
        std::mutex mu;
        std::map<std::uint64_t, T> memo;
        std::set<std::uint64_t> trace;
    };
    std::shared_ptr<State> state_;
};

// An element of Baire space.
using SeqOracle = Oracle<Nat>;

// Enumeration of structured items; nullopt plays the role of the value 0 and
// an item plays the role of its code plus one.
template <class T>
using Enumeration = Oracle<std::optional<T>>;

namespace oracles {

inline SeqOracle zero() { return SeqOracle([](std::uint64_t) { return Nat(0); }); }

inline SeqOracle constant(Nat v)
{
    return SeqOracle([v = std::move(v)](std::uint64_t) { return v; });
}

inline SeqOracle identity() { return SeqOracle([](std::uint64_t n) { return Nat(n); }); }

// Repeats `period` forever; period must be nonempty.
inline SeqOracle periodic(std::vector<Nat> period)
{
    if (period.empty())
        throw PreconditionError("periodic oracle needs a nonempty period");
    return SeqOracle([p = std::move(period)](std::uint64_t n) { return p[n % p.size()]; });
}

// Finite table followed by a constant tail.
inline SeqOracle table(std::vector<Nat> values, Nat tail = 0)
{
    return SeqOracle([v = std::move(values), t = std::move(tail)](std::uint64_t n) {
        return n < v.size() ? v[n] : t;
    });
}

inline SeqOracle from_prefix(const FinSeq& s, Nat tail = 0) { return table(s.items(), std::move(tail)); }

// s followed by the values of alpha from index 0 on.
inline SeqOracle splice(const FinSeq& s, SeqOracle alpha)
{
    return SeqOracle([s, alpha](std::uint64_t n) { return n < s.size() ? s[n] : alpha(n - s.size()); });
}

} // namespace oracles

// alpha-bar(n) as a sequence.
inline FinSeq oracle_seq(const SeqOracle& alpha, std::size_t n)
{
    FinSeq out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(alpha(i));
    return out;
}

// alpha-bar(n) as a code.
inline SeqCode oracle_prefix(const SeqOracle& alpha, std::size_t n) { return encode(oracle_seq(alpha, n)); }

// alpha^n: m |-> alpha(J(n,m)).
inline SeqOracle project(const SeqOracle& alpha, std::uint64_t n)
{
    return SeqOracle([alpha, n](std::uint64_t m) { return alpha(pair_index(n, m)); });
}

// D_beta: n in D iff beta(n) = 1.
class DecidableSet {
public:
    explicit DecidableSet(SeqOracle chi) : chi_(std::move(chi)) {}

    bool contains(std::uint64_t n) const
    {
        const Nat v = chi_(n);
        if (v > 1)
            throw PreconditionError("characteristic oracle returned " + v.str() + " at " + std::to_string(n));
        return v == 1;
    }
    const SeqOracle& chi() const { return chi_; }

private:
    SeqOracle chi_;
};

// E_beta: n in E iff beta(m) = n+1 for some m.
class EnumerableSet {
public:
    explicit EnumerableSet(SeqOracle en) : en_(std::move(en)) {}
    const SeqOracle& en() const { return en_; }

private:
    SeqOracle en_;
};

// D_{beta-bar n} = { k < n : beta(k) = 1 }.
inline std::set<Nat> dec_truncate(const SeqOracle& beta, std::uint64_t n)
{
    std::set<Nat> out;
    for (std::uint64_t k = 0; k < n; ++k)
        if (beta(k) == 1)
            out.insert(Nat(k));
    return out;
}

// E_{beta-bar n} = { k : beta(m) = k+1 for some m < n }.
inline std::set<Nat> enum_truncate(const SeqOracle& beta, std::uint64_t n)
{
    std::set<Nat> out;
    for (std::uint64_t m = 0; m < n; ++m) {
        const Nat v = beta(m);
        if (v > 0)
            out.insert(v - 1);
    }
    return out;
}

enum class Semi { found, unknown };

inline Semi enum_member_within(const EnumerableSet& e, const Nat& k, std::uint64_t budget)
{
    for (std::uint64_t m = 0; m < budget; ++m)
        if (e.en()(m) == k + 1)
            return Semi::found;
    return Semi::unknown;
}

// Every decidable set is enumerable: en(m) = m+1 if chi(m) = 1, else 0.
inline EnumerableSet as_enumerable(const DecidableSet& d)
{
    return EnumerableSet(SeqOracle([d](std::uint64_t m) { return d.contains(m) ? Nat(m + 1) : Nat(0); }));
}

// Structured enumeration of sequences viewed as a code-level enumeration.
inline EnumerableSet as_code_enumeration(const Enumeration<FinSeq>& e)
{
    return EnumerableSet(SeqOracle([e](std::uint64_t m) {
        auto s = e(m);
        return s ? encode(*s).value + 1 : Nat(0);
    }));
}

// Code-level enumeration viewed structurally.
inline Enumeration<FinSeq> as_seq_enumeration(const EnumerableSet& e)
{
    return Enumeration<FinSeq>([e](std::uint64_t m) -> std::optional<FinSeq> {
        const Nat v = e.en()(m);
        if (v == 0)
            return std::nullopt;
        return decode(SeqCode(v - 1));
    });
}

template <class T>
Enumeration<T> finite_enumeration(std::vector<T> items)
{
    return Enumeration<T>([v = std::move(items)](std::uint64_t m) -> std::optional<T> {
        if (m < v.size())
            return v[m];
        return std::nullopt;
    });
}

// First `budget` items of an enumeration, skipping empty slots.
template <class T>
std::vector<T> collect(const Enumeration<T>& e, std::uint64_t budget)
{
    std::vector<T> out;
    for (std::uint64_t m = 0; m < budget; ++m)
        if (auto v = e(m))
            out.push_back(*v);
    return out;
}

// Decidable set of finite sequences (a predicate on sequences).
using SeqPredicate = std::function<bool(const FinSeq&)>;

inline SeqPredicate finite_set_predicate(std::set<FinSeq> members)
{
    return [m = std::move(members)](const FinSeq& s) { return m.count(s) > 0; };
}

// Decidable set of codes viewed as a predicate on sequences.
inline SeqPredicate as_predicate(const DecidableSet& d)
{
    return [d](const FinSeq& s) {
        const Nat c = encode(s).value;
        if (c > Nat(std::numeric_limits<std::uint64_t>::max()))
            throw BudgetExhausted("code too large for an oracle index");
        return d.contains(c.convert_to<std::uint64_t>());
    };
}

inline DecidableSet as_decidable(const SeqPredicate& p)
{
    return DecidableSet(SeqOracle([p](std::uint64_t c) { return p(decode(SeqCode(c))) ? Nat(1) : Nat(0); }));
}

} // namespace fanlab
