#pragma once

// Prime-power coding of finite sequences of naturals, Cantor pairing, and the
// binary block coding D / sharp.
//
//   <m0, ..., m(k-1)> = 2^m0 * 3^m1 * ... * p(k-1)^(m(k-1)+1) - 1
//
// Algorithms elsewhere work on FinSeq; SeqCode is the numeric boundary form.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <mutex>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fanlab/errors.hpp"

namespace fanlab {

using Nat = boost::multiprecision::cpp_int;

// Decimal digits to Nat. The cpp_int string constructor reads a leading 0 as
// an octal prefix, so leading zeros are dropped first.
inline Nat parse_nat(std::string_view digits)
{
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw InvalidInput("bad natural number '" + std::string(digits) + "'");
    const auto first = digits.find_first_not_of('0');
    return first == std::string_view::npos ? Nat(0) : Nat(std::string(digits.substr(first)));
}

namespace detail {

// Largest prime the sieve will grow to while decoding.
inline constexpr std::uint64_t kSieveLimit = 50'000'000;

class PrimeTable {
public:
    static PrimeTable& instance()
    {
        static PrimeTable table;
        return table;
    }

    std::uint64_t nth(std::size_t j)
    {
        std::lock_guard lock(mu_);
        while (primes_.size() <= j)
            grow(limit_ * 2);
        return primes_[j];
    }

    // Index of prime p, or npos if p is not prime. Grows the sieve up to p.
    std::size_t index_of(std::uint64_t p)
    {
        std::lock_guard lock(mu_);
        if (p > kSieveLimit)
            throw BudgetExhausted("prime factor " + std::to_string(p) + " exceeds the sieve limit");
        while (limit_ < p)
            grow(std::min<std::uint64_t>(std::max<std::uint64_t>(limit_ * 2, p), kSieveLimit));
        auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
        if (it == primes_.end() || *it != p)
            return npos;
        return static_cast<std::size_t>(it - primes_.begin());
    }

    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

private:
    PrimeTable() { grow(1 << 16); }

    void grow(std::uint64_t limit)
    {
        if (limit <= limit_)
            return;
        std::vector<bool> composite(limit + 1, false);
        std::vector<std::uint64_t> ps;
        for (std::uint64_t i = 2; i <= limit; ++i) {
            if (composite[i])
                continue;
            ps.push_back(i);
            for (std::uint64_t k = i * i; k <= limit; k += i)
                composite[k] = true;
        }
        primes_ = std::move(ps);
        limit_ = limit;
    }

    std::mutex mu_;
    std::vector<std::uint64_t> primes_;
    std::uint64_t limit_ = 0;
};

inline unsigned exponent_of(const Nat& item)
{
    if (item > Nat(std::numeric_limits<unsigned>::max() / 2))
        throw BudgetExhausted("sequence item too large to encode as a prime power");
    return item.convert_to<unsigned>();
}

} // namespace detail

// p(j): the j-th prime, p(0) = 2.
inline std::uint64_t prime(std::size_t j) { return detail::PrimeTable::instance().nth(j); }

class FinSeq {
public:
    FinSeq() = default;
    explicit FinSeq(std::vector<Nat> items) : items_(std::move(items)) {}
    FinSeq(std::initializer_list<std::uint64_t> items)
    {
        items_.reserve(items.size());
        for (auto v : items)
            items_.emplace_back(v);
    }

    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    const Nat& operator[](std::size_t i) const { return items_[i]; }
    const Nat& back() const { return items_.back(); }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }
    const std::vector<Nat>& items() const { return items_; }

    void push_back(Nat v) { items_.push_back(std::move(v)); }
    void pop_back() { items_.pop_back(); }

    // s * <v>
    FinSeq append(Nat v) const
    {
        FinSeq out = *this;
        out.items_.push_back(std::move(v));
        return out;
    }

    // s-bar(n); n must not exceed size().
    FinSeq prefix(std::size_t n) const
    {
        if (n > items_.size())
            throw PreconditionError("prefix length exceeds sequence length");
        return FinSeq(std::vector<Nat>(items_.begin(), items_.begin() + static_cast<std::ptrdiff_t>(n)));
    }

    // Immediate shortening; the empty sequence is its own shortening.
    FinSeq shortening() const { return empty() ? *this : prefix(size() - 1); }

    bool is_initial_of(const FinSeq& t) const
    {
        return size() <= t.size() && std::equal(items_.begin(), items_.end(), t.items_.begin());
    }

    bool is_binary() const
    {
        return std::all_of(items_.begin(), items_.end(), [](const Nat& v) { return v < 2; });
    }

    friend bool operator==(const FinSeq&, const FinSeq&) = default;
    friend auto operator<=>(const FinSeq& a, const FinSeq& b)
    {
        if (a.size() != b.size())
            return a.size() <=> b.size();
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] < b[i])
                return std::strong_ordering::less;
            if (b[i] < a[i])
                return std::strong_ordering::greater;
        }
        return std::strong_ordering::equal;
    }

    std::string str() const
    {
        std::string out = "[";
        for (std::size_t i = 0; i < items_.size(); ++i) {
            if (i)
                out += ',';
            out += items_[i].str();
        }
        return out + "]";
    }

    // Parses "[1,0]" (whitespace tolerated).
    static FinSeq parse(std::string_view text)
    {
        std::string t;
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c)))
                t += c;
        if (t.size() < 2 || t.front() != '[' || t.back() != ']')
            throw InvalidInput("sequence must be bracketed: " + std::string(text));
        FinSeq out;
        std::string body = t.substr(1, t.size() - 2);
        if (body.empty())
            return out;
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty() || !std::all_of(item.begin(), item.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
                throw InvalidInput("bad sequence item '" + item + "' in " + std::string(text));
            out.push_back(parse_nat(item));
        }
        if (body.back() == ',')
            throw InvalidInput("trailing comma in " + std::string(text));
        return out;
    }

private:
    std::vector<Nat> items_;
};

inline bool incompatible(const FinSeq& s, const FinSeq& t)
{
    return !s.is_initial_of(t) && !t.is_initial_of(s);
}

inline FinSeq concat(const FinSeq& a, const FinSeq& b)
{
    std::vector<Nat> items = a.items();
    items.insert(items.end(), b.begin(), b.end());
    return FinSeq(std::move(items));
}

inline FinSeq zeros(std::size_t n) { return FinSeq(std::vector<Nat>(n, Nat(0))); }

struct SeqCode {
    Nat value;

    SeqCode() = default;
    SeqCode(Nat v) : value(std::move(v)) {}
    SeqCode(std::uint64_t v) : value(v) {}
    SeqCode(int v) : value(v) {}

    friend bool operator==(const SeqCode&, const SeqCode&) = default;
    friend auto operator<=>(const SeqCode& a, const SeqCode& b)
    {
        if (a.value < b.value)
            return std::strong_ordering::less;
        if (b.value < a.value)
            return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    std::string str() const { return value.str(); }
};

inline SeqCode encode(const FinSeq& s)
{
    Nat product = 1;
    for (std::size_t i = 0; i < s.size(); ++i) {
        unsigned e = detail::exponent_of(s[i]) + (i + 1 == s.size() ? 1u : 0u);
        product *= boost::multiprecision::pow(Nat(prime(i)), e);
    }
    return SeqCode(product - 1);
}

namespace detail {

// Exponents of a+1 over consecutive primes, up to the largest prime factor.
inline std::vector<unsigned> prime_exponents(const Nat& a)
{
    Nat x = a + 1;
    std::vector<unsigned> exps;
    for (std::size_t j = 0; x > 1; ++j) {
        const std::uint64_t p = prime(j);
        if (Nat(p) * p > x) {
            if (x > Nat(kSieveLimit))
                throw BudgetExhausted("code has a prime factor beyond the sieve limit");
            const auto q = x.convert_to<std::uint64_t>();
            const std::size_t idx = PrimeTable::instance().index_of(q);
            exps.resize(idx + 1, 0);
            exps[idx] += 1;
            break;
        }
        unsigned e = 0;
        while (x % p == 0) {
            x /= p;
            ++e;
        }
        exps.push_back(e);
    }
    while (!exps.empty() && exps.back() == 0)
        exps.pop_back();
    return exps;
}

} // namespace detail

// Least i such that p(j) does not divide a+1 for every j >= i.
inline std::size_t length_code(const SeqCode& a) { return detail::prime_exponents(a.value).size(); }

inline FinSeq decode(const SeqCode& a)
{
    auto exps = detail::prime_exponents(a.value);
    FinSeq out;
    for (std::size_t i = 0; i < exps.size(); ++i)
        out.push_back(Nat(i + 1 == exps.size() ? exps[i] - 1 : exps[i]));
    return out;
}

inline SeqCode concat(const SeqCode& a, const SeqCode& b) { return encode(concat(decode(a), decode(b))); }

inline SeqCode prefix(const SeqCode& a, std::size_t n)
{
    const FinSeq s = decode(a);
    if (n > s.size())
        throw PreconditionError("prefix length " + std::to_string(n) + " exceeds length " + std::to_string(s.size()));
    return encode(s.prefix(n));
}

inline bool is_initial(const SeqCode& a, const SeqCode& b) { return decode(a).is_initial_of(decode(b)); }

inline bool incompatible(const SeqCode& a, const SeqCode& b) { return incompatible(decode(a), decode(b)); }

// Cantor pairing J(m,n) = (m+n)(m+n+1)/2 + m.
struct Pair {
    Nat left;
    Nat right;
    friend bool operator==(const Pair&, const Pair&) = default;
};

inline Nat pair(const Nat& m, const Nat& n)
{
    const Nat w = m + n;
    return w * (w + 1) / 2 + m;
}

inline Pair unpair(const Nat& k)
{
    const Nat disc = 8 * k + 1;
    Nat w = (boost::multiprecision::sqrt(disc) - 1) / 2;
    const Nat t = w * (w + 1) / 2;
    const Nat m = k - t;
    return {m, w - m};
}

// Machine-word pairing for oracle indices; throws on overflow.
inline std::uint64_t pair_index(std::uint64_t m, std::uint64_t n)
{
    const Nat k = pair(Nat(m), Nat(n));
    if (k > Nat(std::numeric_limits<std::uint64_t>::max()))
        throw BudgetExhausted("oracle index overflow");
    return k.convert_to<std::uint64_t>();
}

inline std::pair<std::uint64_t, std::uint64_t> unpair_index(std::uint64_t k)
{
    const Pair p = unpair(Nat(k));
    return {p.left.convert_to<std::uint64_t>(), p.right.convert_to<std::uint64_t>()};
}

// s^n: the longest t with t(m) = s(J(n,m)) for all m < length(t).
inline FinSeq proj(const FinSeq& s, const Nat& n)
{
    FinSeq out;
    for (Nat m = 0;; ++m) {
        const Nat k = pair(n, m);
        if (k >= s.size())
            break;
        out.push_back(s[k.convert_to<std::size_t>()]);
    }
    return out;
}

inline SeqCode proj_code(const SeqCode& s, const Nat& n) { return encode(proj(decode(s), n)); }

// D(<>) = <>, D(a * <n>) = D(a) * 0^n * <1>.
inline FinSeq bin_encode(const FinSeq& a)
{
    FinSeq out;
    for (const Nat& v : a) {
        for (Nat i = 0; i < v; ++i)
            out.push_back(0);
        out.push_back(1);
    }
    return out;
}

inline SeqCode bin_encode(const SeqCode& a) { return encode(bin_encode(decode(a))); }

// Number of ones in a binary sequence.
inline std::size_t sharp(const FinSeq& b)
{
    if (!b.is_binary())
        throw InvalidInput("sharp expects a binary sequence, got " + b.str());
    return static_cast<std::size_t>(std::count(b.begin(), b.end(), Nat(1)));
}

inline std::size_t sharp(const SeqCode& b) { return sharp(decode(b)); }

// Inverse of D on its image: the items whose blocks 0^n 1 are complete.
inline FinSeq bin_decode_complete(const FinSeq& b)
{
    FinSeq out;
    Nat run = 0;
    for (const Nat& v : b) {
        if (v == 0)
            ++run;
        else if (v == 1) {
            out.push_back(run);
            run = 0;
        } else
            throw InvalidInput("binary sequence expected, got " + b.str());
    }
    return out;
}

} // namespace fanlab
