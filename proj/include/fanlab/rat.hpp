#pragma once

// Exact rationals. Canonical form (gcd 1, positive denominator) is maintained
// by the Boost rational backend.

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "fanlab/errors.hpp"
#include "fanlab/seqcode.hpp"

namespace fanlab {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int den(const Rat& q) { return boost::multiprecision::denominator(q); }

inline Rat make_rat(const Int& n, const Int& d)
{
    if (d == 0)
        throw InvalidInput("zero denominator");
    return Rat(n, d);
}

// 2^e for any integer e.
inline Rat pow2(long e)
{
    if (e >= 0)
        return Rat(Int(1) << static_cast<unsigned>(e));
    return Rat(Int(1), Int(1) << static_cast<unsigned>(-e));
}

inline Int floor_rat(const Rat& q)
{
    Int n = num(q), d = den(q);
    Int f = n / d;
    if (n < 0 && f * d != n)
        f -= 1;
    return f;
}

inline Int ceil_rat(const Rat& q) { return -floor_rat(-q); }

inline Rat abs_rat(const Rat& q) { return q < 0 ? Rat(-q) : q; }

inline bool is_dyadic(const Rat& q)
{
    Int d = den(q);
    return (d & (d - 1)) == 0;
}

// "num/den", or "num" for integers.
inline std::string rat_str(const Rat& q)
{
    if (den(q) == 1)
        return num(q).str();
    return num(q).str() + "/" + den(q).str();
}

// Dyadic form "k/2^n" when possible, else num/den.
inline std::string dyadic_str(const Rat& q)
{
    if (!is_dyadic(q) || den(q) == 1)
        return rat_str(q);
    unsigned n = boost::multiprecision::msb(den(q));
    return num(q).str() + "/2^" + std::to_string(n);
}

// Accepts "a", "-a", "a/b", "a/2^n" and decimals "1.25".
inline Rat parse_rat(std::string_view text)
{
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            t += c;
    auto is_int = [](const std::string& s) {
        std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i >= s.size())
            return false;
        for (; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i])))
                return false;
        return true;
    };
    auto to_int = [](const std::string& s) {
        const bool neg = !s.empty() && s[0] == '-';
        const Int v = parse_nat(std::string_view(s).substr(!s.empty() && (s[0] == '-' || s[0] == '+') ? 1 : 0));
        return neg ? Int(-v) : v;
    };
    if (auto slash = t.find('/'); slash != std::string::npos) {
        std::string a = t.substr(0, slash), b = t.substr(slash + 1);
        if (!is_int(a))
            throw InvalidInput("bad rational '" + std::string(text) + "'");
        if (b.rfind("2^", 0) == 0) {
            std::string e = b.substr(2);
            if (!is_int(e) || e[0] == '-')
                throw InvalidInput("bad dyadic exponent in '" + std::string(text) + "'");
            return make_rat(to_int(a), Int(1) << std::stoul(e));
        }
        if (!is_int(b) || b[0] == '-')
            throw InvalidInput("bad denominator in '" + std::string(text) + "'");
        return make_rat(to_int(a), to_int(b));
    }
    if (auto dot = t.find('.'); dot != std::string::npos) {
        std::string a = t.substr(0, dot), f = t.substr(dot + 1);
        bool neg = !a.empty() && a[0] == '-';
        if (a.empty() || a == "-" || a == "+")
            a += "0";
        if (!is_int(a) || f.empty() || !is_int(f) || f[0] == '-' || f[0] == '+')
            throw InvalidInput("bad decimal '" + std::string(text) + "'");
        Int scale = boost::multiprecision::pow(Int(10), static_cast<unsigned>(f.size()));
        Int whole = to_int(a);
        Int frac = parse_nat(f);
        Int n = (neg ? -whole : whole) * scale + frac;
        return make_rat(neg ? Int(-n) : n, scale);
    }
    if (!is_int(t))
        throw InvalidInput("bad rational '" + std::string(text) + "'");
    return Rat(to_int(t));
}

// Decimal rendering rounded toward -inf (down) or +inf (up) at `digits` places.
inline std::string decimal_str(const Rat& q, unsigned digits, bool round_up)
{
    Int scale = boost::multiprecision::pow(Int(10), digits);
    Rat scaled = q * Rat(scale);
    Int v = round_up ? ceil_rat(scaled) : floor_rat(scaled);
    bool neg = v < 0;
    if (neg)
        v = -v;
    std::string s = v.str();
    if (digits > 0) {
        if (s.size() <= digits)
            s.insert(0, digits + 1 - s.size(), '0');
        s.insert(s.size() - digits, ".");
    }
    return (neg ? "-" : "") + s;
}

} // namespace fanlab
