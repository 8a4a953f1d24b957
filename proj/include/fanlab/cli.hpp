#pragma once

// Command implementations behind the fanlab executable. Each command returns
// its exit code, a JSON report and a one-line human summary; the executable
// only parses flags and routes output.
//
// Exit codes: 0 ok, 1 contract failure, 2 parse error, 3 budget exhausted.

#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "fanlab/csets.hpp"
#include "fanlab/heineborel.hpp"
#include "fanlab/kleene.hpp"
#include "fanlab/reals.hpp"

namespace fanlab::cli {

inline constexpr const char* kSchema = "fanlab.report/1";

enum Exit : int { ok = 0, contract_failure = 1, parse_error = 2, budget_exhausted = 3 };

struct RunConfig {
    std::uint64_t budget_enum = 4096;
    std::uint64_t budget_steps = 10'000;
    std::uint64_t depth = 32;
    std::uint64_t precision = 20;
    std::uint64_t seed = 1;
};

struct CmdResult {
    int exit = ok;
    nlohmann::ordered_json report;
    std::string summary;
    std::string output; // converter payload in its file format
};

inline nlohmann::ordered_json config_json(const RunConfig& c)
{
    return {{"budget_enum", c.budget_enum},
            {"budget_steps", c.budget_steps},
            {"depth", c.depth},
            {"precision", c.precision},
            {"seed", c.seed}};
}

inline CmdResult base_result(const std::string& command, const RunConfig& cfg)
{
    CmdResult r;
    r.report["schema"] = kSchema;
    r.report["command"] = command;
    r.report["config"] = config_json(cfg);
    return r;
}

inline CmdResult fail(CmdResult r, int code, const std::string& message)
{
    r.exit = code;
    r.report["status"] = code == parse_error ? "parse_error" : code == budget_exhausted ? "budget_exhausted"
                                                                                        : "contract_failure";
    r.report["error"] = message;
    r.summary = std::string(r.report["status"]) + ": " + message;
    return r;
}

inline bool budgets_positive(const RunConfig& c)
{
    return c.budget_enum > 0 && c.budget_steps > 0 && c.depth > 0 && c.precision > 0;
}

// ---------------------------------------------------------------------------
// kleene

inline CmdResult cmd_kleene(const RunConfig& cfg)
{
    CmdResult r = base_result("kleene", cfg);
    if (!budgets_positive(cfg))
        return fail(r, budget_exhausted, "all budgets must be positive");
    kleene::ExperimentConfig ec;
    ec.depth = cfg.depth;
    ec.max_steps = cfg.budget_steps;
    ec.exact_limit = cfg.budget_enum;
    ec.seed = cfg.seed;
    kleene::ExperimentReport rep;
    try {
        rep = kleene::experiment(ec);
    } catch (const BudgetExhausted& e) {
        return fail(r, budget_exhausted, e.what());
    }

    auto& cat = r.report["catalog"] = nlohmann::ordered_json::array();
    std::size_t hits = 0;
    for (const auto& c : rep.catalog) {
        cat.push_back({{"name", c.name},
                       {"e", c.e.str()},
                       {"halted", c.halted},
                       {"z", c.z.str()},
                       {"k", c.k.str()},
                       {"hit_depth", c.hit_depth.str()},
                       {"exact", c.exact},
                       {"verified", c.verified}});
        hits += c.verified;
    }
    auto& av = r.report["avoidance"] = nlohmann::ordered_json::array();
    for (const auto& a : rep.avoidance)
        av.push_back({{"length", a.length}, {"prefix", a.prefix.str()}, {"verified", a.verified}});
    auto& ms = r.report["measures"] = nlohmann::ordered_json::array();
    for (const auto& m : rep.measures) {
        std::vector<std::string> subset;
        for (const auto& s : m.subset)
            subset.push_back(s.str());
        ms.push_back({{"subset", subset}, {"sum", rat_str(m.sum)}, {"bound", rat_str(m.bound)}, {"holds", m.holds}});
    }
    r.report["diverged"] = rep.diverged;
    r.report["catalog_hits"] = hits;
    r.report["all_verified"] = rep.all_verified();
    if (rep.diverged > 0)
        return fail(r, budget_exhausted,
                    std::to_string(rep.diverged) + " catalog programs did not halt within the step budget");
    if (!rep.all_verified())
        return fail(r, contract_failure, "some catalog hit, avoidance or measure check failed");
    r.report["status"] = "ok";
    r.summary = "kleene: " + std::to_string(hits) + " catalog hits, " + std::to_string(rep.avoidance.size()) +
                " avoidances, " + std::to_string(rep.measures.size()) + " measure checks verified";
    return r;
}

// ---------------------------------------------------------------------------
// convert

// Bars: SeqCode decimals or bracketed sequences, separated by whitespace or
// commas.
inline std::vector<FinSeq> parse_bar(const std::string& text)
{
    std::vector<FinSeq> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
            ++i;
        } else if (c == '[') {
            const auto close = text.find(']', i);
            if (close == std::string::npos)
                throw InvalidInput("unterminated sequence in bar");
            out.push_back(FinSeq::parse(text.substr(i, close - i + 1)));
            i = close + 1;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
                ++j;
            out.push_back(decode(SeqCode(parse_nat(text.substr(i, j - i)))));
            i = j;
        } else {
            throw InvalidInput(std::string("unexpected character '") + c + "' in bar");
        }
    }
    return out;
}

inline std::string format_bar(std::vector<FinSeq> bar)
{
    std::vector<Nat> codes;
    for (const auto& s : bar)
        codes.push_back(encode(s).value);
    std::sort(codes.begin(), codes.end());
    std::string out;
    for (const auto& c : codes)
        out += c.str() + "\n";
    return out;
}

inline std::vector<std::string> strs(const std::vector<FinSeq>& xs)
{
    std::vector<std::string> out;
    for (const auto& s : xs)
        out.push_back(s.str());
    return out;
}

namespace detail {

inline FinSeq leaf(std::uint64_t bits, std::size_t len)
{
    FinSeq s;
    for (std::size_t i = 0; i < len; ++i)
        s.push_back((bits >> (len - 1 - i)) & 1);
    return s;
}

// Least n <= length(s) with s-bar(n) in B.
inline std::optional<std::size_t> first_prefix_in(const SeqPredicate& B, const FinSeq& s)
{
    for (std::size_t n = 0; n <= s.size(); ++n)
        if (B(s.prefix(n)))
            return n;
    return std::nullopt;
}

} // namespace detail

inline CmdResult convert_bar(const std::string& kind, const std::vector<FinSeq>& bar, const RunConfig& cfg,
                             CmdResult r)
{
    for (const auto& s : bar)
        if (!s.is_binary())
            throw InvalidInput("bar element " + s.str() + " is not binary");
    std::size_t maxlen = 0;
    for (const auto& s : bar)
        maxlen = std::max(maxlen, s.size());
    const std::set<FinSeq> members(bar.begin(), bar.end());
    const SeqPredicate X = finite_set_predicate(members);
    r.report["input"] = strs(bar);

    // Leaves deep enough that the construction's index bounds are met.
    const std::size_t D = std::max(maxlen, bar.size()) + 1;
    if (D > cfg.depth || D > 22)
        throw BudgetExhausted("verification depth " + std::to_string(D) + " exceeds the depth budget");
    const std::uint64_t leaves = std::uint64_t{1} << D;
    bool input_bars = true;
    for (std::uint64_t b = 0; b < leaves && input_bars; ++b)
        input_bars = detail::first_prefix_in(X, detail::leaf(b, D)).has_value();

    nlohmann::ordered_json appendix;
    appendix["leaf_depth"] = D;
    appendix["input_bars"] = input_bars;
    bool contract = true;

    if (kind == "enum2dec") {
        const SeqPredicate beta = enum_bar_to_dec_bar(finite_enumeration(bar));
        std::vector<FinSeq> minimal;
        bool output_bars = true;
        for (std::uint64_t b = 0; b < leaves; ++b) {
            const FinSeq s = detail::leaf(b, D);
            const auto n = detail::first_prefix_in(beta, s);
            if (!n) {
                output_bars = false;
                continue;
            }
            const FinSeq m = s.prefix(*n);
            if (std::find(minimal.begin(), minimal.end(), m) == minimal.end())
                minimal.push_back(m);
        }
        r.output = format_bar(minimal);
        appendix["output_bars"] = output_bars;
        contract = input_bars == output_bars;
    } else if (kind == "bounded") {
        // Y holds paths through x in X exactly at length code(x).
        nlohmann::ordered_json lengths = nlohmann::ordered_json::array();
        std::string text;
        bool agree = true;
        for (std::uint64_t b = 0; b < leaves; ++b) {
            const FinSeq s = detail::leaf(b, D);
            const auto n = detail::first_prefix_in(X, s);
            if (!n)
                continue;
            const FinSeq x = s.prefix(*n);
            const Nat len = encode(x).value;
            OraclePrefixView view{oracles::from_prefix(s), len};
            agree = agree && bounded_subbar_member(X, view);
        }
        for (const auto& x : bar) {
            lengths.push_back({{"member", x.str()}, {"length", encode(x).value.str()}});
            text += x.str() + " " + encode(x).value.str() + "\n";
        }
        r.output = text;
        appendix["subbar_lengths"] = lengths;
        appendix["paths_hit_at_code_length"] = agree;
        contract = !input_bars || agree;
    } else if (kind == "firsthit") {
        const PartialNFun phi = first_hit_fn(X, fans::cantor(D));
        std::string text;
        for (std::uint64_t k = 0; k < cfg.budget_enum; ++k)
            if (auto e = phi.graph(k))
                text += encode(e->input).value.str() + " " + e->value.str() + "\n";
        r.output = text;
        bool agree = true;
        for (std::uint64_t b = 0; b < leaves && agree; ++b) {
            const FinSeq s = detail::leaf(b, D);
            const auto n = detail::first_prefix_in(X, s);
            if (!n)
                continue;
            const auto res = apply_n(phi, oracles::from_prefix(s), cfg.budget_enum);
            agree = res.value.has_value() && *res.value == Nat(*n);
        }
        appendix["values_match_first_hit"] = agree;
        contract = agree;
    } else if (kind == "dini") {
        if (!input_bars)
            throw PreconditionError("dini needs a bar");
        const FunSequence phi = dini_build(X, fans::cantor(D));
        std::size_t N = 0;
        for (std::uint64_t b = 0; b < leaves; ++b)
            N = std::max(N, *detail::first_prefix_in(X, detail::leaf(b, D)));
        auto positive = [&](std::uint64_t n) {
            std::uint64_t count = 0;
            const PartialNFun f = phi(n);
            for (std::uint64_t k = 0; k < cfg.budget_enum; ++k)
                if (auto e = f.graph(k); e && e->value > 0)
                    ++count;
            return count;
        };
        std::string text;
        for (std::uint64_t n = 0; n <= N; ++n)
            text += std::to_string(n) + " " + std::to_string(positive(n)) + "\n";
        r.output = text;
        appendix["vanishing_level"] = N;
        appendix["zero_at_level"] = positive(N) == 0;
        appendix["positive_before"] = N == 0 || positive(N - 1) > 0;
        contract = positive(N) == 0 && (N == 0 || positive(N - 1) > 0);
    } else if (kind == "bar2cover") {
        const auto Y = bar_to_special(bar);
        r.output = format_special(Y);
        const auto verdict = special_validate(Y, static_cast<unsigned>(std::min<std::uint64_t>(maxlen + 2, 16)));
        const bool round = special_to_bar(parse_special(r.output)) == bar;
        appendix["special_valid"] = verdict.valid;
        if (!verdict.valid)
            appendix["reason"] = verdict.reason;
        appendix["round_trip"] = round;
        contract = round && (verdict.valid || !input_bars);
    } else {
        throw InvalidInput("unknown conversion '" + kind + "'");
    }
    r.report["output"] = r.output;
    r.report["verification"] = appendix;
    if (!contract)
        return fail(r, contract_failure, kind + ": verification appendix does not hold");
    r.report["status"] = "ok";
    r.summary = kind + ": verified on " + std::to_string(leaves) + " leaves of depth " + std::to_string(D);
    return r;
}

inline CmdResult convert_cover(const std::vector<Seg>& Y, const RunConfig&, CmdResult r)
{
    unsigned res = 1;
    for (const auto& s : Y)
        while (den(s.lo) > (Int(1) << res) || den(s.hi) > (Int(1) << res))
            ++res;
    const auto verdict = special_validate(Y, res + 2);
    r.report["input"] = format_special(Y);
    nlohmann::ordered_json appendix;
    appendix["special_valid"] = verdict.valid;
    if (!verdict.valid) {
        appendix["reason"] = verdict.reason;
        r.report["verification"] = appendix;
        return fail(r, contract_failure, "input is not a special covering: " + verdict.reason);
    }
    const auto bar = special_to_bar(Y);
    r.output = format_bar(bar);
    const bool round = bar_to_special(parse_bar(r.output)).size() == Y.size() &&
                       [&] {
                           auto back = bar_to_special(bar);
                           for (std::size_t i = 0; i < Y.size(); ++i)
                               if (back[i].lo != Y[i].lo || back[i].hi != Y[i].hi)
                                   return false;
                           return true;
                       }();
    appendix["round_trip"] = round;
    r.report["output"] = r.output;
    r.report["verification"] = appendix;
    if (!round)
        return fail(r, contract_failure, "cover2bar: round trip differs");
    r.report["status"] = "ok";
    r.summary = "cover2bar: " + std::to_string(bar.size()) + " bar elements";
    return r;
}

inline CmdResult cmd_convert(const std::string& kind, const std::string& input, const RunConfig& cfg)
{
    CmdResult r = base_result("convert", cfg);
    r.report["kind"] = kind;
    if (!budgets_positive(cfg))
        return fail(r, budget_exhausted, "all budgets must be positive");
    static const std::set<std::string> kinds{"enum2dec", "bounded", "firsthit", "dini", "bar2cover", "cover2bar"};
    if (!kinds.count(kind))
        return fail(r, parse_error, "unknown conversion '" + kind + "'");
    try {
        if (kind == "cover2bar") {
            std::vector<Seg> Y;
            try {
                Y = parse_special(input);
            } catch (const InvalidInput& e) {
                return fail(r, parse_error, e.what());
            }
            return convert_cover(Y, cfg, r);
        }
        std::vector<FinSeq> bar;
        try {
            bar = parse_bar(input);
        } catch (const InvalidInput& e) {
            return fail(r, parse_error, e.what());
        }
        return convert_bar(kind, bar, cfg, r);
    } catch (const BudgetExhausted& e) {
        return fail(r, budget_exhausted, e.what());
    } catch (const Error& e) {
        return fail(r, contract_failure, e.what());
    }
}

// ---------------------------------------------------------------------------
// real

namespace detail {

// expr := term (('+' | '-') term)*
// term := unary ('*' unary)*
// unary := '-' unary | primary
// primary := literal | '(' expr ')' | ('sup' | 'inf') '(' expr ',' expr ')' | fixture
// literal := digits ['.' digits] | digits '/' digits
class ExprParser {
public:
    explicit ExprParser(std::string text) : s_(std::move(text)) {}

    Real parse()
    {
        Real x = expr();
        skip();
        if (i_ != s_.size())
            error("unexpected '" + std::string(1, s_[i_]) + "'");
        return x;
    }

private:
    [[noreturn]] void error(const std::string& what) const
    {
        throw InvalidInput("at offset " + std::to_string(i_) + ": " + what);
    }

    void skip()
    {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
            ++i_;
    }

    bool eat(char c)
    {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!eat(c))
            error(std::string("expected '") + c + "'");
    }

    Real expr()
    {
        Real x = term();
        for (;;) {
            if (eat('+'))
                x = x + term();
            else if (eat('-'))
                x = x - term();
            else
                return x;
        }
    }

    Real term()
    {
        Real x = unary();
        for (;;) {
            if (eat('*'))
                x = x * unary();
            else if (peek('/'))
                error("division is only available between integer literals");
            else
                return x;
        }
    }

    bool peek(char c)
    {
        skip();
        return i_ < s_.size() && s_[i_] == c;
    }

    Real unary()
    {
        if (eat('-'))
            return real_from_rat(0) - unary();
        return primary();
    }

    std::string digits()
    {
        std::size_t j = i_;
        while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j])))
            ++j;
        std::string out = s_.substr(i_, j - i_);
        i_ = j;
        return out;
    }

    std::string word()
    {
        std::size_t j = i_;
        while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
            ++j;
        std::string out = s_.substr(i_, j - i_);
        i_ = j;
        return out;
    }

    Real primary()
    {
        skip();
        if (i_ >= s_.size())
            error("unexpected end of expression");
        if (eat('(')) {
            Real x = expr();
            expect(')');
            return x;
        }
        if (std::isdigit(static_cast<unsigned char>(s_[i_]))) {
            std::string lit = digits();
            if (i_ < s_.size() && s_[i_] == '.') {
                ++i_;
                const std::string frac = digits();
                if (frac.empty())
                    error("malformed decimal");
                lit += "." + frac;
            } else if (peek('/')) {
                const std::size_t save = i_;
                eat('/');
                skip();
                const std::string d = digits();
                if (d.empty()) {
                    i_ = save;
                    error("division is only available between integer literals");
                }
                if (parse_nat(d) == 0)
                    error("zero denominator");
                lit += "/" + d;
            }
            return real_from_rat(parse_rat(lit));
        }
        const std::string w = word();
        if (w == "sup" || w == "inf") {
            expect('(');
            Real a = expr();
            expect(',');
            Real b = expr();
            expect(')');
            return w == "sup" ? sup(a, b) : inf(a, b);
        }
        if (w == "cantor_zero") // a^n = -1/(n+1), b^n = 1/(n+1)
            return cantor_intersection(
                RealSeq([](std::uint64_t n) { return real_from_rat(Rat(-1, n + 1)); }),
                RealSeq([](std::uint64_t n) { return real_from_rat(Rat(1, n + 1)); }),
                [](std::uint64_t n) { return std::uint64_t{1} << std::min<std::uint64_t>(n + 1, 62); });
        if (w == "cantor_third") // a^n = (4^n - 1)/(3 4^n), b^n = (4^n + 2)/(3 4^n)
            return cantor_intersection(
                RealSeq([](std::uint64_t n) {
                    const Rat p = pow2(2 * long(n));
                    return real_from_rat((p - 1) / (3 * p));
                }),
                RealSeq([](std::uint64_t n) {
                    const Rat p = pow2(2 * long(n));
                    return real_from_rat((p + 2) / (3 * p));
                }),
                [](std::uint64_t n) { return (n + 1) / 2; });
        if (w.empty())
            error("unexpected '" + std::string(1, s_[i_]) + "'");
        error("unknown name '" + w + "'");
    }

    std::string s_;
    std::size_t i_ = 0;
};

} // namespace detail

inline Real parse_real_expr(const std::string& text) { return detail::ExprParser(text).parse(); }

// Decimal digits d with 10^-d <= 2^-(p+2), so outward rounding keeps the
// printed interval within 2 * 2^-p.
inline unsigned decimal_digits(std::uint64_t p) { return static_cast<unsigned>((p + 2) * 30103 / 100000 + 1); }

inline CmdResult cmd_real(const std::string& text, const RunConfig& cfg)
{
    CmdResult r = base_result("real", cfg);
    r.report["expr"] = text;
    if (!budgets_positive(cfg))
        return fail(r, budget_exhausted, "all budgets must be positive");
    Real x;
    try {
        x = parse_real_expr(text);
    } catch (const InvalidInput& e) {
        return fail(r, parse_error, e.what());
    }
    try {
        const Seg s = x.at(cfg.precision);
        const unsigned d = decimal_digits(cfg.precision);
        r.report["lo"] = decimal_str(s.lo, d, false);
        r.report["hi"] = decimal_str(s.hi, d, true);
        r.report["lo_exact"] = rat_str(s.lo);
        r.report["hi_exact"] = rat_str(s.hi);
        r.report["status"] = "ok";
        r.summary = "[" + std::string(r.report["lo"]) + ", " + std::string(r.report["hi"]) + "]";
    } catch (const BudgetExhausted& e) {
        return fail(r, budget_exhausted, e.what());
    } catch (const Error& e) {
        return fail(r, contract_failure, e.what());
    }
    return r;
}

} // namespace fanlab::cli
