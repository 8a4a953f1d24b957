#pragma once

// A register machine realizing T and U, Kleene's bars B, C, D over binary
// sequences, and the construction that avoids any finite part of B.
//
// Instruction codes: HALT = 0, INC r = 1 + 2r, DECJZ r l = 2 + 2 J(r, l).
// A program is the sequence code of its instruction codes, so every natural
// is a program. Input goes in register 1; the output is register 0 at halt.
// Running off the end halts. A program with a jump beyond its length halts
// at once with output 0.
//
// The trace of a halting run is <pc_0, ..., pc_k, output>. The program and
// input determine every register state from the pc history, so this is the
// configuration sequence in compressed form.

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "fanlab/rat.hpp"
#include "fanlab/seqcode.hpp"

namespace fanlab::kleene {

enum class Op { halt, inc, decjz };

struct Instr {
    Op op = Op::halt;
    Nat r = 0;
    Nat l = 0;
    friend bool operator==(const Instr&, const Instr&) = default;
};

inline Nat instr_code(const Instr& i)
{
    switch (i.op) {
    case Op::halt:
        return 0;
    case Op::inc:
        return 1 + 2 * i.r;
    case Op::decjz:
        return 2 + 2 * pair(i.r, i.l);
    }
    return 0;
}

inline Instr instr_decode(const Nat& c)
{
    if (c == 0)
        return {Op::halt, 0, 0};
    if (c % 2 == 1)
        return {Op::inc, (c - 1) / 2, 0};
    const Pair p = unpair((c - 2) / 2);
    return {Op::decjz, p.left, p.right};
}

class Program {
public:
    Program() = default;
    explicit Program(std::vector<Instr> instrs) : instrs_(std::move(instrs)) {}

    static Program from_code(const Nat& e)
    {
        std::vector<Instr> out;
        for (const Nat& c : decode(SeqCode(e)))
            out.push_back(instr_decode(c));
        return Program(std::move(out));
    }

    // One instruction per line: INC r | DECJZ r l | HALT. Blank lines and
    // text after '#' are ignored.
    static Program parse(const std::string& text)
    {
        std::vector<Instr> out;
        std::istringstream in(text);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto h = line.find('#'); h != std::string::npos)
                line.resize(h);
            std::istringstream ls(line);
            std::string op;
            if (!(ls >> op))
                continue;
            std::vector<std::string> args;
            for (std::string a; ls >> a;)
                args.push_back(a);
            auto num = [&](const std::string& a) {
                if (a.empty() || !std::all_of(a.begin(), a.end(), [](char c) { return c >= '0' && c <= '9'; }))
                    throw InvalidInput("line " + std::to_string(lineno) + ": bad operand '" + a + "'");
                return Nat(a);
            };
            if (op == "HALT" && args.empty())
                out.push_back({Op::halt, 0, 0});
            else if (op == "INC" && args.size() == 1)
                out.push_back({Op::inc, num(args[0]), 0});
            else if (op == "DECJZ" && args.size() == 2)
                out.push_back({Op::decjz, num(args[0]), num(args[1])});
            else
                throw InvalidInput("line " + std::to_string(lineno) + ": cannot parse '" + line + "'");
        }
        return Program(std::move(out));
    }

    Nat code() const
    {
        FinSeq codes;
        for (const auto& i : instrs_)
            codes.push_back(instr_code(i));
        return encode(codes).value;
    }

    bool valid() const
    {
        const Nat limit = std::numeric_limits<std::uint64_t>::max();
        return std::all_of(instrs_.begin(), instrs_.end(), [&](const Instr& i) {
            return i.r <= limit && (i.op != Op::decjz || i.l <= instrs_.size());
        });
    }

    const std::vector<Instr>& instrs() const { return instrs_; }

    std::string str() const
    {
        std::string out;
        for (const auto& i : instrs_) {
            switch (i.op) {
            case Op::halt:
                out += "HALT\n";
                break;
            case Op::inc:
                out += "INC " + i.r.str() + "\n";
                break;
            case Op::decjz:
                out += "DECJZ " + i.r.str() + " " + i.l.str() + "\n";
                break;
            }
        }
        return out;
    }

private:
    std::vector<Instr> instrs_;
};

struct Run {
    bool halted = false;
    Nat output = 0;
    std::uint64_t steps = 0;
    std::vector<std::uint64_t> pcs; // pc of every configuration visited
};

inline Run run_bounded(const Program& prog, const Nat& n, std::uint64_t max_steps)
{
    Run run;
    if (!prog.valid()) {
        run.halted = true;
        run.pcs = {0};
        return run;
    }
    const auto& code = prog.instrs();
    std::unordered_map<std::uint64_t, Nat> regs;
    regs[1] = n;
    std::uint64_t pc = 0;
    run.pcs.push_back(pc);
    while (true) {
        if (pc >= code.size() || code[pc].op == Op::halt) {
            run.halted = true;
            run.output = regs[0];
            return run;
        }
        if (run.steps >= max_steps)
            return run;
        const Instr& in = code[pc];
        const auto r = in.r.convert_to<std::uint64_t>();
        if (in.op == Op::inc) {
            regs[r] += 1;
            ++pc;
        } else {
            Nat& v = regs[r];
            if (v == 0)
                pc = in.l.convert_to<std::uint64_t>();
            else {
                v -= 1;
                ++pc;
            }
        }
        ++run.steps;
        run.pcs.push_back(pc);
    }
}

inline Run run_bounded(const Nat& e, const Nat& n, std::uint64_t max_steps)
{
    return run_bounded(Program::from_code(e), n, max_steps);
}

inline FinSeq trace_seq(const Run& run)
{
    FinSeq t;
    for (auto pc : run.pcs)
        t.push_back(pc);
    t.push_back(run.output);
    return t;
}

// Canonical trace code of a run that halts within max_steps.
inline std::optional<Nat> canonical_trace(const Nat& e, const Nat& n, std::uint64_t max_steps)
{
    Run run = run_bounded(e, n, max_steps);
    if (!run.halted)
        return std::nullopt;
    return encode(trace_seq(run)).value;
}

// T(e, n, z): z is the canonical halting trace of e on n.
inline bool T(const Nat& e, const Nat& n, const Nat& z)
{
    const std::size_t len = length_code(SeqCode(z));
    if (len < 2)
        return false;
    Run run = run_bounded(e, n, len - 2);
    return run.halted && run.pcs.size() + 1 == len && encode(trace_seq(run)).value == z;
}

inline Nat U(const Nat& z)
{
    FinSeq s = decode(SeqCode(z));
    return s.empty() ? Nat(0) : s.back();
}

// Steps after which every trace code is at least n: a trace of k steps has
// k+2 items, so its code is at least p(k+1) - 1.
inline std::uint64_t steps_below(const Nat& n)
{
    std::uint64_t k = 0;
    while (Nat(prime(k + 1)) - 1 < n)
        ++k;
    return k;
}

// Canonical trace codes z < bound of e on n, memoized per (e, n).
class TraceTable {
public:
    std::optional<Nat> trace_below(const Nat& e, const Nat& n, const Nat& bound)
    {
        const std::uint64_t steps = steps_below(bound);
        const auto key = std::make_pair(e, n);
        std::optional<Entry> known;
        {
            std::lock_guard lock(mu_);
            if (auto it = memo_.find(key); it != memo_.end())
                known = it->second;
        }
        if (!known || (!known->z && known->steps < steps)) {
            known = Entry{canonical_trace(e, n, steps), steps};
            std::lock_guard lock(mu_);
            auto& slot = memo_[key];
            if (known->z || slot.steps < steps)
                slot = *known;
        }
        if (known->z && *known->z < bound)
            return known->z;
        return std::nullopt;
    }

    static TraceTable& global()
    {
        static TraceTable t;
        return t;
    }

private:
    struct Entry {
        std::optional<Nat> z; // set once the run is known to halt
        std::uint64_t steps = 0;
    };
    std::mutex mu_;
    std::map<std::pair<Nat, Nat>, Entry> memo_;
};

inline void require_binary(const FinSeq& s)
{
    if (!s.is_binary())
        throw InvalidInput("binary sequence expected, got " + s.str());
}

// s in B iff T(j,j,z) and s(j) = U(z) for some j, z < length(s).
inline bool bar_B(const FinSeq& s)
{
    require_binary(s);
    const Nat n = s.size();
    for (std::size_t j = 0; j < s.size(); ++j)
        if (auto z = TraceTable::global().trace_below(Nat(j), Nat(j), n); z && U(*z) == s[j])
            return true;
    return false;
}

// K_i = { j < bound : T(j,j,z) and U(z) = i for some z < bound }.
inline std::set<Nat> k_sets(unsigned i, std::uint64_t bound)
{
    if (i > 1)
        throw PreconditionError("k_sets index must be 0 or 1");
    std::set<Nat> out;
    for (std::uint64_t j = 0; j < bound; ++j)
        if (auto z = TraceTable::global().trace_below(Nat(j), Nat(j), Nat(bound)); z && U(*z) == i)
            out.insert(Nat(j));
    return out;
}

// Length-n binary sequence with s(j) = 1 - U(z), clamped, where T(j,j,z), z < n.
inline FinSeq avoid_finite(std::size_t n)
{
    FinSeq s;
    for (std::size_t j = 0; j < n; ++j) {
        auto z = TraceTable::global().trace_below(Nat(j), Nat(j), Nat(n));
        s.push_back(z && U(*z) == 0 ? 1 : 0);
    }
    return s;
}

enum class Membership { found, absent, unknown };

// C: s = (s(0..n)) with T(n,j,z), U(z) = s(j) for all j <= n. Semi-decided.
inline Membership bar_C(const FinSeq& s, std::uint64_t max_steps)
{
    require_binary(s);
    if (s.empty())
        return Membership::absent;
    const Nat n = s.size() - 1;
    const Program prog = Program::from_code(n);
    bool all = true;
    for (std::size_t j = 0; j < s.size(); ++j) {
        Run run = run_bounded(prog, Nat(j), max_steps);
        if (!run.halted)
            all = false;
        else if (run.output != s[j])
            return Membership::absent;
    }
    return all ? Membership::found : Membership::unknown;
}

// D: some n <= length(s)-1 with T(n,j,z), z < length(s), U(z) = s(j) for all j <= n.
inline bool bar_D(const FinSeq& s)
{
    require_binary(s);
    if (s.empty())
        throw PreconditionError("bar_D is defined on sequences of positive length");
    const Nat L = s.size();
    for (std::size_t n = 0; n < s.size(); ++n) {
        bool ok = true;
        for (std::size_t j = 0; j <= n && ok; ++j) {
            auto z = TraceTable::global().trace_below(Nat(n), Nat(j), L);
            ok = z && U(*z) == s[j];
        }
        if (ok)
            return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Experiment

struct CatalogProgram {
    std::string name;
    Program program;
};

// Programs that halt in a bounded number of steps on every input and output 0 or 1.
inline std::vector<CatalogProgram> catalog()
{
    auto P = [](const char* text) { return Program::parse(text); };
    return {
        {"empty", P("")},
        {"halt", P("HALT")},
        {"halt2", P("HALT\nHALT")},
        {"one", P("INC 0")},
        {"halt3", P("HALT\nHALT\nHALT")},
        {"one_halt", P("INC 0\nHALT")},
        {"halt_one", P("HALT\nINC 0")},
        {"one_halt2", P("INC 0\nHALT\nHALT")},
        {"positive", P("DECJZ 1 2\nINC 0")},
        {"is_zero", P("DECJZ 1 2\nHALT\nINC 0")},
        {"at_least_two", P("DECJZ 1 4\nDECJZ 1 4\nINC 0\nHALT")},
        {"is_one", P("DECJZ 1 4\nDECJZ 1 3\nHALT\nINC 0")},
    };
}

struct CatalogResult {
    std::string name;
    Nat e;
    bool halted = false;
    Nat z;
    Nat k;                      // max(e, z)
    Nat hit_depth;              // least n with alpha-bar(n) in B, or k+1 via the witness
    bool exact = false;         // hit depth found by scanning every prefix
    bool verified = false;      // hit_depth <= k+1 and the witness checks out
};

struct AvoidanceResult {
    std::size_t length = 0;
    FinSeq prefix;
    bool verified = false; // no initial part of prefix lies in B
};

struct MeasureResult {
    std::vector<FinSeq> subset;
    Rat sum;   // sum of 2^-length(s) over the subset
    Rat bound; // 1 - 2^-k, k = subset size
    bool holds = false;
};

struct ExperimentConfig {
    std::size_t catalog_size = 12;      // first entries of catalog()
    std::size_t depth = 32;             // avoidance lengths 0..depth
    std::uint64_t max_steps = 10'000;   // per machine run
    std::uint64_t exact_limit = 2'048;  // scan every prefix when k+1 is at most this
    std::uint64_t seed = 1;
    std::size_t measure_subsets = 8;
    std::size_t harvest_exhaustive = 10; // all binary strings up to this length
    std::size_t harvest_samples = 64;    // random strings of length harvest_length
    std::size_t harvest_length = 80;
};

struct ExperimentReport {
    std::vector<CatalogResult> catalog;
    std::vector<AvoidanceResult> avoidance;
    std::vector<MeasureResult> measures;
    std::size_t diverged = 0;

    bool all_verified() const
    {
        return diverged == 0 &&
               std::all_of(catalog.begin(), catalog.end(), [](const auto& c) { return c.verified; }) &&
               std::all_of(avoidance.begin(), avoidance.end(), [](const auto& a) { return a.verified; }) &&
               std::all_of(measures.begin(), measures.end(), [](const auto& m) { return m.holds; });
    }
};

inline CatalogResult run_catalog_entry(const CatalogProgram& cp, const ExperimentConfig& cfg)
{
    CatalogResult r;
    r.name = cp.name;
    r.e = cp.program.code();
    Run run = run_bounded(cp.program, r.e, cfg.max_steps);
    if (!run.halted)
        return r;
    r.halted = true;
    r.z = encode(trace_seq(run)).value;
    r.k = std::max(r.e, r.z);
    if (r.k + 1 <= cfg.exact_limit) {
        const auto limit = (r.k + 1).convert_to<std::size_t>();
        FinSeq s;
        for (std::size_t n = 0; n <= limit; ++n) {
            if (n > 0) {
                Run v = run_bounded(cp.program, Nat(n - 1), cfg.max_steps);
                if (!v.halted)
                    return r;
                s.push_back(v.output);
            }
            if (s.is_binary() && bar_B(s)) {
                r.hit_depth = n;
                r.exact = true;
                r.verified = n <= limit;
                return r;
            }
        }
        return r;
    }
    // alpha-bar(k+1) lies in B through j = e and z: T(e,e,z) and alpha(e) = U(z).
    r.hit_depth = r.k + 1;
    r.verified = T(r.e, r.e, r.z) && U(r.z) == run.output && run.output < 2;
    return r;
}

// Shortest prefix of s in D, if any.
inline std::optional<FinSeq> shortest_in_D(const FinSeq& s)
{
    for (std::size_t n = 1; n <= s.size(); ++n)
        if (bar_D(s.prefix(n)))
            return s.prefix(n);
    return std::nullopt;
}

// Pairwise incompatible elements of D found by exhaustive and seeded search.
inline std::vector<FinSeq> harvest_D_antichain(const ExperimentConfig& cfg, std::mt19937_64& rng)
{
    std::set<FinSeq> minimal;
    for (std::size_t len = 1; len <= cfg.harvest_exhaustive; ++len)
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << len); ++bits) {
            FinSeq s;
            for (std::size_t i = 0; i < len; ++i)
                s.push_back((bits >> (len - 1 - i)) & 1);
            if (auto m = shortest_in_D(s))
                minimal.insert(*m);
        }
    for (std::size_t k = 0; k < cfg.harvest_samples; ++k) {
        FinSeq s;
        for (std::size_t i = 0; i < cfg.harvest_length; ++i)
            s.push_back(rng() & 1);
        if (auto m = shortest_in_D(s))
            minimal.insert(*m);
    }
    std::vector<FinSeq> sorted(minimal.begin(), minimal.end()); // ordered by length first
    std::vector<FinSeq> chain;
    for (const auto& s : sorted)
        if (std::none_of(chain.begin(), chain.end(), [&](const FinSeq& t) { return t.is_initial_of(s); }))
            chain.push_back(s);
    return chain;
}

inline MeasureResult measure_bound(std::vector<FinSeq> subset)
{
    MeasureResult m;
    m.subset = std::move(subset);
    m.sum = 0;
    for (const auto& s : m.subset)
        m.sum += pow2(-static_cast<long>(s.size()));
    m.bound = Rat(1) - pow2(-static_cast<long>(m.subset.size()));
    m.holds = m.sum <= m.bound;
    return m;
}

inline ExperimentReport experiment(const ExperimentConfig& cfg)
{
    ExperimentReport rep;
    auto progs = catalog();
    progs.resize(std::min(progs.size(), cfg.catalog_size));
    for (const auto& cp : progs) {
        rep.catalog.push_back(run_catalog_entry(cp, cfg));
        if (!rep.catalog.back().halted)
            ++rep.diverged;
    }
    for (std::size_t m = 0; m <= cfg.depth; ++m) {
        AvoidanceResult a{m, avoid_finite(m), true};
        for (std::size_t i = 0; i <= m && a.verified; ++i)
            a.verified = !bar_B(a.prefix.prefix(i));
        rep.avoidance.push_back(std::move(a));
    }
    std::mt19937_64 rng(cfg.seed);
    const auto chain = harvest_D_antichain(cfg, rng);
    if (!chain.empty()) {
        rep.measures.push_back(measure_bound(chain));
        for (std::size_t k = 1; k < cfg.measure_subsets; ++k) {
            std::vector<FinSeq> sub;
            for (const auto& s : chain)
                if (rng() & 1)
                    sub.push_back(s);
            if (sub.empty())
                sub.push_back(chain[rng() % chain.size()]);
            rep.measures.push_back(measure_bound(std::move(sub)));
        }
    }
    return rep;
}

} // namespace fanlab::kleene
