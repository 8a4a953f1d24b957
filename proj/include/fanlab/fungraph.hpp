#pragma once

// Enumerable partial continuous functions N^N -> N and N^N -> N^N, presented
// by enumerations of graph entries <a, value>.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fanlab/streams.hpp"

namespace fanlab {

struct NEntry {
    FinSeq input;
    Nat value;
    friend bool operator==(const NEntry&, const NEntry&) = default;
};

struct SEntry {
    FinSeq input;
    FinSeq output;
    friend bool operator==(const SEntry&, const SEntry&) = default;
};

// Partial continuous function from Baire space to N.
struct PartialNFun {
    Enumeration<NEntry> graph;
};

// Partial continuous function from Baire space to Baire space.
struct PartialSeqFun {
    Enumeration<SEntry> graph;
};

// Does alpha pass through s?
inline bool passes_through(const SeqOracle& alpha, const FinSeq& s)
{
    for (std::size_t i = 0; i < s.size(); ++i)
        if (alpha(i) != s[i])
            return false;
    return true;
}

struct ApplyCertificate {
    std::uint64_t entry_index = 0;
    std::size_t prefix_length = 0;
};

struct NApplyResult {
    std::optional<Nat> value;
    std::optional<ApplyCertificate> certificate;
    std::uint64_t consumed = 0;
    bool timed_out() const { return !value.has_value(); }
};

// Least-index search for an entry <alpha-bar(n), p>.
inline NApplyResult apply_n(const PartialNFun& X, const SeqOracle& alpha, std::uint64_t budget)
{
    std::vector<std::pair<std::uint64_t, NEntry>> seen;
    for (std::uint64_t p = 0; p < budget; ++p) {
        auto e = X.graph(p);
        if (!e)
            continue;
        if (passes_through(alpha, e->input)) {
            for (const auto& [q, other] : seen) {
                const bool comparable = other.input.is_initial_of(e->input) || e->input.is_initial_of(other.input);
                if (comparable && other.value != e->value)
                    throw CorruptGraph("entries " + std::to_string(q) + " and " + std::to_string(p) +
                                       " have comparable inputs and values " + other.value.str() + ", " + e->value.str());
            }
            return {e->value, ApplyCertificate{p, e->input.size()}, p + 1};
        }
        seen.emplace_back(p, *e);
    }
    return {std::nullopt, std::nullopt, budget};
}

// Lazy image X|alpha. Querying index n searches for an entry whose input alpha
// passes through and whose output is longer than n.
inline SeqOracle apply_seq(const PartialSeqFun& X, const SeqOracle& alpha, std::uint64_t budget)
{
    return SeqOracle([X, alpha, budget](std::uint64_t n) -> Nat {
        for (std::uint64_t p = 0; p < budget; ++p) {
            auto e = X.graph(p);
            if (e && e->output.size() > n && passes_through(alpha, e->input))
                return e->output[n];
        }
        throw BudgetExhausted("apply_seq: no graph entry determines index " + std::to_string(n) +
                              " within " + std::to_string(budget) + " entries");
    });
}

struct ConsistencyViolation {
    std::uint64_t first;
    std::uint64_t second;
};

// Pairwise consistency of the first `budget` entries.
inline std::optional<ConsistencyViolation> check_consistency(const PartialNFun& X, std::uint64_t budget)
{
    std::vector<std::pair<std::uint64_t, NEntry>> es;
    for (std::uint64_t p = 0; p < budget; ++p)
        if (auto e = X.graph(p))
            es.emplace_back(p, *e);
    for (std::size_t i = 0; i < es.size(); ++i)
        for (std::size_t j = i + 1; j < es.size(); ++j) {
            const auto& a = es[i].second;
            const auto& b = es[j].second;
            if ((a.input.is_initial_of(b.input) || b.input.is_initial_of(a.input)) && a.value != b.value)
                return ConsistencyViolation{es[i].first, es[j].first};
        }
    return std::nullopt;
}

// Coherence: comparable inputs have comparable outputs.
inline std::optional<ConsistencyViolation> check_coherence(const PartialSeqFun& X, std::uint64_t budget)
{
    std::vector<std::pair<std::uint64_t, SEntry>> es;
    for (std::uint64_t p = 0; p < budget; ++p)
        if (auto e = X.graph(p))
            es.emplace_back(p, *e);
    for (std::size_t i = 0; i < es.size(); ++i)
        for (std::size_t j = i + 1; j < es.size(); ++j) {
            const auto& a = es[i].second;
            const auto& b = es[j].second;
            if ((a.input.is_initial_of(b.input) || b.input.is_initial_of(a.input)) &&
                incompatible(a.output, b.output))
                return ConsistencyViolation{es[i].first, es[j].first};
        }
    return std::nullopt;
}

// Head adapter: { <s, n> : <s, <n> * t> in X }.
inline PartialNFun head(const PartialSeqFun& X)
{
    return {Enumeration<NEntry>([X](std::uint64_t p) -> std::optional<NEntry> {
        auto e = X.graph(p);
        if (!e || e->output.empty())
            return std::nullopt;
        return NEntry{e->input, e->output[0]};
    })};
}

// Pad adapter: { <s, <n> * 0-bar(q)> : <s, n> in X }, dovetailed over (p, q).
inline PartialSeqFun pad(const PartialNFun& X)
{
    return {Enumeration<SEntry>([X](std::uint64_t k) -> std::optional<SEntry> {
        auto [p, q] = unpair_index(k);
        auto e = X.graph(p);
        if (!e)
            return std::nullopt;
        FinSeq out{};
        out.push_back(e->value);
        for (std::uint64_t i = 0; i < q; ++i)
            out.push_back(0);
        return SEntry{e->input, out};
    })};
}

inline PartialNFun finite_nfun(std::vector<NEntry> entries) { return {finite_enumeration(std::move(entries))}; }
inline PartialSeqFun finite_seqfun(std::vector<SEntry> entries) { return {finite_enumeration(std::move(entries))}; }

} // namespace fanlab
