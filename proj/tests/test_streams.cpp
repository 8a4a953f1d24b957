#include <gtest/gtest.h>

#include <random>

#include "fanlab/streams.hpp"

using namespace fanlab;

TEST(OraclePrefix, Codes)
{
    EXPECT_EQ(oracle_prefix(oracles::identity(), 0).value, 0);
    EXPECT_EQ(oracle_prefix(oracles::zero(), 3), encode(FinSeq{0, 0, 0}));
    EXPECT_EQ(oracle_prefix(oracles::identity(), 2), encode(FinSeq{0, 1}));
}

TEST(Project, UsesPairing)
{
    const SeqOracle z = project(oracles::zero(), 4);
    for (std::uint64_t m = 0; m <= 50; ++m)
        EXPECT_EQ(z(m), 0);
    EXPECT_EQ(project(oracles::identity(), 0)(0), 0);
    EXPECT_EQ(project(oracles::identity(), 1)(0), 2);
    EXPECT_EQ(project(oracles::identity(), 2)(3), pair(2, 3));
}

TEST(Truncate, DecidableAndEnumerable)
{
    EXPECT_TRUE(dec_truncate(oracles::identity(), 0).empty());
    const SeqOracle evens([](std::uint64_t n) { return Nat(n % 2 == 0 ? 1 : 0); });
    EXPECT_EQ(dec_truncate(evens, 5), (std::set<Nat>{0, 2, 4}));
    const SeqOracle succ([](std::uint64_t m) { return Nat(m + 1); });
    EXPECT_EQ(enum_truncate(succ, 3), (std::set<Nat>{0, 1, 2}));
}

TEST(EnumMember, SemiDecision)
{
    const EnumerableSet succ(SeqOracle([](std::uint64_t m) { return Nat(m + 1); }));
    EXPECT_EQ(enum_member_within(succ, 3, 0), Semi::unknown);
    EXPECT_EQ(enum_member_within(succ, 7, 8), Semi::found);
    EXPECT_EQ(enum_member_within(succ, 7, 7), Semi::unknown);
    const EnumerableSet empty(oracles::zero());
    EXPECT_EQ(enum_member_within(empty, 0, 100), Semi::unknown);
}

TEST(Oracle, MemoIsTransparent)
{
    std::mt19937_64 rng(7);
    int calls = 0;
    const SeqOracle raw([&calls](std::uint64_t n) {
        ++calls;
        return Nat(n * n + 3);
    });
    for (int i = 0; i < 500; ++i) {
        const std::uint64_t n = rng() % 60;
        ASSERT_EQ(raw(n), Nat(n * n + 3));
    }
    EXPECT_LE(calls, 60);
}

TEST(Oracle, TraceGrowsMonotonically)
{
    const SeqOracle a = oracles::periodic({1, 2, 3});
    std::set<std::uint64_t> before;
    for (std::uint64_t n : {5u, 2u, 9u, 2u, 0u}) {
        a(n);
        const auto now = a.trace();
        EXPECT_TRUE(std::includes(now.begin(), now.end(), before.begin(), before.end()));
        before = now;
    }
    EXPECT_EQ(a.queried_extent(), 10u);
    EXPECT_EQ(a(4), 2);
}

TEST(Oracle, OutputDependsOnQueriedPrefixOnly)
{
    // A functional reading alpha-bar(n): changing alpha beyond the trace leaves it unchanged.
    const SeqOracle a = oracles::table({4, 1, 5}, 9);
    const FinSeq s = oracle_seq(a, 3);
    const auto extent = a.queried_extent();
    const SeqOracle b = oracles::splice(oracle_seq(a, extent), oracles::constant(42));
    EXPECT_EQ(oracle_seq(b, 3), s);
}

TEST(Builders, TablesPeriodicSplice)
{
    const SeqOracle t = oracles::table({7, 8}, 1);
    EXPECT_EQ(oracle_seq(t, 4), (FinSeq{7, 8, 1, 1}));
    EXPECT_EQ(oracle_seq(oracles::periodic({0, 1}), 5), (FinSeq{0, 1, 0, 1, 0}));
    EXPECT_EQ(oracle_seq(oracles::splice(FinSeq{3}, oracles::identity()), 3), (FinSeq{3, 0, 1}));
    EXPECT_EQ(oracle_seq(oracles::from_prefix(FinSeq{2, 2}), 3), (FinSeq{2, 2, 0}));
}

TEST(DecidableSet, InducesEnumerableWithSameTruncations)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        std::set<std::uint64_t> members;
        for (int i = 0; i < 8; ++i)
            members.insert(rng() % 40);
        const DecidableSet d(SeqOracle([members](std::uint64_t n) { return Nat(members.count(n) ? 1 : 0); }));
        const EnumerableSet e = as_enumerable(d);
        ASSERT_EQ(enum_truncate(e.en(), 40), dec_truncate(d.chi(), 40));
        for (std::uint64_t k = 0; k < 40; ++k)
            ASSERT_EQ(enum_member_within(e, k, 40) == Semi::found, d.contains(k));
    }
}

TEST(DecidableSet, RejectsNonCharacteristicValues)
{
    const DecidableSet d(oracles::constant(2));
    EXPECT_THROW(d.contains(0), PreconditionError);
}

TEST(Enumerations, CodeAndStructuredViewsAgree)
{
    const auto e = finite_enumeration(std::vector<FinSeq>{{1, 0}, {}, {2}});
    const EnumerableSet codes = as_code_enumeration(e);
    EXPECT_EQ(enum_truncate(codes.en(), 5), (std::set<Nat>{5, 0, 7}));
    const auto back = as_seq_enumeration(codes);
    EXPECT_EQ(collect(back, 5), (std::vector<FinSeq>{{1, 0}, {}, {2}}));
    const SeqPredicate p = finite_set_predicate({FinSeq{1, 0}});
    EXPECT_TRUE(as_predicate(as_decidable(p))(FinSeq{1, 0}));
    EXPECT_FALSE(as_predicate(as_decidable(p))(FinSeq{1}));
}
