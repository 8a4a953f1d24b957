#include <gtest/gtest.h>

#include "fanlab/cli.hpp"

using namespace fanlab;
using namespace fanlab::cli;

namespace {

RunConfig zeroed(std::uint64_t RunConfig::*field)
{
    RunConfig c;
    c.*field = 0;
    return c;
}

Seg printed_interval(const CmdResult& r)
{
    return Seg(parse_rat(r.report["lo"].get<std::string>()), parse_rat(r.report["hi"].get<std::string>()));
}

} // namespace

TEST(CliKleene, DefaultRunVerifies)
{
    const auto r = cmd_kleene(RunConfig{});
    EXPECT_EQ(r.exit, ok) << r.summary;
    EXPECT_EQ(r.report["schema"], kSchema);
    EXPECT_GE(r.report["catalog_hits"].get<std::size_t>(), 10u);
    EXPECT_TRUE(r.report["all_verified"].get<bool>());
    EXPECT_GE(r.report["measures"].size(), 5u);
}

TEST(CliKleene, FixedSeedIsByteIdentical)
{
    RunConfig c;
    c.seed = 42;
    EXPECT_EQ(cmd_kleene(c).report.dump(2), cmd_kleene(c).report.dump(2));
}

TEST(CliKleene, BudgetsExitDistinctly)
{
    for (auto field : {&RunConfig::budget_enum, &RunConfig::budget_steps, &RunConfig::depth, &RunConfig::precision})
        EXPECT_EQ(cmd_kleene(zeroed(field)).exit, budget_exhausted);
    RunConfig tight;
    tight.budget_steps = 1;
    const auto r = cmd_kleene(tight);
    EXPECT_EQ(r.exit, budget_exhausted);
    EXPECT_GT(r.report["diverged"].get<std::size_t>(), 0u);
}

TEST(CliConvert, ParseBar)
{
    EXPECT_EQ(parse_bar("08"), (std::vector<FinSeq>{FinSeq{0, 1}}));
    EXPECT_EQ(parse_bar("2, 5\n[0, 1] [1,1]"), (std::vector<FinSeq>{FinSeq{0, 0}, FinSeq{1, 0}, FinSeq{0, 1}, FinSeq{1, 1}}));
    EXPECT_TRUE(parse_bar(" \n").empty());
    EXPECT_THROW(parse_bar("[0, 1"), InvalidInput);
    EXPECT_THROW(parse_bar("x"), InvalidInput);
    EXPECT_EQ(format_bar({FinSeq{1, 1}, FinSeq{0, 0}}), "2\n17\n");
}

TEST(CliConvert, BarToCoverQuarters)
{
    const auto r = cmd_convert("bar2cover", "[0,0] [0,1] [1,0] [1,1]", RunConfig{});
    ASSERT_EQ(r.exit, ok) << r.summary;
    EXPECT_EQ(parse_special(r.output), (std::vector<Seg>{Seg(0, make_rat(1, 4)), Seg(make_rat(1, 4), make_rat(1, 2)),
                                                         Seg(make_rat(1, 2), make_rat(3, 4)), Seg(make_rat(3, 4), 1)}));
    EXPECT_TRUE(r.report["verification"]["special_valid"].get<bool>());
    EXPECT_TRUE(r.report["verification"]["round_trip"].get<bool>());
    const auto back = cmd_convert("cover2bar", r.output, RunConfig{});
    ASSERT_EQ(back.exit, ok) << back.summary;
    EXPECT_EQ(back.output, "2\n5\n8\n17\n");
}

TEST(CliConvert, RoundTripOnFixtures)
{
    for (const char* bar : {"[0] [1,0] [1,1]", "[]", "[0,0] [0,1,0] [0,1,1] [1]"}) {
        const auto there = cmd_convert("bar2cover", bar, RunConfig{});
        ASSERT_EQ(there.exit, ok) << there.summary;
        const auto back = cmd_convert("cover2bar", there.output, RunConfig{});
        ASSERT_EQ(back.exit, ok) << back.summary;
        auto in = parse_bar(bar), out = parse_bar(back.output);
        std::sort(in.begin(), in.end());
        std::sort(out.begin(), out.end());
        EXPECT_EQ(in, out) << bar;
    }
}

TEST(CliConvert, BarConvertersVerify)
{
    for (const char* kind : {"enum2dec", "bounded", "firsthit", "dini"}) {
        const auto r = cmd_convert(kind, "[0] [1,0] [1,1]", RunConfig{});
        EXPECT_EQ(r.exit, ok) << kind << ": " << r.summary;
        EXPECT_TRUE(r.report["verification"]["input_bars"].get<bool>());
    }
    const auto d = cmd_convert("dini", "[0] [1,0] [1,1]", RunConfig{});
    EXPECT_EQ(d.report["verification"]["vanishing_level"], 2);
    const auto e = cmd_convert("enum2dec", "[0] [1,0] [1,1]", RunConfig{});
    EXPECT_TRUE(e.report["verification"]["output_bars"].get<bool>());
}

TEST(CliConvert, FailuresAreDistinguished)
{
    EXPECT_EQ(cmd_convert("bar2cover", "[0, 1", RunConfig{}).exit, parse_error);
    EXPECT_EQ(cmd_convert("cover2bar", "[0, 1/2\n", RunConfig{}).exit, parse_error);
    EXPECT_EQ(cmd_convert("nonsense", "[0]", RunConfig{}).exit, parse_error);
    EXPECT_EQ(cmd_convert("cover2bar", "[0, 3/4]\n[1/4, 1]\n", RunConfig{}).exit, contract_failure);
    EXPECT_EQ(cmd_convert("bar2cover", "[0] [0,1] [1]", RunConfig{}).exit, contract_failure);
    EXPECT_EQ(cmd_convert("dini", "[0]", RunConfig{}).exit, contract_failure);
    // Well-formed but not a binary sequence: the converter's domain is violated.
    EXPECT_EQ(cmd_convert("bar2cover", "[2]", RunConfig{}).exit, contract_failure);
    EXPECT_EQ(cmd_convert("bar2cover", "[0] [1]", zeroed(&RunConfig::depth)).exit, budget_exhausted);
}

TEST(CliReal, Examples)
{
    RunConfig c;
    c.precision = 20;
    const auto five = cmd_real("(2+3)*(0-1)", c);
    ASSERT_EQ(five.exit, ok) << five.summary;
    const Seg s = printed_interval(five);
    EXPECT_TRUE(s.contains_rat(-5));
    EXPECT_LE(s.length(), pow2(-19));
    const auto third = cmd_real("sup(1/3, 1/4)", c);
    EXPECT_TRUE(printed_interval(third).contains_rat(make_rat(1, 3)));
    for (std::uint64_t p = 1; p <= 40; p += 3) {
        c.precision = p;
        const auto zero = cmd_real("0", c);
        ASSERT_TRUE(printed_interval(zero).contains_rat(0));
        ASSERT_LE(printed_interval(zero).length(), 2 * pow2(-long(p)));
    }
}

TEST(CliReal, WidthBoundOnRandomExpressions)
{
    const char* exprs[] = {"1/3 + 2/7", "inf(0.1, -3/4) * 5", "-(1/3) * (1/3) - 2", "sup(cantor_third, 1/4)",
                           "cantor_zero + 1/5"};
    const Rat exact[] = {make_rat(13, 21), make_rat(-15, 4), make_rat(-19, 9), make_rat(1, 3), make_rat(1, 5)};
    for (std::size_t i = 0; i < std::size(exprs); ++i)
        for (std::uint64_t p : {4u, 12u, 24u}) {
            RunConfig c;
            c.precision = p;
            const auto r = cmd_real(exprs[i], c);
            ASSERT_EQ(r.exit, ok) << exprs[i] << ": " << r.summary;
            const Seg s = printed_interval(r);
            ASSERT_TRUE(s.contains_rat(exact[i])) << exprs[i] << " " << s.str();
            ASSERT_LE(s.length(), 2 * pow2(-long(p))) << exprs[i];
            ASSERT_TRUE(Seg(parse_rat(r.report["lo_exact"].get<std::string>()),
                            parse_rat(r.report["hi_exact"].get<std::string>()))
                            .contains_rat(exact[i]));
        }
}

TEST(CliReal, Errors)
{
    for (const char* bad : {"2+", "(1", "sup(1)", "x", "1/(2+3)", "1/0", ""})
        EXPECT_EQ(cmd_real(bad, RunConfig{}).exit, parse_error) << bad;
    EXPECT_EQ(cmd_real("1", zeroed(&RunConfig::precision)).exit, budget_exhausted);
}
