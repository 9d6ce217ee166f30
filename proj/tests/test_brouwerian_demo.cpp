#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "orbit/brouwerian_demo.hpp"
#include "orbit/errors.hpp"

using namespace orbit;

TEST(DiagSubspace, Examples) {
    const OperatorSubspace d = diag_subspace();
    EXPECT_EQ(d.k(), 2u);
    EXPECT_EQ(d.dim(), 2u);
    EXPECT_NEAR(op_norm(d, std::vector<double>{0.5, -0.7}), 0.7, 1e-12);
    EXPECT_EQ(orbit::orbit(d, Vector{1, 0}).rank, 1u);
}

TEST(DemoTable, PaperRows) {
    const std::vector<DemoRow> rows = demo_table({0.0, 0.1, 1.0}, 30, 1e-6);
    ASSERT_EQ(rows.size(), 3u);

    EXPECT_EQ(rows[0].c, 0.0);
    EXPECT_EQ(rows[0].r, 0.0);
    EXPECT_FALSE(rows[0].N.has_value());
    EXPECT_NEAR(rows[0].d, 1.0, 1e-6);
    EXPECT_NE(rows[0].verdicts.find("Stabilized(N=1)"), std::string::npos);

    EXPECT_NEAR(rows[1].r, 0.1, 1e-12);
    ASSERT_TRUE(rows[1].N.has_value());
    EXPECT_EQ(*rows[1].N, 21);
    EXPECT_NEAR(rows[1].d, 0.0, 1e-6);

    EXPECT_NEAR(rows[2].r, 1.0, 1e-12);
    EXPECT_EQ(*rows[2].N, 3);
    EXPECT_NEAR(rows[2].d, 0.0, 1e-6);
}

TEST(DemoTable, DefaultValuesInvariants) {
    const std::vector<double> cs = default_demo_values();
    EXPECT_EQ(cs.size(), 11u);
    const std::vector<DemoRow> rows = demo_table(cs, 30, 1e-6);
    ASSERT_EQ(rows.size(), cs.size());
    bool some_undecided = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const DemoRow& row = rows[i];
        EXPECT_EQ(row.c, cs[i]);  // input order
        EXPECT_NEAR(row.r, std::min(1.0, std::abs(row.c)), 1e-12);
        if (row.c == 0.0) {
            EXPECT_NEAR(row.d, 1.0, 1e-6);
            continue;
        }
        EXPECT_NEAR(row.d, 0.0, 1e-6);
        ASSERT_TRUE(row.N.has_value());
        EXPECT_GE(*row.N, static_cast<std::int64_t>(std::ceil(2.0 / row.r)));
        const double scaled = static_cast<double>(*row.N) * std::abs(row.c);
        EXPECT_GE(scaled, 2.0);
        EXPECT_LE(scaled, 2.0 + 2.0 * std::abs(row.c) + 1.0);
        some_undecided = some_undecided || row.undecided;
    }
    // no single budget settles every c
    EXPECT_TRUE(some_undecided);
}

TEST(DemoTable, MonotoneBlowUp) {
    std::vector<double> cs;
    for (double c = 1.0; c > 1e-3; c *= 0.7) cs.push_back(c);
    const std::vector<DemoRow> rows = demo_table(cs, 5, 1e-6);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(*rows[i].N, *rows[i - 1].N);
}

TEST(DemoTable, SerialEqualsParallel) {
    const std::vector<DemoRow> a = demo_table(default_demo_values(), 20, 1e-6, Exec::Serial);
    const std::vector<DemoRow> b = demo_table(default_demo_values(), 20, 1e-6, Exec::Parallel);
    std::ostringstream sa, sb;
    write_demo_csv(sa, a);
    write_demo_csv(sb, b);
    EXPECT_EQ(sa.str(), sb.str());
}

TEST(DemoTable, BadInput) {
    EXPECT_THROW(demo_table({1.5}, 10, 1e-6), InputError);
    EXPECT_THROW(demo_table({0.5}, 0, 1e-6), InputError);
    EXPECT_THROW(demo_table({0.5}, 10, 0.0), InputError);
}

TEST(DemoCsv, Format) {
    std::ostringstream os;
    write_demo_csv(os, demo_table({0.0, 0.123456789012}, 10, 1e-6));
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "c,r,N,d,levels,verdict");
    std::getline(in, line);
    EXPECT_EQ(line.rfind("0,0,NA,1,", 0), 0u) << line;
    std::getline(in, line);
    EXPECT_EQ(line.rfind("0.123456789,0.123456789,17,", 0), 0u) << line;
}

TEST(NormLaw, ThousandRandomPairs) {
    const OperatorSubspace d = diag_subspace();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int i = 0; i < 1000; ++i) {
        const double a = u(rng), b = u(rng);
        ASSERT_NEAR(op_norm(d, std::vector<double>{a, b}), std::max(std::abs(a), std::abs(b)), 1e-9);
    }
}
