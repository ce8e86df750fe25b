#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "mlring/bifurcation.hpp"
#include "mlring/golden.hpp"

using namespace mlring;

namespace {

LaserParams calibrated() {
    LaserParams p;
    p.psi = -1.558963706;
    return p;
}

const Branch& d8_branch() {
    static const Branch br = branch_from_center(calibrated(), 0, 0.05);
    return br;
}

}  // namespace

TEST(Centers, SolveTheCenterEquation) {
    const LaserParams p;
    const auto all = find_all_centers(p, 0.035, 0.0365);
    ASSERT_GE(all.size(), 5u);
    for (std::size_t i = 0; i < all.size(); ++i) {
        const Center& c = all[i];
        EXPECT_LT(c.residual, 1e-9);
        EXPECT_LT(center_residual(p, c.j, c.alpha0, c.w0), 1e-9);
        EXPECT_GE(c.alpha0, center_threshold(p, c.j) - 1e-12);
        if (i) EXPECT_LE(all[i - 1].alpha0, c.alpha0);
        // the scalar quasi-polynomial has a root on the imaginary axis
        cplx lam(0.0, c.w0);
        const CharMatrix cm = quasi_poly_equilibrium(p, c.alpha0, c.j);
        EXPECT_LT(std::abs(cm.det(lam)), 1e-8);
    }
}

TEST(Centers, EmptyAndBelowThresholdRanges) {
    const LaserParams p;
    EXPECT_TRUE(find_centers(p, 0.04, 0.03, 0).centers.empty());
    const auto below = find_centers(p, 0.0, 0.01, 0);
    EXPECT_TRUE(below.centers.empty());
    EXPECT_FALSE(below.skipped.empty());
    EXPECT_FALSE(below.diagnostic.empty());
}

TEST(Centers, ClosedFormDerivativeMatchesTrackedRoot) {
    const LaserParams p = calibrated();
    for (const Center& c : find_all_centers(p, 0.035, 0.0363)) {
        const double h = 1e-7;
        cplx up(0.0, c.w0), dn(0.0, c.w0);
        ASSERT_TRUE(polish_root(quasi_poly_equilibrium(p, c.alpha0 + h, c.j), up));
        ASSERT_TRUE(polish_root(quasi_poly_equilibrium(p, c.alpha0 - h, c.j), dn));
        const double fd = (up.real() - dn.real()) / (2 * h);
        EXPECT_NEAR(c.r_prime, fd, 1e-4 * std::abs(fd));
    }
}

TEST(Centers, EquilibriumPredictionsUseTheCatalog) {
    const LaserParams p = calibrated();
    for (const Center& c : find_all_centers(p, 0.035, 0.0363)) {
        const BranchPrediction bp = classify_equilibrium_hopf(p, c);
        EXPECT_FALSE(bp.withheld);
        EXPECT_EQ(bp.crossing.t, c.r_prime > 0 ? -1 : 1);
        EXPECT_EQ(bp.orbit_types.size(), catalog_types(Ambient::equilibrium(), c.j).size());
    }
}

TEST(Centers, CalibrationImprovesOnZeroPhase) {
    const LaserParams p;
    const std::vector<double> targets{0.03606, 0.03607, 0.0361, 0.03613, 0.03617, 0.0362};
    const PsiCalibration cal = calibrate_psi_centers(p, targets, -1.6, -1.5, 5);
    LaserParams z = p;
    EXPECT_LT(cal.max_deviation, center_deviation(z, targets));
    EXPECT_LT(cal.max_deviation, 5e-5);
    EXPECT_EQ(cal.center_alphas.size(), targets.size());
}

TEST(Continuation, BranchPointsAreRelativeEquilibria) {
    const LaserParams p = calibrated();
    const Branch& br = d8_branch();
    ASSERT_GT(br.points.size(), 10u);
    EXPECT_TRUE(br.termination.empty()) << br.termination;
    EXPECT_NEAR(br.points.back().alpha, 0.05, 1e-12);
    for (std::size_t i = 0; i < br.points.size(); i += 17) {
        const auto& pt = br.points[i];
        EXPECT_LT(full_releq_residual(p, pt), 1e-9);
        EXPECT_GT(pt.node.a.real(), 0.0);
        EXPECT_EQ(pt.node.a.imag(), 0.0);
        EXPECT_EQ(pt.symmetry.name, "D8");
        if (i) EXPECT_LE(std::abs(pt.alpha - br.points[i - 1].alpha), 17 * 1e-4 + 1e-12);
    }
}

TEST(Continuation, PointLookupAndReconstruction) {
    const LaserParams p = calibrated();
    const RelativeEquilibrium re = releq_at(p, d8_branch(), 0.045);
    EXPECT_NEAR(re.alpha, 0.045, 1e-14);
    EXPECT_LT(full_releq_residual(p, re), 1e-9);
    const NetworkState x = reconstruct(p, re);
    ASSERT_EQ(x.size(), 8u);
    EXPECT_EQ(classify_relative_equilibrium(x).name, "D8");
    EXPECT_THROW(releq_at(p, d8_branch(), 0.2), NumericalError);
    const RelativeEquilibrium mid = releq_between(p, d8_branch(), 3, 0.5);
    EXPECT_LT(full_releq_residual(p, mid), 1e-9);
    EXPECT_THROW(releq_between(p, d8_branch(), d8_branch().points.size(), 0.5), NumericalError);
}

TEST(Continuation, TwistedBranchesCarryTheirSymmetry) {
    const LaserParams p = calibrated();
    for (int l : {1, 3, 4}) {
        const Branch br = branch_from_center(p, l, 0.04);
        ASSERT_FALSE(br.points.empty());
        const auto& pt = br.points.back();
        EXPECT_LT(full_releq_residual(p, pt), 1e-9);
        EXPECT_EQ(pt.symmetry.name, l == 4 ? "D8d" : "Z8t" + std::to_string(l));
    }
}

TEST(Continuation, RegularityAlongBranch) {
    const LaserParams p = calibrated();
    const RelativeEquilibrium re = releq_at(p, d8_branch(), 0.045);
    const RegularityReport r = regularity_check(p, re);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.singular_values.size(), 4);
    EXPECT_GT(r.ratio, 1e-8);
    // a rank-deficient matrix fails
    RegularityMatrix m = regularity_matrix(p, re);
    m.row(3) = m.row(2);
    EXPECT_FALSE(regularity_from_matrix(m).pass);
}

TEST(Scan, BlockAndComponentCounts) {
    const LaserParams p = calibrated();
    const RelativeEquilibrium re = releq_at(p, d8_branch(), 0.045);
    const auto blocks = block_counts(p, re, Ambient::d8());
    ASSERT_EQ(blocks.size(), 8u);
    // reflection symmetry pairs the blocks m and n - m in the dihedral case
    for (int m = 1; m < 4; ++m) EXPECT_EQ(blocks[m], blocks[8 - m]);
    const auto comps = component_counts(blocks);
    ASSERT_EQ(comps.size(), 5u);
    EXPECT_EQ(comps[1], blocks[1] + blocks[7]);
    EXPECT_EQ(comps[4], blocks[4]);
    EXPECT_EQ(ambient_for_twist(0, 8), Ambient::d8());
    EXPECT_EQ(ambient_for_twist(4, 8), Ambient::d8d());
    EXPECT_EQ(ambient_for_twist(5, 8), Ambient::z8t(3));
}

TEST(Scan, EventsMatchCountJumps) {
    const LaserParams p = calibrated();
    ScanOptions opt;
    opt.threads = 4;
    const Branch& br = d8_branch();
    const CountProfile prof = count_profile(p, br, Ambient::d8(), opt);
    const auto events = hopf_scan_releq(p, br, Ambient::d8(), prof, opt);
    int jumps = 0;
    for (std::size_t i = 0; i + 1 < prof.counts.size(); ++i) {
        for (int j = 0; j <= 4; ++j) jumps += prof.counts[i][j] != prof.counts[i + 1][j];
    }
    EXPECT_EQ(static_cast<int>(events.size()), jumps);
    ASSERT_FALSE(events.empty());
    const BranchEvent& first = events.front();
    EXPECT_EQ(first.type, "hopf");
    EXPECT_NE(first.t, 0);
    EXPECT_GT(first.beta0, 0.0);
    EXPECT_FALSE(first.orbit_types.empty());
    for (std::size_t k = 1; k < events.size(); ++k) EXPECT_LE(events[k - 1].alpha, events[k].alpha);
}

TEST(Tables, ColumnsAndDiff) {
    EXPECT_EQ(table_columns(1).size(), 7u);
    EXPECT_EQ(table_columns(3)[5].lo, 6.40);
    EXPECT_EQ(table_columns(3)[5].hi, 6.40);
    EXPECT_THROW(table_columns(7), ConfigError);
    TableData a, b;
    a.rows = b.rows = {"U0", "U1"};
    a.counts = {{1, 2}, {3, 4}};
    b.counts = {{1, 2}, {3, 5}};
    const TableDiff d = diff_tables(a, b);
    EXPECT_EQ(d.mismatches, 1);
    EXPECT_EQ(d.compared, 4);
    ASSERT_EQ(d.details.size(), 1u);
    EXPECT_NE(d.details[0].find("U1 column 2"), std::string::npos);
}

TEST(Tables, TableOneShape) {
    const TableData t = reproduce_table(1, LaserParams{}, -1.558963706);
    ASSERT_EQ(t.counts.size(), 5u);
    ASSERT_EQ(t.totals.size(), 7u);
    for (std::size_t c = 0; c < 7; ++c) {
        int sum = 0;
        for (const auto& row : t.counts) sum += row[c];
        EXPECT_EQ(t.totals[c], sum);
    }
    EXPECT_EQ(t.rows.front(), "V0");
}

TEST(Golden, ParsesTablesAndEvents) {
    std::istringstream in(
        "# comment\ntable 9\ncolumns [1,2] 3\nU0 1 2*\nU1 0# 4\ntotal 1 6\nend\n");
    const auto tabs = parse_golden_tables(in);
    ASSERT_EQ(tabs.count(9), 1u);
    const TableData& t = tabs.at(9);
    EXPECT_EQ(t.counts[1][1], 4);
    EXPECT_EQ(t.markers[0][1], '*');
    EXPECT_EQ(t.markers[1][0], '#');
    EXPECT_EQ(t.totals[1], 6);
    std::istringstream bad("table 1\ncolumns [1,2]\nU0 1 2\nend\n");
    EXPECT_THROW(parse_golden_tables(bad), ConfigError);
    std::istringstream open("table 1\ncolumns [1,2]\nU0 1\n");
    EXPECT_THROW(parse_golden_tables(open), ConfigError);

    std::istringstream ev("center 0.036 D8\nD8 0.05 Z8t1 D2d\n");
    const auto events = parse_golden_events(ev);
    ASSERT_EQ(events.size(), 2u);
    EXPECT_EQ(events[1].source, "D8");
    EXPECT_EQ(events[1].labels.size(), 2u);
    EXPECT_THROW(parse_column("[1,"), ConfigError);
}

TEST(Golden, ShippedDataIsConsistent) {
    const auto tabs = load_golden_tables(std::string(MLRING_TEST_DATA_DIR) + "/golden_tables.txt");
    ASSERT_EQ(tabs.size(), 6u);
    for (const auto& [which, t] : tabs) {
        EXPECT_EQ(t.columns.size(), table_columns(which).size()) << which;
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            EXPECT_DOUBLE_EQ(t.columns[c].lo, table_columns(which)[c].lo);
            int sum = 0;
            for (const auto& row : t.counts) sum += row[c];
            EXPECT_EQ(sum, t.totals[c]) << "table " << which << " column " << c + 1;
        }
    }
    const auto ev = load_golden_events(std::string(MLRING_TEST_DATA_DIR) + "/golden_events.txt");
    EXPECT_EQ(ev.size(), 21u);
}
