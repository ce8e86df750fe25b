#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "mlring/report.hpp"

using namespace mlring;
using nlohmann::json;

TEST(Report, TwelveSignificantDigits) {
    EXPECT_EQ(fmt(0.1), "0.1");
    EXPECT_EQ(fmt(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(fmt(-1234567.891234567), "-1234567.89123");
    EXPECT_EQ(fmt(3.6e-5), "3.6e-05");
}

TEST(Report, CenterJsonCarriesPredictions) {
    LaserParams p;
    Report r;
    r.centers = find_all_centers(p, 0.035, 0.0362);
    ASSERT_FALSE(r.centers.empty());
    for (const auto& c : r.centers) r.predictions.push_back(classify_equilibrium_hopf(p, c));
    const json j = json::parse(to_json(r));
    ASSERT_EQ(j["centers"].size(), r.centers.size());
    const json& c0 = j["centers"][0];
    for (const char* key : {"alpha", "w", "j", "twist", "r_prime", "transversal", "gamma_condition",
                            "frequency_condition", "residual", "crossing_number", "withheld",
                            "orbit_types"}) {
        EXPECT_TRUE(c0.contains(key)) << key;
    }
    EXPECT_EQ(c0["alpha"].get<double>(), std::stod(fmt(r.centers[0].alpha0)));
    EXPECT_TRUE(j["branches"].empty());
    EXPECT_TRUE(j["events"].empty());
}

TEST(Report, CatalogJsonListsEveryAmbient) {
    const json j = json::parse(catalog_json());
    ASSERT_EQ(j.size(), 6u);
    EXPECT_EQ(j[0]["ambient"], "equilibrium");
    EXPECT_EQ(j[5]["ambient"], "D8d");
    for (const auto& amb : j) {
        ASSERT_EQ(amb["components"].size(), 5u);
        for (const auto& comp : amb["components"]) {
            for (const auto& t : comp["types"]) {
                EXPECT_EQ(t["order"].get<std::size_t>(), t["elements"].size());
            }
        }
    }
}

TEST(Report, CsvHeaders) {
    const LaserParams p;
    std::ostringstream os;
    write_sweep_csv(os, equilibrium_sweep(p, {0.03}, Convention::RealDimension));
    EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "alpha,component,count,convention,winding_residual");
    EXPECT_NE(os.str().find("0.03,V4,0,real-dim"), std::string::npos);

    const Trajectory tr = integrate(p, 0.03, constant_history(trivial_equilibrium(p, 0.03)), p.T, p.T / 20);
    std::ostringstream ts;
    write_trajectory_csv(ts, tr);
    const std::string head = ts.str().substr(0, ts.str().find('\n'));
    EXPECT_EQ(head.rfind("t,g0,q0,re_a0,im_a0,g1", 0), 0u);
    EXPECT_NE(head.find("im_a7"), std::string::npos);

    TableData t;
    t.columns = {{3.6, 3.606}};
    t.rows = {"V0"};
    t.counts = {{2}};
    t.markers = {{'*'}};
    std::ostringstream tab;
    write_table_csv(tab, t);
    EXPECT_EQ(tab.str(), "alpha_lo,alpha_hi,component,count,marker\n0.036,0.03606,V0,2,*\n");
}
