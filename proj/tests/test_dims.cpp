#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "eigslab/dims.hpp"
#include "eigslab/presets.hpp"

using namespace eigslab;

namespace {

DimensionReport report(const char* name) {
    return dimensions(*make_preset(name));
}

bool close(double a, double b, double tol = 1e-9) {
    if (std::isinf(a) || std::isinf(b)) return std::isinf(a) && std::isinf(b);
    return std::abs(a - b) <= tol;
}

}  // namespace

TEST_CASE("dhl dimensions") {
    DimensionReport r = report("dhl");
    CHECK(close(r.rho_M, 4.0));
    CHECK(close(r.rho_N, 2.0));
    CHECK(close(r.rho_min, 2.0));
    CHECK(close(r.rho_psi, 1.0, 1e-10));
    CHECK(close(r.dim_B, 2.0));
    CHECK(close(r.dim_D, 2.0));
    CHECK(close(r.dim_R, 0.0, 1e-10));
    CHECK(close(r.dim_W, 2.0, 1e-10));
    CHECK(close(r.dim_S_finite, 1.0, 1e-10));
    CHECK(close(r.dim_S_generic, 2.0, 1e-10));
    CHECK(close(r.local_mass, 1.0));
    CHECK(close(r.local_resistance, -1.0));
    CHECK(!r.recurrent);
    CHECK(r.canonical);
    CHECK(r.psi_converged);
}

TEST_CASE("flower dimensions follow the u,v closed forms") {
    const double l2 = std::log(2.0), l3 = std::log(3.0);
    DimensionReport r = report("flower:2,3");
    CHECK(close(r.dim_B, 1.0 + l2 / l3, 1e-10));
    CHECK(close(r.dim_D, 1.0 + l3 / l2, 1e-10));
    CHECK(close(r.dim_R, 1.0 - l2 / l3, 1e-10));
    CHECK(close(r.dim_W, 2.0, 1e-10));
    CHECK(close(r.dim_S_finite, 1.0, 1e-10));
    CHECK(close(r.dim_S_generic, 1.0 + l2 / l3, 1e-10));
    CHECK(r.recurrent);

    r = report("flower:3,2");
    CHECK(close(r.dim_B, 1.0 + l3 / l2, 1e-10));
    CHECK(close(r.dim_D, 1.0 + l2 / l3, 1e-10));
    CHECK(close(r.dim_R, 1.0 - l3 / l2, 1e-10));
    CHECK(close(r.dim_W, 2.0, 1e-10));
    CHECK(close(r.dim_S_generic, 1.0 + l3 / l2, 1e-10));
    CHECK(!r.recurrent);
}

TEST_CASE("vicsek and laakso dimensions") {
    const double l3 = std::log(3.0), l4 = std::log(4.0), l5 = std::log(5.0),
                 l6 = std::log(6.0);
    DimensionReport r = report("vicsek");
    CHECK(close(r.rho_min, 3.0));
    CHECK(close(r.dim_B, l5 / l3, 1e-10));
    CHECK(std::isinf(r.dim_D));
    CHECK(close(r.dim_R, 1.0, 1e-10));
    CHECK(close(r.dim_W, 1.0 + l5 / l3, 1e-10));
    CHECK(close(r.dim_S_finite, 2.0 * l5 / std::log(15.0), 1e-9));
    CHECK(close(r.dim_S_generic, r.dim_S_finite, 1e-12));
    CHECK(r.recurrent);
    CHECK(!r.canonical);  // pendant decorations

    r = report("laakso");
    CHECK(close(r.rho_min, 4.0));
    CHECK(close(r.dim_B, l6 / l4, 1e-10));
    CHECK(std::isinf(r.dim_D));
    CHECK(close(r.dim_R, 1.0, 1e-10));
    CHECK(close(r.dim_W, 1.0 + l6 / l4, 1e-10));
    CHECK(close(r.dim_S_finite, 2.0 * l6 / std::log(24.0), 1e-9));
    CHECK(r.recurrent);
    CHECK(!r.canonical);
}

TEST_CASE("xi dimensions") {
    const double l4 = std::log(4.0), l6 = std::log(6.0);
    DimensionReport r = report("xi");
    CHECK(close(r.rho_M, 6.0));
    CHECK(close(r.rho_N, 1.0));
    CHECK(close(r.rho_min, 4.0));
    CHECK(close(r.rho_psi, 11.0 / 3.0, 1e-10));
    CHECK(close(r.dim_B, l6 / l4, 1e-10));
    CHECK(std::isinf(r.dim_D));
    CHECK(close(r.dim_R, std::log(11.0 / 3.0) / l4, 1e-10));
    CHECK(close(r.dim_W, std::log(22.0) / l4, 1e-10));
    // The spectral dimensions are scale-free: 2 log6 / log22 on both rows.
    CHECK(close(r.dim_S_finite, 2.0 * l6 / std::log(22.0), 1e-9));
    CHECK(close(r.dim_S_generic, r.dim_S_finite, 1e-12));
    CHECK(r.recurrent);
    CHECK(r.canonical);
}

TEST_CASE("two-colour dimensions") {
    DimensionReport r = report("fig2");
    CHECK(close(r.rho_M, 3.0 + std::sqrt(6.0), 1e-10));
    CHECK(close(r.rho_N, 2.0));
    CHECK(close(r.rho_min, 2.0));
    CHECK(std::abs(r.dim_B - 2.4461) < 5e-4);
    CHECK(std::abs(r.dim_D - 2.4461) < 5e-4);
    CHECK(std::abs(r.dim_R - 0.1455) < 5e-4);
    CHECK(std::abs(r.dim_W - 2.5916) < 5e-4);
    CHECK(std::abs(r.dim_S_finite - 1.1160) < 5e-4);
    CHECK(std::abs(r.dim_S_generic - 1.8877) < 5e-4);
    CHECK(r.recurrent);
    CHECK(r.canonical);
}

TEST_CASE("derived identities hold on every preset") {
    for (const std::string& name : preset_names()) {
        CAPTURE(name);
        DimensionReport r = dimensions(*make_preset(name));
        CHECK(close(r.dim_W, r.dim_B + r.dim_R, 1e-9));
        CHECK(r.dim_W >= 2.0 - 1e-9);
        CHECK(close(r.dim_S_generic, 2.0 * r.dim_B / r.dim_W, 1e-9));
        CHECK(close(r.local_resistance, -r.local_mass, 1e-12));
        CHECK(r.rho_N <= r.rho_M + 1e-9);
        // Recurrence iff generic spectral dimension < 2, except at the
        // rho(Psi) = 1 boundary where both sides degenerate together.
        if (std::abs(r.rho_psi - 1.0) > 1e-6)
            CHECK(r.recurrent == (r.dim_S_generic < 2.0));
        if (std::isinf(r.dim_D))
            CHECK(close(r.dim_S_finite, r.dim_S_generic, 1e-12));
    }
}

TEST_CASE("distance positivity is a hard requirement") {
    EIGSystem bad = *make_preset("dhl");
    bad.rules[0].edges.push_back({0, 1, 1});  // plant distance drops to 1
    CHECK_THROWS_AS(dimensions(bad), ConfigError);
}

TEST_CASE("table rows come in the published order") {
    auto rows = table1();
    REQUIRE(rows.size() == 7);
    CHECK(rows[0].name == "dhl");
    CHECK(rows[1].name == "flower:2,3");
    CHECK(rows[2].name == "flower:3,2");
    CHECK(rows[3].name == "vicsek");
    CHECK(rows[4].name == "laakso");
    CHECK(rows[5].name == "xi");
    CHECK(rows[6].name == "fig2");

    const std::string text = format_table(rows);
    CHECK(text.find("dhl") != std::string::npos);
    CHECK(text.find("vicsek+") != std::string::npos);
    CHECK(text.find("inf") != std::string::npos);
    CHECK(text.find("Tran.") != std::string::npos);
    CHECK(text.find("Recc.") != std::string::npos);
    CHECK(text.find("decorated") != std::string::npos);
}
