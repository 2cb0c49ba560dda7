#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "eigslab/core.hpp"
#include "eigslab/presets.hpp"
#include "eigslab/rng.hpp"
#include "eigslab/spectral.hpp"

using namespace eigslab;

namespace {

// Closed-form Perron root of a non-negative 2x2 matrix.
double perron_2x2(double a, double b, double c, double d) {
    const double tr = a + d;
    const double det = a * d - b * c;
    return (tr + std::sqrt(tr * tr - 4.0 * det)) / 2.0;
}

// Independent power iteration on max(A, A^T)-style symmetrisation is not
// valid for spectral radii, so iterate A itself on a positive vector; for
// the matrices below (primitive after adding eps*I) this converges to the
// Perron root.
double power_iteration(const RealMatrix& m, int iterations = 20000) {
    const size_t n = m.size();
    std::vector<double> x(n, 1.0);
    double lambda = 0.0;
    for (int it = 0; it < iterations; ++it) {
        std::vector<double> y(n, 0.0);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) y[i] += (m[i][j] + (i == j ? 1.0 : 0.0)) * x[j];
        double norm = 0.0;
        for (double v : y) norm += v;
        for (double& v : y) v /= norm;
        lambda = norm;
        x = std::move(y);
    }
    return lambda - 1.0;  // undo the +I shift
}

CountMatrix single(int64_t v) { return {{v}}; }

}  // namespace

TEST_CASE("mass matrices of the presets") {
    CHECK(mass_matrix(*make_preset("dhl")) == single(4));
    CHECK(mass_matrix(*make_preset("vicsek")) == single(5));
    CHECK(mass_matrix(*make_preset("laakso")) == single(6));
    CHECK(mass_matrix(*make_preset("xi")) == single(6));
    CHECK(mass_matrix(*make_preset("binary-tree")) == single(3));
    CHECK(mass_matrix(*make_preset("flower:2,3")) == single(6));
    CHECK(mass_matrix(*make_preset("flower:3,2")) == single(6));
    CHECK(mass_matrix(*make_preset("fig2")) == CountMatrix{{3, 3}, {2, 3}});
}

TEST_CASE("degree matrices of the presets") {
    CHECK(degree_matrix(*make_preset("dhl")) == CountMatrix{{2, 0}, {0, 2}});
    CHECK(degree_matrix(*make_preset("vicsek")) == CountMatrix{{1, 0}, {0, 1}});
    CHECK(degree_matrix(*make_preset("laakso")) == CountMatrix{{1, 0}, {0, 1}});
    // The xi rule points one edge out of the minus plant, so its (-,+)
    // entry is 1 and terminal degrees grow linearly in the level.
    CHECK(degree_matrix(*make_preset("xi")) == CountMatrix{{1, 0}, {1, 1}});
    CHECK(degree_matrix(*make_preset("fig2")) ==
          CountMatrix{{1, 0, 1, 0}, {0, 1, 0, 1}, {0, 0, 2, 0}, {0, 1, 0, 1}});
}

TEST_CASE("path signatures enumerate simple plant-to-plant paths") {
    auto sigs = [](const char* name, int32_t colours) {
        EIGSystem sys = *make_preset(name);
        return path_signatures(sys.rule(1), colours);
    };
    using Sigs = std::vector<std::vector<int64_t>>;
    CHECK(sigs("dhl", 1) == Sigs{{2}});
    CHECK(sigs("vicsek", 1) == Sigs{{3}});
    CHECK(sigs("laakso", 1) == Sigs{{4}});
    // Backbone of length 4, plus the detour through the shunt of length 5.
    CHECK(sigs("xi", 1) == Sigs{{4}, {5}});
    CHECK(sigs("flower:2,3", 1) == Sigs{{3}});
    CHECK(sigs("flower:3,2", 1) == Sigs{{2}});

    EIGSystem fig2 = *make_preset("fig2");
    CHECK(path_signatures(fig2.rule(1), 2) == Sigs{{1, 1}, {1, 3}, {3, 1}});
    CHECK(path_signatures(fig2.rule(2), 2) == Sigs{{1, 1}, {1, 2}});
}

TEST_CASE("distance family combines one signature per rule") {
    EIGSystem fig2 = *make_preset("fig2");
    auto family = distance_family(fig2);
    REQUIRE(family.size() == 6);
    CHECK(family[0] == CountMatrix{{1, 1}, {1, 1}});
    CHECK(family[1] == CountMatrix{{1, 1}, {1, 2}});
    CHECK(family[2] == CountMatrix{{1, 3}, {1, 1}});
    CHECK(family[3] == CountMatrix{{1, 3}, {1, 2}});
    CHECK(family[4] == CountMatrix{{3, 1}, {1, 1}});
    CHECK(family[5] == CountMatrix{{3, 1}, {1, 2}});

    // Closed forms of the six Perron roots.
    const std::vector<double> expected = {
        2.0,
        (3.0 + std::sqrt(5.0)) / 2.0,
        1.0 + std::sqrt(3.0),
        (3.0 + std::sqrt(13.0)) / 2.0,
        2.0 + std::sqrt(2.0),
        (5.0 + std::sqrt(5.0)) / 2.0,
    };
    for (size_t i = 0; i < family.size(); ++i) {
        CAPTURE(i);
        CHECK(spectral_radius(family[i]) ==
              doctest::Approx(expected[i]).epsilon(1e-12));
    }
    CHECK(rho_min(family) == doctest::Approx(2.0).epsilon(1e-12));

    CHECK(distance_family(*make_preset("dhl")).size() == 1);
    CHECK(distance_family(*make_preset("xi")).size() == 2);
    CHECK(rho_min(*make_preset("xi")) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("spectral radius matches closed forms") {
    EIGSystem fig2 = *make_preset("fig2");
    CHECK(spectral_radius(mass_matrix(fig2)) ==
          doctest::Approx(3.0 + std::sqrt(6.0)).epsilon(1e-12));
    CHECK(spectral_radius(degree_matrix(fig2)) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(spectral_radius(single(4)) == doctest::Approx(4.0));

    // Defective matrix: radius must still be the eigenvalue modulus, not a
    // power-iteration artefact.
    RealMatrix jordan = {{2.0, 1.0}, {0.0, 2.0}};
    CHECK(spectral_radius(jordan) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("spectral radius agrees with an independent power iteration") {
    Rng rng(20211u);
    for (int trial = 0; trial < 25; ++trial) {
        CAPTURE(trial);
        const size_t n = 2 + rng.next_below(4);
        RealMatrix m(n, std::vector<double>(n, 0.0));
        for (auto& row : m)
            for (double& v : row) v = rng.next_double() * 3.0;
        CHECK(spectral_radius(m) ==
              doctest::Approx(power_iteration(m)).epsilon(1e-7));
    }
}

TEST_CASE("degree growth never outruns mass growth") {
    for (const std::string& name : preset_names()) {
        CAPTURE(name);
        EIGSystem sys = *make_preset(name);
        CHECK(spectral_radius(degree_matrix(sys)) <
              spectral_radius(mass_matrix(sys)) + 1e-9);
    }
}
