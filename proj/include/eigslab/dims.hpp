#pragma once

#include <string>
#include <vector>

#include "eigslab/core.hpp"
#include "eigslab/resistance.hpp"
#include "eigslab/spectral.hpp"

namespace eigslab {

// All fractal dimensions of one system. dim_D is +inf when rho(N) <= 1
// (degree growth is subexponential); dim_S_finite uses the convention
// 1/inf = 0 there.
struct DimensionReport {
    double rho_M = 0.0;
    double rho_N = 0.0;
    double rho_min = 0.0;
    double rho_psi = 0.0;

    double dim_B = 0.0;
    double dim_D = 0.0;  // +inf allowed
    double dim_R = 0.0;
    double dim_W = 0.0;
    double dim_S_finite = 0.0;
    double dim_S_generic = 0.0;

    double local_mass = 0.0;        // log rho(N) / log rho_min
    double local_resistance = 0.0;  // -local_mass

    bool recurrent = false;  // rho(Psi) > 1
    bool canonical = true;   // false = computed under a decoration warning
    bool distance_positive = true;
    bool psi_converged = false;
};

// Compute every dimension of a system. Distance-positivity is a hard
// requirement (throws ConfigError if violated); canonicality violations
// only clear the `canonical` flag so that classical decorated systems
// (pendant-tree rules) can still be evaluated.
DimensionReport dimensions(const EIGSystem& sys, double psi_tol = 1e-12,
                           int32_t psi_max_iterations = 10000);

// One row of the summary table.
struct TableRow {
    std::string name;
    DimensionReport report;
};

// The deterministic table rows: dhl, flower:2,3, flower:3,2, vicsek,
// laakso, xi, fig2. The percolation-cluster row lives in the percolation
// module (it needs the alpha estimate).
std::vector<TableRow> table1();

// Render rows as an aligned text table.
std::string format_table(const std::vector<TableRow>& rows);

}  // namespace eigslab
