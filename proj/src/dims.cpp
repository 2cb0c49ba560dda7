#include "eigslab/dims.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "eigslab/presets.hpp"

namespace eigslab {

DimensionReport dimensions(const EIGSystem& sys, double psi_tol,
                           int32_t psi_max_iterations) {
    auto positivity = validate_distance_positive(sys);
    if (!positivity.empty())
        throw ConfigError("distance-positivity violated: " +
                          positivity.front().message);

    DimensionReport rep;
    rep.distance_positive = true;
    rep.canonical = validate_canonical(sys).empty();

    rep.rho_M = spectral_radius(mass_matrix(sys));
    rep.rho_N = spectral_radius(degree_matrix(sys));
    rep.rho_min = rho_min(sys);

    PsiEigenpair pair = psi_eigenpair(sys, psi_tol, psi_max_iterations);
    rep.rho_psi = pair.rho;
    rep.psi_converged = pair.converged;

    const double log_min = std::log(rep.rho_min);
    const double inf = std::numeric_limits<double>::infinity();

    rep.dim_B = std::log(rep.rho_M) / log_min;
    rep.dim_D = rep.rho_N <= 1.0 + 1e-9 ? inf : std::log(rep.rho_M) / std::log(rep.rho_N);
    rep.dim_R = std::log(rep.rho_psi) / log_min;
    rep.dim_W = rep.dim_B + rep.dim_R;
    const double inv_dim_d = std::isinf(rep.dim_D) ? 0.0 : 1.0 / rep.dim_D;
    rep.dim_S_finite = 2.0 * rep.dim_B * (1.0 - inv_dim_d) / rep.dim_W;
    rep.dim_S_generic = 2.0 * rep.dim_B / rep.dim_W;

    rep.local_mass = std::log(rep.rho_N) / log_min;
    rep.local_resistance = -rep.local_mass;

    rep.recurrent = rep.rho_psi > 1.0;
    return rep;
}

std::vector<TableRow> table1() {
    std::vector<TableRow> rows;
    for (const std::string& name :
         {"dhl", "flower:2,3", "flower:3,2", "vicsek", "laakso", "xi", "fig2"}) {
        TableRow row;
        row.name = name;
        row.report = dimensions(*make_preset(name));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_table(const std::vector<TableRow>& rows) {
    auto cell = [](double v) {
        char buf[32];
        if (std::isinf(v))
            std::snprintf(buf, sizeof buf, "%10s", "inf");
        else
            std::snprintf(buf, sizeof buf, "%10.4f", v);
        return std::string(buf);
    };
    std::string out;
    char head[160];
    std::snprintf(head, sizeof head, "%-12s%10s%10s%10s%10s%10s%10s  %s\n",
                  "system", "dim_B", "dim_D", "dim_R", "dim_W", "dim_S",
                  "dim_S*", "type");
    out += head;
    bool decorated = false;
    for (const TableRow& row : rows) {
        const DimensionReport& r = row.report;
        char name[32];
        std::snprintf(name, sizeof name, "%-12s",
                      (row.name + (r.canonical ? "" : "+")).c_str());
        out += name;
        out += cell(r.dim_B) + cell(r.dim_D) + cell(r.dim_R) + cell(r.dim_W) +
               cell(r.dim_S_finite) + cell(r.dim_S_generic);
        out += r.recurrent ? "  Recc.\n" : "  Tran.\n";
        decorated = decorated || !r.canonical;
    }
    out += "dim_S: finitely born vertices; dim_S*: generic vertices\n";
    if (decorated)
        out += "+ decorated system: some rule edges lie on no plant-to-plant "
               "path, values use the formulas verbatim\n";
    return out;
}

}  // namespace eigslab
