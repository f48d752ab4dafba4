#pragma once

#include "smt/cli/config.hpp"
#include "smt/risk.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace smt::cli {

// Each run_* returns the full CSV text: '#' comment header (tool version,
// command, resolved config, seed), a column row, then data rows. Output never
// depends on `threads` (0 = OpenMP default).

struct Fig2Curve {
    double zeta = 0.0;
    double a_star = 0.0;
    std::vector<MarginalRiskPoint> points;
    std::size_t argmin = 0;  // index of the smallest mR
};

std::vector<double> fig2_grid(const Fig2Config& config, double zeta);
std::vector<Fig2Curve> compute_fig2(const Fig2Config& config);
/// Columns: zeta,t,mfdr,fnr,mr. Per-zeta argmin_t and min_mR in the header.
std::string run_fig2(const Fig2Config& config);

/// Columns: zeta,beta,x,y,lambda for every panel, x outer, y inner.
std::string run_fig3(const Fig3Config& config);

struct Fig4Row {
    Fig4Point point;
    std::size_t point_index = 0;
    ProcedureSpec procedure;
    double lambda_inf = 0.0;
    RiskReport report;
};

/// Mean over groups of the within-group sample SD of combined risk.
struct Fig4Spread {
    std::string procedure;
    double level_sd = 0.0;
    double line_sd = 0.0;
};

struct Fig4Result {
    std::vector<Fig4Row> rows;
    std::vector<Fig4Spread> spread;
};

/// Every point runs l-value(t) and BH(alpha) on the same replicates, seeded by
/// derive_seed(seed, point index).
Fig4Result compute_fig4(const Fig4Config& config, int threads = 0);
/// Columns: group,label,x,y,lambda_inf,procedure,params,combined,se_combined,
/// fdr,se_fdr,fnr,se_fnr,reps. Spread summary in trailing comment lines.
std::string run_fig4(const Fig4Config& config, int threads = 0);

/// Risk rows (see write_risk_header) for every b (or the two-strength pair)
/// and every procedure. All rows share the seed, so sweeps use common random
/// numbers.
std::string run_simulate(const SimulateConfig& config, int threads = 0);

/// Columns: n,s_n,zeta,lambda_n,minimax_limit,alpha,tstar,tstar_residual,
/// a_star,rho,fbar_n,se_fbar_n,reps. Cells left empty when not requested.
std::string run_boundary(const BoundaryConfig& config, int threads = 0);

/// Runs one procedure on observed data. Columns: index,x,rejected.
std::string run_apply(const std::vector<double>& x, const ProcedureSpec& procedure, double zeta,
                      std::size_t s_n);

} // namespace smt::cli
