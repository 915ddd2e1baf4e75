#pragma once
// Operator-entanglement partition functions Z_alpha(m,n) of light-cone cut
// networks, entanglement line tension estimates, entanglement-velocity
// bounds, and influence-matrix area-law diagnostics.
#include <optional>
#include <vector>

#include "dulab/gate.hpp"

namespace dulab {

// Light-cone extents of the cut at spatial offset x and time t (layers):
//   n = floor((t - x - (x mod 2)) / 2),  m = floor((t + x - (x mod 2)) / 2).
// Odd offsets use the floor convention; cuts outside the light cone clamp
// the smaller extent at zero.
struct CutCoordinates {
    int x = 0;
    int t = 0;
    int m = 0;
    int n = 0;

    static CutCoordinates from_xt(int x, int t);
    double v() const { return t == 0 ? 0.0 : static_cast<double>(x) / t; }
};

// Exact contraction of the Z_alpha network (alpha = 2 only) with square caps
// on the bottom/right edges and circle caps on the left/top edges, swept
// column-by-column along the longer axis.  Degenerate cuts (m = 0 or n = 0)
// reduce to q^{-(m+n)} by unitarity.
double z_alpha_exact(const UnitaryGate& U, int m, int n, int alpha = 2,
                     std::int64_t budget_bytes = kMemoryBudgetBytes);

// One sweep returning Z_2(i, n) for i = 1..m_max (same caps as above).
std::vector<double> z2_column_scan(const UnitaryGate& U, int m_max, int n,
                                   std::int64_t budget_bytes = kMemoryBudgetBytes);

// Z_2(m,n) = B_1^{min(m,n)} / q^{m+n}.
double z2_closed_form(double B1, int q, int m, int n);

struct MembraneScan {
    int q = 2;
    int alpha = 2;
    double s_eq = 0.0;  // log q

    struct Row {
        int x, t, m, n;
        double Z, S, ELT;
    };
    std::vector<Row> grid;
    double ve_estimate = 0.0;  // ELT at the grid point closest to v = 0

    json to_json() const;
};

MembraneScan elt_scan(const UnitaryGate& U, const std::vector<double>& velocities,
                      const std::vector<int>& t_values, int alpha = 2);

// v_E = log(R) / log(q^2) for a flat-spectrum gate of Schmidt rank R.
double ve_from_rank(int q, int schmidt_rank);

struct VelocityBounds {
    std::optional<int> k_left, k_right;
    double B_left = 1.0, B_right = 1.0;  // B_{k-1} per side
    double vstar_left = 1.0, vstar_right = 1.0;
    double lower = 0.0;
    double upper = 1.0;
    bool symmetric = false;

    json to_json() const;
};

// Convexity bounds on v_E for circuits satisfying level-k conditions on one
// or both light-cone directions:
//   lower:  v_E >= 1 - log B_{k-1} / log q^2           (strongest side)
//   upper:  v_E <= [v*_R E(-v*_L) + v*_L E(v*_R)] / (v*_R + v*_L)
// with v* = (k-2)/k and E(+-v*) = 1 - (1 - v*) log B_{k-1} / log q^2; an
// absent side contributes the causal worst case v* = 1, E = 1.
VelocityBounds ve_bounds(int q, std::optional<int> k_left,
                         std::optional<int> k_right, double B_left,
                         double B_right);

// Right influence matrix at a v = 0 cut, built by direct contraction of the
// folded half-circuit at replica level 1 with t crossing gates (2t dangling
// legs of dimension q^2).  Returns the Schmidt rank across each of the
// 2t - 1 temporal cuts, ordered from the earliest leg.
std::vector<int> im_area_law_check(const UnitaryGate& U, int t,
                                   int extra_columns = 0,
                                   std::int64_t budget_bytes = kMemoryBudgetBytes);

}  // namespace dulab
