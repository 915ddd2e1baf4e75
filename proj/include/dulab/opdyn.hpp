#pragma once
// Operator dynamics: light-cone transfer matrices, staircase bases and their
// Hankel overlap matrices, OTOC front profiles, tripartite information, and
// Jordan-block growth diagnostics.
#include <vector>

#include "dulab/gate.hpp"

namespace dulab {

// ---- light-cone transfer matrix -------------------------------------------

// T_n acts on the n-site two-replica folded space (dimension q^{4n}): one
// diagonal row of n folded gates, the first gate's inward leg closed with the
// circle pair, the last gate's outward leg closed with the square pair, and
// an overall prefactor 1/q chosen so the all-circle product vector is a fixed
// point.  The dense matrix is stored in the real Hermitian operator basis
// (a unitary change of basis, so spectra, ranks and Jordan structure agree
// with the computational-basis map).
struct Lctm {
    int q = 2;
    int n = 1;
    Eigen::MatrixXd matrix;          // q^{4n} x q^{4n}, operator basis
    double fixed_point_residual = 0; // |T c - c| for the all-circle vector
    double spectral_radius = 0;      // power-iteration estimate
};

Lctm lctm_build(const UnitaryGate& U, int n,
                std::int64_t budget_bytes = kMemoryBudgetBytes);

// Matrix-free application in the computational folded basis: v has n legs of
// dimension q^4 (flattened).  Usable up to n = 5 at q = 2.
Vec lctm_apply(const UnitaryGate& U, const Vec& v, int n);
Vec lctm_apply_transpose(const UnitaryGate& U, const Vec& v, int n);

// ---- staircases and overlap matrices ---------------------------------------

// Right vectors r_j = rtilde_j (x) square^{(n-j)} and left vectors
// l_i = circle^{(n-i)} (x) stilde_i, j,i = 0..n, built by explicit
// contraction of triangular gate patches of k-1 rows (step height k-1 for a
// level-k gate; default k = 2).
struct StaircaseBasis {
    int q = 2;
    int n = 1;
    int k = 2;
    std::vector<Vec> right;              // n+1 vectors of dimension q^{4n}
    std::vector<Vec> left;
    std::vector<double> right_residuals; // |T r_j - r_j|
    std::vector<double> left_residuals;  // |T^t l_i - l_i|
};

struct OverlapMatrix {
    Mat gram;              // (n+1) x (n+1) entries <l_i | r_j>
    Mat predicted;         // q^{-n} * (B_{k-1}/q^2)^{max(0, i+j-n)}
    double max_deviation = 0;
    double hankel_residual = 0;  // max |G(i,j) - G(i+r, j-r)|
    int rank = 0;                // numerical rank at relative tolerance 1e-8
    bool full_rank = false;

    json to_json() const;
};

std::pair<StaircaseBasis, OverlapMatrix> staircase_overlaps(
    const UnitaryGate& U, int n, int k = 2,
    std::int64_t budget_bytes = kMemoryBudgetBytes);

// ---- OTOC ------------------------------------------------------------------

// C(x,t) = tr[s_a(x,t) s_b s_a(x,t) s_b] / (q^N tr[s_a^2 s_b^2] / q ...)
// normalized so that commuting operators give exactly 1.  Operators are
// single-site, traceless and Hermitian; tr[s^2] = q.
struct OtocProfile {
    int q = 2;
    int x_max = 0;
    int t_max = 0;
    std::vector<int> x;                   // -x_max .. x_max
    std::vector<std::vector<double>> C;   // C[t-1][ix], t = 1..t_max

    double at(int xv, int t) const;
    json to_json() const;
};

OtocProfile otoc_profile(const UnitaryGate& U, const Mat& sigma_a,
                         const Mat& sigma_b, int x_max, int t_max,
                         std::int64_t budget_bytes = kMemoryBudgetBytes);

// ---- tripartite information --------------------------------------------------

// Renyi-2 tripartite information of the evolution operator for the cut pair
// at spatial offset x and t layers:
//   I3(x,t) = log(q^{m+n} Z2(m,n)) + log Z2~(m,n)
// where Z2~ is the companion network with circle caps on the bottom edge.
double tripartite_info(const UnitaryGate& U, int x, int t,
                       std::int64_t budget_bytes = kMemoryBudgetBytes);

// ---- Jordan-block growth ------------------------------------------------------

struct JordanProfile {
    int q = 2;
    int n_max = 1;
    std::vector<int> m;                  // largest-block size per n = 1..n_max
    std::vector<std::vector<int>> m_by_threshold;  // sweep 1e-6, 1e-8, 1e-10
    bool threshold_stable = false;

    json to_json() const;
};

// Size of the largest Jordan block of the nilpotent part of T_n: smallest p
// with rank(T^p) = rank(T^{p+1}), from numerical ranks of successive powers
// (rank(T^p) = rank(C^{p-1}) after one QR-based column compression C).
JordanProfile jordan_profile(const UnitaryGate& U, int n_max,
                             std::int64_t budget_bytes = kMemoryBudgetBytes);

}  // namespace dulab
