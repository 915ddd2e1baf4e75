#pragma once
// Internal contraction engines shared by the membrane and opdyn modules.
//
// 1. NetT: a labeled dense complex tensor used for small folded-network
//    sweeps (influence matrices, staircases) where readability matters more
//    than speed.
//
// 2. A real-arithmetic engine for the rectangular replica-2 networks
//    Z_alpha(m,n).  Each single-replica folded leg (dimension q^2) is
//    rotated into an orthonormal Hermitian operator basis {B_i} with
//    B_0 = 1/sqrt(q): there the folded gate has real entries
//    tr[(B_i1 (x) B_i2) U (B_j1 (x) B_j2) U^dag] and the replica-pair caps
//    become   circle -> e_0 e_0^T,   square -> 1/q * identity,
//    so the whole sweep runs in doubles at a quarter of the complex cost.
//
// Network layout, gate (i,j) with i = 1..m rows, j = 1..n columns:
//   vertical   (i,j).O2 -> (i+1,j).I1     horizontal (i,j).O1 -> (i,j+1).I2
// Boundary legs: bottom = I1 of row 1, left = I2 of column 1, top = O2 of
// row m, right = O1 of column n.  Caps are rank-2 tensors pairing the two
// replica sheets; the sweep runs row by row over the width-n boundary,
// carrying one chain leg per sheet.
#include <string>
#include <vector>

#include "dulab/gate.hpp"

namespace dulab::detail {

// ---- labeled complex tensor --------------------------------------------------

struct NetT {
    Tensor t;
    std::vector<std::string> labels;

    int axis(const std::string& l) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == l) return static_cast<int>(i);
        throw std::logic_error("NetT: missing label " + l);
    }
    bool has(const std::string& l) const {
        for (const auto& x : labels)
            if (x == l) return true;
        return false;
    }
    void drop(int i) { labels.erase(labels.begin() + i); }
};

// ---- Hermitian operator basis ------------------------------------------------

// Columns are vec(B_i) (row-major vectorization), B_0 = 1/sqrt(q), then the
// symmetric, antisymmetric and diagonal generalized Gell-Mann matrices,
// orthonormal under tr[B_i B_j] = delta_ij.
Mat op_basis(int q);

// ---- real replica-2 engine ---------------------------------------------------

using RMat = Eigen::MatrixXd;

// Folded gate in the operator basis, stored as the step matrix
// G[(I1*D + I2), (O2*D + O1)], D = q^2, row-major.
struct RealGate {
    int q = 2;
    std::vector<double> g;
    int D() const { return q * q; }
};

// reflected=true exchanges the two sites (legs O1<->O2, I1<->I2), which
// realizes the diagonal reflection of the network.
RealGate real_step_gate(const UnitaryGate& U, bool reflected = false);

// Replica-pair cap over (sheet a leg, sheet b leg) in the operator basis.
RMat real_cap(BoundaryVector::Kind kind, int q);

struct ZCaps {
    RMat bottom, left, top, right;
};

ZCaps uniform_zcaps(int q, BoundaryVector::Kind bottom, BoundaryVector::Kind left,
                    BoundaryVector::Kind top, BoundaryVector::Kind right);

// Largest sweep array is q^{4(w+1)} entries at width w; throws
// std::runtime_error when 16 * q^{4(w+1)} bytes exceed the budget.
void check_sweep_budget(int q, int width, std::int64_t budget_bytes);

// out[p, m, r] += sum_{s,c} cur[p, s, m, c] * W[(s*C + c), r]
// (all arrays row-major; out must be zero-initialized by the caller).
void contract_step(const double* cur, std::int64_t P, std::int64_t S,
                   std::int64_t M, std::int64_t C, const double* W,
                   std::int64_t R, double* out);

// One row of n gates applied to a width-n boundary state.  Input layout
// [b_n..b_1, a_n..a_1] (sheet b legs reversed, then sheet a reversed), output
// layout [oa_1..oa_n, ob_1..ob_n]; each leg has extent D = q^2.
std::vector<double> apply_row_real(const std::vector<double>& state,
                                   const RealGate& G, const RMat& lcap,
                                   const RMat& rcap, int n);

// Boundary bookkeeping around apply_row_real.
std::vector<double> bottom_state_real(const RMat& cap, int n);   // row-input layout
std::vector<double> reverse_legs_real(const std::vector<double>& state, int legs,
                                      int D);                    // full reversal
double close_top_real(const std::vector<double>& state, const RMat& cap, int n);

// Per-position variants (caps[j-1] belongs to boundary position j = 1..n).
std::vector<double> bottom_state_real_pos(const std::vector<RMat>& caps);
double close_top_real_pos(const std::vector<double>& state,
                          const std::vector<RMat>& caps);

// Network value with position-dependent caps: bottom/top hold one cap per
// column (size n), left/right one per row (size m).  The caller is
// responsible for orienting the network so that n <= m is not required;
// `reflected` only selects the leg-exchanged step gate.
double znet_value_pos(const UnitaryGate& U, int m, int n,
                      const std::vector<RMat>& bottom,
                      const std::vector<RMat>& left,
                      const std::vector<RMat>& top,
                      const std::vector<RMat>& right, bool reflected,
                      std::int64_t budget_bytes = kMemoryBudgetBytes);

// Full network value; degenerate cuts (m = 0 or n = 0) return q^{-(m+n)}.
// When m < n the lattice is reflected across the diagonal so the sweep width
// is always min(m,n).
double znet_value(const UnitaryGate& U, int m, int n, const ZCaps& caps,
                  std::int64_t budget_bytes = kMemoryBudgetBytes);

// Z(i, n) for every i = 1..m_max from a single width-n sweep.
std::vector<double> znet_scan(const UnitaryGate& U, int m_max, int n,
                              const ZCaps& caps,
                              std::int64_t budget_bytes = kMemoryBudgetBytes);

// ---- reference implementation ------------------------------------------------

// Independent complex-basis contraction of the same network (row sweep with
// labeled tensordots over the alpha=1 folded gate, two explicit sheets).
// Slow; kept for cross-checking the real engine in tests.
double znet_value_reference(const UnitaryGate& U, int m, int n,
                            BoundaryVector::Kind bottom, BoundaryVector::Kind left,
                            BoundaryVector::Kind top, BoundaryVector::Kind right);

}  // namespace dulab::detail
