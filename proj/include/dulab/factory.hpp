#pragma once
// Constructors for the gate families studied here: two-qubit hierarchical
// parametrizations, controlled and named gates, complex-Hadamard lattice
// gates, tensor products, block-diagonal gates and permutation-gate searches.
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dulab/gate.hpp"

namespace dulab {

struct HadamardMatrix {
    int q = 2;
    Mat h;  // q x q, all entries unit modulus, H H^dag = q * identity

    double invariant_residual() const;  // max of the two invariant violations
    void validate() const;              // throws on violation
};

// ---- two-qubit parametrized families ---------------------------------------

// U = (u1 (x) u2) exp(i pi/4 ZZ), with u_i = exp(i r_i n_i . sigma) and the
// constraint sqrt(2) sin(r_i) sin(theta_i) = +/- 1 (checked within 1e-10).
UnitaryGate qubit_L2(double r1, double theta1, double phi1, double r2,
                     double theta2, double phi2);
// Draws free (r_i, phi_i, sign_i) from the seed and solves for theta_i.
UnitaryGate qubit_L2_random(std::uint64_t seed);

// U = (v1 (x) v2) exp(-i J_z ZZ), v_i = cos(phi_i) X + sin(phi_i) Y.
UnitaryGate qubit_L3(double j_z, double phi1, double phi2);
UnitaryGate qubit_L3_random(std::uint64_t seed);

// ---- controlled and named gates ---------------------------------------------

struct ControlledGateResult {
    UnitaryGate gate;       // sum_i |i><i| (x) u_i
    bool flat_spectrum;     // tr(u_i^dag u_j) proportional to delta_ij
    bool l2_sufficient;     // sum_i u_i |j><j| u_i^dag = 1 for every j
};

ControlledGateResult controlled_unitary(const std::vector<Mat>& u_list);

// Supported names: identity, CNOT, SWAP, CZ (q=2 for CNOT/CZ, any q for
// identity/SWAP); CX (alternating {1, X} controlled shift, even q);
// P_CXSCXS, O8_rank4, O8_rank8, F2x4_block, F2x4_rank8 (q=4).
UnitaryGate named_gate(const std::string& name, int q);

// ---- complex Hadamard matrices ----------------------------------------------

HadamardMatrix chm_fourier(int q);
HadamardMatrix chm_qubit_standard();
HadamardMatrix chm_dephased(const HadamardMatrix& base,
                            const std::vector<cd>& row_phases,
                            const std::vector<cd>& col_phases);

enum class HadamardLattice { square_du, honeycomb, triangular, sheared };

// Two-site gates built from a complex Hadamard matrix:
//   square_du:  U_{ab,cd} = H_ab H_bd H_cd H_ac / q
//   honeycomb:  U_{ab,cd} = delta_ac sum_f H_af H_bf H_df / q
//   triangular: U_{ab,cd} = delta_ac H_ab H_ad H_bd / sqrt(q)
//   sheared:    U_{ab,cd} = delta_ac H_ab H_bd / sqrt(q)
UnitaryGate hadamard_gate(HadamardLattice lattice, const HadamardMatrix& H);

// ---- composite constructions ------------------------------------------------

// Legs regrouped so site 1 carries (a1, a2) and site 2 carries (b1, b2).
UnitaryGate tensor_product_gate(const UnitaryGate& V1, const UnitaryGate& V2);

struct BlockDiagonalResult {
    UnitaryGate gate;
    bool flat_spectrum;
};

// U = sum_k |k><k| (x) V_k with K blocks of size (p2 * q_site); the site
// dimension q_site = K * p2 is inferred, site 1 regrouped as (k, m).
BlockDiagonalResult block_diagonal_gate(const std::vector<Mat>& blocks);

// ---- permutation search -----------------------------------------------------

struct PermutationSearchResult {
    // sigma (as image list over q^2 points) and Schmidt rank for every
    // entangling gate that passed the hierarchical test
    std::vector<std::pair<std::vector<int>, int>> l2_members;
    std::map<int, std::int64_t> rank_histogram;  // among entangling members
    std::int64_t examined = 0;
};

// Exhaustive for q <= 3 (lexicographic enumeration with a flat-spectrum early
// rejection); q = 4 runs a seeded sampled search instead; q > 4 refused.
PermutationSearchResult permutation_search_L2(int q,
                                              std::int64_t samples = 1000000,
                                              std::uint64_t seed = 20240817);

// Permutation gate from an image list over the q^2 basis states.
UnitaryGate permutation_gate(int q, const std::vector<int>& image);

}  // namespace dulab
