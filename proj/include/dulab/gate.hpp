#pragma once
// Two-site gates and their folded representations.
//
// Index conventions, fixed globally:
//   * composite index (ab) = a*q + b (row-major);
//   * U is the q^2 x q^2 matrix U_{(o1 o2),(i1 i2)}, site 1 on the left;
//   * as a 4-leg tensor, U has legs [o1, o2, i1, i2];
//   * a folded gate at replica count alpha has legs [O1, I1, O2, I2], each of
//     dimension q^{2 alpha}, with per-leg replica ordering
//     (ket_1, bra_1, ..., ket_alpha, bra_alpha).
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "dulab/tensor.hpp"

namespace dulab {

using json = nlohmann::json;

// Default tolerances and budgets used across the library.
inline constexpr double kUnitTol = 1e-10;       // algebraic identity residuals
inline constexpr double kSchmidtCutoff = 1e-8;  // relative singular value cutoff
inline constexpr std::int64_t kMemoryBudgetBytes = 2LL << 30;  // folded tensors

struct GateRecipe {
    std::string kind = "unspecified";
    json params = json::object();

    json to_json() const;
    static GateRecipe from_json(const json& j);
};

struct UnitaryGate {
    int q = 2;
    Mat m;  // q^2 x q^2
    GateRecipe recipe;

    UnitaryGate() = default;
    UnitaryGate(int q_, Mat m_, GateRecipe r = {});

    int dim() const { return q * q; }
    double unitarity_residual() const;  // ||U U^dag - 1||_F
    // 4-leg tensor [o1, o2, i1, i2]
    Tensor as_tensor() const;

    // Entry access by site indices.
    cd entry(int o1, int o2, int i1, int i2) const {
        return m(o1 * q + o2, i1 * q + i2);
    }
};

struct BoundaryVector {
    enum class Kind { circle, square };
    Kind kind;
    int q;
    int alpha;
    Tensor data;  // dimension q^{2 alpha}
};

struct FoldedGate {
    int q = 2;
    int alpha = 1;
    Tensor t;  // legs [O1, I1, O2, I2], each of dimension q^{2 alpha}

    int leg_dim() const;
    static constexpr int O1 = 0, I1 = 1, O2 = 2, I2 = 3;
};

struct SchmidtData {
    std::vector<double> values;       // descending, length q^2
    int rank = 0;                     // count above cutoff * values[0]
    std::vector<Mat> left_basis;      // X_i, q x q
    std::vector<Mat> right_basis;     // Y_i, q x q
};

// Space-time dual: Ut_{(ab),(cd)} = U_{(ac),(bd)}.
Mat reshuffle(const UnitaryGate& U);
Mat reshuffle_matrix(const Mat& m, int q);

// Partial transpose: (U^Gamma)_{(ab),(cd)} = U_{(ad),(cb)}.
Mat partial_transpose(const UnitaryGate& U);
Mat partial_transpose_matrix(const Mat& m, int q);

// Folded gate (U (x) U*)^{(x) alpha}, regrouped per the leg convention above.
// Throws std::runtime_error if the tensor would exceed budget_bytes.
FoldedGate fold(const UnitaryGate& U, int alpha,
                std::int64_t budget_bytes = kMemoryBudgetBytes);

BoundaryVector boundary_vector(BoundaryVector::Kind kind, int q, int alpha);

SchmidtData schmidt_decompose(const UnitaryGate& U, double cutoff = kSchmidtCutoff);

// Schmidt values of the gate itself (spatial operator Schmidt spectrum):
// singular values of reshuffle(U).
std::vector<double> schmidt_values(const UnitaryGate& U);
// Singular values of the partial transpose.
std::vector<double> dual_schmidt_values(const UnitaryGate& U);

// Haar-random unitary via QR of a complex Ginibre matrix with the diagonal
// phase correction; deterministic in the seed.
Mat haar_unitary(int dim, std::uint64_t seed);

// SWAP gate on C^q (x) C^q.
Mat swap_matrix(int q);

}  // namespace dulab
