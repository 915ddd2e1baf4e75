#pragma once
// Predicates and measures on two-site gates: dual-unitarity, T-duality, the
// hierarchical light-cone conditions, staircase purities, entangling power
// and gate typicality.
#include <map>
#include <optional>
#include <string>

#include "dulab/gate.hpp"

namespace dulab {

struct CheckResult {
    bool ok = false;
    double residual = 0.0;
};

enum class LightconeDir { left, right };

inline const char* to_string(LightconeDir d) {
    return d == LightconeDir::left ? "left" : "right";
}

struct HierarchyReport {
    CheckResult dual_unitary;
    CheckResult t_dual;
    std::optional<int> level_left;   // smallest verified k, 2..k_max
    std::optional<int> level_right;
    // keyed "k=<k> dir=<left|right> alpha=<1|2> cap=<circle|square>";
    // value < 0 marks a check skipped for budget reasons
    std::map<std::string, double> residuals;

    json to_json() const;
};

struct EntanglingMeasures {
    std::vector<double> B;  // B_1 .. B_lmax
    double b1 = 0.0;        // B_1 / q^2
    double EP = 0.0;
    double GT = 0.0;

    json to_json() const;
};

// True iff reshuffle(U) is unitary within tol (Frobenius residual).
CheckResult verify_dual_unitary(const UnitaryGate& U, double tol = kUnitTol);

// True iff partial_transpose(U) is unitary within tol.
CheckResult verify_t_dual(const UnitaryGate& U, double tol = kUnitTol);

// Hierarchical condition with k gates on the chosen light-cone direction,
// checked at replica level alpha=1 with circle boundary vectors: the capped
// k-gate chain must factorize with a circle on its free corner leg, for both
// mirror orientations of the diagram.
CheckResult verify_Lk(const UnitaryGate& U, int k, LightconeDir dir,
                      double tol = kUnitTol);

// Redundant alpha=2 variant of the same diagrams with circle or square caps.
// Returns nothing when the alpha=2 fold exceeds the memory budget (q >= 4).
std::optional<double> verify_Lk_alpha2(const UnitaryGate& U, int k,
                                       LightconeDir dir,
                                       BoundaryVector::Kind cap,
                                       std::int64_t budget_bytes = kMemoryBudgetBytes);

HierarchyReport classify_hierarchy(const UnitaryGate& U, int k_max = 4,
                                   double tol = kUnitTol);

// Staircase purity B_l of the diagonal composition of l gates.
// B_1 equals (1/q^2) sum_i lambda_i^4.
double purity_B(const UnitaryGate& U, int l);

EntanglingMeasures ep_gt(const UnitaryGate& U, int l_max = 1);

// V = (u_out_left (x) u_out_right) U (u_in_left (x) u_in_right).
UnitaryGate local_dress(const UnitaryGate& U, const Mat& u_in_left,
                        const Mat& u_in_right, const Mat& u_out_left,
                        const Mat& u_out_right);

}  // namespace dulab
