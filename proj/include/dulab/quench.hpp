#pragma once
// Exact state-vector brickwork evolution: entanglement growth from random
// translationally invariant product states, and infinite-temperature
// two-point correlator maps evaluated on exact causal windows.
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "dulab/gate.hpp"

namespace dulab {

// ---- state vectors -----------------------------------------------------------

struct StateVector {
    int q = 2;
    int N = 0;
    Vec amp;                 // q^N amplitudes, site-major (site 0 slowest)
    int layers_applied = 0;  // parity source for the next brickwork layer

    double norm() const { return amp.norm(); }
};

// One Haar-random single-site vector replicated across the chain
// (translation_invariant=true) or drawn independently per site.  Normalized;
// deterministic in the seed.  Throws std::runtime_error when q^N exceeds the
// memory budget.
StateVector random_product_state(int q, int N, std::uint64_t seed,
                                 bool translation_invariant = true,
                                 std::int64_t budget_bytes = kMemoryBudgetBytes);

// Apply U to sites (i, j = i+1 mod N); OpenMP-parallel over amplitude blocks.
void apply_two_site_gate(StateVector& s, const UnitaryGate& U, int i, int j);
// Plain gather/apply/scatter version kept as a cross-check and benchmark
// baseline; bit-identical contract with apply_two_site_gate.
void apply_two_site_gate_reference(StateVector& s, const UnitaryGate& U, int i,
                                   int j);

// `layers` brickwork layers with periodic boundary (N even): layers at even
// parity apply bonds (0,1),(2,3),..., odd parity bonds (1,2),...,(N-1,0).
// The starting parity is layers_applied % 2, so consecutive calls alternate
// seamlessly.  Norm is monitored; drift beyond 1e-10 per layer throws.
StateVector evolve_brickwork(StateVector state, const UnitaryGate& U, int layers);

// Renyi-alpha entanglement entropy (natural log) for the contiguous cut
// [0, cut_position) | [cut_position, N).  alpha=2 uses tr(rho^2) via a Gram
// matrix; other alpha go through singular values.
double renyi_entropy(const StateVector& s, int cut_position, double alpha = 2.0);

// ---- entanglement growth -----------------------------------------------------

struct GrowthSeries {
    int q = 2, N = 0, layers = 0;
    std::uint64_t seed = 0;
    std::vector<double> s2;          // S2 after layer t, t = 0..layers (nats)
    int fit_begin = 0, fit_end = 0;  // half-open layer window of the final fit
    double slope = 0.0;              // nats per layer, this gate
    double reference_slope = 0.0;    // nats per layer, dual-unitary reference
    double ve_estimate = 0.0;        // slope / reference_slope
    bool exceeds_reference = false;  // flagged, not fatal
    double saturation = 0.0;         // max of the series
    json to_json() const;
};

// Half-chain S2 per layer from a random translationally invariant product
// state; slope from a two-pass least-squares fit whose window starts at layer
// 2 and ends where S2 first exceeds 80% of its running maximum; v_E estimate
// normalized by a reference dual-unitary run at the same (q, N, layers, seed).
GrowthSeries entanglement_growth(const UnitaryGate& U, int N, int layers,
                                 std::uint64_t seed);

// ---- infinite-temperature correlators ------------------------------------

struct RayClass {
    int p = 0, r = 1;        // velocity v = p/r in lowest terms
    double v = 0.0;
    double max_abs = 0.0;    // over grid points on the ray with t >= r
    bool supported = false;  // max_abs > threshold
};

struct CorrelatorMap {
    int q = 2;
    int t_max = 0;
    int support_a = 1, support_b = 1;
    double threshold = 1e-10;
    // D(x, t) for t = 0..t_max, x = -t..t; entry index t*t + (x + t) in `d`
    // (rows concatenated; row t has 2t+1 entries).
    std::vector<cd> d;
    std::vector<RayClass> rays;

    cd at(int x, int t) const;
    json to_json() const;
};

// D(x,t) = q^{-N'} tr[sigma_A(x,t) sigma_B(0,0)] on the infinite chain, with
// sigma_B's leftmost site at 0, sigma_A's leftmost site at x, and layer 1
// acting on bonds (0,1),(2,3),....  Operators are q^w x q^w matrices on w <=
// support_width <= 3 adjacent sites.  Evaluated by folded Heisenberg
// evolution of sigma_B on the exact causal window (the intersection of the
// two operators' light cones; truncation outside it is exact by unitarity),
// so D(x,t) = 0 exactly outside the joint light cone.
CorrelatorMap correlator_map(const UnitaryGate& U, const Mat& op_A,
                             const Mat& op_B, int t_max, int support_width,
                             double ray_threshold = 1e-10,
                             std::int64_t budget_bytes = kMemoryBudgetBytes);

}  // namespace dulab
