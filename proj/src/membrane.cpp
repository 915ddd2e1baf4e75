#include "dulab/membrane.hpp"

#include <algorithm>
#include <cmath>

#include "znet.hpp"

namespace dulab {

using detail::NetT;

// ---- cut coordinates -----------------------------------------------------------

static int floor_div(int a, int b) {
    return a >= 0 ? a / b : -((-a + b - 1) / b);
}

CutCoordinates CutCoordinates::from_xt(int x, int t) {
    if (t < 0) throw std::invalid_argument("CutCoordinates: t >= 0");
    if (std::abs(x) > t) throw std::invalid_argument("CutCoordinates: |x| <= t");
    const int xm = ((x % 2) + 2) % 2;
    CutCoordinates c;
    c.x = x;
    c.t = t;
    c.n = std::max(0, floor_div(t - x - xm, 2));
    c.m = std::max(0, floor_div(t + x - xm, 2));
    return c;
}

// ---- partition function ----------------------------------------------------------

static detail::ZCaps z2_caps(int q) {
    using K = BoundaryVector::Kind;
    return detail::uniform_zcaps(q, K::square, K::circle, K::circle, K::square);
}

double z_alpha_exact(const UnitaryGate& U, int m, int n, int alpha,
                     std::int64_t budget_bytes) {
    if (alpha != 2)
        throw std::invalid_argument("z_alpha_exact: exact contraction is alpha=2 only");
    return detail::znet_value(U, m, n, z2_caps(U.q), budget_bytes);
}

std::vector<double> z2_column_scan(const UnitaryGate& U, int m_max, int n,
                                   std::int64_t budget_bytes) {
    return detail::znet_scan(U, m_max, n, z2_caps(U.q), budget_bytes);
}

double z2_closed_form(double B1, int q, int m, int n) {
    if (B1 < 1.0 - 1e-12 || B1 > double(q) * q + 1e-12)
        throw std::invalid_argument("z2_closed_form: B1 must lie in [1, q^2]");
    const int mm = std::max(m, 0), nn = std::max(n, 0);
    return std::pow(B1, std::min(mm, nn)) / std::pow(double(q), mm + nn);
}

// ---- line tension scan -----------------------------------------------------------

json MembraneScan::to_json() const {
    json rows = json::array();
    for (const auto& r : grid)
        rows.push_back({{"x", r.x},
                        {"t", r.t},
                        {"m", r.m},
                        {"n", r.n},
                        {"Z", r.Z},
                        {"S", r.S},
                        {"ELT", r.ELT}});
    return json{{"q", q},
                {"alpha", alpha},
                {"s_eq", s_eq},
                {"ve_estimate", ve_estimate},
                {"grid", rows}};
}

MembraneScan elt_scan(const UnitaryGate& U, const std::vector<double>& velocities,
                      const std::vector<int>& t_values, int alpha) {
    MembraneScan scan;
    scan.q = U.q;
    scan.alpha = alpha;
    scan.s_eq = std::log(double(U.q));
    for (int t : t_values) {
        if (t <= 0) throw std::invalid_argument("elt_scan: t >= 1");
        for (double v : velocities) {
            if (v < -1.0 || v > 1.0)
                throw std::invalid_argument("elt_scan: |v| <= 1");
            const int x = static_cast<int>(std::lround(v * t));
            const CutCoordinates c = CutCoordinates::from_xt(x, t);
            const double Z = z_alpha_exact(U, c.m, c.n, alpha);
            const double S = -std::log(Z) / (alpha - 1);
            scan.grid.push_back({c.x, c.t, c.m, c.n, Z, S, S / (scan.s_eq * t)});
        }
    }
    // v_E estimate: the slowest-cut point of the latest time slice
    const MembraneScan::Row* best = nullptr;
    for (const auto& r : scan.grid)
        if (!best || r.t > best->t ||
            (r.t == best->t && std::abs(r.x) < std::abs(best->x)))
            best = &r;
    if (best) scan.ve_estimate = best->ELT;
    return scan;
}

double ve_from_rank(int q, int schmidt_rank) {
    if (schmidt_rank < 1 || schmidt_rank > q * q)
        throw std::invalid_argument("ve_from_rank: rank in [1, q^2]");
    return std::log(double(schmidt_rank)) / std::log(double(q) * q);
}

// ---- velocity bounds --------------------------------------------------------------

json VelocityBounds::to_json() const {
    json j{{"B_left", B_left},     {"B_right", B_right},
           {"vstar_left", vstar_left}, {"vstar_right", vstar_right},
           {"lower", lower},       {"upper", upper},
           {"symmetric", symmetric}};
    j["k_left"] = k_left ? json(*k_left) : json(nullptr);
    j["k_right"] = k_right ? json(*k_right) : json(nullptr);
    return j;
}

VelocityBounds ve_bounds(int q, std::optional<int> k_left,
                         std::optional<int> k_right, double B_left,
                         double B_right) {
    const double lq2 = std::log(double(q) * q);
    auto validate = [&](std::optional<int> k, double B) {
        if (k && *k < 2) throw std::invalid_argument("ve_bounds: k >= 2");
        if (k && (B < 1.0 - 1e-12 || B > double(q) * q + 1e-12))
            throw std::invalid_argument("ve_bounds: B in [1, q^2]");
    };
    validate(k_left, B_left);
    validate(k_right, B_right);

    VelocityBounds out;
    out.k_left = k_left;
    out.k_right = k_right;
    out.B_left = B_left;
    out.B_right = B_right;

    // per-side front velocity v* = (k-2)/k and tension there,
    // E(v*) = 1 - (1 - v*) log B_{k-1} / log q^2; an absent side contributes
    // the causal worst case v* = 1, E = 1.
    auto side = [&](std::optional<int> k, double B) {
        if (!k) return std::pair<double, double>{1.0, 1.0};
        const double vs = double(*k - 2) / *k;
        return std::pair<double, double>{vs, 1.0 - (1.0 - vs) * std::log(B) / lq2};
    };
    const auto [vl, el] = side(k_left, B_left);
    const auto [vr, er] = side(k_right, B_right);
    out.vstar_left = vl;
    out.vstar_right = vr;

    double lower = 0.0;
    if (k_left) lower = std::max(lower, 1.0 - std::log(B_left) / lq2);
    if (k_right) lower = std::max(lower, 1.0 - std::log(B_right) / lq2);

    double upper;
    if (vl + vr > 0.0)
        upper = (vr * el + vl * er) / (vr + vl);
    else  // both sides at level 2: the bounds collapse to the exact result
        upper = lower;

    out.lower = std::clamp(lower, 0.0, 1.0);
    out.upper = std::clamp(upper, 0.0, 1.0);
    out.symmetric = k_left && k_right && *k_left == *k_right &&
                    std::abs(B_left - B_right) < 1e-12;
    return out;
}

// ---- influence matrix --------------------------------------------------------------

namespace {

Tensor circle1(int q) {
    Tensor c({static_cast<std::int64_t>(q) * q});
    for (int k = 0; k < q; ++k) c.data[k * q + k] = 1.0 / std::sqrt(double(q));
    return c;
}

std::string lab(char kind, int l) { return std::string(1, kind) + std::to_string(l); }

void erase_two(std::vector<std::string>& labels, int a1, int a2) {
    std::vector<std::string> keep;
    for (std::size_t k = 0; k < labels.size(); ++k)
        if (static_cast<int>(k) != a1 && static_cast<int>(k) != a2)
            keep.push_back(labels[k]);
    labels = std::move(keep);
}

// Permute the contracted axes to the back (releasing the input buffer before
// the product) so the contraction never holds three full-size arrays.
Tensor push_back_axes(Tensor&& t, const std::vector<int>& axes) {
    const int r = t.rank();
    std::vector<bool> used(r, false);
    for (int a : axes) used[a] = true;
    std::vector<int> perm;
    for (int k = 0; k < r; ++k)
        if (!used[k]) perm.push_back(k);
    for (int a : axes) perm.push_back(a);
    Tensor out = t.transposed(perm);
    t = Tensor{};
    return out;
}

// Right influence matrix of the cut between sites 0|1 for L = 2t brickwork
// layers (layer 1 acts on (0,1), (2,3), ...), built by absorbing columns
// j = R..1 into a transfer sweep.  The returned tensor has the 2t legs
// [I_l, O_l] for the crossing layers l = 1, 3, ..., 2t-1.
Tensor build_influence_tensor(const UnitaryGate& U, int t, int R,
                              std::int64_t budget_bytes) {
    const int q = U.q;
    const std::int64_t D = static_cast<std::int64_t>(q) * q;
    const int L = 2 * t;
    {
        long double bytes = 16.0L;
        for (int i = 0; i < 2 * t + 1; ++i) bytes *= double(D);
        if (bytes > static_cast<long double>(budget_bytes))
            throw std::runtime_error("influence-matrix sweep exceeds the memory budget");
    }
    const Tensor W = fold(U, 1).t;  // [O1, I1, O2, I2]
    const Tensor circ = circle1(q);
    // gate with both right legs capped: legs [O1, I1]
    Tensor E = Tensor::tensordot(W, circ, {2}, {0});
    E = Tensor::tensordot(E, circ, {2}, {0});
    // pre-permuted gates for the sweep steps
    const Tensor Wp2 = W.transposed({3, 2, 0, 1});  // [I2, O2, O1, I1]
    const Tensor Wp1 = W.transposed({3, 0, 1, 2});  // [I2, O1, I1, O2]

    auto crossing = [&](int l, int j) {  // layer l has a gate on (j, j+1)
        return (l % 2 == 1 && j % 2 == 0) || (l % 2 == 0 && j % 2 == 1);
    };

    NetT S;
    for (int l = 1; l <= L; ++l) {
        if (!crossing(l, R)) continue;
        S.t = S.labels.empty() ? E : Tensor::outer(S.t, E);
        S.labels.push_back(lab('O', l));
        S.labels.push_back(lab('I', l));
    }

    for (int j = R; j >= 1; --j) {
        NetT cur;
        cur.t = Tensor::outer(S.t, circ);
        S.t = Tensor{};
        cur.labels = std::move(S.labels);
        cur.labels.push_back("w");
        int l = 1;
        while (l <= L) {
            if (crossing(l, j)) {
                // the worldline enters this gate from the right column:
                // close I_l against w and continue from O_l
                const int ai = cur.axis(lab('I', l)), aw = cur.axis("w");
                cur.t = Tensor::trace_axes(cur.t, ai, aw);
                erase_two(cur.labels, ai, aw);
                cur.labels[cur.axis(lab('O', l))] = "w";
                l += 1;
            } else if (l == L) {
                // last layer attaches on the left with no partner above
                const int aw = cur.axis("w");
                Tensor tp = push_back_axes(std::move(cur.t), {aw});
                cur.t = Tensor::tensordot(tp, Wp1, {tp.rank() - 1}, {0});
                cur.labels.erase(cur.labels.begin() + aw);
                cur.labels.push_back(lab('O', l));
                cur.labels.push_back(lab('I', l));
                cur.labels.push_back("w");
                l += 1;
            } else {
                // attach a left-column gate at layer l and immediately absorb
                // the crossing gate at layer l+1, keeping the leg count flat
                const int aw = cur.axis("w"), ai = cur.axis(lab('I', l + 1));
                Tensor tp = push_back_axes(std::move(cur.t), {aw, ai});
                const int r = tp.rank();
                cur.t = Tensor::tensordot(tp, Wp2, {r - 2, r - 1}, {0, 1});
                tp = Tensor{};
                erase_two(cur.labels, std::min(aw, ai), std::max(aw, ai));
                cur.labels.push_back(lab('O', l));
                cur.labels.push_back(lab('I', l));
                cur.labels[cur.axis(lab('O', l + 1))] = "w";
                l += 2;
            }
        }
        {
            const int aw = cur.axis("w");
            Tensor tp = push_back_axes(std::move(cur.t), {aw});
            cur.t = Tensor::tensordot(tp, circ, {tp.rank() - 1}, {0});
            cur.labels.erase(cur.labels.begin() + aw);
        }
        S = std::move(cur);
    }

    std::vector<int> order;
    for (int l = 1; l <= L; ++l)
        if (S.has(lab('I', l))) {
            order.push_back(S.axis(lab('I', l)));
            order.push_back(S.axis(lab('O', l)));
        }
    return S.t.transposed(order);
}

}  // namespace

std::vector<int> im_area_law_check(const UnitaryGate& U, int t, int extra_columns,
                                   std::int64_t budget_bytes) {
    if (t < 1) throw std::invalid_argument("im_area_law_check: t >= 1");
    const std::int64_t D = static_cast<std::int64_t>(U.q) * U.q;
    Tensor T = build_influence_tensor(U, t, t + 2 + extra_columns, budget_bytes);

    // Schmidt ranks across the 2t-1 temporal cuts via a left-to-right
    // compression sweep: project onto the row space at each cut and carry
    // the compressed matrix forward.
    const double rtol = 1e-8;
    std::vector<int> ranks;
    using RowMat = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    std::vector<cd> buf = std::move(T.data);
    std::int64_t rows = 1, cols = static_cast<std::int64_t>(buf.size());
    for (int c = 1; c <= 2 * t - 1; ++c) {
        rows *= D;
        cols /= D;
        Eigen::Map<RowMat> X(buf.data(), rows, cols);
        Mat G = X * X.adjoint();
        Eigen::SelfAdjointEigenSolver<Mat> es(G);
        const auto& ev = es.eigenvalues();  // ascending
        const double smax = std::sqrt(std::max(ev(rows - 1), 0.0));
        int rank = 0;
        for (std::int64_t i = 0; i < rows; ++i)
            if (std::sqrt(std::max(ev(i), 0.0)) > rtol * smax) ++rank;
        ranks.push_back(rank);
        if (rank == 0) {
            for (int rest = c + 1; rest <= 2 * t - 1; ++rest) ranks.push_back(0);
            break;
        }
        RowMat next = es.eigenvectors().rightCols(rank).adjoint() * X;
        buf.assign(next.data(), next.data() + next.size());
        rows = rank;
    }
    return ranks;
}

}  // namespace dulab
