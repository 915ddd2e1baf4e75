#include "dulab/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace dulab {

std::int64_t Tensor::flat(const std::vector<std::int64_t>& idx) const {
    if (idx.size() != shape.size())
        throw std::invalid_argument("Tensor::flat: wrong index rank");
    std::int64_t f = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (idx[k] < 0 || idx[k] >= shape[k])
            throw std::out_of_range("Tensor::flat: index out of range");
        f = f * shape[k] + idx[k];
    }
    return f;
}

Tensor Tensor::reshaped(std::vector<std::int64_t> s) const {
    if (size_of(s) != size())
        throw std::invalid_argument("Tensor::reshaped: size mismatch");
    Tensor out;
    out.shape = std::move(s);
    out.data = data;
    return out;
}

Tensor Tensor::transposed(const std::vector<int>& perm) const {
    const int r = rank();
    if (static_cast<int>(perm.size()) != r)
        throw std::invalid_argument("Tensor::transposed: bad permutation size");
    std::vector<bool> seen(r, false);
    for (int p : perm) {
        if (p < 0 || p >= r || seen[p])
            throw std::invalid_argument("Tensor::transposed: invalid permutation");
        seen[p] = true;
    }
    std::vector<std::int64_t> new_shape(r);
    for (int k = 0; k < r; ++k) new_shape[k] = shape[perm[k]];

    // strides of the source in row-major order
    std::vector<std::int64_t> src_stride(r, 1);
    for (int k = r - 2; k >= 0; --k) src_stride[k] = src_stride[k + 1] * shape[k + 1];
    std::vector<std::int64_t> gather(r);
    for (int k = 0; k < r; ++k) gather[k] = src_stride[perm[k]];

    Tensor out(new_shape);
    const std::int64_t n = size();
    std::vector<std::int64_t> idx(r, 0);
    std::int64_t src = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        out.data[i] = data[src];
        for (int k = r - 1; k >= 0; --k) {
            if (++idx[k] < new_shape[k]) {
                src += gather[k];
                break;
            }
            src -= gather[k] * (new_shape[k] - 1);
            idx[k] = 0;
        }
    }
    return out;
}

Tensor Tensor::conjugated() const {
    Tensor out = *this;
    for (auto& z : out.data) z = std::conj(z);
    return out;
}

double Tensor::norm() const {
    double s = 0.0;
    for (const auto& z : data) s += std::norm(z);
    return std::sqrt(s);
}

double Tensor::max_abs() const {
    double m = 0.0;
    for (const auto& z : data) m = std::max(m, std::abs(z));
    return m;
}

Tensor& Tensor::operator*=(cd a) {
    for (auto& z : data) z *= a;
    return *this;
}

Tensor Tensor::operator-(const Tensor& o) const {
    if (shape != o.shape) throw std::invalid_argument("Tensor::operator-: shape mismatch");
    Tensor out = *this;
    for (std::size_t i = 0; i < data.size(); ++i) out.data[i] -= o.data[i];
    return out;
}

Tensor Tensor::operator+(const Tensor& o) const {
    if (shape != o.shape) throw std::invalid_argument("Tensor::operator+: shape mismatch");
    Tensor out = *this;
    for (std::size_t i = 0; i < data.size(); ++i) out.data[i] += o.data[i];
    return out;
}

cd Tensor::dot(const Tensor& o) const {
    if (size() != o.size()) throw std::invalid_argument("Tensor::dot: size mismatch");
    cd s(0.0, 0.0);
    for (std::size_t i = 0; i < data.size(); ++i) s += data[i] * o.data[i];
    return s;
}

Tensor Tensor::tensordot(const Tensor& a, const Tensor& b,
                         const std::vector<int>& axes_a,
                         const std::vector<int>& axes_b) {
    if (axes_a.size() != axes_b.size())
        throw std::invalid_argument("tensordot: axis count mismatch");
    const int ra = a.rank(), rb = b.rank();
    std::vector<bool> ca(ra, false), cb(rb, false);
    std::int64_t contracted = 1;
    for (std::size_t k = 0; k < axes_a.size(); ++k) {
        int pa = axes_a[k], pb = axes_b[k];
        if (pa < 0 || pa >= ra || pb < 0 || pb >= rb || ca[pa] || cb[pb])
            throw std::invalid_argument("tensordot: bad axes");
        if (a.shape[pa] != b.shape[pb])
            throw std::invalid_argument("tensordot: extent mismatch");
        ca[pa] = true;
        cb[pb] = true;
        contracted *= a.shape[pa];
    }
    // permute a: free axes first, contracted last (in axes_a order)
    std::vector<int> pa_order;
    std::vector<std::int64_t> out_shape;
    for (int k = 0; k < ra; ++k)
        if (!ca[k]) {
            pa_order.push_back(k);
            out_shape.push_back(a.shape[k]);
        }
    for (int k : axes_a) pa_order.push_back(k);
    // permute b: contracted first (in axes_b order), free last
    std::vector<int> pb_order(axes_b.begin(), axes_b.end());
    for (int k = 0; k < rb; ++k)
        if (!cb[k]) {
            pb_order.push_back(k);
            out_shape.push_back(b.shape[k]);
        }

    auto is_identity = [](const std::vector<int>& p) {
        for (std::size_t k = 0; k < p.size(); ++k)
            if (p[k] != static_cast<int>(k)) return false;
        return true;
    };
    // Avoid materializing permuted copies when the axes are already in place.
    Tensor ap_store, bp_store;
    const Tensor* ap = &a;
    const Tensor* bp = &b;
    if (!is_identity(pa_order)) {
        ap_store = a.transposed(pa_order);
        ap = &ap_store;
    }
    if (!is_identity(pb_order)) {
        bp_store = b.transposed(pb_order);
        bp = &bp_store;
    }
    const std::int64_t m = a.size() / contracted;
    const std::int64_t n = b.size() / contracted;

    if (out_shape.empty()) out_shape.push_back(1);
    Tensor out(out_shape);
    if (out.size() != m * n) throw std::logic_error("tensordot: internal size error");
    Eigen::Map<const Mat> A(ap->data.data(), contracted, m);  // column-major view
    Eigen::Map<const Mat> B(bp->data.data(), n, contracted);
    // row-major (m x k)·(k x n): with column-major maps, result^T = B·A
    Eigen::Map<Mat> C(out.data.data(), n, m);
    C.noalias() = B * A;  // (n x m) column-major == row-major (m x n)
    return out;
}

Tensor Tensor::trace_axes(const Tensor& t, int ax1, int ax2) {
    const int r = t.rank();
    if (ax1 == ax2 || ax1 < 0 || ax2 < 0 || ax1 >= r || ax2 >= r)
        throw std::invalid_argument("trace_axes: bad axes");
    if (t.shape[ax1] != t.shape[ax2])
        throw std::invalid_argument("trace_axes: extent mismatch");
    std::vector<int> perm;
    std::vector<std::int64_t> out_shape;
    for (int k = 0; k < r; ++k)
        if (k != ax1 && k != ax2) {
            perm.push_back(k);
            out_shape.push_back(t.shape[k]);
        }
    perm.push_back(ax1);
    perm.push_back(ax2);
    Tensor tp = t.transposed(perm);
    const std::int64_t d = t.shape[ax1];
    if (out_shape.empty()) out_shape.push_back(1);
    Tensor out(out_shape);
    const std::int64_t blocks = out.size();
    for (std::int64_t i = 0; i < blocks; ++i) {
        cd s(0.0, 0.0);
        const cd* base = tp.data.data() + i * d * d;
        for (std::int64_t j = 0; j < d; ++j) s += base[j * d + j];
        out.data[i] = s;
    }
    return out;
}

Tensor Tensor::outer(const Tensor& a, const Tensor& b) {
    std::vector<std::int64_t> out_shape = a.shape;
    out_shape.insert(out_shape.end(), b.shape.begin(), b.shape.end());
    Tensor out(out_shape);
    const std::int64_t nb = b.size();
    for (std::int64_t i = 0; i < a.size(); ++i)
        for (std::int64_t j = 0; j < nb; ++j) out.data[i * nb + j] = a.data[i] * b.data[j];
    return out;
}

Mat Tensor::to_matrix(int split_axis) const {
    const int r = rank();
    if (split_axis < 0 || split_axis > r)
        throw std::invalid_argument("to_matrix: bad split");
    std::int64_t rows = 1, cols = 1;
    for (int k = 0; k < split_axis; ++k) rows *= shape[k];
    for (int k = split_axis; k < r; ++k) cols *= shape[k];
    Mat m(rows, cols);
    for (std::int64_t i = 0; i < rows; ++i)
        for (std::int64_t j = 0; j < cols; ++j) m(i, j) = data[i * cols + j];
    return m;
}

Tensor Tensor::from_matrix(const Mat& m, std::vector<std::int64_t> shape) {
    Tensor out(std::move(shape));
    if (out.size() != m.rows() * m.cols())
        throw std::invalid_argument("from_matrix: size mismatch");
    std::int64_t p = 0;
    for (std::int64_t i = 0; i < m.rows(); ++i)
        for (std::int64_t j = 0; j < m.cols(); ++j) out.data[p++] = m(i, j);
    return out;
}

Tensor Tensor::from_vector(const Vec& v) {
    Tensor out({v.size()});
    for (std::int64_t i = 0; i < v.size(); ++i) out.data[i] = v(i);
    return out;
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::int64_t i = 0; i < a.rows(); ++i)
        for (std::int64_t j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace dulab
