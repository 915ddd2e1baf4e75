#pragma once
// Dense complex tensor primitives: row-major storage, permutation, reshape,
// and pairwise contraction (tensordot) backed by Eigen matrix products.
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace dulab {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

class Tensor {
public:
    std::vector<std::int64_t> shape;
    std::vector<cd> data;

    Tensor() = default;
    explicit Tensor(std::vector<std::int64_t> s) : shape(std::move(s)) {
        data.assign(static_cast<std::size_t>(size_of(shape)), cd(0.0, 0.0));
    }
    Tensor(std::vector<std::int64_t> s, std::vector<cd> d)
        : shape(std::move(s)), data(std::move(d)) {
        if (size_of(shape) != static_cast<std::int64_t>(data.size()))
            throw std::invalid_argument("Tensor: shape/data size mismatch");
    }

    static std::int64_t size_of(const std::vector<std::int64_t>& s) {
        std::int64_t n = 1;
        for (auto e : s) {
            if (e <= 0) throw std::invalid_argument("Tensor: nonpositive extent");
            n *= e;
        }
        return n;
    }

    std::int64_t size() const { return static_cast<std::int64_t>(data.size()); }
    int rank() const { return static_cast<int>(shape.size()); }

    cd& at(const std::vector<std::int64_t>& idx) { return data[flat(idx)]; }
    const cd& at(const std::vector<std::int64_t>& idx) const { return data[flat(idx)]; }

    std::int64_t flat(const std::vector<std::int64_t>& idx) const;

    Tensor reshaped(std::vector<std::int64_t> s) const;
    Tensor transposed(const std::vector<int>& perm) const;
    Tensor conjugated() const;

    double norm() const;
    double max_abs() const;

    Tensor& operator*=(cd a);
    Tensor operator-(const Tensor& o) const;
    Tensor operator+(const Tensor& o) const;

    // Sum over data of elementwise product (no conjugation) with another
    // tensor of identical total size.
    cd dot(const Tensor& o) const;

    // Contract the given axes of a with the given axes of b (matched in
    // order).  Result carries a's free axes followed by b's free axes.
    static Tensor tensordot(const Tensor& a, const Tensor& b,
                            const std::vector<int>& axes_a,
                            const std::vector<int>& axes_b);

    // Contract a single tensor's axis pair (partial trace over two axes of
    // equal extent).
    static Tensor trace_axes(const Tensor& t, int ax1, int ax2);

    static Tensor outer(const Tensor& a, const Tensor& b);

    // Flatten to an Eigen matrix splitting axes [0, split) x [split, rank).
    Mat to_matrix(int split_axis) const;
    static Tensor from_matrix(const Mat& m, std::vector<std::int64_t> shape);
    static Tensor from_vector(const Vec& v);
};

// Kronecker product of dense matrices.
Mat kron(const Mat& a, const Mat& b);

}  // namespace dulab
