#pragma once

#include <complex>
#include <vector>

namespace smstab::num {

// dense row-major real matrix
class matrix {
public:
    matrix() = default;
    matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {}

    static matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    bool same_shape(const matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

matrix operator*(const matrix& a, const matrix& b);
std::vector<double> operator*(const matrix& a, const std::vector<double>& x);

// solves a x = b by LU with partial pivoting; throws numeric_error on a
// numerically singular pivot
std::vector<double> solve(matrix a, std::vector<double> b);

// diagonal similarity scaling by radix-2 powers; eigenvalues are unchanged
void balance_in_place(matrix& a);

// orthogonal (Householder) similarity reduction to upper Hessenberg form
void hessenberg_in_place(matrix& a);

// eigenvalues of an upper Hessenberg matrix by Francis double-shift QR;
// entries below the first subdiagonal are ignored. Throws numeric_error if
// the iteration stalls; hard companion matrices can need well over the
// textbook 30 sweeps before the exceptional shifts break the cycling
std::vector<std::complex<double>> hessenberg_eigenvalues(matrix h, int max_sweeps = 200);

// eigenvalues of a general real square matrix: balance, reduce, iterate
std::vector<std::complex<double>> eigenvalues(matrix a, int max_sweeps = 200);

double max_real_part(const std::vector<std::complex<double>>& eigs);

}  // namespace smstab::num
