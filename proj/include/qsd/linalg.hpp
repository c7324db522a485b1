#pragma once

#include <cstddef>
#include <vector>

namespace qsd {

using Vector = std::vector<double>;

// Dense row-major matrix. State spaces here are small, so everything is
// kept direct and allocation-friendly rather than clever.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double value = 0.0)
        : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), value) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    const double* row(int i) const { return a_.data() + static_cast<std::size_t>(i) * cols_; }
    double* row(int i) { return a_.data() + static_cast<std::size_t>(i) * cols_; }

    Matrix transposed() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

Matrix operator*(const Matrix& a, const Matrix& b);

// y = x A  (row vector times matrix)
Vector left_apply(const Vector& x, const Matrix& a);
// y = A x  (matrix times column vector)
Vector right_apply(const Matrix& a, const Vector& x);

double dot(const Vector& a, const Vector& b);
double sup_norm(const Vector& v);
double sup_diff(const Vector& a, const Vector& b);

// Least-squares solution of min ||A x - b||_2 for m >= n via Householder QR,
// followed by one step of iterative refinement.
Vector lstsq(const Matrix& a, const Vector& b);

// LU factorization with partial pivoting.
struct LuFactors {
    Matrix lu;
    std::vector<int> perm;
};
LuFactors lu_factor(Matrix a);
Vector lu_solve(const LuFactors& f, Vector b);

// Cyclic Jacobi diagonalization of a symmetric matrix. Sweeps continue until
// the off-diagonal sup norm reaches the rounding floor (quadratic convergence
// makes the last sweeps cheap); the tight exit keeps eigenvectors accurate
// even across narrow spectral gaps. Throws EigensolverFailure if the
// off-diagonal residual is still above 1e-12 * scale after max_sweeps.
struct JacobiResult {
    Vector values;   // unsorted eigenvalues (diagonal after convergence)
    Matrix vectors;  // column i is the orthonormal eigenvector of values[i]
    double off_norm; // final off-diagonal sup norm
    int sweeps;
};
JacobiResult jacobi_symmetric(Matrix s, int max_sweeps = 64);

}  // namespace qsd
