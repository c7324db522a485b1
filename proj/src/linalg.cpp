#include "qsd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "qsd/errors.hpp"

namespace qsd {

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.cols(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const double* brow = b.row(k);
            double* crow = c.row(i);
            for (int j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

Vector left_apply(const Vector& x, const Matrix& a) {
    Vector y(a.cols(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        const double* row = a.row(i);
        for (int j = 0; j < a.cols(); ++j) y[j] += xi * row[j];
    }
    return y;
}

Vector right_apply(const Matrix& a, const Vector& x) {
    Vector y(a.rows(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        const double* row = a.row(i);
        double acc = 0.0;
        for (int j = 0; j < a.cols(); ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
    return y;
}

double dot(const Vector& a, const Vector& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double sup_norm(const Vector& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double sup_diff(const Vector& a, const Vector& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

namespace {

// Householder QR with the reflectors stored below the diagonal
// (LAPACK-style: column k holds v/v0 with implicit leading 1).
struct QrFactors {
    Matrix a;
    Vector beta;

    Vector solve(Vector b) const {
        const int m = a.rows();
        const int n = a.cols();
        // apply Q^T to b
        for (int k = 0; k < n; ++k) {
            double s = b[k];
            for (int i = k + 1; i < m; ++i) s += a(i, k) * b[i];
            s *= beta[k];
            b[k] -= s;
            for (int i = k + 1; i < m; ++i) b[i] -= s * a(i, k);
        }
        // back substitution on R
        Vector x(n, 0.0);
        for (int k = n - 1; k >= 0; --k) {
            double s = b[k];
            for (int j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
            x[k] = s / a(k, k);
        }
        return x;
    }
};

QrFactors qr_factor(Matrix a) {
    const int m = a.rows();
    const int n = a.cols();
    QrFactors f{std::move(a), Vector(static_cast<std::size_t>(n), 0.0)};
    for (int k = 0; k < n; ++k) {
        double norm = 0.0;
        for (int i = k; i < m; ++i) norm = std::hypot(norm, f.a(i, k));
        if (norm == 0.0) throw ConvergenceFailure("least squares: rank-deficient column");
        const double alpha = f.a(k, k) > 0.0 ? -norm : norm;
        const double v0 = f.a(k, k) - alpha;
        f.a(k, k) = alpha;
        for (int i = k + 1; i < m; ++i) f.a(i, k) /= v0;
        f.beta[k] = -v0 / alpha;
        // update trailing columns
        for (int j = k + 1; j < n; ++j) {
            double s = f.a(k, j);
            for (int i = k + 1; i < m; ++i) s += f.a(i, k) * f.a(i, j);
            s *= f.beta[k];
            f.a(k, j) -= s;
            for (int i = k + 1; i < m; ++i) f.a(i, j) -= s * f.a(i, k);
        }
    }
    return f;
}

}  // namespace

Vector lstsq(const Matrix& a, const Vector& b) {
    const QrFactors f = qr_factor(a);
    Vector x = f.solve(b);
    // one refinement pass pushes the residual toward machine precision
    Vector r(b.size());
    for (int i = 0; i < a.rows(); ++i) {
        double acc = b[i];
        const double* row = a.row(i);
        for (int j = 0; j < a.cols(); ++j) acc -= row[j] * x[j];
        r[i] = acc;
    }
    const Vector d = f.solve(r);
    for (int j = 0; j < a.cols(); ++j) x[j] += d[j];
    return x;
}

LuFactors lu_factor(Matrix a) {
    const int n = a.rows();
    LuFactors f{std::move(a), std::vector<int>(static_cast<std::size_t>(n))};
    for (int i = 0; i < n; ++i) f.perm[i] = i;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(f.lu(i, k)) > std::abs(f.lu(piv, k))) piv = i;
        if (std::abs(f.lu(piv, k)) < 1e-300) throw ConvergenceFailure("LU: singular matrix");
        if (piv != k) {
            std::swap(f.perm[piv], f.perm[k]);
            for (int j = 0; j < n; ++j) std::swap(f.lu(piv, j), f.lu(k, j));
        }
        for (int i = k + 1; i < n; ++i) {
            f.lu(i, k) /= f.lu(k, k);
            const double l = f.lu(i, k);
            if (l == 0.0) continue;
            for (int j = k + 1; j < n; ++j) f.lu(i, j) -= l * f.lu(k, j);
        }
    }
    return f;
}

Vector lu_solve(const LuFactors& f, Vector b) {
    const int n = f.lu.rows();
    Vector y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) y[i] = b[f.perm[i]];
    for (int i = 1; i < n; ++i) {
        double s = y[i];
        for (int j = 0; j < i; ++j) s -= f.lu(i, j) * y[j];
        y[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = y[i];
        for (int j = i + 1; j < n; ++j) s -= f.lu(i, j) * y[j];
        y[i] = s / f.lu(i, i);
    }
    return y;
}

JacobiResult jacobi_symmetric(Matrix s, int max_sweeps) {
    const int n = s.rows();
    if (n != s.cols()) throw Error("jacobi: matrix must be square");
    Matrix v = Matrix::identity(n);

    double scale = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(s(i, j)));

    auto off_sup = [&]() {
        double m = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) m = std::max(m, std::abs(s(p, q)));
        return m;
    };

    const double stop = 1e-15 * scale;
    double off = off_sup();
    double prev_off = -1.0;
    int sweep = 0;
    while (off > stop && sweep < max_sweeps) {
        if (prev_off >= 0.0 && off >= prev_off && off <= 1e-13 * scale) break;  // rounding floor
        prev_off = off;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = s(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (s(q, q) - s(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e15) {
                    t = 1.0 / (2.0 * theta);
                } else {
                    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                const double tau = sn / (1.0 + c);

                const double app = s(p, p);
                const double aqq = s(q, q);
                s(p, p) = app - t * apq;
                s(q, q) = aqq + t * apq;
                s(p, q) = 0.0;
                s(q, p) = 0.0;
                for (int r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = s(r, p);
                        const double arq = s(r, q);
                        s(r, p) = arp - sn * (arq + tau * arp);
                        s(p, r) = s(r, p);
                        s(r, q) = arq + sn * (arp - tau * arq);
                        s(q, r) = s(r, q);
                    }
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = vrp - sn * (vrq + tau * vrp);
                    v(r, q) = vrq + sn * (vrp - tau * vrq);
                }
            }
        }
        ++sweep;
        off = off_sup();
    }
    if (off > 1e-12 * scale)
        throw EigensolverFailure("jacobi: off-diagonal residual above 1e-12 after max sweeps");

    JacobiResult r;
    r.values.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) r.values[i] = s(i, i);
    r.vectors = std::move(v);
    r.off_norm = off;
    r.sweeps = sweep;
    return r;
}

}  // namespace qsd
