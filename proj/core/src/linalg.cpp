#include "mracsim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mracsim {

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw DimensionMismatch(what);
}

} // namespace

Vector Vector::basis(std::size_t dim, std::size_t i) {
    Vector v(dim);
    v[i] = 1.0;
    return v;
}

double Vector::norm() const {
    double s = 0.0;
    for (double x : entries_) s += x * x;
    return std::sqrt(s);
}

bool Vector::is_finite() const {
    for (double x : entries_)
        if (!std::isfinite(x)) return false;
    return true;
}

Vector& Vector::operator+=(const Vector& other) {
    require(size() == other.size(), "vector add: dimension mismatch");
    for (std::size_t i = 0; i < size(); ++i) entries_[i] += other[i];
    return *this;
}

Vector& Vector::operator-=(const Vector& other) {
    require(size() == other.size(), "vector sub: dimension mismatch");
    for (std::size_t i = 0; i < size(); ++i) entries_[i] -= other[i];
    return *this;
}

Vector& Vector::operator*=(double c) {
    for (double& x : entries_) x *= c;
    return *this;
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator*(double c, Vector v) { return v *= c; }

double dot(const Vector& a, const Vector& b) {
    require(a.size() == b.size(), "dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> init)
    : rows_(rows), cols_(cols), entries_(init) {
    require(entries_.size() == rows * cols, "matrix init: entry count mismatch");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const Vector& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    require(!rows.empty(), "from_rows: empty");
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        require(rows[i].size() == m.cols(), "from_rows: ragged rows");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Matrix::trace() const {
    double s = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
    return s;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double x : entries_) s += x * x;
    return std::sqrt(s);
}

double Matrix::max_abs() const {
    double s = 0.0;
    for (double x : entries_) s = std::max(s, std::abs(x));
    return s;
}

bool Matrix::is_finite() const {
    for (double x : entries_)
        if (!std::isfinite(x)) return false;
    return true;
}

double Matrix::asymmetry() const {
    double s = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            s = std::max(s, std::abs((*this)(i, j) - (*this)(j, i)));
    return s;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    require(rows_ == other.rows_ && cols_ == other.cols_, "matrix add: dimension mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    require(rows_ == other.rows_ && cols_ == other.cols_, "matrix sub: dimension mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
    return *this;
}

Matrix& Matrix::operator*=(double c) {
    for (double& x : entries_) x *= c;
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double c, Matrix m) { return m *= c; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), "matmul: dimension mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Vector operator*(const Matrix& m, const Vector& v) {
    require(m.cols() == v.size(), "matvec: dimension mismatch");
    Vector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

Matrix outer(const Vector& a, const Vector& b) {
    Matrix m(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
    return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double aij = a(i, j);
            if (aij == 0.0) continue;
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q)
                    k(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
        }
    return k;
}

double quadratic_form(const Vector& e, const Matrix& m) {
    require(m.rows() == e.size() && m.cols() == e.size(), "quadratic_form: dimension mismatch");
    return dot(e, m * e);
}

Vector solve_linear(const Matrix& a, const Vector& b) {
    require(a.rows() == a.cols(), "solve_linear: matrix not square");
    require(a.rows() == b.size(), "solve_linear: rhs dimension mismatch");
    const std::size_t n = a.rows();
    Matrix work = a;
    Vector rhs = b;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(work(r, col)) > std::abs(work(pivot, col))) pivot = r;
        if (std::abs(work(pivot, col)) < 1e-13)
            throw SingularSystem("solve_linear: pivot below 1e-13 at column " + std::to_string(col));
        if (pivot != col) {
            for (std::size_t j = col; j < n; ++j) std::swap(work(pivot, j), work(col, j));
            std::swap(rhs[pivot], rhs[col]);
        }
        const double inv_p = 1.0 / work(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = work(r, col) * inv_p;
            if (f == 0.0) continue;
            work(r, col) = 0.0;
            for (std::size_t j = col + 1; j < n; ++j) work(r, j) -= f * work(col, j);
            rhs[r] -= f * rhs[col];
        }
    }

    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = rhs[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= work(ii, j) * x[j];
        x[ii] = s / work(ii, ii);
    }
    return x;
}

Matrix inverse(const Matrix& a) {
    require(a.rows() == a.cols(), "inverse: matrix not square");
    const std::size_t n = a.rows();
    Matrix inv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        Vector col = solve_linear(a, Vector::basis(n, j));
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

std::size_t rank_estimate(const Matrix& a, double tol) {
    Matrix work = a;
    const std::size_t rows = work.rows();
    const std::size_t cols = work.cols();
    const double threshold = tol * std::max(1.0, work.max_abs());
    std::size_t rank = 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t pivot = row;
        for (std::size_t r = row + 1; r < rows; ++r)
            if (std::abs(work(r, col)) > std::abs(work(pivot, col))) pivot = r;
        if (std::abs(work(pivot, col)) <= threshold) continue;
        if (pivot != row)
            for (std::size_t j = 0; j < cols; ++j) std::swap(work(pivot, j), work(row, j));
        const double inv_p = 1.0 / work(row, col);
        for (std::size_t r = row + 1; r < rows; ++r) {
            const double f = work(r, col) * inv_p;
            for (std::size_t j = col; j < cols; ++j) work(r, j) -= f * work(row, j);
        }
        ++rank;
        ++row;
    }
    return rank;
}

Matrix solve_lyapunov(const Matrix& a_r, const Matrix& q) {
    require(a_r.rows() == a_r.cols(), "solve_lyapunov: A_r not square");
    require(q.rows() == a_r.rows() && q.cols() == a_r.cols(), "solve_lyapunov: Q dimension mismatch");
    if (q.asymmetry() > 1e-12)
        throw NotSymmetric("solve_lyapunov: Q asymmetric beyond 1e-12");

    const std::size_t n = a_r.rows();
    const Matrix art = a_r.transpose();
    const Matrix eye = Matrix::identity(n);
    const Matrix system = kron(eye, art) + kron(art, eye);

    Vector rhs(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rhs[i * n + j] = -q(i, j);

    const Vector vec_p = solve_linear(system, rhs);

    Matrix p(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) p(i, j) = vec_p[i * n + j];

    Matrix sym = 0.5 * (p + p.transpose());
    return sym;
}

double min_eig_sym(const Matrix& m) {
    require(m.rows() == m.cols(), "min_eig_sym: matrix not square");
    if (m.asymmetry() > 1e-12)
        throw NotSymmetric("min_eig_sym: matrix asymmetric beyond 1e-12");

    const std::size_t n = m.rows();
    Matrix s = 0.5 * (m + m.transpose());

    auto off_norm = [&]() {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) acc += s(i, j) * s(i, j);
        return std::sqrt(acc);
    };

    auto diag_min = [&]() {
        double lam = s(0, 0);
        for (std::size_t i = 1; i < n; ++i) lam = std::min(lam, s(i, i));
        return lam;
    };

    constexpr int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_norm() <= 1e-12) return diag_min();
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double spq = s(p, q);
                if (std::abs(spq) < 1e-300) continue;
                const double theta = (s(q, q) - s(p, p)) / (2.0 * spq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                const double tau = sn / (1.0 + c);

                const double spp = s(p, p);
                const double sqq = s(q, q);
                s(p, p) = spp - t * spq;
                s(q, q) = sqq + t * spq;
                s(p, q) = 0.0;
                s(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double srp = s(r, p);
                    const double srq = s(r, q);
                    s(r, p) = srp - sn * (srq + tau * srp);
                    s(p, r) = s(r, p);
                    s(r, q) = srq + sn * (srp - tau * srq);
                    s(q, r) = s(r, q);
                }
            }
        }
    }
    if (off_norm() <= 1e-12) return diag_min();
    throw NoConvergence("min_eig_sym: off-diagonal norm above 1e-12 after 100 sweeps");
}

} // namespace mracsim
