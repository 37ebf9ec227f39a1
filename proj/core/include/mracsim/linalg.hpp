#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "mracsim/errors.hpp"

namespace mracsim {

/// Dense real vector. Entries are doubles; dimension fixed at construction.
class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t dim) : entries_(dim, 0.0) {}
    Vector(std::initializer_list<double> init) : entries_(init) {}

    static Vector zero(std::size_t dim) { return Vector(dim); }
    static Vector basis(std::size_t dim, std::size_t i);

    std::size_t size() const { return entries_.size(); }
    double& operator[](std::size_t i) { return entries_[i]; }
    double operator[](std::size_t i) const { return entries_[i]; }

    const std::vector<double>& entries() const { return entries_; }
    std::vector<double>& entries() { return entries_; }

    double norm() const;          // Euclidean
    bool is_finite() const;

    Vector& operator+=(const Vector& other);
    Vector& operator-=(const Vector& other);
    Vector& operator*=(double c);

private:
    std::vector<double> entries_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double c, Vector v);
double dot(const Vector& a, const Vector& b);

/// Dense real matrix, row-major storage. Sizes here are small (n <= 16);
/// everything is plain O(n^3) arithmetic.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}
    Matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> init);

    static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
    static Matrix identity(std::size_t n);
    static Matrix diagonal(const Vector& d);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    const std::vector<double>& entries() const { return entries_; }
    std::vector<double>& entries() { return entries_; }

    Matrix transpose() const;
    double trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    bool is_finite() const;
    /// Max |M - M^T| entry; 0 for exactly symmetric matrices.
    double asymmetry() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double c);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> entries_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double c, Matrix m);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& m, const Vector& v);

/// Outer product a b^T (len(a) x len(b)).
Matrix outer(const Vector& a, const Vector& b);

/// Kronecker product A (x) B.
Matrix kron(const Matrix& a, const Matrix& b);

/// e^T M e.
double quadratic_form(const Vector& e, const Matrix& m);

/// Solve A x = b by Gaussian elimination with partial pivoting.
/// Throws SingularSystem when the best available pivot is below 1e-13.
Vector solve_linear(const Matrix& a, const Vector& b);

/// Inverse via column-by-column linear solves (small matrices only).
Matrix inverse(const Matrix& a);

/// Rank from row echelon form with partial pivoting; entries below
/// tol * max|A| count as zero.
std::size_t rank_estimate(const Matrix& a, double tol = 1e-10);

/// Solve the continuous Lyapunov equation A_r^T P + P A_r + Q = 0 by
/// Kronecker vectorization: (I (x) A_r^T + A_r^T (x) I) vec(P) = -vec(Q).
/// Q must be symmetric within 1e-12 (NotSymmetric otherwise). The result is
/// symmetrized as (P + P^T)/2. A_r not Hurwitz typically surfaces as
/// SingularSystem from the vectorized solve.
Matrix solve_lyapunov(const Matrix& a_r, const Matrix& q);

/// Smallest eigenvalue of a symmetric matrix via cyclic Jacobi rotations,
/// iterated until the off-diagonal Frobenius norm falls below 1e-12.
/// Throws NotSymmetric for asymmetry beyond 1e-12, NoConvergence after
/// 100 sweeps.
double min_eig_sym(const Matrix& m);

} // namespace mracsim
