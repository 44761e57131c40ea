#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kdpp::linalg
{

/// Dense row-major real matrix.
class Matrix
{
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    static Matrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    [[nodiscard]] bool is_square() const { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<double const> row(std::size_t i) const
    {
        return {data_.data() + i * cols_, cols_};
    }
    [[nodiscard]] std::span<double const> data() const { return data_; }

    friend bool operator==(Matrix const&, Matrix const&) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

[[nodiscard]] Matrix multiply(Matrix const& a, Matrix const& b);
[[nodiscard]] Matrix transpose(Matrix const& a);
[[nodiscard]] Matrix add(Matrix const& a, Matrix const& b, double scale_b = 1.0);
[[nodiscard]] std::vector<double> multiply(Matrix const& a, std::span<double const> v);
/// max_ij |a_ij|
[[nodiscard]] double max_abs(Matrix const& a);
/// max_ij |a_ij - a_ji|
[[nodiscard]] double asymmetry(Matrix const& a);
/// Square sub-matrix on the given row/column indices.
[[nodiscard]] Matrix principal_submatrix(Matrix const& a, std::span<std::size_t const> idx);

/// LU factorization with partial pivoting, PA = LU.
class LuDecomposition
{
  public:
    explicit LuDecomposition(Matrix a);

    [[nodiscard]] double determinant() const;
    [[nodiscard]] bool singular() const { return singular_; }
    [[nodiscard]] std::vector<double> solve(std::span<double const> b) const;
    [[nodiscard]] Matrix inverse() const;

  private:
    Matrix lu_;
    std::vector<std::size_t> perm_;
    int parity_ = 1;
    bool singular_ = false;
};

[[nodiscard]] double determinant(Matrix a);

struct SymmetricEigen
{
    std::vector<double> values;  // ascending
    Matrix vectors;              // column k pairs with values[k]
    int sweeps = 0;
};

/// Cyclic Jacobi rotations for a real symmetric matrix.
///
/// Only the upper triangle is read. Sweeps until the off-diagonal mass is
/// negligible relative to the matrix norm, or `max_sweeps` is reached.
[[nodiscard]] SymmetricEigen jacobi_eigen(Matrix const& a, int max_sweeps = 100);

/// max |A V - V diag(values)|
[[nodiscard]] double eigen_residual(Matrix const& a, SymmetricEigen const& eig);

/// exp(A) by scaling and squaring with a diagonal Pade(6,6) approximant.
[[nodiscard]] Matrix expm(Matrix const& a);

}  // namespace kdpp::linalg
