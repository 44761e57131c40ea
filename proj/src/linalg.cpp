#include "kdpp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kdpp/errors.hpp"

namespace kdpp::linalg
{

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill)
{
}

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

Matrix multiply(Matrix const& a, Matrix const& b)
{
    if (a.cols() != b.rows())
        throw DimensionMismatch("multiply: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
    {
        for (std::size_t k = 0; k < a.cols(); ++k)
        {
            double const aik = a(i, k);
            if (aik == 0.0)
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

std::vector<double> multiply(Matrix const& a, std::span<double const> v)
{
    if (a.cols() != v.size())
        throw DimensionMismatch("multiply: vector length differs");
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
    {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j)
            s += a(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

Matrix transpose(Matrix const& a)
{
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            t(j, i) = a(i, j);
    return t;
}

Matrix add(Matrix const& a, Matrix const& b, double scale_b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("add: shapes differ");
    Matrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            c(i, j) += scale_b * b(i, j);
    return c;
}

double max_abs(Matrix const& a)
{
    double m = 0.0;
    for (double v : a.data())
        m = std::max(m, std::abs(v));
    return m;
}

double asymmetry(Matrix const& a)
{
    if (!a.is_square())
        throw DimensionMismatch("asymmetry: matrix not square");
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            m = std::max(m, std::abs(a(i, j) - a(j, i)));
    return m;
}

Matrix principal_submatrix(Matrix const& a, std::span<std::size_t const> idx)
{
    Matrix s(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j)
            s(i, j) = a(idx[i], idx[j]);
    return s;
}

//---------------------------------------------------------------------------//

LuDecomposition::LuDecomposition(Matrix a) : lu_(std::move(a))
{
    if (!lu_.is_square())
        throw DimensionMismatch("LU: matrix not square");
    std::size_t const n = lu_.rows();
    perm_.resize(n);
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});

    for (std::size_t k = 0; k < n; ++k)
    {
        std::size_t piv = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
        {
            if (std::abs(lu_(i, k)) > best)
            {
                best = std::abs(lu_(i, k));
                piv = i;
            }
        }
        if (best == 0.0)
        {
            singular_ = true;
            continue;
        }
        if (piv != k)
        {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(lu_(k, j), lu_(piv, j));
            std::swap(perm_[k], perm_[piv]);
            parity_ = -parity_;
        }
        double const inv = 1.0 / lu_(k, k);
        for (std::size_t i = k + 1; i < n; ++i)
        {
            double const f = lu_(i, k) * inv;
            lu_(i, k) = f;
            if (f == 0.0)
                continue;
            for (std::size_t j = k + 1; j < n; ++j)
                lu_(i, j) -= f * lu_(k, j);
        }
    }
}

double LuDecomposition::determinant() const
{
    if (singular_)
        return 0.0;
    double d = parity_;
    for (std::size_t i = 0; i < lu_.rows(); ++i)
        d *= lu_(i, i);
    return d;
}

std::vector<double> LuDecomposition::solve(std::span<double const> b) const
{
    std::size_t const n = lu_.rows();
    if (b.size() != n)
        throw DimensionMismatch("LU solve: rhs length differs");
    if (singular_)
        throw NumericalError("LU solve: matrix is singular");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        double s = b[perm_[i]];
        for (std::size_t j = 0; j < i; ++j)
            s -= lu_(i, j) * x[j];
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;)
    {
        double s = x[i];
        for (std::size_t j = i + 1; j < n; ++j)
            s -= lu_(i, j) * x[j];
        x[i] = s / lu_(i, i);
    }
    return x;
}

Matrix LuDecomposition::inverse() const
{
    std::size_t const n = lu_.rows();
    Matrix inv(n, n);
    std::vector<double> e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
    {
        e[j] = 1.0;
        auto const col = solve(e);
        e[j] = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            inv(i, j) = col[i];
    }
    return inv;
}

double determinant(Matrix a)
{
    if (a.rows() == 0)
        return 1.0;
    return LuDecomposition(std::move(a)).determinant();
}

//---------------------------------------------------------------------------//

SymmetricEigen jacobi_eigen(Matrix const& input, int max_sweeps)
{
    if (!input.is_square())
        throw DimensionMismatch("jacobi_eigen: matrix not square");
    std::size_t const n = input.rows();

    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            a(i, j) = a(j, i) = input(i, j);

    SymmetricEigen out;
    out.vectors = Matrix::identity(n);
    Matrix& v = out.vectors;

    double norm2 = 0.0;
    for (double x : a.data())
        norm2 += x * x;
    double const tiny = std::numeric_limits<double>::min();

    for (int sweep = 0; sweep < max_sweeps; ++sweep)
    {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                off += a(p, q) * a(p, q);
        if (off <= 1e-32 * norm2 || off < tiny)
            break;
        out.sweeps = sweep + 1;

        for (std::size_t p = 0; p < n; ++p)
        {
            for (std::size_t q = p + 1; q < n; ++q)
            {
                double const apq = a(p, q);
                if (apq == 0.0)
                    continue;
                double const app = a(p, p);
                double const aqq = a(q, q);
                // skip rotations that cannot change the diagonal in floating point
                if (sweep > 3 && std::abs(apq) * 1e18 < std::abs(app)
                    && std::abs(apq) * 1e18 < std::abs(aqq))
                {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                double const theta = (aqq - app) / (2.0 * apq);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0)
                    t = -t;
                double const c = 1.0 / std::sqrt(t * t + 1.0);
                double const s = t * c;

                for (std::size_t k = 0; k < n; ++k)
                {
                    double const akp = a(k, p);
                    double const akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k)
                {
                    double const apk = a(p, k);
                    double const aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;

                for (std::size_t k = 0; k < n; ++k)
                {
                    double const vkp = v(k, p);
                    double const vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a(i, i) < a(j, j);
    });
    out.values.resize(n);
    Matrix sorted(n, n);
    for (std::size_t k = 0; k < n; ++k)
    {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i)
            sorted(i, k) = v(i, order[k]);
    }
    out.vectors = std::move(sorted);
    return out;
}

double eigen_residual(Matrix const& a, SymmetricEigen const& eig)
{
    Matrix av = multiply(a, eig.vectors);
    double r = 0.0;
    for (std::size_t i = 0; i < av.rows(); ++i)
        for (std::size_t k = 0; k < av.cols(); ++k)
            r = std::max(r, std::abs(av(i, k) - eig.vectors(i, k) * eig.values[k]));
    return r;
}

Matrix expm(Matrix const& a)
{
    if (!a.is_square())
        throw DimensionMismatch("expm: matrix not square");
    std::size_t const n = a.rows();

    double norm1 = 0.0;
    for (std::size_t j = 0; j < n; ++j)
    {
        double col = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            col += std::abs(a(i, j));
        norm1 = std::max(norm1, col);
    }
    int squarings = 0;
    if (norm1 > 0.5)
        squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / 0.5))));
    double const scale = std::ldexp(1.0, -squarings);

    Matrix x(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            x(i, j) = a(i, j) * scale;

    // Pade(6,6): N = sum c_k X^k, D = sum (-1)^k c_k X^k
    constexpr int q = 6;
    double c = 1.0;
    Matrix num = Matrix::identity(n);
    Matrix den = Matrix::identity(n);
    Matrix power = Matrix::identity(n);
    for (int k = 1; k <= q; ++k)
    {
        c *= static_cast<double>(q - k + 1) / static_cast<double>(k * (2 * q - k + 1));
        power = multiply(power, x);
        num = add(num, power, c);
        den = add(den, power, (k % 2 == 0) ? c : -c);
    }

    LuDecomposition lu(den);
    if (lu.singular())
        throw NumericalError("expm: Pade denominator singular");
    Matrix r(n, n);
    std::vector<double> col(n);
    for (std::size_t j = 0; j < n; ++j)
    {
        for (std::size_t i = 0; i < n; ++i)
            col[i] = num(i, j);
        auto const sol = lu.solve(col);
        for (std::size_t i = 0; i < n; ++i)
            r(i, j) = sol[i];
    }
    for (int s = 0; s < squarings; ++s)
        r = multiply(r, r);
    return r;
}

}  // namespace kdpp::linalg
