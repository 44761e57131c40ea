#include "kdpp/kernel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "kdpp/csv.hpp"
#include "kdpp/errors.hpp"
#include "kdpp/specfun.hpp"

namespace kdpp
{
namespace
{

using cplx = std::complex<double>;

bool is_integer(double v)
{
    return v == std::floor(v);
}

cplx compute_prefactor(AdmissiblePair::Branch branch, cplx z, cplx zp)
{
    using std::numbers::pi;
    if (branch == AdmissiblePair::Branch::RealInterval)
    {
        double const num = specfun::sin_pi(z.real()) * specfun::sin_pi(zp.real());
        return num / (pi * specfun::sin_pi(z.real() - zp.real()));
    }
    return std::sin(pi * z) * std::sin(pi * zp) / (pi * std::sin(pi * (z - zp)));
}

// Relative tolerance on the imaginary part left over on the conjugate branch.
constexpr double kRealityTol = 1e-10;

double take_real(cplx v, char const* what)
{
    if (std::abs(v.imag()) > kRealityTol * std::max(1.0, std::abs(v.real())))
    {
        std::ostringstream os;
        os << what << ": residual imaginary part " << v.imag();
        throw NumericalError(os.str());
    }
    return v.real();
}

double entry_from_ab(AdmissiblePair const& p, AbValues const& abx, AbValues const& aby,
                     double x, double y)
{
    if (p.branch() == AdmissiblePair::Branch::RealInterval)
    {
        double const num = abx.a.real() * aby.b.real() - abx.b.real() * aby.a.real();
        return p.prefactor().real() * num / (x - y);
    }
    cplx const num = abx.a * aby.b - abx.b * aby.a;
    return take_real(p.prefactor() * num / (x - y), "kernel_entry");
}

double diagonal_entry(AdmissiblePair const& p, Site x)
{
    double const shift = x.position() + 0.5;
    if (p.branch() == AdmissiblePair::Branch::RealInterval)
    {
        double const d = specfun::digamma(p.z().real() + shift)
                         - specfun::digamma(p.z_prime().real() + shift);
        return p.prefactor().real() * d;
    }
    cplx const d = specfun::digamma_complex(p.z() + shift)
                   - specfun::digamma_complex(p.z_prime() + shift);
    return take_real(p.prefactor() * d, "kernel diagonal");
}

}  // namespace

bool is_admissible(cplx z, cplx z_prime)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || !std::isfinite(z_prime.real())
        || !std::isfinite(z_prime.imag()))
        return false;
    if (z == z_prime)
        return false;
    if (z.imag() == 0.0 && z_prime.imag() == 0.0)
    {
        double const a = z.real();
        double const b = z_prime.real();
        return !is_integer(a) && !is_integer(b) && std::floor(a) == std::floor(b);
    }
    // conjugate branch; Im z != 0 here because z != z'
    return z_prime == std::conj(z);
}

AdmissiblePair::AdmissiblePair(cplx z, cplx z_prime) : z_(z), z_prime_(z_prime)
{
    if (!is_admissible(z, z_prime))
    {
        std::ostringstream os;
        os << "parameters (" << z << ", " << z_prime << ") are not admissible";
        if (z == z_prime && z.imag() == 0.0)
            os << "; z = z' is unsupported, try z' = z + 1e-6";
        throw DomainError(os.str());
    }
    branch_ = (z.imag() == 0.0 && z_prime.imag() == 0.0) ? Branch::RealInterval
                                                         : Branch::ConjugatePair;
    prefactor_ = compute_prefactor(branch_, z_, z_prime_);
}

AbValues ab_values(AdmissiblePair const& p, Site x)
{
    double const shift = x.position() + 0.5;
    if (p.branch() == AdmissiblePair::Branch::RealInterval)
    {
        auto const ga = specfun::log_gamma_signed(p.z().real() + shift);
        auto const gb = specfun::log_gamma_signed(p.z_prime().real() + shift);
        if (ga.sign != gb.sign)
        {
            throw DomainError("ab_values: Gamma(z+x+1/2) Gamma(z'+x+1/2) is not positive at x = "
                              + format_g17(x.position()));
        }
        double const half = 0.5 * (ga.log_abs - gb.log_abs);
        double const s = ga.sign;
        return {s * std::exp(half), s * std::exp(-half)};
    }
    // Gamma(w') = conj(Gamma(w)), so A = Gamma(w)/|Gamma(w)| = exp(i arg Gamma(w))
    cplx const lg = specfun::log_gamma_complex(p.z() + shift);
    cplx const a = std::polar(1.0, lg.imag());
    return {a, std::conj(a)};
}

double kernel_entry(AdmissiblePair const& p, Site x, Site y)
{
    if (x == y)
        return diagonal_entry(p, x);
    return entry_from_ab(p, ab_values(p, x), ab_values(p, y), x.position(), y.position());
}

//---------------------------------------------------------------------------//

KernelMatrix::KernelMatrix(Window w, linalg::Matrix entries)
    : window_(w), entries_(std::move(entries))
{
    if (entries_.rows() != w.size() || entries_.cols() != w.size())
        throw DimensionMismatch("kernel matrix shape differs from window size");
    if (linalg::asymmetry(entries_) > 1e-12)
        throw NumericalError("kernel matrix is not symmetric");
}

double KernelMatrix::at(Site x, Site y) const
{
    return entries_(window_.offset(x), window_.offset(y));
}

double KernelMatrix::trace() const
{
    double t = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        t += entries_(i, i);
    return t;
}

KernelMatrix kernel_matrix(AdmissiblePair const& p, Window const& w)
{
    std::size_t const n = w.size();
    if (n > kMaxKernelWindow)
    {
        throw SizeError("kernel window of " + std::to_string(n) + " sites exceeds the cap of "
                        + std::to_string(kMaxKernelWindow));
    }
    std::vector<AbValues> ab;
    ab.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        ab.push_back(ab_values(p, w.site(i)));

    linalg::Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
    {
        m(i, i) = diagonal_entry(p, w.site(i));
        double const xi = w.site(i).position();
        for (std::size_t j = i + 1; j < n; ++j)
        {
            double const v = entry_from_ab(p, ab[i], ab[j], xi, w.site(j).position());
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return KernelMatrix(w, std::move(m));
}

linalg::Matrix difference_operator_matrix(AdmissiblePair const& p, Window const& w)
{
    std::size_t const n = w.size();
    double const zsum = (p.z() + p.z_prime()).real();
    linalg::Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i)
    {
        double const x = w.site(i).position();
        d(i, i) = -(2.0 * x + zsum);
        if (i + 1 < n)
        {
            // (z+x+1/2)(z'+x+1/2) > 0 by admissibility; |z+x+1/2|^2 on the conjugate branch
            double const prod = ((p.z() + (x + 0.5)) * (p.z_prime() + (x + 0.5))).real();
            if (!(prod > 0.0))
                throw DomainError("difference operator: non-positive coupling");
            d(i, i + 1) = d(i + 1, i) = std::sqrt(prod);
        }
    }
    return d;
}

SpectralProjectionReport
spectral_projection_check(AdmissiblePair const& p, Window const& w, std::size_t margin)
{
    std::size_t const n = w.size();
    if (n <= 2 * margin)
        throw SizeError("spectral_projection_check: margin leaves no central sites");

    linalg::Matrix const d = difference_operator_matrix(p, w);
    auto const eig = linalg::jacobi_eigen(d);
    KernelMatrix const k = kernel_matrix(p, w);

    std::size_t const lo = margin;
    std::size_t const hi = n - margin;
    SpectralProjectionReport rep;
    rep.central_size = hi - lo;

    for (std::size_t i = lo; i < hi; ++i)
    {
        for (std::size_t j = lo; j < hi; ++j)
        {
            double proj = 0.0;
            for (std::size_t c = 0; c < n; ++c)
            {
                if (eig.values[c] > 0.0)
                    proj += eig.vectors(i, c) * eig.vectors(j, c);
            }
            rep.max_abs_deviation = std::max(rep.max_abs_deviation, std::abs(proj - k(i, j)));
        }
    }

    linalg::Matrix const kd = linalg::multiply(k.entries(), d);
    linalg::Matrix const dk = linalg::multiply(d, k.entries());
    for (std::size_t i = lo; i < hi; ++i)
        for (std::size_t j = lo; j < hi; ++j)
            rep.commutator_norm = std::max(rep.commutator_norm, std::abs(kd(i, j) - dk(i, j)));
    return rep;
}

std::string kernel_csv(KernelMatrix const& k)
{
    std::string out = "x\\y";
    Window const& w = k.window();
    for (std::size_t j = 0; j < w.size(); ++j)
        out += "," + format_g17(w.site(j).position());
    out += '\n';
    for (std::size_t i = 0; i < w.size(); ++i)
    {
        out += format_g17(w.site(i).position());
        for (std::size_t j = 0; j < w.size(); ++j)
            out += "," + format_g17(k(i, j));
        out += '\n';
    }
    return out;
}

}  // namespace kdpp
