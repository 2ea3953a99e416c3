// Random-search optimum of the single-CR, single-ER problem (K = L = 1).
// Written against the model directly; it shares nothing with the SOCP path.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace oracle
{

using cd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

struct TinyInstance
{
    Vec h;   ///< BS -> CR, n_t
    Vec g;   ///< jammer -> CR, n_j
    Mat H;   ///< BS -> ER, n_t x n_e
    Mat G;   ///< jammer -> ER, n_j x n_e
    double sigma2_cr, delta2, sigma2_er, eta;
    double P_T, P_J, Rbar, tau;
};

struct TinyPoint
{
    Vec w, z, q;
    double rho = 1.0;
    double objective = -1.0; ///< negative when the secrecy target is missed
};

/// Value of (w, z, q) with the smallest split ratio that still meets the
/// target; the CR harvest only grows as rho shrinks.
inline TinyPoint tiny_value(const TinyInstance &in, const Vec &w, const Vec &z, const Vec &q)
{
    TinyPoint p{w, z, q};
    const double S = std::norm(in.h.dot(w));
    const double I = in.sigma2_cr + std::norm(in.h.dot(z)) + std::norm(in.g.dot(q));
    const double leak = (in.H.adjoint() * w).squaredNorm();
    const double hz = (in.H.adjoint() * z).squaredNorm(), gq = (in.G.adjoint() * q).squaredNorm();
    const double gamma = std::exp2(in.Rbar) * (1.0 + leak / (in.sigma2_er + hz + gq)) - 1.0;
    if (!(S > gamma * I))
        return p;
    const double rho = gamma * in.delta2 / (S - gamma * I);
    if (rho > 1.0)
        return p;
    p.rho = rho;
    const double e_cr = in.eta * (1.0 - rho) * (S + I);
    const double e_er = in.eta * (leak + hz + gq + static_cast<double>(in.H.cols()) * in.sigma2_er);
    p.objective = in.tau * e_cr + (1.0 - in.tau) * e_er;
    return p;
}

/// Best of `samples` random points. Half of the draws sit on the power
/// boundary, the rest are scaled uniformly inside it.
inline TinyPoint tiny_search(const TinyInstance &in, long samples, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const int nt = static_cast<int>(in.h.size()), nj = static_cast<int>(in.g.size());
    Vec x(2 * nt), q(nj);
    TinyPoint best;
    for (long s = 0; s < samples; ++s)
    {
        for (int i = 0; i < 2 * nt; ++i)
            x[i] = cd(N(rng), N(rng));
        for (int i = 0; i < nj; ++i)
            q[i] = cd(N(rng), N(rng));
        const double st = s % 2 ? 1.0 : U(rng), sj = s % 4 < 2 ? 1.0 : U(rng);
        x *= std::sqrt(in.P_T * st) / x.norm();
        q *= std::sqrt(in.P_J * sj) / q.norm();
        const TinyPoint p = tiny_value(in, x.head(nt), x.tail(nt), q);
        if (p.objective > best.objective)
            best = p;
    }
    return best;
}

} // namespace oracle
