#include "swipt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace swipt
{

BeamformingSolution BeamformingSolution::zeros(const SystemDims &dims, double rho)
{
    BeamformingSolution s;
    s.w.assign(dims.K, CVec::Zero(dims.n_t));
    s.z = CVec::Zero(dims.n_t);
    s.q = CVec::Zero(dims.n_j);
    s.rho.assign(dims.K, rho);
    return s;
}

double BeamformingSolution::transmit_power() const
{
    double p = z.squaredNorm();
    for (const auto &wk : w)
        p += wk.squaredNorm();
    return p;
}

double BeamformingSolution::jammer_power() const
{
    return q.squaredNorm();
}

void BeamformingSolution::validate(const SystemDims &dims) const
{
    if (static_cast<int>(w.size()) != dims.K || static_cast<int>(rho.size()) != dims.K)
        throw DomainError("solution: expected one beam and one PS ratio per CR");
    for (const auto &wk : w)
        if (wk.size() != dims.n_t)
            throw DomainError("solution: beam length mismatch");
    if (z.size() != dims.n_t || q.size() != dims.n_j)
        throw DomainError("solution: AN/jammer length mismatch");
    for (double r : rho)
        if (!(r > 0.0 && r <= 1.0))
            throw DomainError("solution: PS ratios must lie in (0, 1]");
}

ChannelRealization ChannelRealization::nominal(const ChannelSet &ch)
{
    return {ch.hbar, ch.Hbar, ch.gbar, ch.Gbar};
}

namespace
{

constexpr double kInvLn2 = 1.0 / std::numbers::ln2;

double quad(const CVec &ch, const CVec &v)
{
    return std::norm(ch.dot(v)); // |h^H v|^2
}

void check_indices(const ChannelRealization &ch, int k, int l)
{
    if (k < 0 || k >= static_cast<int>(ch.h.size()))
        throw DomainError("CR index out of range");
    if (l < 0 || l >= static_cast<int>(ch.H.size()))
        throw DomainError("ER index out of range");
}

} // namespace

double sinr_cr(const BeamformingSolution &sol, const ChannelRealization &ch,
               const NoiseAndEfficiency &noise, int k)
{
    check_indices(ch, k, 0);
    const double rho = sol.rho[k];
    if (!(rho > 0.0))
        throw DomainError("sinr_cr: PS ratio must be > 0");
    const CVec &h = ch.h[k];
    double interference = noise.sigma2_cr[k] + quad(h, sol.z) + quad(ch.g[k], sol.q);
    for (int j = 0; j < static_cast<int>(sol.w.size()); ++j)
        if (j != k)
            interference += quad(h, sol.w[j]);
    const double signal = rho * quad(h, sol.w[k]);
    return signal / (rho * interference + noise.delta2_cr[k]);
}

double eavesdropper_rate(const BeamformingSolution &sol, const ChannelRealization &ch,
                         const NoiseAndEfficiency &noise, int l, int k)
{
    check_indices(ch, k, l);
    const CMat &H = ch.H[l];
    const CMat &G = ch.G[l];

    // N = H^H z z^H H + G^H q q^H G + sigma^2 I
    const CVec hz = H.adjoint() * sol.z;
    const CVec gq = G.adjoint() * sol.q;
    CMat N = hz * hz.adjoint() + gq * gq.adjoint();
    N.diagonal().array() += noise.sigma2_er[l];

    Eigen::LLT<CMat> llt(N);
    if (llt.info() != Eigen::Success)
        throw NumericError("eavesdropper_rate: interference matrix is not positive definite");

    // det(I + N^{-1} V V^H) = det(I + B^H B), B = L^{-1} V
    const CMat V = H.adjoint() * sol.w[k];
    const CMat B = llt.matrixL().solve(V);
    CMat M = B.adjoint() * B;
    M.diagonal().array() += 1.0;
    Eigen::LLT<CMat> inner(M);
    if (inner.info() != Eigen::Success)
        throw NumericError("eavesdropper_rate: log-determinant failed");
    double logdet = 0.0;
    for (int i = 0; i < M.rows(); ++i)
        logdet += 2.0 * std::log(inner.matrixLLT()(i, i).real());
    return std::max(0.0, logdet * kInvLn2);
}

double relaxed_eavesdropper_rate(const BeamformingSolution &sol, const ChannelRealization &ch,
                                 const NoiseAndEfficiency &noise, int l, int k)
{
    check_indices(ch, k, l);
    const CMat &H = ch.H[l];
    const double leak = (H.adjoint() * sol.w[k]).squaredNorm();
    const double jam = noise.sigma2_er[l] + (H.adjoint() * sol.z).squaredNorm() +
                       (ch.G[l].adjoint() * sol.q).squaredNorm();
    return std::log1p(leak / jam) * kInvLn2;
}

double secrecy_rate(const BeamformingSolution &sol, const ChannelRealization &ch,
                    const NoiseAndEfficiency &noise, int k)
{
    const double legit = std::log1p(sinr_cr(sol, ch, noise, k)) * kInvLn2;
    double eve = 0.0;
    for (int l = 0; l < static_cast<int>(ch.H.size()); ++l)
        eve = std::max(eve, eavesdropper_rate(sol, ch, noise, l, k));
    return std::max(0.0, legit - eve);
}

double relaxed_secrecy_rate(const BeamformingSolution &sol, const ChannelRealization &ch,
                            const NoiseAndEfficiency &noise, int k)
{
    const double legit = std::log1p(sinr_cr(sol, ch, noise, k)) * kInvLn2;
    double eve = 0.0;
    for (int l = 0; l < static_cast<int>(ch.H.size()); ++l)
        eve = std::max(eve, relaxed_eavesdropper_rate(sol, ch, noise, l, k));
    return std::max(0.0, legit - eve);
}

double harvested_power_cr(const BeamformingSolution &sol, const ChannelRealization &ch,
                          const NoiseAndEfficiency &noise, int k)
{
    check_indices(ch, k, 0);
    const CVec &h = ch.h[k];
    double received = noise.sigma2_cr[k] + quad(h, sol.z) + quad(ch.g[k], sol.q);
    for (const auto &wj : sol.w)
        received += quad(h, wj);
    return noise.eta_cr[k] * (1.0 - sol.rho[k]) * received;
}

double harvested_power_er(const BeamformingSolution &sol, const ChannelRealization &ch,
                          const NoiseAndEfficiency &noise, int l)
{
    check_indices(ch, 0, l);
    const CMat &H = ch.H[l];
    double received = (H.adjoint() * sol.z).squaredNorm() +
                      (ch.G[l].adjoint() * sol.q).squaredNorm() +
                      static_cast<double>(H.cols()) * noise.sigma2_er[l];
    for (const auto &wk : sol.w)
        received += (H.adjoint() * wk).squaredNorm();
    return noise.eta_er[l] * received;
}

ChannelRealization sample_realization(const ChannelSet &ch, std::uint64_t seed, int index,
                                      double boundary_prob)
{
    ChannelRealization r = ChannelRealization::nominal(ch);
    if (index == 0)
        return r;
    const int K = static_cast<int>(ch.hbar.size());
    const int L = static_cast<int>(ch.Hbar.size());

    if (index == 1)
    {
        // every estimate shrunk radially by its full radius
        auto shrink = [](auto &m, double radius) {
            const double n = m.norm();
            if (n > 0.0)
                m -= (radius / n) * m;
        };
        for (int k = 0; k < K; ++k)
        {
            shrink(r.h[k], ch.eps_cr[k]);
            shrink(r.g[k], ch.eps_cr_j[k]);
        }
        for (int l = 0; l < L; ++l)
        {
            shrink(r.H[l], ch.theta_er[l]);
            shrink(r.G[l], ch.theta_er_j[l]);
        }
        return r;
    }

    auto rng = make_stream(seed, 1000 + static_cast<std::uint64_t>(index));
    for (int k = 0; k < K; ++k)
    {
        r.h[k] += sample_bounded_error(ch.eps_cr[k], static_cast<int>(r.h[k].size()), 1, rng,
                                       boundary_prob)
                      .col(0);
        r.g[k] += sample_bounded_error(ch.eps_cr_j[k], static_cast<int>(r.g[k].size()), 1, rng,
                                       boundary_prob)
                      .col(0);
    }
    for (int l = 0; l < L; ++l)
    {
        r.H[l] += sample_bounded_error(ch.theta_er[l], static_cast<int>(r.H[l].rows()),
                                       static_cast<int>(r.H[l].cols()), rng, boundary_prob);
        r.G[l] += sample_bounded_error(ch.theta_er_j[l], static_cast<int>(r.G[l].rows()),
                                       static_cast<int>(r.G[l].cols()), rng, boundary_prob);
    }
    return r;
}

WorstCaseReport empirical_worst_case(const BeamformingSolution &sol, const ChannelSet &ch,
                                     const NoiseAndEfficiency &noise, int n_samples,
                                     std::uint64_t seed, const WorstCaseOptions &opts)
{
    if (n_samples < 1)
        throw DomainError("empirical_worst_case: need at least one sample");
    const int K = static_cast<int>(ch.hbar.size());
    const int L = static_cast<int>(ch.Hbar.size());
    constexpr double inf = std::numeric_limits<double>::infinity();

    WorstCaseReport rep;
    rep.min_secrecy_rate.assign(K, inf);
    rep.min_relaxed_secrecy_rate.assign(K, inf);
    rep.min_harvest_cr.assign(K, inf);
    rep.min_harvest_er.assign(L, inf);
    rep.n_samples = n_samples;

    for (int i = 0; i < n_samples; ++i)
    {
        const ChannelRealization r = sample_realization(ch, seed, i, opts.boundary_prob);
        for (int k = 0; k < K; ++k)
        {
            rep.min_secrecy_rate[k] = std::min(rep.min_secrecy_rate[k], secrecy_rate(sol, r, noise, k));
            rep.min_relaxed_secrecy_rate[k] =
                std::min(rep.min_relaxed_secrecy_rate[k], relaxed_secrecy_rate(sol, r, noise, k));
            rep.min_harvest_cr[k] = std::min(rep.min_harvest_cr[k], harvested_power_cr(sol, r, noise, k));
        }
        for (int l = 0; l < L; ++l)
            rep.min_harvest_er[l] = std::min(rep.min_harvest_er[l], harvested_power_er(sol, r, noise, l));
    }
    return rep;
}

} // namespace swipt
