#pragma once

#include <cstdint>
#include <vector>

#include "swipt/scenario.hpp"

namespace swipt
{

/// Beams, artificial noise, jamming vector, PS ratios and the slack variables
/// of the max-min problem. Covariances (w w^H etc.) are never formed.
struct BeamformingSolution
{
    std::vector<CVec> w; ///< K beams, length n_t
    CVec z;              ///< AN vector, length n_t
    CVec q;              ///< jammer vector, length n_j
    std::vector<double> rho;
    double Ebar_s = 0.0; ///< CR harvest floor (watts)
    double Ebar_e = 0.0; ///< ER harvest floor (watts)
    double r1 = 1.0;
    double r2 = 1.0;

    static BeamformingSolution zeros(const SystemDims &dims, double rho = 1.0);
    /// sum_k ||w_k||^2 + ||z||^2
    double transmit_power() const;
    double jammer_power() const;
    void validate(const SystemDims &dims) const;
};

/// Actual channels seen by the receivers (estimate plus error).
struct ChannelRealization
{
    std::vector<CVec> h;
    std::vector<CMat> H;
    std::vector<CVec> g;
    std::vector<CMat> G;

    static ChannelRealization nominal(const ChannelSet &ch);
};

double sinr_cr(const BeamformingSolution &sol, const ChannelRealization &ch,
               const NoiseAndEfficiency &noise, int k);

/// log2 det(I + N^{-1} H^H w_k w_k^H H) with N = H^H Z H + G^H Q G + sigma^2 I.
double eavesdropper_rate(const BeamformingSolution &sol, const ChannelRealization &ch,
                         const NoiseAndEfficiency &noise, int l, int k);

/// Trace-relaxed eavesdropper rate used by the robust design:
/// log2(1 + tr(H^H W_k H) / (sigma^2 + tr(H^H Z H + G^H Q G))).
double relaxed_eavesdropper_rate(const BeamformingSolution &sol, const ChannelRealization &ch,
                                 const NoiseAndEfficiency &noise, int l, int k);

/// [log2(1 + SINR_k) - max_l C_{l,k}]^+
double secrecy_rate(const BeamformingSolution &sol, const ChannelRealization &ch,
                    const NoiseAndEfficiency &noise, int k);

/// Secrecy rate with the trace-relaxed eavesdropper term.
double relaxed_secrecy_rate(const BeamformingSolution &sol, const ChannelRealization &ch,
                            const NoiseAndEfficiency &noise, int k);

double harvested_power_cr(const BeamformingSolution &sol, const ChannelRealization &ch,
                          const NoiseAndEfficiency &noise, int k);
double harvested_power_er(const BeamformingSolution &sol, const ChannelRealization &ch,
                          const NoiseAndEfficiency &noise, int l);

struct WorstCaseOptions
{
    double boundary_prob = 0.5;
};

/// Per-receiver minima of the true metrics over sampled channel errors.
/// Sample 0 is always the nominal channel; sample i > 0 depends only on
/// (seed, i), so a longer run extends a shorter one.
struct WorstCaseReport
{
    std::vector<double> min_secrecy_rate;
    std::vector<double> min_relaxed_secrecy_rate;
    std::vector<double> min_harvest_cr;
    std::vector<double> min_harvest_er;
    int n_samples = 0;
};

/// Lower-bounding probe of the worst case, not an exact minimizer.
WorstCaseReport empirical_worst_case(const BeamformingSolution &sol, const ChannelSet &ch,
                                     const NoiseAndEfficiency &noise, int n_samples,
                                     std::uint64_t seed, const WorstCaseOptions &opts = {});

/// Channel realization for sample `index` of the sequence used above.
ChannelRealization sample_realization(const ChannelSet &ch, std::uint64_t seed, int index,
                                      double boundary_prob = 0.5);

} // namespace swipt
