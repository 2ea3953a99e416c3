#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "swipt/types.hpp"

namespace swipt
{

/// Counts of receivers and antennas.
struct SystemDims
{
    int K = 2;   ///< co-located receivers (single antenna)
    int L = 2;   ///< energy receivers
    int n_t = 4; ///< transmitter antennas
    int n_j = 4; ///< jammer antennas
    int n_e = 2; ///< antennas per energy receiver

    void validate() const;
    bool operator==(const SystemDims &) const = default;
};

/// Link distances in meters, one entry per receiver.
struct Geometry
{
    std::vector<double> d_cr; ///< transmitter -> CR
    std::vector<double> f_cr; ///< jammer -> CR
    std::vector<double> d_er; ///< transmitter -> ER
    std::vector<double> f_er; ///< jammer -> ER
    double f_c = 900e6;
    double kappa = 2.7;
    double c = kSpeedOfLight;

    static Geometry uniform(const SystemDims &dims, double d_cr, double f_cr,
                            double d_er, double f_er);
    void validate(const SystemDims &dims) const;
};

/// Noise powers (watts) and energy-conversion efficiencies, per receiver.
struct NoiseAndEfficiency
{
    std::vector<double> sigma2_cr; ///< antenna noise at CR
    std::vector<double> delta2_cr; ///< ID processing noise at CR
    std::vector<double> sigma2_er; ///< per-antenna noise at ER
    std::vector<double> eta_cr;
    std::vector<double> eta_er;

    static NoiseAndEfficiency uniform(const SystemDims &dims, double sigma2_cr,
                                      double delta2_cr, double sigma2_er, double eta);
    void validate(const SystemDims &dims) const;
};

/// Estimated channels plus the radii of their norm-bounded errors.
///
/// CR errors are Euclidean-norm balls, ER errors Frobenius-norm balls.
struct ChannelSet
{
    std::vector<CVec> hbar; ///< K vectors, length n_t
    std::vector<CMat> Hbar; ///< L matrices, n_t x n_e
    std::vector<CVec> gbar; ///< K vectors, length n_j
    std::vector<CMat> Gbar; ///< L matrices, n_j x n_e
    std::vector<double> eps_cr;
    std::vector<double> eps_cr_j;
    std::vector<double> theta_er;
    std::vector<double> theta_er_j;

    SystemDims dims() const;
    void validate(const SystemDims &dims) const;
    /// Copy with every error radius set to zero.
    ChannelSet with_zero_radii() const;
};

struct PowerBudget
{
    double P_T = 10.0;   ///< transmitter budget, watts
    double P_J = 10.0;   ///< jammer budget, watts
    double Rbar_s = 0.5; ///< secrecy-rate target, bits/s/Hz
    double tau = 0.5;    ///< weight on the CR harvest floor

    void validate() const;
};

enum class RadiusScaling
{
    absolute,  ///< radii are used as given
    path_loss, ///< radii multiply the link's path-loss amplitude
};

/// Error radii per receiver class; expanded per receiver by generate_scenario.
struct ErrorRadii
{
    double eps_cr = 0.0;
    double eps_cr_j = 0.0;
    double theta_er = 0.0;
    double theta_er_j = 0.0;
    RadiusScaling scaling = RadiusScaling::path_loss;

    static ErrorRadii uniform(double eps_s, double eps_e,
                              RadiusScaling scaling = RadiusScaling::path_loss)
    {
        return {eps_s, eps_s, eps_e, eps_e, scaling};
    }
};

/// Everything needed to evaluate or optimize one system instance.
struct Scenario
{
    SystemDims dims;
    Geometry geom;
    NoiseAndEfficiency noise;
    ChannelSet channels;
};

/// Scalar parameters describing a family of scenarios.
struct ScenarioParams
{
    SystemDims dims;
    double d_cr = 100.0;
    double f_cr = 100.0;
    double d_er = 9.0;
    double f_er = 9.0;
    double f_c = 900e6;
    double kappa = 2.7;
    double sigma2_cr_w = 1e-12; // -90 dBm
    double delta2_cr_w = 1e-8;  // -50 dBm
    double sigma2_er_w = 1e-12; // -90 dBm
    double eta = 0.3;
    ErrorRadii radii = ErrorRadii::uniform(0.01, 0.01);
};

/// (c / (4 pi f_c)) * d^(-kappa/2)
double path_loss_amplitude(double d, double f_c, double kappa, double c = kSpeedOfLight);

double dbm_to_watts(double p_dbm);
double watts_to_dbm(double p_w);

/// Draws estimated channels as CN(0, I) entries scaled by the link path loss.
/// Each channel group uses its own sub-stream of `seed`.
ChannelSet generate_scenario(std::uint64_t seed, const SystemDims &dims,
                             const Geometry &geom, const ErrorRadii &radii);

Scenario make_scenario(const ScenarioParams &params, std::uint64_t seed);

/// Deterministic sub-stream of a seed.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);

/// Complex perturbation with Euclidean (cols == 1) or Frobenius norm <= radius.
///
/// With probability `boundary_prob` the sample lies on the sphere of the
/// given radius, otherwise it is uniform inside the ball.
CMat sample_bounded_error(double radius, int rows, int cols, std::mt19937_64 &rng,
                          double boundary_prob = 0.5);
CMat sample_bounded_error(double radius, int rows, int cols, std::uint64_t seed,
                          double boundary_prob = 0.5);

void write_scenario(std::ostream &os, const Scenario &sc);
Scenario read_scenario(std::istream &is);

} // namespace swipt
