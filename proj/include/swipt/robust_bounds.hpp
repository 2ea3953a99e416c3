#pragma once

#include <vector>

#include "swipt/scenario.hpp"

namespace swipt
{

/// Spectral-shift radii bounding the Gram perturbations of each channel.
struct RobustBounds
{
    std::vector<double> xi;      ///< CR, transmitter link
    std::vector<double> xi_j;    ///< CR, jammer link
    std::vector<double> alpha;   ///< ER, transmitter link
    std::vector<double> alpha_j; ///< ER, jammer link
};

/// Gram matrices of the estimated channels and their shifted variants.
struct GramSet
{
    std::vector<CMat> Hbar_k_gram; ///< h h^H
    std::vector<CMat> Gbar_k_gram; ///< g g^H
    std::vector<CMat> Hhat_l_gram; ///< H H^H
    std::vector<CMat> Ghat_l_gram; ///< G G^H

    std::vector<CMat> H_xs_minus; ///< h h^H - xi I
    std::vector<CMat> H_xs_plus;  ///< h h^H + xi I
    std::vector<CMat> G_xs_minus; ///< g g^H - xi_j I
    std::vector<CMat> G_xs_plus;  ///< g g^H + xi_j I
    std::vector<CMat> H_xe_minus; ///< H H^H - alpha I
    std::vector<CMat> H_xe_plus;  ///< H H^H + alpha I
    std::vector<CMat> G_xe_minus; ///< G G^H - alpha_j I
    std::vector<CMat> G_xe_plus;  ///< G G^H + alpha_j I

    std::vector<int> n_e; ///< antennas per ER
};

/// xi = eps^2 + 2 eps ||h||, alpha = theta^2 + 2 theta ||H||_F, same for the jammer links.
RobustBounds compute_robust_bounds(const ChannelSet &ch);

GramSet build_gram_set(const ChannelSet &ch, const RobustBounds &rb);

/// (A + A^H) / 2
CMat hermitian_part(const CMat &A);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const CMat &A);

} // namespace swipt
