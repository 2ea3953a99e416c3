#include "swipt/robust_bounds.hpp"

#include <Eigen/Eigenvalues>

namespace swipt
{

namespace
{

double shift_radius(double r, double nrm)
{
    return r * r + 2.0 * r * nrm;
}

CMat shifted(const CMat &A, double s)
{
    CMat out = A;
    out.diagonal().array() += s;
    return hermitian_part(out);
}

} // namespace

CMat hermitian_part(const CMat &A)
{
    return 0.5 * (A + A.adjoint());
}

double min_eigenvalue(const CMat &A)
{
    if (A.size() == 0)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<CMat> es(A, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

RobustBounds compute_robust_bounds(const ChannelSet &ch)
{
    RobustBounds rb;
    for (std::size_t k = 0; k < ch.hbar.size(); ++k)
    {
        rb.xi.push_back(shift_radius(ch.eps_cr[k], ch.hbar[k].norm()));
        rb.xi_j.push_back(shift_radius(ch.eps_cr_j[k], ch.gbar[k].norm()));
    }
    for (std::size_t l = 0; l < ch.Hbar.size(); ++l)
    {
        rb.alpha.push_back(shift_radius(ch.theta_er[l], ch.Hbar[l].norm()));
        rb.alpha_j.push_back(shift_radius(ch.theta_er_j[l], ch.Gbar[l].norm()));
    }
    return rb;
}

GramSet build_gram_set(const ChannelSet &ch, const RobustBounds &rb)
{
    GramSet gs;
    for (std::size_t k = 0; k < ch.hbar.size(); ++k)
    {
        const CMat H = hermitian_part(ch.hbar[k] * ch.hbar[k].adjoint());
        const CMat G = hermitian_part(ch.gbar[k] * ch.gbar[k].adjoint());
        gs.Hbar_k_gram.push_back(H);
        gs.Gbar_k_gram.push_back(G);
        gs.H_xs_minus.push_back(shifted(H, -rb.xi[k]));
        gs.H_xs_plus.push_back(shifted(H, rb.xi[k]));
        gs.G_xs_minus.push_back(shifted(G, -rb.xi_j[k]));
        gs.G_xs_plus.push_back(shifted(G, rb.xi_j[k]));
    }
    for (std::size_t l = 0; l < ch.Hbar.size(); ++l)
    {
        const CMat H = hermitian_part(ch.Hbar[l] * ch.Hbar[l].adjoint());
        const CMat G = hermitian_part(ch.Gbar[l] * ch.Gbar[l].adjoint());
        gs.Hhat_l_gram.push_back(H);
        gs.Ghat_l_gram.push_back(G);
        gs.H_xe_minus.push_back(shifted(H, -rb.alpha[l]));
        gs.H_xe_plus.push_back(shifted(H, rb.alpha[l]));
        gs.G_xe_minus.push_back(shifted(G, -rb.alpha_j[l]));
        gs.G_xe_plus.push_back(shifted(G, rb.alpha_j[l]));
        gs.n_e.push_back(static_cast<int>(ch.Hbar[l].cols()));
    }
    return gs;
}

} // namespace swipt
