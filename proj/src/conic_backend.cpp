#include "swipt/conic_backend.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace swipt
{

const char *to_string(SolveStatus s)
{
    switch (s)
    {
    case SolveStatus::optimal:
        return "optimal";
    case SolveStatus::infeasible:
        return "infeasible";
    case SolveStatus::unbounded:
        return "unbounded";
    case SolveStatus::numerical_failure:
        return "numerical_failure";
    case SolveStatus::iteration_limit:
        return "iteration_limit";
    }
    return "unknown";
}

SolveStatus solve_status_from_string(const std::string &s)
{
    for (auto st : {SolveStatus::optimal, SolveStatus::infeasible, SolveStatus::unbounded,
                    SolveStatus::numerical_failure, SolveStatus::iteration_limit})
        if (s == to_string(st))
            return st;
    throw FormatError("unknown solver status '" + s + "'");
}

namespace
{

// Linear rows first, then second-order cones in problem order.
struct Cones
{
    int n_lin = 0;
    std::vector<int> start;
    std::vector<int> dim;
    int m = 0;

    int degree() const { return n_lin + static_cast<int>(dim.size()); }
};

struct StdForm
{
    RMat G; // G x + s = h, s in cones, minimize c^T x
    RVec h;
    RVec c;
    Cones cones;
};

StdForm to_standard(const ConicProblem &p)
{
    StdForm f;
    const int n = p.n_vars;
    int m = static_cast<int>(p.nonneg.size());
    f.cones.n_lin = m;
    for (const auto &s : p.socs)
    {
        f.cones.start.push_back(m);
        f.cones.dim.push_back(static_cast<int>(s.A.rows()) + 1);
        m += static_cast<int>(s.A.rows()) + 1;
    }
    f.cones.m = m;
    f.G = RMat::Zero(m, n);
    f.h = RVec::Zero(m);
    for (int i = 0; i < f.cones.n_lin; ++i)
    {
        f.G.row(i) = -p.nonneg[i].a.transpose();
        f.h(i) = p.nonneg[i].b;
    }
    for (std::size_t k = 0; k < p.socs.size(); ++k)
    {
        const auto &s = p.socs[k];
        const int st = f.cones.start[k];
        f.G.row(st) = -s.c.transpose();
        f.h(st) = s.d;
        f.G.middleRows(st + 1, s.A.rows()) = -s.A;
        f.h.segment(st + 1, s.A.rows()) = s.b;
    }
    f.c = -p.objective;
    return f;
}

struct Scaling
{
    RVec lin_w;
    std::vector<double> eta;
    std::vector<RVec> wbar;
};

double jnorm2(const RVec &v, int st, int d)
{
    return v(st) * v(st) - v.segment(st + 1, d - 1).squaredNorm();
}

bool compute_scaling(const Cones &K, const RVec &s, const RVec &z, Scaling &W, RVec &lambda)
{
    lambda.resize(K.m);
    W.lin_w.resize(K.n_lin);
    for (int i = 0; i < K.n_lin; ++i)
    {
        if (!(s(i) > 0.0 && z(i) > 0.0))
            return false;
        W.lin_w(i) = std::sqrt(s(i) / z(i));
        lambda(i) = std::sqrt(s(i) * z(i));
    }
    W.eta.resize(K.dim.size());
    W.wbar.resize(K.dim.size());
    for (std::size_t k = 0; k < K.dim.size(); ++k)
    {
        const int st = K.start[k], d = K.dim[k];
        const double sres = jnorm2(s, st, d), zres = jnorm2(z, st, d);
        if (!(sres > 0.0 && zres > 0.0 && s(st) > 0.0 && z(st) > 0.0))
            return false;
        const RVec sb = s.segment(st, d) / std::sqrt(sres);
        const RVec zb = z.segment(st, d) / std::sqrt(zres);
        const double gamma = std::sqrt(0.5 * (1.0 + sb.dot(zb)));
        RVec wb(d);
        wb(0) = (sb(0) + zb(0)) / (2.0 * gamma);
        wb.tail(d - 1) = (sb.tail(d - 1) - zb.tail(d - 1)) / (2.0 * gamma);
        W.wbar[k] = wb;
        W.eta[k] = std::pow(sres / zres, 0.25);
    }
    // lambda = W z
    for (std::size_t k = 0; k < K.dim.size(); ++k)
    {
        const int st = K.start[k], d = K.dim[k];
        const RVec &wb = W.wbar[k];
        const double v0 = z(st);
        const auto v1 = z.segment(st + 1, d - 1);
        const double w1v1 = wb.tail(d - 1).dot(v1);
        lambda(st) = W.eta[k] * (wb(0) * v0 + w1v1);
        lambda.segment(st + 1, d - 1) =
            W.eta[k] * (v0 * wb.tail(d - 1) + v1 + (w1v1 / (1.0 + wb(0))) * wb.tail(d - 1));
    }
    return lambda.allFinite();
}

// out = W v (inverse = false) or W^{-1} v
RVec apply_W(const Cones &K, const Scaling &W, const RVec &v, bool inverse)
{
    RVec out(K.m);
    for (int i = 0; i < K.n_lin; ++i)
        out(i) = inverse ? v(i) / W.lin_w(i) : v(i) * W.lin_w(i);
    for (std::size_t k = 0; k < K.dim.size(); ++k)
    {
        const int st = K.start[k], d = K.dim[k];
        const RVec &wb = W.wbar[k];
        const auto w1 = wb.tail(d - 1);
        const double v0 = v(st);
        const auto v1 = v.segment(st + 1, d - 1);
        const double w1v1 = w1.dot(v1);
        const double sg = inverse ? -1.0 : 1.0;
        const double f = inverse ? 1.0 / W.eta[k] : W.eta[k];
        out(st) = f * (wb(0) * v0 + sg * w1v1);
        out.segment(st + 1, d - 1) = f * (sg * v0 * w1 + v1 + (w1v1 / (1.0 + wb(0))) * w1);
    }
    return out;
}

RVec jordan_prod(const Cones &K, const RVec &u, const RVec &v)
{
    RVec out(K.m);
    for (int i = 0; i < K.n_lin; ++i)
        out(i) = u(i) * v(i);
    for (std::size_t k = 0; k < K.dim.size(); ++k)
    {
        const int st = K.start[k], d = K.dim[k];
        out(st) = u.segment(st, d).dot(v.segment(st, d));
        out.segment(st + 1, d - 1) = u(st) * v.segment(st + 1, d - 1) + v(st) * u.segment(st + 1, d - 1);
    }
    return out;
}

// u with lambda o u = v
RVec jordan_div(const Cones &K, const RVec &lambda, const RVec &v)
{
    RVec out(K.m);
    for (int i = 0; i < K.n_lin; ++i)
        out(i) = v(i) / lambda(i);
    for (std::size_t k = 0; k < K.dim.size(); ++k)
    {
        const int st = K.start[k], d = K.dim[k];
        const double l0 = lambda(st);
        const auto l1 = lambda.segment(st + 1, d - 1);
        const double det = jnorm2(lambda, st, d);
        const double u0 = (l0 * v(st) - l1.dot(v.segment(st + 1, d - 1))) / det;
        out(st) = u0;
        out.segment(st + 1, d - 1) = (v.segment(st + 1, d - 1) - u0 * l1) / l0;
    }
    return out;
}

RVec identity(const Cones &K)
{
    RVec e = RVec::Zero(K.m);
    e.head(K.n_lin).setOnes();
    for (int st : K.start)
        e(st) = 1.0;
    return e;
}

// Largest violation of v in the cone product (0 when v is inside).
double cone_violation(const Cones &K, const RVec &v)
{
    double viol = 0.0;
    for (int i = 0; i < K.n_lin; ++i)
        viol = std::max(viol, -v(i));
    for (std::size_t k = 0; k < K.dim.size(); ++k)
    {
        const int st = K.start[k], d = K.dim[k];
        viol = std::max(viol, v.segment(st + 1, d - 1).norm() - v(st));
    }
    return viol;
}

void bring_to_cone(const Cones &K, RVec &v)
{
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < K.n_lin; ++i)
        margin = std::min(margin, v(i));
    for (std::size_t k = 0; k < K.dim.size(); ++k)
    {
        const int st = K.start[k], d = K.dim[k];
        margin = std::min(margin, v(st) - v.segment(st + 1, d - 1).norm());
    }
    if (K.m > 0 && margin <= 0.0)
        v += (1.0 - margin) * identity(K);
}

// Largest alpha keeping lambda + alpha * d inside the cone product.
double cone_step(const Cones &K, const RVec &lambda, const RVec &d)
{
    double alpha = std::numeric_limits<double>::infinity();
    for (int i = 0; i < K.n_lin; ++i)
        if (d(i) < 0.0)
            alpha = std::min(alpha, -lambda(i) / d(i));
    for (std::size_t k = 0; k < K.dim.size(); ++k)
    {
        const int st = K.start[k], dm = K.dim[k];
        const double ln = std::sqrt(std::max(jnorm2(lambda, st, dm), 0.0));
        if (!(ln > 0.0))
            return 0.0;
        const RVec lb = lambda.segment(st, dm) / ln;
        const double lt = lb(0) * d(st) - lb.tail(dm - 1).dot(d.segment(st + 1, dm - 1));
        const double rho0 = lt / ln;
        const double factor = (lt + d(st)) / (lb(0) + 1.0);
        const double rho1 = ((d.segment(st + 1, dm - 1) - factor * lb.tail(dm - 1)) / ln).norm();
        const double lim = rho1 - rho0;
        if (lim > 0.0)
            alpha = std::min(alpha, 1.0 / lim);
    }
    return alpha;
}

double line_search(const Cones &K, const RVec &lambda, const RVec &ds, const RVec &dz, double tau,
                   double dtau, double kap, double dkap)
{
    double alpha = std::min(cone_step(K, lambda, ds), cone_step(K, lambda, dz));
    if (dtau < 0.0)
        alpha = std::min(alpha, -tau / dtau);
    if (dkap < 0.0)
        alpha = std::min(alpha, -kap / dkap);
    return std::min(alpha, 1.0);
}

// Solves [0 G^T; G -W^2] [dx; dz] = [bx; bz] through a QR factorization of W^{-1} G.
class KktSolver
{
public:
    KktSolver(const RMat &G, const Cones &K, const Scaling &W) : G_(G), K_(K), W_(W)
    {
        const int n = static_cast<int>(G.cols());
        M_.resize(K.m, n);
        for (int j = 0; j < n; ++j)
            M_.col(j) = apply_W(K, W, G.col(j), true);
        const double scale = std::max(1.0, M_.colwise().squaredNorm().maxCoeff());
        RMat aug(K.m + n, n);
        aug.topRows(K.m) = M_;
        aug.bottomRows(n) = std::sqrt(1e-14 * scale) * RMat::Identity(n, n);
        qr_.compute(aug);
        R_ = qr_.matrixQR().topRows(n).triangularView<Eigen::Upper>();
        ok_ = R_.diagonal().allFinite() && R_.diagonal().cwiseAbs().minCoeff() > 0.0;
    }

    bool ok() const { return ok_; }

    bool solve(const RVec &bx, const RVec &bz, RVec &dx, RVec &dz) const
    {
        base_solve(bx, bz, dx, dz);
        const double bnorm = 1.0 + bx.lpNorm<Eigen::Infinity>() + bz.lpNorm<Eigen::Infinity>();
        for (int it = 0; it < 5; ++it)
        {
            const RVec rx = bx - G_.transpose() * dz;
            const RVec rz = bz - (G_ * dx - apply_W(K_, W_, apply_W(K_, W_, dz, false), false));
            const double err = std::max(rx.lpNorm<Eigen::Infinity>(), rz.lpNorm<Eigen::Infinity>());
            if (err <= 1e-14 * bnorm)
                break;
            RVec cx, cz;
            base_solve(rx, rz, cx, cz);
            dx += cx;
            dz += cz;
        }
        return dx.allFinite() && dz.allFinite();
    }

private:
    void base_solve(const RVec &bx, const RVec &bz, RVec &dx, RVec &dz) const
    {
        const RVec wbz = apply_W(K_, W_, bz, true);
        const RVec rhs = bx + M_.transpose() * wbz;
        const RVec y = R_.transpose().triangularView<Eigen::Lower>().solve(rhs);
        dx = R_.triangularView<Eigen::Upper>().solve(y);
        dz = apply_W(K_, W_, M_ * dx - wbz, true);
    }

    const RMat &G_;
    const Cones &K_;
    const Scaling &W_;
    RMat M_;
    RMat R_;
    Eigen::HouseholderQR<RMat> qr_;
    bool ok_ = false;
};

struct Equilibration
{
    RVec D; // columns
    RVec E; // rows, constant within a cone
    double sc = 1.0;
    double sh = 1.0;
};

Equilibration equilibrate(StdForm &f, bool enabled)
{
    const int n = static_cast<int>(f.G.cols());
    const int m = f.cones.m;
    Equilibration eq{RVec::Ones(n), RVec::Ones(m), 1.0, 1.0};
    if (enabled && m > 0 && n > 0)
    {
        for (int it = 0; it < 10; ++it)
        {
            RVec d(n), e(m);
            for (int j = 0; j < n; ++j)
            {
                const double cm = f.G.col(j).cwiseAbs().maxCoeff();
                d(j) = cm > 0.0 ? 1.0 / std::sqrt(cm) : 1.0;
            }
            for (int i = 0; i < f.cones.n_lin; ++i)
            {
                const double rm = f.G.row(i).cwiseAbs().maxCoeff();
                e(i) = rm > 0.0 ? 1.0 / std::sqrt(rm) : 1.0;
            }
            for (std::size_t k = 0; k < f.cones.dim.size(); ++k)
            {
                const int st = f.cones.start[k], dm = f.cones.dim[k];
                const double rm = f.G.middleRows(st, dm).cwiseAbs().maxCoeff();
                e.segment(st, dm).setConstant(rm > 0.0 ? 1.0 / std::sqrt(rm) : 1.0);
            }
            f.G = e.asDiagonal() * f.G * d.asDiagonal();
            eq.D.array() *= d.array();
            eq.E.array() *= e.array();
        }
        f.h.array() *= eq.E.array();
        f.c.array() *= eq.D.array();
    }
    const double cn = f.c.size() ? f.c.lpNorm<Eigen::Infinity>() : 0.0;
    const double hn = f.h.size() ? f.h.lpNorm<Eigen::Infinity>() : 0.0;
    eq.sc = cn > 0.0 ? cn : 1.0;
    eq.sh = hn > 0.0 ? hn : 1.0;
    f.c /= eq.sc;
    f.h /= eq.sh;
    return eq;
}

} // namespace

ConicSolution InteriorPointSolver::solve(const ConicProblem &p, const SolverOptions &opts) const
{
    const auto t0 = std::chrono::steady_clock::now();
    p.validate();
    if (!(opts.feas_tol > 0.0 && opts.rel_gap_tol > 0.0) || opts.max_iters < 1)
        throw DomainError("solver options: tolerances must be positive and max_iters >= 1");

    ConicSolution out;
    auto finish = [&](SolveStatus st, const RVec &x, int iters) {
        out.status = st;
        out.x = x;
        out.objective = x.size() ? p.objective.dot(x) : 0.0;
        out.solver_iterations = iters;
        out.solve_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return out;
    };

    const StdForm orig = to_standard(p);
    const int n = p.n_vars;
    const int m = orig.cones.m;
    if (m == 0)
    {
        if (orig.c.size() == 0 || orig.c.lpNorm<Eigen::Infinity>() == 0.0)
            return finish(SolveStatus::optimal, RVec::Zero(n), 0);
        return finish(SolveStatus::unbounded, RVec::Zero(n), 0);
    }

    StdForm f = orig;
    const Equilibration eq = equilibrate(f, opts.equilibrate);
    const Cones &K = f.cones;
    const RMat &G = f.G;
    const RVec &h = f.h;
    const RVec &c = f.c;
    const RVec e = identity(K);
    const double hnorm = std::max(1.0, orig.h.norm());
    const double cnorm = std::max(1.0, orig.c.norm());

    auto unscale_x = [&](const RVec &xs, double tau) -> RVec {
        return (eq.sh / tau) * eq.D.cwiseProduct(xs);
    };

    // Initial point: least-squares primal and dual, shifted into the cones.
    Scaling W0;
    W0.lin_w = RVec::Ones(K.n_lin);
    for (std::size_t k = 0; k < K.dim.size(); ++k)
    {
        RVec wb = RVec::Zero(K.dim[k]);
        wb(0) = 1.0;
        W0.wbar.push_back(wb);
        W0.eta.push_back(1.0);
    }
    RVec x, z, s;
    {
        KktSolver kkt(G, K, W0);
        if (!kkt.ok())
            return finish(SolveStatus::numerical_failure, RVec::Zero(n), 0);
        RVec dx, dz;
        kkt.solve(RVec::Zero(n), h, dx, dz);
        x = dx;
        s = -dz;
        bring_to_cone(K, s);
        kkt.solve(-c, RVec::Zero(m), dx, dz);
        z = dz;
        bring_to_cone(K, z);
    }
    double tau = 1.0, kap = 1.0;
    const double D1 = K.degree() + 1.0;

    RVec best_x = RVec::Zero(n);
    int stalls = 0;
    for (int iter = 0; iter <= opts.max_iters; ++iter)
    {
        if (!(x.allFinite() && z.allFinite() && s.allFinite() && std::isfinite(tau) && std::isfinite(kap)))
            return finish(SolveStatus::numerical_failure, best_x, iter);

        // convergence on the original data
        const RVec xo = unscale_x(x, tau);
        const RVec so = (eq.sh / tau) * s.cwiseQuotient(eq.E);
        const RVec zo = (eq.sc / tau) * z.cwiseProduct(eq.E);
        best_x = xo;
        const double pres = (orig.G * xo + so - orig.h).norm() / hnorm;
        const double dres = (orig.G.transpose() * zo + orig.c).norm() / cnorm;
        const double pcost = orig.c.dot(xo);
        const double dcost = -orig.h.dot(zo);
        const double gap = so.dot(zo);
        const double denom = std::max(std::abs(pcost), std::abs(dcost));
        const double relgap = denom > 0.0 ? gap / denom : std::numeric_limits<double>::infinity();
        if (pres <= opts.feas_tol && dres <= opts.feas_tol &&
            cone_violation(orig.cones, orig.h - orig.G * xo) <= 0.5 * opts.feas_tol &&
            (gap <= opts.abs_gap_tol || relgap <= opts.rel_gap_tol))
            return finish(SolveStatus::optimal, xo, iter);

        const double hz = h.dot(z), cx = c.dot(x);
        if (hz < 0.0 && (G.transpose() * z).norm() / -hz <= opts.feas_tol)
            return finish(SolveStatus::infeasible, xo, iter);
        if (cx < 0.0 && (G * x + s).norm() / -cx <= opts.feas_tol)
            return finish(SolveStatus::unbounded, xo, iter);
        if (iter == opts.max_iters)
            return finish(SolveStatus::iteration_limit, xo, iter);

        // residuals of the homogeneous embedding
        const RVec rx = G.transpose() * z + tau * c;
        const RVec rz = G * x + s - tau * h;
        const double rt = kap + cx + hz;
        const double mu = (s.dot(z) + tau * kap) / D1;

        Scaling W;
        RVec lambda;
        if (!compute_scaling(K, s, z, W, lambda))
            return finish(SolveStatus::numerical_failure, best_x, iter);
        KktSolver kkt(G, K, W);
        if (!kkt.ok())
            return finish(SolveStatus::numerical_failure, best_x, iter);

        RVec x1, z1;
        if (!kkt.solve(-c, h, x1, z1))
            return finish(SolveStatus::numerical_failure, best_x, iter);
        const double tden = h.dot(z1) + c.dot(x1) - kap / tau;

        auto direction = [&](double sigma, const RVec &dsc, double dkap_rhs, RVec &dx, RVec &dz,
                             RVec &ds_sc, RVec &dz_sc, double &dtau, double &dkap) {
            // dsc = lambda \ d_s
            RVec x0, z0;
            if (!kkt.solve(-(1.0 - sigma) * rx, -(1.0 - sigma) * rz - apply_W(K, W, dsc, false), x0, z0))
                return false;
            dtau = (-(1.0 - sigma) * rt - h.dot(z0) - c.dot(x0) - dkap_rhs / tau) / tden;
            dx = x0 + dtau * x1;
            dz = z0 + dtau * z1;
            dz_sc = apply_W(K, W, dz, false);
            ds_sc = dsc - dz_sc;
            dkap = (dkap_rhs - kap * dtau) / tau;
            return std::isfinite(dtau) && std::isfinite(dkap);
        };

        // predictor
        RVec dx, dz, ds_sc, dz_sc;
        double dtau = 0.0, dkap = 0.0;
        if (!direction(0.0, -lambda, -tau * kap, dx, dz, ds_sc, dz_sc, dtau, dkap))
            return finish(SolveStatus::numerical_failure, best_x, iter);
        const double a_aff = line_search(K, lambda, ds_sc, dz_sc, tau, dtau, kap, dkap);
        const double sigma = std::pow(std::clamp(1.0 - a_aff, 0.0, 1.0), 3);

        // corrector
        const RVec d_s = -jordan_prod(K, lambda, lambda) - jordan_prod(K, ds_sc, dz_sc) + sigma * mu * e;
        const double d_k = -tau * kap - dtau * dkap + sigma * mu;
        if (!direction(sigma, jordan_div(K, lambda, d_s), d_k, dx, dz, ds_sc, dz_sc, dtau, dkap))
            return finish(SolveStatus::numerical_failure, best_x, iter);
        const double alpha = 0.99 * line_search(K, lambda, ds_sc, dz_sc, tau, dtau, kap, dkap);
        if (!(alpha > 1e-10))
        {
            if (++stalls >= 3)
                return finish(SolveStatus::numerical_failure, best_x, iter);
        }
        else
            stalls = 0;

        x += alpha * dx;
        z += alpha * dz;
        s += alpha * apply_W(K, W, ds_sc, false);
        tau += alpha * dtau;
        kap += alpha * dkap;
        if (!(tau > 0.0 && kap > 0.0))
            return finish(SolveStatus::numerical_failure, best_x, iter);
    }
    return finish(SolveStatus::iteration_limit, best_x, opts.max_iters);
}

ConicSolution solve(const ConicProblem &p, const SolverOptions &opts)
{
    return InteriorPointSolver{}.solve(p, opts);
}

} // namespace swipt
