#include "swipt/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "text_util.hpp"

namespace swipt
{

void SystemDims::validate() const
{
    if (K < 1 || L < 1 || n_t < 1 || n_j < 1 || n_e < 1)
        throw DomainError("system dimensions must all be >= 1");
}

Geometry Geometry::uniform(const SystemDims &dims, double d_cr, double f_cr,
                           double d_er, double f_er)
{
    Geometry g;
    g.d_cr.assign(dims.K, d_cr);
    g.f_cr.assign(dims.K, f_cr);
    g.d_er.assign(dims.L, d_er);
    g.f_er.assign(dims.L, f_er);
    return g;
}

namespace
{

void require_size(const std::vector<double> &v, int n, const char *what)
{
    if (static_cast<int>(v.size()) != n)
        throw DomainError(std::string(what) + ": expected " + std::to_string(n) +
                          " entries, got " + std::to_string(v.size()));
}

void require_positive(const std::vector<double> &v, const char *what)
{
    for (double x : v)
        if (!(x > 0.0))
            throw DomainError(std::string(what) + " must be > 0");
}

} // namespace

void Geometry::validate(const SystemDims &dims) const
{
    require_size(d_cr, dims.K, "d_cr");
    require_size(f_cr, dims.K, "f_cr");
    require_size(d_er, dims.L, "d_er");
    require_size(f_er, dims.L, "f_er");
    require_positive(d_cr, "d_cr");
    require_positive(f_cr, "f_cr");
    require_positive(d_er, "d_er");
    require_positive(f_er, "f_er");
    if (!(f_c > 0.0) || !(kappa > 0.0) || !(c > 0.0))
        throw DomainError("carrier frequency, path-loss exponent and c must be > 0");
}

NoiseAndEfficiency NoiseAndEfficiency::uniform(const SystemDims &dims, double sigma2_cr,
                                               double delta2_cr, double sigma2_er,
                                               double eta)
{
    NoiseAndEfficiency n;
    n.sigma2_cr.assign(dims.K, sigma2_cr);
    n.delta2_cr.assign(dims.K, delta2_cr);
    n.sigma2_er.assign(dims.L, sigma2_er);
    n.eta_cr.assign(dims.K, eta);
    n.eta_er.assign(dims.L, eta);
    return n;
}

void NoiseAndEfficiency::validate(const SystemDims &dims) const
{
    require_size(sigma2_cr, dims.K, "sigma2_cr");
    require_size(delta2_cr, dims.K, "delta2_cr");
    require_size(sigma2_er, dims.L, "sigma2_er");
    require_size(eta_cr, dims.K, "eta_cr");
    require_size(eta_er, dims.L, "eta_er");
    require_positive(sigma2_cr, "sigma2_cr");
    require_positive(delta2_cr, "delta2_cr");
    require_positive(sigma2_er, "sigma2_er");
    for (const auto *v : {&eta_cr, &eta_er})
        for (double e : *v)
            if (!(e > 0.0 && e <= 1.0))
                throw DomainError("efficiencies must lie in (0, 1]");
}

SystemDims ChannelSet::dims() const
{
    SystemDims d;
    d.K = static_cast<int>(hbar.size());
    d.L = static_cast<int>(Hbar.size());
    d.n_t = hbar.empty() ? 0 : static_cast<int>(hbar.front().size());
    d.n_j = gbar.empty() ? 0 : static_cast<int>(gbar.front().size());
    d.n_e = Hbar.empty() ? 0 : static_cast<int>(Hbar.front().cols());
    return d;
}

void ChannelSet::validate(const SystemDims &d) const
{
    d.validate();
    if (static_cast<int>(hbar.size()) != d.K || static_cast<int>(gbar.size()) != d.K ||
        static_cast<int>(Hbar.size()) != d.L || static_cast<int>(Gbar.size()) != d.L)
        throw DomainError("channel set: receiver counts do not match dimensions");
    for (int k = 0; k < d.K; ++k)
        if (hbar[k].size() != d.n_t || gbar[k].size() != d.n_j)
            throw DomainError("channel set: CR channel length mismatch");
    for (int l = 0; l < d.L; ++l)
        if (Hbar[l].rows() != d.n_t || Hbar[l].cols() != d.n_e ||
            Gbar[l].rows() != d.n_j || Gbar[l].cols() != d.n_e)
            throw DomainError("channel set: ER channel shape mismatch");
    require_size(eps_cr, d.K, "eps_cr");
    require_size(eps_cr_j, d.K, "eps_cr_j");
    require_size(theta_er, d.L, "theta_er");
    require_size(theta_er_j, d.L, "theta_er_j");
    for (const auto *v : {&eps_cr, &eps_cr_j, &theta_er, &theta_er_j})
        for (double r : *v)
            if (!(r >= 0.0))
                throw DomainError("error radii must be >= 0");
}

ChannelSet ChannelSet::with_zero_radii() const
{
    ChannelSet c = *this;
    std::fill(c.eps_cr.begin(), c.eps_cr.end(), 0.0);
    std::fill(c.eps_cr_j.begin(), c.eps_cr_j.end(), 0.0);
    std::fill(c.theta_er.begin(), c.theta_er.end(), 0.0);
    std::fill(c.theta_er_j.begin(), c.theta_er_j.end(), 0.0);
    return c;
}

void PowerBudget::validate() const
{
    if (!(P_T > 0.0) || !(P_J > 0.0))
        throw DomainError("power budgets must be > 0");
    if (!(Rbar_s >= 0.0))
        throw DomainError("secrecy-rate target must be >= 0");
    if (!(tau >= 0.0 && tau <= 1.0))
        throw DomainError("priority weight tau must lie in [0, 1]");
}

double path_loss_amplitude(double d, double f_c, double kappa, double c)
{
    if (!(d > 0.0))
        throw DomainError("path_loss_amplitude: distance must be > 0");
    if (!(f_c > 0.0))
        throw DomainError("path_loss_amplitude: carrier frequency must be > 0");
    return c / (4.0 * std::numbers::pi * f_c) * std::pow(1.0 / d, kappa / 2.0);
}

double dbm_to_watts(double p_dbm)
{
    return std::pow(10.0, (p_dbm - 30.0) / 10.0);
}

double watts_to_dbm(double p_w)
{
    if (!(p_w > 0.0))
        throw DomainError("watts_to_dbm: power must be > 0");
    return 10.0 * std::log10(p_w) + 30.0;
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32), 0x5eedu};
    return std::mt19937_64(seq);
}

namespace
{

// CN(0, 1) entries: real and imaginary parts N(0, 1/2).
CMat standard_complex_gaussian(int rows, int cols, std::mt19937_64 &rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    CMat m(rows, cols);
    const double scale = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
        {
            const double re = normal(rng);
            const double im = normal(rng);
            m(i, j) = cplx(re * scale, im * scale);
        }
    return m;
}

enum Stream : std::uint64_t
{
    stream_h = 1,
    stream_H = 2,
    stream_g = 3,
    stream_G = 4,
};

} // namespace

ChannelSet generate_scenario(std::uint64_t seed, const SystemDims &dims,
                             const Geometry &geom, const ErrorRadii &radii)
{
    dims.validate();
    geom.validate(dims);
    for (double r : {radii.eps_cr, radii.eps_cr_j, radii.theta_er, radii.theta_er_j})
        if (!(r >= 0.0))
            throw DomainError("error radii must be >= 0");

    const bool rel = radii.scaling == RadiusScaling::path_loss;
    auto pl = [&](double d) { return path_loss_amplitude(d, geom.f_c, geom.kappa, geom.c); };

    ChannelSet ch;
    auto rng_h = make_stream(seed, stream_h);
    auto rng_H = make_stream(seed, stream_H);
    auto rng_g = make_stream(seed, stream_g);
    auto rng_G = make_stream(seed, stream_G);
    for (int k = 0; k < dims.K; ++k)
    {
        const double a = pl(geom.d_cr[k]);
        ch.hbar.push_back(a * standard_complex_gaussian(dims.n_t, 1, rng_h).col(0));
        ch.eps_cr.push_back(rel ? radii.eps_cr * a : radii.eps_cr);
    }
    for (int l = 0; l < dims.L; ++l)
    {
        const double a = pl(geom.d_er[l]);
        ch.Hbar.push_back(a * standard_complex_gaussian(dims.n_t, dims.n_e, rng_H));
        ch.theta_er.push_back(rel ? radii.theta_er * a : radii.theta_er);
    }
    for (int k = 0; k < dims.K; ++k)
    {
        const double a = pl(geom.f_cr[k]);
        ch.gbar.push_back(a * standard_complex_gaussian(dims.n_j, 1, rng_g).col(0));
        ch.eps_cr_j.push_back(rel ? radii.eps_cr_j * a : radii.eps_cr_j);
    }
    for (int l = 0; l < dims.L; ++l)
    {
        const double a = pl(geom.f_er[l]);
        ch.Gbar.push_back(a * standard_complex_gaussian(dims.n_j, dims.n_e, rng_G));
        ch.theta_er_j.push_back(rel ? radii.theta_er_j * a : radii.theta_er_j);
    }
    return ch;
}

Scenario make_scenario(const ScenarioParams &p, std::uint64_t seed)
{
    Scenario sc;
    sc.dims = p.dims;
    sc.geom = Geometry::uniform(p.dims, p.d_cr, p.f_cr, p.d_er, p.f_er);
    sc.geom.f_c = p.f_c;
    sc.geom.kappa = p.kappa;
    sc.noise = NoiseAndEfficiency::uniform(p.dims, p.sigma2_cr_w, p.delta2_cr_w,
                                           p.sigma2_er_w, p.eta);
    sc.noise.validate(p.dims);
    sc.channels = generate_scenario(seed, p.dims, sc.geom, p.radii);
    return sc;
}

CMat sample_bounded_error(double radius, int rows, int cols, std::mt19937_64 &rng,
                          double boundary_prob)
{
    if (!(radius >= 0.0))
        throw DomainError("sample_bounded_error: radius must be >= 0");
    if (radius == 0.0)
        return CMat::Zero(rows, cols);

    CMat dir = standard_complex_gaussian(rows, cols, rng);
    double n = dir.norm();
    while (n == 0.0)
    {
        dir = standard_complex_gaussian(rows, cols, rng);
        n = dir.norm();
    }
    dir /= n;

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double r = radius;
    if (unif(rng) >= boundary_prob)
    {
        // uniform in a ball of real dimension 2 * rows * cols
        const double real_dim = 2.0 * rows * cols;
        r = radius * std::pow(unif(rng), 1.0 / real_dim);
    }
    CMat out = r * dir;
    // guard the contract against the last ulp of rounding
    const double on = out.norm();
    if (on > radius)
        out *= radius / on;
    return out;
}

CMat sample_bounded_error(double radius, int rows, int cols, std::uint64_t seed,
                          double boundary_prob)
{
    auto rng = make_stream(seed, 0);
    return sample_bounded_error(radius, rows, cols, rng, boundary_prob);
}

// ---------------------------------------------------------------------------
// text serialization

namespace
{

void write_reals(std::ostream &os, const char *key, const std::vector<double> &v)
{
    os << key;
    for (double x : v)
        os << ' ' << text::format_double(x);
    os << '\n';
}

void write_complex_rows(std::ostream &os, const std::string &header, const CMat &m)
{
    os << '[' << header << "]\n";
    for (int i = 0; i < m.rows(); ++i)
    {
        for (int j = 0; j < m.cols(); ++j)
        {
            if (j)
                os << ' ';
            os << text::format_double(m(i, j).real()) << ','
               << text::format_double(m(i, j).imag());
        }
        os << '\n';
    }
}

cplx parse_complex(const std::string &tok)
{
    const auto comma = tok.find(',');
    if (comma == std::string::npos)
        throw FormatError("expected re,im pair, got '" + tok + "'");
    return {text::parse_double(tok.substr(0, comma)), text::parse_double(tok.substr(comma + 1))};
}

struct Section
{
    std::string name;
    std::vector<std::vector<std::string>> lines;
};

std::vector<double> reals_after_key(const std::vector<std::string> &toks)
{
    std::vector<double> out;
    for (std::size_t i = 1; i < toks.size(); ++i)
        out.push_back(text::parse_double(toks[i]));
    return out;
}

CMat complex_block(const Section &s, int rows, int cols)
{
    if (static_cast<int>(s.lines.size()) != rows)
        throw FormatError("section [" + s.name + "]: expected " + std::to_string(rows) + " rows");
    CMat m(rows, cols);
    for (int i = 0; i < rows; ++i)
    {
        if (static_cast<int>(s.lines[i].size()) != cols)
            throw FormatError("section [" + s.name + "]: expected " + std::to_string(cols) +
                              " entries per row");
        for (int j = 0; j < cols; ++j)
            m(i, j) = parse_complex(s.lines[i][j]);
    }
    return m;
}

} // namespace

void write_scenario(std::ostream &os, const Scenario &sc)
{
    const auto &d = sc.dims;
    os << "swipt-scenario 1\n";
    os << "[dims]\n"
       << "K " << d.K << "\nL " << d.L << "\nn_t " << d.n_t << "\nn_j " << d.n_j << "\nn_e "
       << d.n_e << '\n';
    os << "[geometry]\n";
    write_reals(os, "d_cr", sc.geom.d_cr);
    write_reals(os, "f_cr", sc.geom.f_cr);
    write_reals(os, "d_er", sc.geom.d_er);
    write_reals(os, "f_er", sc.geom.f_er);
    write_reals(os, "f_c", {sc.geom.f_c});
    write_reals(os, "kappa", {sc.geom.kappa});
    write_reals(os, "c", {sc.geom.c});
    os << "[noise]\n";
    write_reals(os, "sigma2_cr", sc.noise.sigma2_cr);
    write_reals(os, "delta2_cr", sc.noise.delta2_cr);
    write_reals(os, "sigma2_er", sc.noise.sigma2_er);
    write_reals(os, "eta_cr", sc.noise.eta_cr);
    write_reals(os, "eta_er", sc.noise.eta_er);
    os << "[radii]\n";
    write_reals(os, "eps_cr", sc.channels.eps_cr);
    write_reals(os, "eps_cr_j", sc.channels.eps_cr_j);
    write_reals(os, "theta_er", sc.channels.theta_er);
    write_reals(os, "theta_er_j", sc.channels.theta_er_j);
    for (int k = 0; k < d.K; ++k)
        write_complex_rows(os, "hbar " + std::to_string(k), sc.channels.hbar[k].transpose());
    for (int l = 0; l < d.L; ++l)
        write_complex_rows(os, "Hbar " + std::to_string(l), sc.channels.Hbar[l]);
    for (int k = 0; k < d.K; ++k)
        write_complex_rows(os, "gbar " + std::to_string(k), sc.channels.gbar[k].transpose());
    for (int l = 0; l < d.L; ++l)
        write_complex_rows(os, "Gbar " + std::to_string(l), sc.channels.Gbar[l]);
    os << "[end]\n";
}

Scenario read_scenario(std::istream &is)
{
    std::string line;
    if (!std::getline(is, line) || text::trim(line) != "swipt-scenario 1")
        throw FormatError("not a scenario file (missing 'swipt-scenario 1' header)");

    std::vector<Section> sections;
    while (std::getline(is, line))
    {
        const std::string t = text::trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        if (t.front() == '[')
        {
            if (t.back() != ']')
                throw FormatError("bad section header: " + t);
            const std::string name = t.substr(1, t.size() - 2);
            if (name == "end")
                break;
            sections.push_back({name, {}});
            continue;
        }
        if (sections.empty())
            throw FormatError("data before first section");
        sections.back().lines.push_back(text::split_ws(t));
    }

    std::map<std::string, const Section *> by_name;
    for (const auto &s : sections)
        by_name[s.name] = &s;
    auto need = [&](const std::string &name) -> const Section & {
        auto it = by_name.find(name);
        if (it == by_name.end())
            throw FormatError("missing section [" + name + "]");
        return *it->second;
    };
    auto keyed = [&](const Section &s) {
        std::map<std::string, std::vector<double>> kv;
        for (const auto &toks : s.lines)
            if (!toks.empty())
                kv[toks[0]] = reals_after_key(toks);
        return kv;
    };
    auto get = [](const std::map<std::string, std::vector<double>> &kv, const std::string &k) {
        auto it = kv.find(k);
        if (it == kv.end())
            throw FormatError("missing key '" + k + "'");
        return it->second;
    };
    auto get1 = [&](const std::map<std::string, std::vector<double>> &kv, const std::string &k) {
        auto v = get(kv, k);
        if (v.size() != 1)
            throw FormatError("key '" + k + "' expects one value");
        return v[0];
    };

    Scenario sc;
    const auto dims = keyed(need("dims"));
    sc.dims.K = static_cast<int>(get1(dims, "K"));
    sc.dims.L = static_cast<int>(get1(dims, "L"));
    sc.dims.n_t = static_cast<int>(get1(dims, "n_t"));
    sc.dims.n_j = static_cast<int>(get1(dims, "n_j"));
    sc.dims.n_e = static_cast<int>(get1(dims, "n_e"));
    sc.dims.validate();

    const auto geo = keyed(need("geometry"));
    sc.geom.d_cr = get(geo, "d_cr");
    sc.geom.f_cr = get(geo, "f_cr");
    sc.geom.d_er = get(geo, "d_er");
    sc.geom.f_er = get(geo, "f_er");
    sc.geom.f_c = get1(geo, "f_c");
    sc.geom.kappa = get1(geo, "kappa");
    sc.geom.c = get1(geo, "c");

    const auto noise = keyed(need("noise"));
    sc.noise.sigma2_cr = get(noise, "sigma2_cr");
    sc.noise.delta2_cr = get(noise, "delta2_cr");
    sc.noise.sigma2_er = get(noise, "sigma2_er");
    sc.noise.eta_cr = get(noise, "eta_cr");
    sc.noise.eta_er = get(noise, "eta_er");

    const auto radii = keyed(need("radii"));
    auto &ch = sc.channels;
    ch.eps_cr = get(radii, "eps_cr");
    ch.eps_cr_j = get(radii, "eps_cr_j");
    ch.theta_er = get(radii, "theta_er");
    ch.theta_er_j = get(radii, "theta_er_j");

    const auto &d = sc.dims;
    for (int k = 0; k < d.K; ++k)
        ch.hbar.push_back(complex_block(need("hbar " + std::to_string(k)), 1, d.n_t).row(0).transpose());
    for (int l = 0; l < d.L; ++l)
        ch.Hbar.push_back(complex_block(need("Hbar " + std::to_string(l)), d.n_t, d.n_e));
    for (int k = 0; k < d.K; ++k)
        ch.gbar.push_back(complex_block(need("gbar " + std::to_string(k)), 1, d.n_j).row(0).transpose());
    for (int l = 0; l < d.L; ++l)
        ch.Gbar.push_back(complex_block(need("Gbar " + std::to_string(l)), d.n_j, d.n_e));

    sc.geom.validate(d);
    sc.noise.validate(d);
    ch.validate(d);
    return sc;
}

} // namespace swipt
