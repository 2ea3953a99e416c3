#include "swipt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "text_util.hpp"

namespace swipt
{

namespace
{

const std::set<std::string> kAxes{"Rbar_s", "P_T", "P_J", "eps_s", "eps_e", "tau"};

struct Quantity
{
    double value;
    std::string unit;
};

Quantity split_unit(const std::string &raw)
{
    const std::string s = text::trim(raw);
    std::size_t i = s.size();
    while (i > 0 && std::isalpha(static_cast<unsigned char>(s[i - 1])))
        --i;
    const std::string num = text::trim(s.substr(0, i));
    if (num.empty())
        throw FormatError("missing number in '" + s + "'");
    return {text::parse_double(num), s.substr(i)};
}

bool parse_bool(const std::string &s)
{
    if (s == "true" || s == "1" || s == "yes")
        return true;
    if (s == "false" || s == "0" || s == "no")
        return false;
    throw FormatError("not a boolean: '" + s + "'");
}

int parse_int(const std::string &s)
{
    const double v = text::parse_double(s);
    if (v != std::floor(v) || std::abs(v) > 1e9)
        throw FormatError("not an integer: '" + s + "'");
    return static_cast<int>(v);
}

double parse_axis_value(const std::string &axis, const std::string &s)
{
    return is_power_axis(axis) ? parse_power(s) : text::parse_double(text::trim(s));
}

void set_axis(const std::string &axis, double v, ScenarioParams &p, PowerBudget &b)
{
    if (axis == "Rbar_s")
        b.Rbar_s = v;
    else if (axis == "P_T")
        b.P_T = v;
    else if (axis == "P_J")
        b.P_J = v;
    else if (axis == "tau")
        b.tau = v;
    else if (axis == "eps_s")
        p.radii.eps_cr = p.radii.eps_cr_j = v;
    else if (axis == "eps_e")
        p.radii.theta_er = p.radii.theta_er_j = v;
    else
        throw DomainError("unknown grid axis '" + axis + "'");
}

std::string axis_column(const std::string &axis)
{
    return is_power_axis(axis) ? axis + "_dbm" : axis;
}

std::string fmt(double x)
{
    return text::format_double(x);
}

std::string fmt_dbm(double w)
{
    return w > 0.0 ? fmt(watts_to_dbm(w)) : std::string("-inf");
}

double parse_csv_double(const std::string &s)
{
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    if (s == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    return text::parse_double(s);
}

auto row_key(const std::vector<double> &point, SchemeTag s, std::uint64_t seed)
{
    return std::make_tuple(point, static_cast<int>(s), seed);
}

double median(std::vector<double> v)
{
    if (v.empty())
        return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double to_dbm_or_inf(double w)
{
    return w > 0.0 ? watts_to_dbm(w) : -std::numeric_limits<double>::infinity();
}

ResultRow run_cell(const ExperimentSpec &spec, const std::vector<double> &point, std::size_t pi,
                   SchemeTag scheme, std::uint64_t seed, std::vector<IterationRecord> *trace)
{
    ScenarioParams params = spec.params;
    PowerBudget budget = spec.budget;
    spec.apply_point(pi, params, budget);

    ResultRow row;
    row.point = point;
    row.scheme = scheme;
    row.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    try
    {
        const Scenario sc = make_scenario(params, seed);
        const SpcaResult res = solve_scheme(scheme, sc.channels, sc.noise, budget, spec.spca, seed);
        row.status = to_string(res.status);
        row.ok = res.ok();
        row.iterations = static_cast<int>(res.trace.records.size());
        row.iterations_to_1e3 = res.trace.iterations_to_tolerance(1e-3);
        row.max_drop = res.trace.max_drop();
        if (trace)
            *trace = res.trace.records;
        if (row.ok)
        {
            row.objective_w = res.objective;
            row.Es_w = res.solution.Ebar_s;
            row.Ee_w = res.solution.Ebar_e;
            const ChannelSet eval = evaluation_channels(scheme, sc.channels);
            const ChannelRealization nom = ChannelRealization::nominal(eval);
            for (int k = 0; k < sc.dims.K; ++k)
                row.nominal_harvest_w += harvested_power_cr(res.solution, nom, sc.noise, k);
            for (int l = 0; l < sc.dims.L; ++l)
                row.nominal_harvest_w += harvested_power_er(res.solution, nom, sc.noise, l);
            const ValidationReport v =
                validate_solution(res, eval, sc.noise, budget, spec.validation_samples, seed);
            row.max_residual = v.surrogate_residual;
            row.min_secrecy = *std::min_element(v.min_relaxed_secrecy.begin(),
                                                v.min_relaxed_secrecy.end());
            row.secrecy_ok = v.secrecy_margin >= -1e-6;
            row.harvest_ok = v.harvest_cr_margin >= -1e-9 && v.harvest_er_margin >= -1e-9;
            row.psd_ok = v.psd_flags_pass;
        }
    }
    catch (const std::exception &)
    {
        row.status = "error";
        row.ok = false;
    }
    row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

} // namespace

const char *to_string(ExperimentKind k)
{
    switch (k)
    {
    case ExperimentKind::convergence_trace:
        return "convergence_trace";
    case ExperimentKind::sweep_secrecy_target:
        return "sweep_secrecy_target";
    case ExperimentKind::sweep_jammer_power:
        return "sweep_jammer_power";
    case ExperimentKind::custom:
        return "custom";
    }
    return "?";
}

ExperimentKind experiment_kind_from_string(const std::string &s)
{
    for (auto k : {ExperimentKind::convergence_trace, ExperimentKind::sweep_secrecy_target,
                   ExperimentKind::sweep_jammer_power, ExperimentKind::custom})
        if (s == to_string(k))
            return k;
    throw FormatError("unknown experiment kind '" + s + "'");
}

bool is_power_axis(const std::string &name)
{
    return name == "P_T" || name == "P_J";
}

double parse_power(const std::string &s)
{
    const Quantity q = split_unit(s);
    if (q.unit == "dBm")
        return dbm_to_watts(q.value);
    if (q.unit == "W")
        return q.value;
    if (q.unit == "mW")
        return 1e-3 * q.value;
    throw FormatError("power '" + s + "' needs a dBm, W or mW suffix");
}

double parse_distance(const std::string &s)
{
    const Quantity q = split_unit(s);
    if (q.unit == "m")
        return q.value;
    if (q.unit == "km")
        return 1e3 * q.value;
    throw FormatError("distance '" + s + "' needs an m or km suffix");
}

double parse_frequency(const std::string &s)
{
    const Quantity q = split_unit(s);
    if (q.unit == "Hz")
        return q.value;
    if (q.unit == "MHz")
        return 1e6 * q.value;
    if (q.unit == "GHz")
        return 1e9 * q.value;
    throw FormatError("frequency '" + s + "' needs an Hz, MHz or GHz suffix");
}

void ExperimentSpec::validate() const
{
    if (n_seeds < 1)
        throw DomainError("n_seeds must be >= 1");
    if (schemes.empty())
        throw DomainError("scheme list is empty");
    if (validation_samples < 1)
        throw DomainError("validation_samples must be >= 1");
    std::set<std::string> seen;
    for (const auto &a : grid)
    {
        if (!kAxes.count(a.name))
            throw DomainError("unknown grid axis '" + a.name + "'");
        if (!seen.insert(a.name).second)
            throw DomainError("grid axis '" + a.name + "' given twice");
        if (a.values.empty())
            throw DomainError("grid axis '" + a.name + "' has no values");
    }
    params.dims.validate();
    budget.validate();
    spca.validate();
}

std::size_t ExperimentSpec::n_points() const
{
    std::size_t n = 1;
    for (const auto &a : grid)
        n *= a.values.size();
    return n;
}

std::vector<double> ExperimentSpec::point(std::size_t index) const
{
    std::vector<double> v(grid.size());
    for (std::size_t i = grid.size(); i-- > 0;)
    {
        const std::size_t n = grid[i].values.size();
        v[i] = grid[i].values[index % n];
        index /= n;
    }
    return v;
}

void ExperimentSpec::apply_point(std::size_t index, ScenarioParams &p, PowerBudget &b) const
{
    const std::vector<double> v = point(index);
    for (std::size_t i = 0; i < grid.size(); ++i)
        set_axis(grid[i].name, v[i], p, b);
}

ExperimentSpec parse_experiment_spec(std::istream &is)
{
    ExperimentSpec spec;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line))
    {
        ++lineno;
        const auto hash = line.find('#');
        const std::string t = text::trim(line.substr(0, hash));
        if (t.empty())
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw FormatError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = text::trim(t.substr(0, eq));
        const std::string val = text::trim(t.substr(eq + 1));
        if (val.empty())
            throw FormatError("line " + std::to_string(lineno) + ": empty value for " + key);
        try
        {
            auto &p = spec.params;
            if (key.rfind("grid.", 0) == 0)
            {
                GridAxis a{key.substr(5), {}};
                if (!kAxes.count(a.name))
                    throw DomainError("unknown grid axis '" + a.name + "'");
                for (const auto &item : text::split(val, ','))
                    a.values.push_back(parse_axis_value(a.name, item));
                spec.grid.push_back(std::move(a));
            }
            else if (key == "kind")
                spec.kind = experiment_kind_from_string(val);
            else if (key == "name")
                spec.name = val;
            else if (key == "schemes")
            {
                spec.schemes.clear();
                for (const auto &item : text::split(val, ','))
                    spec.schemes.push_back(scheme_from_string(text::trim(item)));
            }
            else if (key == "n_seeds")
                spec.n_seeds = parse_int(val);
            else if (key == "first_seed")
                spec.first_seed = static_cast<std::uint64_t>(parse_int(val));
            else if (key == "validation_samples")
                spec.validation_samples = parse_int(val);
            else if (key == "output")
                spec.output = val;
            else if (key == "P_T")
                spec.budget.P_T = parse_power(val);
            else if (key == "P_J")
                spec.budget.P_J = parse_power(val);
            else if (key == "Rbar_s")
                spec.budget.Rbar_s = text::parse_double(val);
            else if (key == "tau")
                spec.budget.tau = text::parse_double(val);
            else if (key == "eps_s")
                p.radii.eps_cr = p.radii.eps_cr_j = text::parse_double(val);
            else if (key == "eps_e")
                p.radii.theta_er = p.radii.theta_er_j = text::parse_double(val);
            else if (key == "radius_scaling")
            {
                if (val == "path_loss")
                    p.radii.scaling = RadiusScaling::path_loss;
                else if (val == "absolute")
                    p.radii.scaling = RadiusScaling::absolute;
                else
                    throw FormatError("radius_scaling must be path_loss or absolute");
            }
            else if (key == "K")
                p.dims.K = parse_int(val);
            else if (key == "L")
                p.dims.L = parse_int(val);
            else if (key == "N_T")
                p.dims.n_t = parse_int(val);
            else if (key == "N_J")
                p.dims.n_j = parse_int(val);
            else if (key == "N_E")
                p.dims.n_e = parse_int(val);
            else if (key == "d_cr")
                p.d_cr = parse_distance(val);
            else if (key == "f_cr")
                p.f_cr = parse_distance(val);
            else if (key == "d_er")
                p.d_er = parse_distance(val);
            else if (key == "f_er")
                p.f_er = parse_distance(val);
            else if (key == "f_c")
                p.f_c = parse_frequency(val);
            else if (key == "kappa")
                p.kappa = text::parse_double(val);
            else if (key == "sigma2_cr")
                p.sigma2_cr_w = parse_power(val);
            else if (key == "delta2_cr")
                p.delta2_cr_w = parse_power(val);
            else if (key == "sigma2_er")
                p.sigma2_er_w = parse_power(val);
            else if (key == "eta")
                p.eta = text::parse_double(val);
            else if (key == "max_outer_iters")
                spec.spca.max_outer_iters = parse_int(val);
            else if (key == "rel_obj_tol")
                spec.spca.rel_obj_tol = text::parse_double(val);
            else if (key == "init_strategy")
                spec.spca.init_strategy = init_strategy_from_string(val);
            else if (key == "paper_literal_signs")
                spec.spca.paper_literal_signs = parse_bool(val);
            else if (key == "an_fraction")
                spec.spca.an_fraction = text::parse_double(val);
            else if (key == "damping")
                spec.spca.damping = text::parse_double(val);
            else
                throw FormatError("unknown key '" + key + "'");
        }
        catch (const std::runtime_error &e)
        {
            throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    spec.validate();
    return spec;
}

ExperimentSpec load_experiment_spec(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw FormatError("cannot open spec file '" + path + "'");
    return parse_experiment_spec(f);
}

int ResultTable::failures() const
{
    return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const ResultRow &r) { return !r.ok; }));
}

int default_thread_count()
{
    if (const char *env = std::getenv("SWIPT_THREADS"))
    {
        char *end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n >= 1)
            return static_cast<int>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

ResultTable run_experiment(const ExperimentSpec &spec, int threads)
{
    spec.validate();
    struct Cell
    {
        std::size_t point;
        SchemeTag scheme;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (std::size_t p = 0; p < spec.n_points(); ++p)
        for (SchemeTag s : spec.schemes)
            for (int i = 0; i < spec.n_seeds; ++i)
                cells.push_back({p, s, spec.first_seed + static_cast<std::uint64_t>(i)});

    const bool want_trace = spec.kind == ExperimentKind::convergence_trace;
    std::vector<ResultRow> rows(cells.size());
    std::vector<std::vector<IterationRecord>> traces(want_trace ? cells.size() : 0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++)
        {
            const Cell &c = cells[i];
            rows[i] = run_cell(spec, spec.point(c.point), c.point, c.scheme, c.seed,
                               want_trace ? &traces[i] : nullptr);
        }
    };
    const int n = std::max(1, std::min<int>(threads > 0 ? threads : default_thread_count(),
                                             static_cast<int>(cells.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto &t : pool)
        t.join();

    ResultTable table;
    for (const auto &a : spec.grid)
        table.axes.push_back(a.name);
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (want_trace)
            for (const auto &rec : traces[i])
                table.traces.push_back({rows[i].point, rows[i].scheme, rows[i].seed, rec});
    table.rows = std::move(rows);
    std::stable_sort(table.rows.begin(), table.rows.end(), [](const ResultRow &a, const ResultRow &b) {
        return row_key(a.point, a.scheme, a.seed) < row_key(b.point, b.scheme, b.seed);
    });
    std::stable_sort(table.traces.begin(), table.traces.end(), [](const TraceRow &a, const TraceRow &b) {
        return std::make_tuple(a.point, static_cast<int>(a.scheme), a.seed, a.record.iteration) <
               std::make_tuple(b.point, static_cast<int>(b.scheme), b.seed, b.record.iteration);
    });
    return table;
}

std::vector<std::string> result_columns(const std::vector<std::string> &axes)
{
    std::vector<std::string> cols;
    for (const auto &a : axes)
        cols.push_back(axis_column(a));
    for (const char *c : {"scheme", "seed", "status", "ok", "objective_w", "objective_dbm", "Es_w", "Ee_w",
                          "nominal_harvest_w", "nominal_harvest_dbm", "iterations", "iterations_to_1e-3",
                          "max_drop", "max_residual", "min_secrecy", "secrecy_ok", "harvest_ok", "psd_ok"})
        cols.emplace_back(c);
    return cols;
}

void write_results_csv(std::ostream &os, const ResultTable &t, const std::string &stamp)
{
    os << "# swipt-results v1 " << stamp << '\n';
    const auto cols = result_columns(t.axes);
    for (std::size_t i = 0; i < cols.size(); ++i)
        os << (i ? "," : "") << cols[i];
    os << '\n';
    for (const auto &r : t.rows)
    {
        for (std::size_t i = 0; i < t.axes.size(); ++i)
            os << (is_power_axis(t.axes[i]) ? fmt_dbm(r.point[i]) : fmt(r.point[i])) << ',';
        os << to_string(r.scheme) << ',' << r.seed << ',' << r.status << ',' << int(r.ok) << ','
           << fmt(r.objective_w) << ',' << fmt_dbm(r.objective_w) << ',' << fmt(r.Es_w) << ','
           << fmt(r.Ee_w) << ',' << fmt(r.nominal_harvest_w) << ',' << fmt_dbm(r.nominal_harvest_w)
           << ',' << r.iterations << ',' << r.iterations_to_1e3 << ',' << fmt(r.max_drop) << ','
           << fmt(r.max_residual) << ',' << fmt(r.min_secrecy) << ',' << int(r.secrecy_ok) << ','
           << int(r.harvest_ok) << ',' << int(r.psd_ok) << '\n';
    }
}

void write_timing_csv(std::ostream &os, const ResultTable &t)
{
    for (const auto &a : t.axes)
        os << axis_column(a) << ',';
    os << "scheme,seed,runtime_s\n";
    for (const auto &r : t.rows)
    {
        for (std::size_t i = 0; i < t.axes.size(); ++i)
            os << (is_power_axis(t.axes[i]) ? fmt_dbm(r.point[i]) : fmt(r.point[i])) << ',';
        os << to_string(r.scheme) << ',' << r.seed << ',' << fmt(r.runtime_s) << '\n';
    }
}

void write_trace_csv(std::ostream &os, const ResultTable &t)
{
    for (const auto &a : t.axes)
        os << axis_column(a) << ',';
    os << "scheme,seed,iteration,objective_w,objective_dbm,Es_w,Ee_w,residual,status\n";
    for (const auto &tr : t.traces)
    {
        for (std::size_t i = 0; i < t.axes.size(); ++i)
            os << (is_power_axis(t.axes[i]) ? fmt_dbm(tr.point[i]) : fmt(tr.point[i])) << ',';
        const auto &r = tr.record;
        os << to_string(tr.scheme) << ',' << tr.seed << ',' << r.iteration << ',' << fmt(r.objective)
           << ',' << fmt_dbm(r.objective) << ',' << fmt(r.Es) << ',' << fmt(r.Ee) << ','
           << fmt(r.residual) << ',' << to_string(r.status) << '\n';
    }
}

void write_result_files(const std::string &path, const ResultTable &t)
{
    const std::time_t now = std::time(nullptr);
    char stamp[64];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    auto open = [](const std::string &p) {
        std::ofstream f(p);
        if (!f)
            throw std::runtime_error("cannot write '" + p + "'");
        return f;
    };
    {
        auto f = open(path);
        write_results_csv(f, t, stamp);
    }
    {
        auto f = open(path + ".timing.csv");
        write_timing_csv(f, t);
    }
    if (!t.traces.empty())
    {
        auto f = open(path + ".trace.csv");
        write_trace_csv(f, t);
    }
}

ResultTable read_results_csv(std::istream &is)
{
    std::string line;
    while (std::getline(is, line) && (text::trim(line).empty() || line[0] == '#'))
    {
    }
    if (text::trim(line).empty())
        throw FormatError("results file has no header");
    const auto header = text::split(text::trim(line), ',');
    const auto it = std::find(header.begin(), header.end(), "scheme");
    if (it == header.end())
        throw FormatError("results header lacks a scheme column");
    ResultTable t;
    for (auto h = header.begin(); h != it; ++h)
    {
        std::string a = *h;
        if (a.size() > 4 && a.substr(a.size() - 4) == "_dbm")
            a = a.substr(0, a.size() - 4);
        if (!kAxes.count(a))
            throw FormatError("unknown axis column '" + *h + "'");
        t.axes.push_back(a);
    }
    if (header != result_columns(t.axes))
        throw FormatError("unexpected results columns");
    const std::size_t na = t.axes.size();
    while (std::getline(is, line))
    {
        const std::string s = text::trim(line);
        if (s.empty() || s[0] == '#')
            continue;
        const auto f = text::split(s, ',');
        if (f.size() != header.size())
            throw FormatError("row has " + std::to_string(f.size()) + " fields, expected " +
                              std::to_string(header.size()));
        ResultRow r;
        for (std::size_t i = 0; i < na; ++i)
        {
            const double v = parse_csv_double(f[i]);
            r.point.push_back(is_power_axis(t.axes[i]) ? dbm_to_watts(v) : v);
        }
        std::size_t i = na;
        r.scheme = scheme_from_string(f[i++]);
        r.seed = static_cast<std::uint64_t>(std::stoull(f[i++]));
        r.status = f[i++];
        r.ok = f[i++] == "1";
        r.objective_w = parse_csv_double(f[i++]);
        ++i; // objective_dbm
        r.Es_w = parse_csv_double(f[i++]);
        r.Ee_w = parse_csv_double(f[i++]);
        r.nominal_harvest_w = parse_csv_double(f[i++]);
        ++i; // nominal_harvest_dbm
        r.iterations = std::stoi(f[i++]);
        r.iterations_to_1e3 = std::stoi(f[i++]);
        r.max_drop = parse_csv_double(f[i++]);
        r.max_residual = parse_csv_double(f[i++]);
        r.min_secrecy = parse_csv_double(f[i++]);
        r.secrecy_ok = f[i++] == "1";
        r.harvest_ok = f[i++] == "1";
        r.psd_ok = f[i++] == "1";
        t.rows.push_back(std::move(r));
    }
    return t;
}

const SummaryCell *Summary::find(const std::vector<double> &point, SchemeTag s) const
{
    for (const auto &c : cells)
        if (c.scheme == s && c.point == point)
            return &c;
    return nullptr;
}

Summary summarize(const ResultTable &t)
{
    if (t.rows.empty())
        throw DomainError("cannot summarize an empty result table");
    Summary s;
    s.axes = t.axes;

    std::map<std::pair<std::vector<double>, int>, std::vector<const ResultRow *>> groups;
    for (const auto &r : t.rows)
        groups[{r.point, static_cast<int>(r.scheme)}].push_back(&r);
    for (const auto &[key, rows] : groups)
    {
        SummaryCell c;
        c.point = key.first;
        c.scheme = static_cast<SchemeTag>(key.second);
        std::vector<double> obj, its;
        for (const ResultRow *r : rows)
        {
            ++c.n;
            c.n_ok += r->ok;
            obj.push_back(r->ok ? r->objective_w : 0.0);
            if (r->ok)
                its.push_back(r->iterations_to_1e3);
        }
        c.median_w = median(obj);
        c.median_dbm = to_dbm_or_inf(c.median_w);
        c.median_iterations = median(its);
        s.cells.push_back(c);
    }

    for (const auto &c : s.cells)
    {
        if (c.scheme == SchemeTag::proposed)
            continue;
        const SummaryCell *p = s.find(c.point, SchemeTag::proposed);
        if (!p)
            continue;
        double gap = p->median_dbm - c.median_dbm;
        if (std::isnan(gap)) // both -inf
            gap = 0.0;
        s.gaps.push_back({c.point, c.scheme, gap});
    }

    for (std::size_t ai = 0; ai < t.axes.size(); ++ai)
    {
        const std::string &axis = t.axes[ai];
        const int dir = axis == "Rbar_s" ? -1 : (axis == "P_J" || axis == "P_T") ? 1 : 0;
        if (dir == 0)
            continue;
        // cells along the axis with all other coordinates fixed
        std::map<std::pair<std::vector<double>, int>, std::vector<const SummaryCell *>> lines;
        for (const auto &c : s.cells)
        {
            // NaN would break map ordering, so the swept coordinate is zeroed
            std::vector<double> key = c.point;
            key[ai] = 0.0;
            lines[{key, static_cast<int>(c.scheme)}].push_back(&c);
        }
        for (auto &[key, line] : lines)
        {
            std::sort(line.begin(), line.end(),
                      [ai](const SummaryCell *a, const SummaryCell *b) { return a->point[ai] < b->point[ai]; });
            bool holds = true;
            for (std::size_t i = 1; i < line.size(); ++i)
            {
                const double prev = line[i - 1]->median_w, cur = line[i]->median_w;
                if (dir < 0 ? cur > prev : cur < prev)
                    holds = false;
            }
            MonotoneFlag f;
            f.scheme = static_cast<SchemeTag>(key.second);
            f.axis = axis;
            f.fixed = key.first;
            f.fixed[ai] = std::numeric_limits<double>::quiet_NaN();
            f.holds = holds;
            s.monotone.push_back(f);
        }
    }
    return s;
}

namespace
{

std::string point_label(const std::vector<std::string> &axes, const std::vector<double> &p)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < axes.size(); ++i)
    {
        if (i)
            os << ' ';
        if (std::isnan(p[i]))
            os << axes[i] << "=*";
        else if (is_power_axis(axes[i]))
            os << axes[i] << '=' << watts_to_dbm(p[i]) << "dBm";
        else
            os << axes[i] << '=' << p[i];
    }
    return axes.empty() ? std::string("(single point)") : os.str();
}

} // namespace

void write_summary(std::ostream &os, const Summary &s)
{
    char buf[256];
    os << "medians (failed runs count as 0 W)\n";
    for (const auto &c : s.cells)
    {
        std::snprintf(buf, sizeof buf, "  %-28s %-12s n=%-3d ok=%-3d median=%9.3f dBm  iters=%.1f\n",
                      point_label(s.axes, c.point).c_str(), to_string(c.scheme), c.n, c.n_ok, c.median_dbm,
                      c.median_iterations);
        os << buf;
    }
    if (!s.gaps.empty())
    {
        os << "gaps, proposed minus scheme\n";
        for (const auto &g : s.gaps)
        {
            std::snprintf(buf, sizeof buf, "  %-28s %-12s %8.3f dB\n", point_label(s.axes, g.point).c_str(),
                          to_string(g.other), g.gap_db);
            os << buf;
        }
    }
    if (!s.monotone.empty())
    {
        os << "monotonicity\n";
        for (const auto &m : s.monotone)
        {
            std::snprintf(buf, sizeof buf, "  %-12s %-7s %-28s %s %s\n", to_string(m.scheme), m.axis.c_str(),
                          point_label(s.axes, m.fixed).c_str(),
                          m.axis == "Rbar_s" ? "non-increasing" : "non-decreasing", m.holds ? "yes" : "NO");
            os << buf;
        }
    }
}

void write_solution(std::ostream &os, const BeamformingSolution &sol, const PowerBudget &budget)
{
    auto cvec = [&os](const char *name, const CVec &v) {
        os << name << ' ' << v.size();
        for (Eigen::Index i = 0; i < v.size(); ++i)
            os << ' ' << fmt(v[i].real()) << ' ' << fmt(v[i].imag());
        os << '\n';
    };
    os << "swipt-solution 1\n";
    os << "budget " << fmt(budget.P_T) << ' ' << fmt(budget.P_J) << ' ' << fmt(budget.Rbar_s) << ' '
       << fmt(budget.tau) << '\n';
    os << "slacks " << fmt(sol.Ebar_s) << ' ' << fmt(sol.Ebar_e) << ' ' << fmt(sol.r1) << ' ' << fmt(sol.r2)
       << '\n';
    os << "rho " << sol.rho.size();
    for (double r : sol.rho)
        os << ' ' << fmt(r);
    os << '\n';
    for (const auto &w : sol.w)
        cvec("w", w);
    cvec("z", sol.z);
    cvec("q", sol.q);
    os << "end\n";
}

BeamformingSolution read_solution(std::istream &is, PowerBudget &budget)
{
    std::string line;
    if (!std::getline(is, line) || text::trim(line) != "swipt-solution 1")
        throw FormatError("not a solution file (missing 'swipt-solution 1' header)");
    BeamformingSolution sol;
    bool seen_end = false, seen_budget = false, seen_z = false, seen_q = false;
    auto cvec = [](const std::vector<std::string> &f) {
        const int n = parse_int(f.at(1));
        if (n < 0 || f.size() != static_cast<std::size_t>(2 + 2 * n))
            throw FormatError("bad vector line for " + f[0]);
        CVec v(n);
        for (int i = 0; i < n; ++i)
            v[i] = cplx(text::parse_double(f[2 + 2 * i]), text::parse_double(f[3 + 2 * i]));
        return v;
    };
    while (std::getline(is, line))
    {
        const auto f = text::split_ws(text::trim(line));
        if (f.empty())
            continue;
        if (f[0] == "end")
        {
            seen_end = true;
            break;
        }
        if (f[0] == "budget" && f.size() == 5)
        {
            budget.P_T = text::parse_double(f[1]);
            budget.P_J = text::parse_double(f[2]);
            budget.Rbar_s = text::parse_double(f[3]);
            budget.tau = text::parse_double(f[4]);
            seen_budget = true;
        }
        else if (f[0] == "slacks" && f.size() == 5)
        {
            sol.Ebar_s = text::parse_double(f[1]);
            sol.Ebar_e = text::parse_double(f[2]);
            sol.r1 = text::parse_double(f[3]);
            sol.r2 = text::parse_double(f[4]);
        }
        else if (f[0] == "rho" && f.size() >= 2)
        {
            const int n = parse_int(f[1]);
            if (f.size() != static_cast<std::size_t>(2 + n))
                throw FormatError("bad rho line");
            for (int i = 0; i < n; ++i)
                sol.rho.push_back(text::parse_double(f[2 + i]));
        }
        else if (f[0] == "w" && f.size() >= 2)
            sol.w.push_back(cvec(f));
        else if (f[0] == "z" && f.size() >= 2)
            sol.z = cvec(f), seen_z = true;
        else if (f[0] == "q" && f.size() >= 2)
            sol.q = cvec(f), seen_q = true;
        else
            throw FormatError("unexpected line in solution file: " + line);
    }
    if (!seen_end || !seen_budget || !seen_z || !seen_q || sol.w.empty())
        throw FormatError("truncated solution file");
    return sol;
}

} // namespace swipt
