#include "swipt/conic.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "text_util.hpp"

namespace swipt
{

void ConicProblem::validate() const
{
    if (n_vars < 0 || objective.size() != n_vars)
        throw DomainError("conic problem: objective length must equal n_vars");
    for (const auto &s : socs)
    {
        if (s.A.cols() != n_vars || s.c.size() != n_vars || s.b.size() != s.A.rows())
            throw DomainError("conic problem: inconsistent cone '" + s.label + "'");
    }
    for (const auto &r : nonneg)
        if (r.a.size() != n_vars)
            throw DomainError("conic problem: inconsistent row '" + r.label + "'");

    std::vector<const VarBlock *> blocks;
    for (const auto &v : var_index)
        blocks.push_back(&v);
    std::sort(blocks.begin(), blocks.end(),
              [](const VarBlock *a, const VarBlock *b) { return a->offset < b->offset; });
    int next = 0;
    for (const auto *v : blocks)
    {
        if (v->offset != next || v->size <= 0)
            throw DomainError("conic problem: var_index does not partition the variables at '" +
                              v->name + "'");
        next += v->size;
    }
    if (next != n_vars)
        throw DomainError("conic problem: var_index does not cover every variable");
}

const VarBlock *ConicProblem::find(const std::string &name) const
{
    for (const auto &v : var_index)
        if (v.name == name)
            return &v;
    return nullptr;
}

const VarBlock &ConicProblem::block(const std::string &name) const
{
    const VarBlock *v = find(name);
    if (!v)
        throw DomainError("conic problem: no variable block '" + name + "'");
    return *v;
}

int ConicProblem::add_block(const std::string &name, int size, double unit)
{
    if (find(name))
        throw DomainError("conic problem: duplicate block '" + name + "'");
    var_index.push_back({name, n_vars, size, unit});
    n_vars += size;
    return n_vars - size;
}

ResidualReport check_solution(const ConicProblem &p, const RVec &x)
{
    if (x.size() != p.n_vars)
        throw DomainError("check_solution: length mismatch");
    ResidualReport rep;
    auto push = [&rep](const std::string &label, double r) {
        rep.entries.push_back({label, r});
        if (rep.entries.size() == 1 || r > rep.max_residual)
        {
            rep.max_residual = r;
            rep.worst_label = label;
        }
    };
    for (const auto &s : p.socs)
        push(s.label, (s.A * x + s.b).norm() - (s.c.dot(x) + s.d));
    for (const auto &r : p.nonneg)
        push(r.label, -(r.a.dot(x) + r.b));
    return rep;
}

namespace
{

void write_row(std::ostream &os, const RVec &v)
{
    for (int i = 0; i < v.size(); ++i)
        os << (i ? " " : "") << text::format_double(v(i));
    os << '\n';
}

std::string next_line(std::istream &is)
{
    std::string line;
    while (std::getline(is, line))
    {
        line = text::trim(line);
        if (!line.empty() && line[0] != '#')
            return line;
    }
    throw FormatError("conic dump: unexpected end of input");
}

RVec read_row(std::istream &is, int n)
{
    const auto tok = text::split_ws(next_line(is));
    if (static_cast<int>(tok.size()) != n)
        throw FormatError("conic dump: expected " + std::to_string(n) + " numbers, got " +
                          std::to_string(tok.size()));
    RVec v(n);
    for (int i = 0; i < n; ++i)
        v(i) = text::parse_double(tok[i]);
    return v;
}

std::vector<std::string> expect(std::istream &is, const std::string &key, std::size_t n_tok)
{
    auto tok = text::split_ws(next_line(is));
    if (tok.empty() || tok[0] != key || tok.size() != n_tok)
        throw FormatError("conic dump: expected '" + key + "' line");
    return tok;
}

int to_int(const std::string &s)
{
    std::size_t pos = 0;
    int v = 0;
    try
    {
        v = std::stoi(s, &pos);
    }
    catch (const std::exception &)
    {
        throw FormatError("conic dump: not an integer: '" + s + "'");
    }
    if (pos != s.size())
        throw FormatError("conic dump: not an integer: '" + s + "'");
    return v;
}

} // namespace

void write_conic_problem(std::ostream &os, const ConicProblem &p)
{
    os << "swipt-socp 1\n";
    os << "n_vars " << p.n_vars << '\n';
    os << "blocks " << p.var_index.size() << '\n';
    for (const auto &v : p.var_index)
        os << "var " << v.name << ' ' << v.offset << ' ' << v.size << ' '
           << text::format_double(v.unit) << '\n';
    os << "objective\n";
    write_row(os, p.objective);
    os << "nonneg " << p.nonneg.size() << '\n';
    for (const auto &r : p.nonneg)
    {
        os << "row " << (r.label.empty() ? "-" : r.label) << '\n';
        os << text::format_double(r.b) << '\n';
        write_row(os, r.a);
    }
    os << "soc " << p.socs.size() << '\n';
    for (const auto &s : p.socs)
    {
        os << "cone " << (s.label.empty() ? "-" : s.label) << ' ' << s.A.rows() << '\n';
        os << text::format_double(s.d) << '\n';
        write_row(os, s.c);
        for (int i = 0; i < s.A.rows(); ++i)
        {
            os << text::format_double(s.b(i)) << '\n';
            write_row(os, s.A.row(i).transpose());
        }
    }
    os << "end\n";
}

ConicProblem read_conic_problem(std::istream &is)
{
    if (next_line(is) != "swipt-socp 1")
        throw FormatError("conic dump: bad header");
    ConicProblem p;
    const int n = to_int(expect(is, "n_vars", 2)[1]);
    if (n < 0)
        throw FormatError("conic dump: negative n_vars");
    const int nb = to_int(expect(is, "blocks", 2)[1]);
    for (int i = 0; i < nb; ++i)
    {
        const auto t = expect(is, "var", 5);
        p.var_index.push_back({t[1], to_int(t[2]), to_int(t[3]), text::parse_double(t[4])});
    }
    p.n_vars = n;
    expect(is, "objective", 1);
    p.objective = read_row(is, n);
    const int nr = to_int(expect(is, "nonneg", 2)[1]);
    for (int i = 0; i < nr; ++i)
    {
        LinearRow r;
        r.label = expect(is, "row", 2)[1];
        r.b = text::parse_double(next_line(is));
        r.a = read_row(is, n);
        p.nonneg.push_back(std::move(r));
    }
    const int nc = to_int(expect(is, "soc", 2)[1]);
    for (int i = 0; i < nc; ++i)
    {
        const auto t = expect(is, "cone", 3);
        SocBlock s;
        s.label = t[1];
        const int rows = to_int(t[2]);
        if (rows < 0)
            throw FormatError("conic dump: negative cone size");
        s.d = text::parse_double(next_line(is));
        s.c = read_row(is, n);
        s.A.resize(rows, n);
        s.b.resize(rows);
        for (int r = 0; r < rows; ++r)
        {
            s.b(r) = text::parse_double(next_line(is));
            s.A.row(r) = read_row(is, n).transpose();
        }
        p.socs.push_back(std::move(s));
    }
    if (next_line(is) != "end")
        throw FormatError("conic dump: missing end marker");
    try
    {
        p.validate();
    }
    catch (const DomainError &e)
    {
        throw FormatError(e.what());
    }
    return p;
}

} // namespace swipt
