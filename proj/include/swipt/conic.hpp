#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "swipt/types.hpp"

namespace swipt
{

/// Named coordinate range of the lifted real variable vector.
///
/// `unit` converts a coordinate to its physical value (physical = unit * x).
struct VarBlock
{
    std::string name;
    int offset = 0;
    int size = 0;
    double unit = 1.0;
};

/// ||A x + b|| <= c^T x + d
struct SocBlock
{
    RMat A;
    RVec b;
    RVec c;
    double d = 0.0;
    std::string label;
};

/// a^T x + b >= 0
struct LinearRow
{
    RVec a;
    double b = 0.0;
    std::string label;
};

/// Real SOCP in "maximize objective^T x" form.
struct ConicProblem
{
    int n_vars = 0;
    RVec objective;
    std::vector<SocBlock> socs;
    std::vector<LinearRow> nonneg;
    std::vector<VarBlock> var_index;

    /// Throws DomainError on inconsistent dimensions or a var_index that
    /// does not partition [0, n_vars).
    void validate() const;
    const VarBlock *find(const std::string &name) const;
    const VarBlock &block(const std::string &name) const;
    bool has(const std::string &name) const { return find(name) != nullptr; }
    int add_block(const std::string &name, int size, double unit = 1.0);
};

struct ResidualEntry
{
    std::string label;
    double residual = 0.0; ///< > 0 means violated
};

struct ResidualReport
{
    std::vector<ResidualEntry> entries;
    double max_residual = 0.0; ///< 0 for an empty problem
    std::string worst_label;
};

/// Signed residuals: ||Ax+b|| - (c^T x + d) per cone and -(a^T x + b) per row.
ResidualReport check_solution(const ConicProblem &p, const RVec &x);

/// Plain-text standard form; see README for the layout.
void write_conic_problem(std::ostream &os, const ConicProblem &p);
ConicProblem read_conic_problem(std::istream &is);

} // namespace swipt
