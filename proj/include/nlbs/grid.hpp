#pragma once

#include <cstddef>
#include <string_view>

#include <Eigen/Core>

namespace nlbs {

enum class GridKind { uniform, graded };

GridKind parse_grid_kind(std::string_view name);
std::string_view to_string(GridKind kind);

/// Strictly increasing nodes 0 = x_0 < ... < x_N = b.
struct Grid {
    Eigen::VectorXd x;
    GridKind kind = GridKind::uniform;

    Eigen::Index size() const noexcept { return x.size(); }
    Eigen::Index last() const noexcept { return x.size() - 1; }
    double b() const noexcept { return x[x.size() - 1]; }
};

Grid make_uniform_grid(double b, std::size_t nx);

/// Nodes clustered around K: uniform fine spacing over [K - 2 eps, K + 2 eps],
/// then spacings growing geometrically by `ratio` up to a cap. K itself is a
/// node and at least 20% of the nodes fall inside the core band. Throws
/// ValidationError when no cap achieves the clustering for the node count.
Grid make_graded_grid(double b, double K, double eps, std::size_t nx, double ratio);

/// Fraction of nodes inside [lo, hi].
double node_fraction_in(const Grid& grid, double lo, double hi);

/// Piecewise-linear interpolation of nodal values onto other abscissae
/// (which must lie inside the grid).
Eigen::VectorXd restrict_to(const Grid& from, const Eigen::VectorXd& values,
                            const Eigen::VectorXd& to);

}  // namespace nlbs
