#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "hq/types.hpp"

namespace hq {

/// Uniform tensor-product grid on a box, at least 5 nodes per axis. Axis 0
/// varies fastest in the flat node ordering.
class RectGrid {
public:
    RectGrid(Eigen::VectorXd lo, Eigen::VectorXd hi, std::vector<int> dims);

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] long node_count() const { return count_; }
    [[nodiscard]] const std::vector<int>& dims() const { return dims_; }
    [[nodiscard]] const Eigen::VectorXd& lo() const { return lo_; }
    [[nodiscard]] const Eigen::VectorXd& hi() const { return hi_; }
    [[nodiscard]] const Eigen::VectorXd& spacing() const { return h_; }

    [[nodiscard]] long flat(const std::vector<int>& idx) const;
    [[nodiscard]] std::vector<int> unflat(long node) const;
    [[nodiscard]] Eigen::VectorXd coords(const std::vector<int>& idx) const;

    /// -1 on the low face of the axis, +1 on the high face, 0 otherwise.
    [[nodiscard]] int side(const std::vector<int>& idx, int axis) const;
    [[nodiscard]] bool is_boundary(const std::vector<int>& idx) const;

    /// Unit outward normal; faces give the axis normal, edges and corners the
    /// normalized average of the adjoining face normals. Boundary nodes only.
    [[nodiscard]] Eigen::VectorXd outward_normal(const std::vector<int>& idx) const;

private:
    int n_;
    long count_;
    std::vector<int> dims_;
    std::vector<long> stride_;
    Eigen::VectorXd lo_, hi_, h_;
};

/// Scalar grid function: one value per node of the referenced grid.
struct Field {
    Field(std::shared_ptr<const RectGrid> g, Eigen::VectorXd v);

    std::shared_ptr<const RectGrid> grid;
    Eigen::VectorXd values;
};

/// One term of a difference stencil in flat node space.
struct StencilEntry {
    long node;
    double weight;
};

/// Second-order first derivative along an axis: central inside, one-sided
/// 3-point on the axis faces.
[[nodiscard]] std::vector<StencilEntry> first_diff_stencil(
    const RectGrid& grid, const std::vector<int>& idx, int axis);

/// Second-order second derivative. a == b: 3-point central or one-sided
/// 4-point on the faces of the axis. a != b: tensor product of the two
/// first-derivative stencils.
[[nodiscard]] std::vector<StencilEntry> second_diff_stencil(
    const RectGrid& grid, const std::vector<int>& idx, int a, int b);

[[nodiscard]] double apply_stencil(const std::vector<StencilEntry>& stencil,
                                   const Eigen::VectorXd& values);

/// Discrete Hessian at a node; one-sided stencils take over along any axis
/// on whose face the node lies.
[[nodiscard]] SymMatrix hessian_at(const Field& field, long node);

/// Discrete gradient at a node, second order everywhere.
[[nodiscard]] Eigen::VectorXd gradient_at(const Field& field, long node);

}  // namespace hq
