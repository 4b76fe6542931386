#include "hq/grid.hpp"

#include <string>
#include <utility>

namespace hq {

RectGrid::RectGrid(Eigen::VectorXd lo, Eigen::VectorXd hi, std::vector<int> dims)
    : n_(static_cast<int>(dims.size())),
      dims_(std::move(dims)),
      lo_(std::move(lo)),
      hi_(std::move(hi)) {
    if (n_ < 1 || lo_.size() != n_ || hi_.size() != n_)
        throw InvalidInputError("RectGrid: extent/dims size mismatch");
    if (!lo_.allFinite() || !hi_.allFinite())
        throw InvalidInputError("RectGrid: non-finite extents");
    h_.resize(n_);
    stride_.resize(static_cast<std::size_t>(n_));
    count_ = 1;
    for (int a = 0; a < n_; ++a) {
        if (dims_[static_cast<std::size_t>(a)] < 5)
            throw InvalidInputError("RectGrid: need at least 5 nodes per axis");
        if (!(hi_[a] > lo_[a]))
            throw InvalidInputError("RectGrid: require lo < hi per axis");
        stride_[static_cast<std::size_t>(a)] = count_;
        count_ *= dims_[static_cast<std::size_t>(a)];
        h_[a] = (hi_[a] - lo_[a]) / (dims_[static_cast<std::size_t>(a)] - 1);
    }
}

long RectGrid::flat(const std::vector<int>& idx) const {
    if (static_cast<int>(idx.size()) != n_)
        throw InvalidInputError("RectGrid: index size mismatch");
    long f = 0;
    for (int a = 0; a < n_; ++a) {
        const int i = idx[static_cast<std::size_t>(a)];
        if (i < 0 || i >= dims_[static_cast<std::size_t>(a)])
            throw InvalidInputError("RectGrid: index out of range on axis " +
                                    std::to_string(a));
        f += stride_[static_cast<std::size_t>(a)] * i;
    }
    return f;
}

std::vector<int> RectGrid::unflat(long node) const {
    if (node < 0 || node >= count_)
        throw InvalidInputError("RectGrid: node out of range");
    std::vector<int> idx(static_cast<std::size_t>(n_));
    for (int a = 0; a < n_; ++a) {
        idx[static_cast<std::size_t>(a)] =
            static_cast<int>(node % dims_[static_cast<std::size_t>(a)]);
        node /= dims_[static_cast<std::size_t>(a)];
    }
    return idx;
}

Eigen::VectorXd RectGrid::coords(const std::vector<int>& idx) const {
    (void)flat(idx);  // range check
    Eigen::VectorXd x(n_);
    for (int a = 0; a < n_; ++a) x[a] = lo_[a] + h_[a] * idx[static_cast<std::size_t>(a)];
    return x;
}

int RectGrid::side(const std::vector<int>& idx, int axis) const {
    const int i = idx[static_cast<std::size_t>(axis)];
    if (i == 0) return -1;
    if (i == dims_[static_cast<std::size_t>(axis)] - 1) return 1;
    return 0;
}

bool RectGrid::is_boundary(const std::vector<int>& idx) const {
    for (int a = 0; a < n_; ++a)
        if (side(idx, a) != 0) return true;
    return false;
}

Eigen::VectorXd RectGrid::outward_normal(const std::vector<int>& idx) const {
    Eigen::VectorXd nu = Eigen::VectorXd::Zero(n_);
    for (int a = 0; a < n_; ++a) nu[a] = side(idx, a);
    const double len = nu.norm();
    if (len == 0.0)
        throw InvalidInputError("outward_normal: node is not on the boundary");
    return nu / len;
}

Field::Field(std::shared_ptr<const RectGrid> g, Eigen::VectorXd v)
    : grid(std::move(g)), values(std::move(v)) {
    if (!grid) throw InvalidInputError("Field: null grid");
    if (values.size() != grid->node_count())
        throw InvalidInputError("Field: value count does not match grid");
}

namespace {

struct AxTerm {
    int off;
    double w;
};

std::vector<AxTerm> d1_terms(int side, double h) {
    if (side < 0) return {{0, -1.5 / h}, {1, 2.0 / h}, {2, -0.5 / h}};
    if (side > 0) return {{0, 1.5 / h}, {-1, -2.0 / h}, {-2, 0.5 / h}};
    return {{-1, -0.5 / h}, {1, 0.5 / h}};
}

std::vector<AxTerm> d2_terms(int side, double h) {
    const double h2 = h * h;
    if (side < 0) return {{0, 2.0 / h2}, {1, -5.0 / h2}, {2, 4.0 / h2}, {3, -1.0 / h2}};
    if (side > 0) return {{0, 2.0 / h2}, {-1, -5.0 / h2}, {-2, 4.0 / h2}, {-3, -1.0 / h2}};
    return {{-1, 1.0 / h2}, {0, -2.0 / h2}, {1, 1.0 / h2}};
}

long shifted_flat(const RectGrid& grid, const std::vector<int>& idx, int axis,
                  int off) {
    std::vector<int> moved = idx;
    moved[static_cast<std::size_t>(axis)] += off;
    return grid.flat(moved);
}

}  // namespace

std::vector<StencilEntry> first_diff_stencil(const RectGrid& grid,
                                             const std::vector<int>& idx, int axis) {
    if (axis < 0 || axis >= grid.n())
        throw InvalidInputError("first_diff_stencil: axis out of range");
    std::vector<StencilEntry> out;
    for (const auto& t : d1_terms(grid.side(idx, axis), grid.spacing()[axis]))
        out.push_back({shifted_flat(grid, idx, axis, t.off), t.w});
    return out;
}

std::vector<StencilEntry> second_diff_stencil(const RectGrid& grid,
                                              const std::vector<int>& idx, int a,
                                              int b) {
    if (a < 0 || a >= grid.n() || b < 0 || b >= grid.n())
        throw InvalidInputError("second_diff_stencil: axis out of range");
    std::vector<StencilEntry> out;
    if (a == b) {
        for (const auto& t : d2_terms(grid.side(idx, a), grid.spacing()[a]))
            out.push_back({shifted_flat(grid, idx, a, t.off), t.w});
        return out;
    }
    // mixed derivative: product of the two one-dimensional stencils
    const auto ta = d1_terms(grid.side(idx, a), grid.spacing()[a]);
    const auto tb = d1_terms(grid.side(idx, b), grid.spacing()[b]);
    std::vector<int> moved = idx;
    for (const auto& ea : ta) {
        moved[static_cast<std::size_t>(a)] = idx[static_cast<std::size_t>(a)] + ea.off;
        for (const auto& eb : tb) {
            moved[static_cast<std::size_t>(b)] = idx[static_cast<std::size_t>(b)] + eb.off;
            out.push_back({grid.flat(moved), ea.w * eb.w});
        }
        moved[static_cast<std::size_t>(b)] = idx[static_cast<std::size_t>(b)];
    }
    return out;
}

double apply_stencil(const std::vector<StencilEntry>& stencil,
                     const Eigen::VectorXd& values) {
    double s = 0.0;
    for (const auto& e : stencil) s += e.weight * values[e.node];
    return s;
}

SymMatrix hessian_at(const Field& field, long node) {
    const RectGrid& grid = *field.grid;
    const auto idx = grid.unflat(node);
    SymMatrix h(grid.n());
    for (int a = 0; a < grid.n(); ++a)
        for (int b = a; b < grid.n(); ++b)
            h.set(a, b, apply_stencil(second_diff_stencil(grid, idx, a, b),
                                      field.values));
    return h;
}

Eigen::VectorXd gradient_at(const Field& field, long node) {
    const RectGrid& grid = *field.grid;
    const auto idx = grid.unflat(node);
    Eigen::VectorXd g(grid.n());
    for (int a = 0; a < grid.n(); ++a)
        g[a] = apply_stencil(first_diff_stencil(grid, idx, a), field.values);
    return g;
}

}  // namespace hq
