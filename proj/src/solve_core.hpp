#pragma once

// Internal solver plumbing shared by the box and radial paths. Not installed.

#include <functional>
#include <memory>

#include "hq/solver.hpp"

namespace hq::detail {

void validate_options(const NewtonOptions& opts);

/// Blend between the exactly solvable paraboloid problem at t = 0 and the
/// target problem at t = 1. The target callbacks are never invoked at t = 0,
/// so domain faults of the target data cannot poison the start.
struct Homotopy {
    double psi0 = 0.0;  // operator value of the start paraboloid's Hessian
    double A = 1.0;
    Eigen::VectorXd center;
    PsiFn target_psi;
    PhiFn target_phi;

    [[nodiscard]] double u0_at(const Eigen::VectorXd& x) const {
        return 0.5 * A * (x - center).squaredNorm();
    }
    [[nodiscard]] PsiFn psi_at(double t) const;
    [[nodiscard]] PhiFn phi_at(double t) const;
};

[[nodiscard]] Homotopy make_homotopy(const OperatorSignature& sig, PsiFn psi,
                                     PhiFn phi, Eigen::VectorXd center, double A);

using SystemFactory = std::function<std::unique_ptr<DiscreteSystem>(double t)>;

/// Adaptive march of the homotopy parameter: halve the step after a Newton
/// failure, double after two consecutive successes, fail below the floor.
/// On entry u holds the t = 0 iterate; on exit the last accepted one. Fills
/// everything in the report except the field statistics.
void continuation_march(const SystemFactory& make_system, Eigen::VectorXd& u,
                        const NewtonOptions& opts, SolveReport& rep);

}  // namespace hq::detail
