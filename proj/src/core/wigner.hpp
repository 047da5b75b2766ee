#pragma once

#include <Eigen/Dense>

#include "core/irreps.hpp"
#include "core/rotation.hpp"

namespace cgcp::so3 {

// Real-basis Wigner D-matrix of degree l, components ordered m = -l..l.
// D(0) = [1]; D(1) is the 3x3 rotation matrix conjugated into the (y, z, x)
// component ordering; higher degrees are built by projecting
// D(l-1) (x) D(1) onto the degree-l sector with real CG coefficients, so the
// D-matrices and the CG coefficients are mutually consistent by construction.
Eigen::MatrixXd wigner_d(int l, const Rotation& r);

// Block-diagonal action of the rotation on a concatenated feature field:
// wigner_d(l, r) repeated per multiplicity channel, blocks in spec order.
Eigen::MatrixXd wigner_block(const IrrepsSpec& spec, const Rotation& r);

}  // namespace cgcp::so3
