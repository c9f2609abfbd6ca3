#pragma once

// Transverse coupling matrices C^{+-}_{nn'} = <phi_n| exp(+-i kL y) |phi_n'>
// between hard-wall modes, as functions of chi = kL a / pi.

#include "wgscatter/physics.hpp"

#include <Eigen/Dense>

namespace wgscatter {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

enum class CouplingSign { plus, minus };

inline int sign_value(CouplingSign s) { return s == CouplingSign::plus ? 1 : -1; }
inline char sign_char(CouplingSign s) { return s == CouplingSign::plus ? '+' : '-'; }

/// Relative distance to chi^2 = (n' -+ n)^2 below which the closed form is
/// replaced by quadrature.
inline constexpr double kRemovableSingularityTolerance = 1e-6;

/// Closed-form matrix element. Near the removable singularities the value is
/// taken from coupling_element_quadrature.
Complex coupling_element_closed(int n, int n2, CouplingSign sign, double chi);

/// Adaptive Gauss-Kronrod evaluation of 2 int_0^1 sin(n pi u) sin(n' pi u)
/// exp(+-i pi chi u) du to absolute accuracy 1e-12. Independent of the
/// closed form; used as its oracle.
Complex coupling_element_quadrature(int n, int n2, CouplingSign sign,
                                    double chi);

/// First-order small-chi series of the coupling element.
Complex coupling_first_order(int n, int n2, CouplingSign sign, double chi);

struct CouplingMatrices {
  ComplexMatrix c_plus;
  ComplexMatrix c_minus;
  double chi = 0.0;

  [[nodiscard]] int size() const { return static_cast<int>(c_plus.rows()); }
};

/// Dense N x N matrices; upper triangle evaluated, lower mirrored, so the
/// symmetry C_{nn'} = C_{n'n} is exact.
CouplingMatrices coupling_matrices(int N, double chi);

} // namespace wgscatter
