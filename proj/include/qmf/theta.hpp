#pragma once

#include "qmf/brandt.hpp"

namespace qmf {

struct QExpansion {
    std::string label;
    long precision = 0;
    std::vector<Q> coeffs;  // a_0 .. a_precision
};

// Line record {"label":..., "precision":..., "coefficients":["num/den", ...]}.
std::string to_record(const QExpansion& f);

// a_0 = delta_ij / e_i, a_n = (A_n)_ij.
QExpansion theta_entry(const BrandtModule& m, std::size_t i, std::size_t j, long prec);

// Sturm bound for weight 2 on Gamma_0(N).
long sturm_bound(const Z& N);

// Echelon basis of the q-expansions <A_n phi, psi> for phi, psi in the level-new cuspidal space.
std::vector<QExpansion> theta_new_span(HeckeContext& ctx, const Order& O, long prec);

struct ThetaKernel {
    std::size_t dim_new = 0;
    std::size_t dim_theta = 0;
    std::size_t kernel = 0;
};
// prec = 0 picks the Sturm bound plus a margin.
ThetaKernel theta_kernel_dimension(HeckeContext& ctx, const Order& O, long prec = 0);

// E_{2,a,b}: a_0 = -1/24 prod_{p | ab} (1 - 1/p), a_n = constrained divisor sum.
QExpansion eisenstein_q_expansion(const Z& a, const Z& b, long prec);

}  // namespace qmf
