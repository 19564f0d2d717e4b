#pragma once

#include <vector>

#include "nsshell/spectrum.hpp"

namespace nsshell {

// Quadrature grid plus synthesis/analysis between mode coefficients and grid
// values. Sphere: Gauss-Legendre in x = cos(theta) times uniform longitudes,
// exact for integrands of polynomial degree <= quad_degree. Torus: uniform
// N x N grid (N = quad_degree points per dimension), exact for trigonometric
// degree <= N - 1 per dimension. All state is immutable after construction.
class Transform {
  public:
    Transform(const SpectrumTable& table, int quad_degree = 0);

    const SpectrumTable& table() const { return *table_; }
    int quad_degree() const { return degree_; }
    std::size_t n_points() const { return weights_.size(); }
    const std::vector<double>& weights() const { return weights_; }

    // Scalar synthesis: values[p] = sum_i coeffs[i] e_i(x_p).
    std::vector<double> synthesize(const std::vector<double>& coeffs) const;
    // Orthonormal-frame gradient components. Sphere: (d_theta, d_phi / sin(theta));
    // torus: (d_x, d_y).
    void synthesize_gradient(const std::vector<double>& coeffs, std::vector<double>& g1,
                             std::vector<double>& g2) const;
    // Orthonormal-frame covariant Hessian components (h11, h12, h22).
    void synthesize_hessian(const std::vector<double>& coeffs, std::vector<double>& h11,
                            std::vector<double>& h12, std::vector<double>& h22) const;
    // Pointwise Laplace-Beltrami of the synthesized field.
    std::vector<double> synthesize_laplacian(const std::vector<double>& coeffs) const;

    // Exact analysis: coefficients of every retained mode from grid values.
    std::vector<double> analyze(const std::vector<double>& values) const;

    double integrate(const std::vector<double>& values) const;
    double inner(const std::vector<double>& u, const std::vector<double>& v) const;
    double norm_l2(const std::vector<double>& values) const;

    // Single basis function on the grid (used by the dense-quadrature oracles).
    std::vector<double> mode_values(ModeId id) const;

  private:
    const SpectrumTable* table_;
    int degree_ = 0;

    // shared
    std::vector<double> weights_;  // per grid point, row-major (i_theta/ix major)

    // sphere data
    int ntheta_ = 0, nphi_ = 0;
    std::vector<double> x_;        // Gauss-Legendre nodes (cos theta)
    std::vector<double> wx_;       // Gauss-Legendre weights
    std::vector<double> sin_theta_;
    std::vector<double> theta_tab_;   // [pair(l,m)][i] normalized associated Legendre
    std::vector<double> dtheta_tab_;  // d/dx of the above
    std::vector<double> cos_m_;       // [m][j]
    std::vector<double> sin_m_;
    int lmax_ = 0;
    std::size_t pair_index(int l, int m) const;

    // torus data
    int n_ = 0;          // points per dimension
    int nmax_ = 0;       // largest |wavevector component|
    std::vector<double> cos_t_;  // [n][i], n = 0..nmax
    std::vector<double> sin_t_;

    void build_sphere();
    void build_torus();
    void torus_mode_tables(const Mode& m, int deriv_x, int deriv_y, std::vector<double>& out) const;
};

// Nodes/weights of the n-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Normalized associated Legendre functions: Theta_{l,m} with
// int_{-1}^{1} Theta_{l,m}(x)^2 dx = 1; the real harmonic is
// Y_{l,m}(theta,phi) = Theta_{l,|m|}(cos theta) * Phi_m(phi) with
// Phi_0 = 1/sqrt(2 pi), Phi_{m>0} = cos(m phi)/sqrt(pi), Phi_{m<0} = sin(|m| phi)/sqrt(pi).
// Fills values[l] for l = m..lmax at fixed x; dvalues receives d/dx.
void normalized_legendre(int lmax, int m, double x, std::vector<double>& values,
                         std::vector<double>& dvalues);

}  // namespace nsshell
