#pragma once

#include <utility>
#include <vector>

#include "loopkahler/model.hpp"

namespace loopkahler {

/// Pointwise Hermitian product Σ h_ij(z) u_i conj(v_j); conjugate-symmetric,
/// h_inner(u,u) real ≥ 0. Both vectors must share their base point.
cplx h_inner(const KahlerModel& m, const TangentVec& u, const TangentVec& v);

/// Kähler 2-form ω = −Im(h); antisymmetric, ω(u, iu) = h(u,u).
double omega_eval(const KahlerModel& m, const TangentVec& u, const TangentVec& v);

/// Exterior derivative dω evaluated on a triple at a common base point,
/// built analytically from the metric first derivatives:
/// dω = (i/2) Σ (∂h_ij/∂z_k dz_k + ∂h_ij/∂z̄_k dz̄_k) ∧ dz_i ∧ dz̄_j.
double d_omega_eval(const KahlerModel& m, const TangentVec& u, const TangentVec& v,
                    const TangentVec& w);

/// Holomorphic Christoffel symbols Γ^k_ij = Σ_l h^{kl̄} ∂h_{jl̄}/∂z_i of the
/// Levi-Civita (= Chern) connection; gamma[k](i,j) = Γ^k_ij.
/// Only defined on Kähler models (symmetry in i,j needs dω = 0).
std::vector<Mat> christoffels(const KahlerModel& m, const ChartPoint& z);

/// Σ_ij Γ^k_ij a_i b_j for each k.
Vec christoffel_contract(const std::vector<Mat>& gamma, const Vec& a, const Vec& b);

struct GeodesicResult {
  std::vector<ChartPoint> points;
  TangentVec final_velocity;
};

/// Fixed-step RK4 integration of z̈^k + Γ^k_ij ż^i ż^j = 0 from (z0, v0) over
/// time T. Switches chart when a step leaves the safe region of the atlas.
GeodesicResult integrate_geodesic(const KahlerModel& m, const ChartPoint& z0, const Vec& v0,
                                  double T, int steps);

/// Fubini–Study distance via Gram–Schmidt on representatives:
/// dist = arctan(‖q − ⟨q,p⟩p‖ / |⟨q,p⟩|) on unit representatives,
/// π/2 for orthogonal ones. Defined for projective models only.
double fs_distance(const KahlerModel& m, const ChartPoint& p, const ChartPoint& q);

/// Same on raw homogeneous representatives.
double fs_distance_homogeneous(const Vec& wp, const Vec& wq);

/// Fubini–Study quadratic form in homogeneous coordinates:
/// (‖γ‖²‖γ̇‖² − |⟨γ̇,γ⟩|²) / ‖γ‖⁴.
double fs_form_quadratic(const Vec& gamma, const Vec& gamma_dot);

/// Completeness inequality ingredients: returns (lhs, rhs) with
/// lhs = ω_γ(γ̇,γ̇) in homogeneous form and rhs = 2‖γ̇‖²/‖γ‖².
std::pair<double, double> pl2_norm_bound_check(const Vec& gamma, const Vec& gamma_dot);

/// Geodesic distance for models with a closed form (projective → fs_distance,
/// flat → Euclidean norm of the difference).
double model_distance(const KahlerModel& m, const ChartPoint& p, const ChartPoint& q);

}  // namespace loopkahler
