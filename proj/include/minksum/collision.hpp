#pragma once

// Contact status and separation distance between two bodies.
//
//   ray     x(φ1) × (c2 − c1) = 0         boundary point on the center ray
//   normal  m1'(φ1) × (c2 − c1 − x(φ1)) = 0   closest point of the contact space
//   common  n1 × n2 = 0, n1 × (x2 − x1) = 0   classic common-normal pair
//
// x(φ1) is the closed-form contact-space point relative to c1.  Status always
// comes from the ray ratio λ = ‖c2 − c1‖ / ‖x(φ1*)‖ of the ray solve.

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "minksum/minkowski.hpp"
#include "minksum/nls.hpp"

namespace mink {

enum class Method { ray, normal, common };
enum class ContactStatus { separated, touching, penetrating, inconclusive };

const char* to_string(Method method);
const char* to_string(ContactStatus status);
Method method_from_string(const std::string& name);

/// Band on λ − 1 reported as touching.
inline constexpr double kTouchTol = 1e-8;

struct ProximityResult {
  ContactStatus status = ContactStatus::inconclusive;
  Method method = Method::normal;
  /// Present only for separated bodies with the normal or common method.
  std::optional<double> distance;
  Vec witness1;
  Vec witness2;
  SphericalParam phi1;
  /// Ray ratio λ (diagnostic; not a distance).
  double ray_ratio = 0.0;
  /// Solve that produced the reported quantities.
  SolveResult solver;
};

/// Common-normal residual: (n1 × n2, n1 × (x2 − x1)), scalar cross products in 2D.
Eigen::VectorXd residual_common_normal(const BodyInstance& body1, const BodyInstance& body2,
                                       SphericalParam phi1, SphericalParam phi2);

/// x(φ1) × (c2 − c1).  Throws DegenerateQuery when the centers coincide.
Eigen::VectorXd residual_mink_ray(const MinkSumQuery& query, SphericalParam phi1);

/// m1'(φ1) × (c2 − (c1 + x(φ1))) with m1' the world-frame body-1 gradient.
Eigen::VectorXd residual_mink_normal(const MinkSumQuery& query, SphericalParam phi1);

/// Solver-vector ↔ sphere parameter ([θ] in 2D, [η, ω] in 3D).
Eigen::VectorXd params_to_vector(int dim, SphericalParam phi);
SphericalParam vector_to_params(int dim, const Eigen::VectorXd& v);

/// Full query.  The bodies are used as given (contact mode, centers included).
ProximityResult proximity_query(const BodyInstance& body1, const BodyInstance& body2,
                                Method method, const SolverConfig& cfg = {});

}  // namespace mink
