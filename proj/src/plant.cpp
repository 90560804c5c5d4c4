#include "fras/plant.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace fras {

Vec eval_dynamics(const Plant& plant, const Vec& x, const Vec& u) {
  if (x.size() != plant.n) throw DimensionError("state dimension mismatch for " + plant.label);
  if (u.size() != plant.m) throw DimensionError("input dimension mismatch for " + plant.label);
  const Mat G = plant.g(x);
  if (G.rows() != plant.n || G.cols() != plant.m) {
    throw ModelError("g(x) has wrong shape for " + plant.label);
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(G * G.transpose());
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
    throw ModelError("g(x) g(x)^T is not positive definite at the evaluated state (" +
                     plant.label + ")");
  }
  Vec dx = plant.f(x) + G * u;
  if (!dx.allFinite()) throw ModelError("non-finite dynamics value for " + plant.label);
  return dx;
}

Plant builtin_single_integrator(int n) {
  if (n < 1) throw ParameterError("single integrator needs n >= 1");
  Plant p;
  p.n = n;
  p.m = n;
  p.f = [n](const Vec&) { return Vec::Zero(n); };
  p.g = [n](const Vec&) { return Mat::Identity(n, n); };
  p.label = "single_integrator_" + std::to_string(n) + "d";
  return p;
}

Plant builtin_omni_robot() {
  Plant p;
  p.n = 3;
  p.m = 3;
  p.f = [](const Vec&) { return Vec::Zero(3); };
  p.g = [](const Vec& x) {
    const double c = std::cos(x[2]);
    const double s = std::sin(x[2]);
    Mat G(3, 3);
    G << c, s, 0.0,
         s, -c, 0.0,
         0.0, 0.0, 1.0;
    return G;
  };
  p.label = "omni_robot";
  return p;
}

Plant plant_by_name(const std::string& name) {
  if (name == "omni_robot") return builtin_omni_robot();
  const std::string prefix = "single_integrator_";
  if (name.rfind(prefix, 0) == 0) {
    const std::string rest = name.substr(prefix.size());
    if (!rest.empty() && rest.back() == 'd') {
      try {
        const int n = std::stoi(rest.substr(0, rest.size() - 1));
        return builtin_single_integrator(n);
      } catch (const std::exception&) {
        // fall through to the error below
      }
    }
  }
  throw ParameterError("unknown plant name: " + name);
}

}  // namespace fras
