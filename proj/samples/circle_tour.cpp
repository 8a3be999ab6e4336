// Walks through the truncated circle model: plane waves, delta states, the two
// copying structures and a pair of complementary measurements.

#include <starhilb/circleqm.hpp>
#include <starhilb/frobenius.hpp>

#include <cstdio>

using namespace starhilb;

int main() {
  const CircleSpace sp(1.0, 8);
  std::printf("L = %.3f, omega = %d, kappa = %zu\n", sp.length(), sp.omega(), sp.kappa());

  const Morphism chi = momentum_eigenstate(sp, 3);
  const Morphism delta = position_eigenstate(sp, 0.25);
  std::printf("<chi_3|chi_3> = %.6f\n", compose(dagger(chi), chi).scalar().real());
  std::printf("<delta|delta> = %.6f (kappa / L)\n", compose(dagger(delta), delta).scalar().real());

  // A trigonometric polynomial is recovered exactly by pairing with delta.
  const Morphism f = fourier_state(sp, [](long n) { return n == 0 ? Scalar(1) : (n == 2 ? Scalar(0.5) : Scalar(0)); });
  const Scalar fx = delta_pairing(sp, 0.25, f);
  std::printf("f(0.25) = %.6f%+.6fi\n", fx.real(), fx.imag());

  const auto white = check_axioms(momentum_structure(sp));
  std::printf("momentum structure axioms:\n");
  for (const auto& [name, r] : white) std::printf("  %-16s %.2e\n", name.c_str(), r);

  const auto qs = quasi_speciality(group_algebra(sp));
  std::printf("group algebra: mu . delta = %.3f id (residual %.2e)\n", qs.factor.real(), qs.residual);

  std::printf("translation by x then y vs x + y: %.2e\n", position_translation_residual(sp, 0.3, 0.9));
  for (const auto& [name, r] : check_strong_complementarity(sp)) std::printf("  %-22s %.2e\n", name.c_str(), r);

  const auto mix = mixing_experiment(sp, random_unit_state(sp, 7));
  std::printf("momentum then position measurement: ||rho' - id/kappa|| = %.2e\n", mix.distance);
  return 0;
}
