// Ruin probability for p = 1/2 with its Levy brackets, next to the
// infinite-horizon closed form.

#include <cstdio>
#include <vector>

#include "cevem/cevem.hpp"

int main() {
  using namespace cevem;
  const ModelParams params = validate(1.0, 1.0, 0.5, 0.25);
  const SimGrid grid(9.0, 90000);
  const McConfig mc{2000, kDefaultSeed, 1};
  const std::vector<double> eps{1e-4, 1e-5, 1e-6};

  const RuinTable t = ruin_table(params, grid, mc, eps);
  std::printf("F_n(0) = %.4f  (%zu of %zu paths absorbed)\n", t.atom, t.absorbed_count, t.num_paths);
  for (const RuinBracket& b : t.brackets) {
    std::printf("eps %-8g [%.4f, %.4f]\n", b.epsilon, b.lower_clamped(), b.upper_clamped());
  }
  std::printf("exp(-2 mu x0 / sigma^2) = %.4f, standard error %.4f\n", closed_form_ruin(params),
              standard_error(t.atom, t.num_paths));
}
