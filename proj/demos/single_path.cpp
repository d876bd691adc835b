// Simulates one Euler-Maruyama path and prints it as time,value CSV.
//   demo_single_path [path_index]

#include <cstdio>
#include <cstdlib>

#include "cevem/cevem.hpp"

int main(int argc, char** argv) {
  const auto path = static_cast<std::uint32_t>(argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 0);
  const cevem::ModelParams params = cevem::validate(1.0, 1.0, 0.75, 0.25);
  const cevem::SimGrid grid(9.0, 900);

  const cevem::PathSkeleton p =
      cevem::simulate_skeleton(params, grid, cevem::make_noise(grid, cevem::kDefaultSeed, path));
  std::printf("# path %u, absorbed at %s\n", path,
              p.absorption_index ? std::to_string(grid.time(*p.absorption_index)).c_str() : "never");
  std::printf("t,x\n");
  for (std::size_t k = 0; k <= grid.steps(); ++k) std::printf("%g,%.10g\n", grid.time(k), p.values[k]);
}
