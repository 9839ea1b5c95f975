// Samples a density-model presentation and prints its small-cancellation
// profile next to the conformal dimension window for the same parameters.

#include <cdim/bounds.hpp>
#include <cdim/cancellation.hpp>
#include <cdim/sampler.hpp>

#include <iostream>

int main() {
  using namespace cdim;
  ModelSpec s;
  s.model = Model::density;
  s.m     = 2;
  s.l     = 60;
  s.d     = rational(1, 20);
  s.seed  = 7;

  auto p   = sample_presentation(s);
  auto rep = analyze(p);
  std::cout << describe(s) << "\n"
            << p.relators.size() << " relators, max piece " << rep.max_piece
            << ", lambda* " << to_string(rep.lambda_star) << ", k " << rep.k << "\n";

  auto w = density_window(s.m, bigint(s.l), s.d);
  std::cout << "window: " << format_real(*w.lower, 8) << " .. "
            << format_real(w.upper(), 8) << " (upper constant set to 1)\n";
  if (rep.lambda_star <= rational(1, 8) && rep.k >= 2) {
    std::cout << "C'(1/8) bound: "
              << format_real(upper_bound_sc(bigint(rep.k), rep.lambda_star), 8) << "\n";
  }
}
