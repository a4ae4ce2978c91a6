// Walks through the worked rings: canonical Betti numbers, residue-field
// growth, and the Gorenstein deviation of a local tensor.

#include <iostream>

#include "cangrow/criteria.hpp"
#include "cangrow/ringspec.hpp"

using namespace cangrow;

namespace {

using Mod = PresentedModule<PrimeField>;

AlgebraPtr<PrimeField> make(const std::string& spec) { return build_algebra(PrimeField(32003), parse_ring_spec(spec)); }

void print_betti(const std::string& label, const Mod& M, std::size_t steps) {
  Resolution<PrimeField> res(M);
  res.extend(steps);
  auto g = analyze_growth(to_series(res.betti()), res.terminated());
  std::cout << label << ":";
  for (auto b : res.betti()) std::cout << " " << b;
  std::cout << "\n    " << to_string(g.classification) << ", curvature in [" << g.low() << ", " << g.high() << "]\n";
}

}  // namespace

int main() {
  auto R = make("ring { field: F32003; vars: x,y,z; ideal: x^2, x*y, y^2, z^2 }");
  std::cout << "R = " << R->spec_text() << "\n  dim " << R->dim() << ", socle " << R->socle().size() << "\n";
  print_betti("  omega", Mod::canonical(R), 10);

  auto B = make("ring { field: F32003; vars: x1,x2,x3; ideal: x1^2 - x2^2, x2^2 - x3^2, x1*x2, x1*x3, x2*x3 }");
  auto A = make("ring { field: F32003; vars: a,b; ideal: a^2, a*b, b^2 }");
  std::cout << "B Gorenstein: " << std::boolalpha << B->is_gorenstein() << "\n";
  print_betti("  k over B", Mod::residue_field(B), 8);

  auto T = ArtinAlgebra<PrimeField>::local_tensor(*A, *B);
  std::cout << "T = A (x) B, dim " << T->dim() << "\n";
  auto d = gorenstein_deviation(T, 8);
  std::cout << "  g(T) in [" << d.g.low.get_d() << ", " << d.g.high.get_d() << "]\n";
  return 0;
}
