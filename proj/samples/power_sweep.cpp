// Prints the savings column for a few data-centre sizes.
#include <iostream>

#include "ponfog/ponfog.hpp"

int main() {
  using namespace ponfog;
  write_sweep_csv(std::cout, sweep({96, 192, 384, 768, 1536, 3072}, PowerConfig{}));
}
