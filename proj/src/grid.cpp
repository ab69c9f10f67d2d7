#include "sqg/grid.hpp"

#include <string>

#include "sqg/error.hpp"

namespace sqg {

TorusGrid::TorusGrid(int n) : n_(n) {
  if (n < 8 || (n & (n - 1)) != 0) {
    throw InputError("grid size must be a power of two >= 8, got " + std::to_string(n));
  }
}

}  // namespace sqg
