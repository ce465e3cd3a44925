#pragma once

#include <cmath>
#include <string>

namespace cubicfib::ff {

template <class Visit>
void for_each_residue(std::size_t m, std::int64_t q, std::uint64_t budget, Visit&& visit) {
  double size = std::pow(static_cast<double>(q), static_cast<double>(m));
  if (size > static_cast<double>(budget))
    throw forms::BudgetExceeded("enumeration of " + std::to_string(q) + "^" + std::to_string(m) +
                                " residues exceeds the budget");
  ModVector x(m, 0);
  while (true) {
    visit(static_cast<const ModVector&>(x));
    std::size_t i = m;
    while (i > 0) {
      --i;
      if (++x[i] < q) break;
      x[i] = 0;
      if (i == 0) return;
    }
    if (m == 0) return;
  }
}

}  // namespace cubicfib::ff
