#pragma once

#include <vector>

#include "mobdual/duality.hpp"

namespace mobdual::detail {

/// Dual system with transposed branch matrices on the given domains.
MoebiusSystem make_dual_system(const MoebiusSystem& original, const Interval& dual_space,
                               const std::vector<Interval>& domains);

/// psi maps every J_k onto the domain of dual branch k.
bool psi_links(const PsiMap& psi, const MoebiusSystem& original, const MoebiusSystem& dual);

}  // namespace mobdual::detail
