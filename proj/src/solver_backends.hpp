#pragma once

#include <memory>

#include "amsp/solver.hpp"

namespace amsp::detail {

#ifdef AMSP_WITH_HIGHS
std::unique_ptr<Solver> make_highs_solver();
#endif

}  // namespace amsp::detail
