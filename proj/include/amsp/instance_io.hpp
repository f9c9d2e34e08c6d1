#pragma once

#include <filesystem>
#include <iosfwd>

#include "amsp/instance.hpp"

namespace amsp {

/// JSON instance file:
///
///   { "name": str, "mu": int,
///     "tree": {"T": int, "B": int, "probabilities": [p_1..p_N]?},
///     "state_vars": [{"name", "lower", "upper", "integer", "big_m"}],
///     "stage_vars": [{"name", "lower", "upper", "integer"}],
///     "node_data": [{"node": n, "a": [..], "b": [..],
///                    "rows": [{"name", "x": [[node, i, coef]..], "y": [[node, j, coef]..],
///                              "sense": "<=" | "=" | ">=", "rhs": num}]}],
///     "bounds": [{"node", "block": "x" | "y", "index", "lower", "upper"}] }
///
/// A null bound means unbounded. Parse failures throw ParameterError.
void write_instance(std::ostream& os, const AmspInstance& instance);
AmspInstance read_instance(std::istream& is);

void save_instance(const std::filesystem::path& path, const AmspInstance& instance);
AmspInstance load_instance(const std::filesystem::path& path);

}  // namespace amsp
