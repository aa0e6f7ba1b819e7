#pragma once

#include <iosfwd>

#include "pdmp/path_space.hpp"

namespace pdmp {

/**
 * @brief Line-oriented skeleton text format.
 *
 *   skeleton dim=<d> horizon=<T> events=<K>
 *   initial <x_1..x_d> <v_1..v_d>
 *   event <tau> <channel> <x_1..x_d> <v_1..v_d>     (K lines, post-jump state)
 *
 * Numbers use the shortest round-trip representation, so reading back a
 * written skeleton reproduces it exactly.
 */
void write_skeleton(std::ostream& out, const PathSkeleton& path);

/// Throws ContractViolation on malformed input.
PathSkeleton read_skeleton(std::istream& in);

}  // namespace pdmp
