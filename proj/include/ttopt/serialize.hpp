#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ttopt/tt_tensor.hpp"

namespace ttopt {

/// Binary TT file, all fields little-endian:
///
///   "TTV1"                          4 bytes magic
///   u32 d
///   d x u64                         mode sizes
///   (d+1) x u64                     ranks, first and last equal 1
///   per core, in order:             R_prev * N * R_next IEEE-754 doubles
///                                   in TTCore storage order
std::vector<std::byte> serialize(const TTTensor& t);

/// Inverse of serialize(). Throws ParseError on a bad magic, truncated or
/// oversized payload, and on rank-chain violations (message names the core).
TTTensor deserialize(std::span<const std::byte> bytes);

void save(const TTTensor& t, const std::filesystem::path& path);
TTTensor load(const std::filesystem::path& path);

/// Debugging sidecar: {"format":"TTV1","d":..,"modes":[..],"ranks":[..],
/// "cores":[[..],..]} with each core flattened in storage order.
std::string to_json_string(const TTTensor& t);
TTTensor from_json_string(std::string_view text);

}  // namespace ttopt
