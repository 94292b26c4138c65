#pragma once

#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "f2a/tensor.hpp"

namespace f2a {

// Binary named-tensor container shared by checkpoints and weight archives.
//
// Layout (little-endian):
//   magic "F2ATNSR1" (8 bytes)
//   u64 metadata length, then that many bytes of UTF-8 JSON
//   u64 tensor count
//   per tensor, sorted ascending by name:
//     u32 name length, name bytes
//     u32 dims[4] (n, c, h, w)
//     float32 data, n*c*h*w elements
//
// Sorted names plus sorted-key JSON make writes byte-reproducible.
using NamedTensors = std::map<std::string, Tensor>;

void write_archive(const std::string& path, const nlohmann::json& meta,
                   const NamedTensors& tensors);

NamedTensors read_archive(const std::string& path, nlohmann::json* meta = nullptr);

} // namespace f2a
