#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "nemflow/model.hpp"

namespace nemflow {

// CRC-64/ECMA-182, bit-reversed polynomial 0xC96C5795D7870F42, init/xorout
// ~0. Used as the checkpoint integrity check and as a cheap content digest
// for reproducibility manifests.
std::uint64_t crc64(const void* data, std::size_t len, std::uint64_t seed = 0);

struct CheckpointInfo {
  std::uint16_t version = 0;
  int n = 0;
  double length = 0.0;
  double t = 0.0;
  Params params;
  DirectorMode mode = DirectorMode::angle;
  std::uint64_t payload_crc = 0;
};

// Binary spectral state. Layout (little-endian):
//   "NEMD" | u16 version | u32 n | f64 length | f64 t | f64 nu,lambda,gamma
//   | u8 mode | payload | u64 crc64(everything before the crc)
// Payload: interleaved re/im f64 coefficients for u1, u2, then theta (angle)
// or d1, d2 (vec), each n*n modes in row-major index order.
void write_checkpoint(const FlowState& s, const std::string& path);

// Round-trips bitwise: every coefficient byte survives. Throws config_error
// on malformed files and numeric_error on CRC mismatch.
FlowState read_checkpoint(const std::string& path);

// Header + integrity summary without materializing the state.
CheckpointInfo checkpoint_info(const std::string& path);

}  // namespace nemflow
