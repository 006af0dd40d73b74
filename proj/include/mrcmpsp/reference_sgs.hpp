#pragma once

#include "mrcmpsp/model.hpp"

namespace mrcmpsp {

/// Straight serial SGS with the naive slot search and freshly built capacity
/// profiles on every call. Slow; the oracle for the optimized generator.
Schedule reference_decode(const Instance& instance, const SequenceSolution& solution);

}  // namespace mrcmpsp
