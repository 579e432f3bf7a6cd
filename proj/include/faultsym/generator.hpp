#pragma once

#include <cstdint>
#include <string>

namespace faultsym {

struct GenOptions {
  int size_budget = 40;  // rough bound on AST nodes
  bool allow_div = false;
};

/// Random well-typed program: 1-3 int parameters, int locals, assignments
/// over + - * (and / with allow_div), if/else nested at most 3 deep, at most
/// one counter loop `loop (i < K)` with K <= 4, and a final assert that
/// usually holds on fault-free runs over inputs in [-4, 4].
/// Deterministic per seed.
std::string random_program(std::uint64_t seed, const GenOptions& opts = {});

}  // namespace faultsym
