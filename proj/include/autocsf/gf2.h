#pragma once

#include <cstdint>
#include <vector>

#include <autocsf/bit_array.h>

namespace autocsf {

// Sparse GF(2) linear system A x = b where every equation XORs a small
// fixed number of variables (3 or 4). Variables are indexed [0, numVars).
class Gf2System {
 public:
  Gf2System(uint32_t num_vars, int arity);

  uint32_t numVars() const { return num_vars_; }
  int arity() const { return arity_; }
  uint64_t numEquations() const { return rhs_.size(); }

  // Adds one equation: XOR of the `arity` variables equals `rhs`.
  // Repeated indices cancel in pairs (GF(2) semantics).
  void addEquation(const uint32_t* indices, bool rhs);

  void reserve(uint64_t num_equations);

  const uint32_t* equationIndices(uint64_t equation) const {
    return &indices_[equation * static_cast<uint64_t>(arity_)];
  }
  bool equationRhs(uint64_t equation) const { return rhs_[equation] != 0; }

 private:
  uint32_t num_vars_;
  int arity_;
  std::vector<uint32_t> indices_;
  std::vector<uint8_t> rhs_;
};

struct SolveOutcome {
  bool solved = false;
  // Satisfying assignment (free variables zeroed); empty when !solved.
  BitArray solution;
  // Equations left for dense elimination after hypergraph peeling.
  uint64_t core_equations = 0;
};

// Solves by hypergraph peeling followed by dense Gaussian elimination on
// the residual core. Roughly 10^4 x 10^4 peelable systems solve in
// milliseconds; dense cores cost O(R^3) bit-ops for R core equations,
// which is why CSF construction shards its equations into chunks.
SolveOutcome solveSystem(const Gf2System& system);

// True when `solution` satisfies every equation of `system`.
bool verifySolution(const Gf2System& system, const BitArray& solution);

}  // namespace autocsf
