#include <autocsf/gf2.h>

#include <algorithm>
#include <limits>

#include <autocsf/errors.h>

namespace autocsf {

namespace {

constexpr uint32_t kNoVar = std::numeric_limits<uint32_t>::max();

}  // namespace

Gf2System::Gf2System(uint32_t num_vars, int arity)
    : num_vars_(num_vars), arity_(arity) {
  if (arity != 3 && arity != 4) {
    throw InvalidArgumentError("Gf2System: arity must be 3 or 4");
  }
}

void Gf2System::reserve(uint64_t num_equations) {
  indices_.reserve(num_equations * static_cast<uint64_t>(arity_));
  rhs_.reserve(num_equations);
}

void Gf2System::addEquation(const uint32_t* indices, bool rhs) {
  for (int i = 0; i < arity_; i++) {
    if (indices[i] >= num_vars_) {
      throw InvalidArgumentError("Gf2System: variable index out of range");
    }
    indices_.push_back(indices[i]);
  }
  rhs_.push_back(rhs ? 1 : 0);
}

SolveOutcome solveSystem(const Gf2System& system) {
  const uint64_t num_eqs = system.numEquations();
  const uint32_t num_vars = system.numVars();
  const int arity = system.arity();

  SolveOutcome outcome;
  outcome.solution = BitArray(num_vars);

  // Canonical form: repeated variables cancel in pairs. Equations are kept
  // in fixed-width slots with kNoVar padding.
  std::vector<uint32_t> eq_vars(num_eqs * static_cast<uint64_t>(arity), kNoVar);
  std::vector<uint8_t> removed(num_eqs, 0);
  std::vector<uint32_t> degree(num_vars, 0);
  std::vector<uint64_t> xor_of_eqs(num_vars, 0);

  uint64_t remaining = 0;
  for (uint64_t e = 0; e < num_eqs; e++) {
    uint32_t sorted[4];
    std::copy(system.equationIndices(e), system.equationIndices(e) + arity,
              sorted);
    std::sort(sorted, sorted + arity);

    uint32_t* slot = &eq_vars[e * static_cast<uint64_t>(arity)];
    int kept = 0;
    for (int i = 0; i < arity;) {
      int j = i;
      while (j < arity && sorted[j] == sorted[i]) {
        j++;
      }
      if ((j - i) % 2 == 1) {
        slot[kept++] = sorted[i];
      }
      i = j;
    }

    if (kept == 0) {
      // 0 = rhs: trivially satisfied or immediately inconsistent.
      if (system.equationRhs(e)) {
        return outcome;
      }
      removed[e] = 1;
      continue;
    }
    remaining++;
    for (int i = 0; i < kept; i++) {
      degree[slot[i]]++;
      xor_of_eqs[slot[i]] ^= e;
    }
  }

  // Hypergraph peeling: repeatedly detach equations that own the only
  // remaining reference to some variable.
  std::vector<uint32_t> peel_queue;
  for (uint32_t v = 0; v < num_vars; v++) {
    if (degree[v] == 1) {
      peel_queue.push_back(v);
    }
  }
  // (equation, variable) pairs in peel order.
  std::vector<std::pair<uint64_t, uint32_t>> peel_stack;
  peel_stack.reserve(remaining);

  while (!peel_queue.empty()) {
    const uint32_t v = peel_queue.back();
    peel_queue.pop_back();
    if (degree[v] != 1) {
      continue;
    }
    const uint64_t e = xor_of_eqs[v];
    peel_stack.push_back({e, v});
    removed[e] = 1;
    remaining--;
    const uint32_t* slot = &eq_vars[e * static_cast<uint64_t>(arity)];
    for (int i = 0; i < arity && slot[i] != kNoVar; i++) {
      const uint32_t u = slot[i];
      degree[u]--;
      xor_of_eqs[u] ^= e;
      if (degree[u] == 1) {
        peel_queue.push_back(u);
      }
    }
  }

  outcome.core_equations = remaining;

  // Dense elimination on the residual core, over the variables that still
  // appear in it. Columns follow ascending variable index; the last
  // column holds the right-hand side.
  if (remaining > 0) {
    std::vector<uint32_t> column_of(num_vars, kNoVar);
    std::vector<uint32_t> var_of_column;
    for (uint32_t v = 0; v < num_vars; v++) {
      if (degree[v] > 0) {
        column_of[v] = static_cast<uint32_t>(var_of_column.size());
        var_of_column.push_back(v);
      }
    }
    const uint32_t num_cols = static_cast<uint32_t>(var_of_column.size());
    const uint32_t row_words = (num_cols + 1 + 63) / 64;

    std::vector<uint64_t> matrix(remaining * static_cast<uint64_t>(row_words),
                                 0);
    uint64_t row = 0;
    for (uint64_t e = 0; e < num_eqs; e++) {
      if (removed[e]) {
        continue;
      }
      uint64_t* bits = &matrix[row * row_words];
      const uint32_t* slot = &eq_vars[e * static_cast<uint64_t>(arity)];
      for (int i = 0; i < arity && slot[i] != kNoVar; i++) {
        const uint32_t c = column_of[slot[i]];
        bits[c >> 6] ^= 1ULL << (c & 63);
      }
      if (system.equationRhs(e)) {
        bits[num_cols >> 6] ^= 1ULL << (num_cols & 63);
      }
      row++;
    }

    // Forward elimination to row echelon form.
    std::vector<uint32_t> pivot_col(remaining, kNoVar);
    uint64_t rank = 0;
    for (uint32_t col = 0; col < num_cols && rank < remaining; col++) {
      const uint32_t word = col >> 6;
      const uint64_t mask = 1ULL << (col & 63);
      uint64_t pivot = rank;
      while (pivot < remaining && !(matrix[pivot * row_words + word] & mask)) {
        pivot++;
      }
      if (pivot == remaining) {
        continue;  // free column
      }
      if (pivot != rank) {
        for (uint32_t w = word; w < row_words; w++) {
          std::swap(matrix[pivot * row_words + w], matrix[rank * row_words + w]);
        }
      }
      const uint64_t* pivot_row = &matrix[rank * row_words];
      for (uint64_t r = rank + 1; r < remaining; r++) {
        uint64_t* other = &matrix[r * row_words];
        if (other[word] & mask) {
          for (uint32_t w = word; w < row_words; w++) {
            other[w] ^= pivot_row[w];
          }
        }
      }
      pivot_col[rank] = col;
      rank++;
    }

    // Zero rows with a set right-hand side are contradictions.
    const uint32_t rhs_word = num_cols >> 6;
    const uint64_t rhs_mask = 1ULL << (num_cols & 63);
    for (uint64_t r = rank; r < remaining; r++) {
      if (matrix[r * row_words + rhs_word] & rhs_mask) {
        return outcome;
      }
    }

    // Back-substitution; free variables stay zero.
    for (uint64_t r = rank; r-- > 0;) {
      const uint64_t* bits = &matrix[r * row_words];
      uint64_t acc = (bits[rhs_word] & rhs_mask) ? 1 : 0;
      const uint32_t col = pivot_col[r];
      for (uint32_t c = col + 1; c < num_cols; c++) {
        if ((bits[c >> 6] >> (c & 63)) & 1ULL) {
          acc ^= outcome.solution.get(var_of_column[c]) ? 1 : 0;
        }
      }
      outcome.solution.set(var_of_column[col], acc != 0);
    }
  }

  // Unwind the peeled equations; each one determines exactly one variable.
  for (size_t i = peel_stack.size(); i-- > 0;) {
    const auto [e, v] = peel_stack[i];
    const uint32_t* slot = &eq_vars[e * static_cast<uint64_t>(arity)];
    uint64_t acc = system.equationRhs(e) ? 1 : 0;
    for (int k = 0; k < arity && slot[k] != kNoVar; k++) {
      if (slot[k] != v) {
        acc ^= outcome.solution.get(slot[k]) ? 1 : 0;
      }
    }
    outcome.solution.set(v, acc != 0);
  }

  outcome.solved = true;
  return outcome;
}

bool verifySolution(const Gf2System& system, const BitArray& solution) {
  const int arity = system.arity();
  for (uint64_t e = 0; e < system.numEquations(); e++) {
    const uint32_t* idx = system.equationIndices(e);
    bool acc = false;
    for (int i = 0; i < arity; i++) {
      acc ^= solution.get(idx[i]);
    }
    if (acc != system.equationRhs(e)) {
      return false;
    }
  }
  return true;
}

}  // namespace autocsf
