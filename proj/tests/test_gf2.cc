#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include <autocsf/errors.h>
#include <autocsf/gf2.h>
#include <autocsf/hashing.h>

using namespace autocsf;

namespace {

// Random system with the given shape. Indices are drawn uniformly; rhs
// bits are drawn independently.
Gf2System randomSystem(uint32_t num_vars, uint64_t num_eqs, int arity,
                       uint64_t seed) {
  SplitMix64 rng(seed);
  Gf2System system(num_vars, arity);
  system.reserve(num_eqs);
  uint32_t idx[4];
  for (uint64_t e = 0; e < num_eqs; e++) {
    for (int i = 0; i < arity; i++) {
      idx[i] = static_cast<uint32_t>(rng.nextBounded(num_vars));
    }
    system.addEquation(idx, (rng.next() & 1) != 0);
  }
  return system;
}

}  // namespace

TEST_CASE("gf2 constructor accepts arity 3 and 4 only") {
  CHECK_NOTHROW(Gf2System(10, 3));
  CHECK_NOTHROW(Gf2System(10, 4));
  CHECK_THROWS_AS(Gf2System(10, 2), InvalidArgumentError);
  CHECK_THROWS_AS(Gf2System(10, 5), InvalidArgumentError);
}

TEST_CASE("gf2 addEquation validates variable indices") {
  Gf2System system(5, 3);
  uint32_t ok[3] = {0, 2, 4};
  CHECK_NOTHROW(system.addEquation(ok, true));
  uint32_t bad[3] = {0, 5, 1};
  CHECK_THROWS_AS(system.addEquation(bad, false), InvalidArgumentError);
  CHECK(system.numEquations() == 1);
  CHECK(system.equationRhs(0));
  CHECK(system.equationIndices(0)[1] == 2);
}

TEST_CASE("gf2 single equation solves with free variables zeroed") {
  Gf2System system(10, 3);
  uint32_t idx[3] = {0, 1, 2};
  system.addEquation(idx, true);

  SolveOutcome out = solveSystem(system);
  REQUIRE(out.solved);
  CHECK(out.core_equations == 0);
  CHECK(verifySolution(system, out.solution));

  int set_in_equation = 0;
  for (uint32_t v = 0; v < 3; v++) {
    set_in_equation += out.solution.get(v) ? 1 : 0;
  }
  CHECK(set_in_equation % 2 == 1);
  for (uint32_t v = 3; v < 10; v++) {
    CHECK_FALSE(out.solution.get(v));
  }
}

TEST_CASE("gf2 repeated indices cancel in pairs") {
  // {0,0,1} reduces to the single variable 1.
  Gf2System system(4, 3);
  uint32_t idx[3] = {0, 0, 1};
  system.addEquation(idx, true);
  SolveOutcome out = solveSystem(system);
  REQUIRE(out.solved);
  CHECK(out.solution.get(1));
  CHECK_FALSE(out.solution.get(0));
  CHECK(verifySolution(system, out.solution));

  // {2,2,2} reduces to the single variable 2.
  uint32_t triple[3] = {2, 2, 2};
  system.addEquation(triple, true);
  out = solveSystem(system);
  REQUIRE(out.solved);
  CHECK(out.solution.get(2));
  CHECK(verifySolution(system, out.solution));
}

TEST_CASE("gf2 zero-variable equations (arity 4)") {
  // {1,1,2,2} cancels completely: 0 = rhs.
  Gf2System trivially_true(5, 4);
  uint32_t idx[4] = {1, 1, 2, 2};
  trivially_true.addEquation(idx, false);
  SolveOutcome out = solveSystem(trivially_true);
  CHECK(out.solved);
  CHECK(verifySolution(trivially_true, out.solution));

  Gf2System contradiction(5, 4);
  contradiction.addEquation(idx, true);
  out = solveSystem(contradiction);
  CHECK_FALSE(out.solved);
}

TEST_CASE("gf2 detects duplicated-equation contradictions in the core") {
  // Same variable set with opposite right-hand sides. No variable has
  // degree 1, so the contradiction must be found by elimination.
  Gf2System system(6, 3);
  uint32_t idx[3] = {0, 1, 2};
  system.addEquation(idx, true);
  system.addEquation(idx, false);
  SolveOutcome out = solveSystem(system);
  CHECK_FALSE(out.solved);
  CHECK(out.core_equations == 2);
}

TEST_CASE("gf2 detects contradictions requiring elimination") {
  // eq1^eq2^eq3 = x0, so the first three force x0 = 0; the degree-1
  // equation {0,4,4} = x0 then pins x0 directly.
  uint32_t e1[3] = {0, 1, 2};
  uint32_t e2[3] = {0, 1, 3};
  uint32_t e3[3] = {0, 2, 3};
  uint32_t e4[3] = {0, 4, 4};

  Gf2System consistent(6, 3);
  consistent.addEquation(e1, false);
  consistent.addEquation(e2, false);
  consistent.addEquation(e3, false);
  consistent.addEquation(e4, false);
  SolveOutcome out = solveSystem(consistent);
  REQUIRE(out.solved);
  CHECK(verifySolution(consistent, out.solution));
  CHECK_FALSE(out.solution.get(0));

  Gf2System inconsistent(6, 3);
  inconsistent.addEquation(e1, false);
  inconsistent.addEquation(e2, false);
  inconsistent.addEquation(e3, false);
  inconsistent.addEquation(e4, true);
  out = solveSystem(inconsistent);
  CHECK_FALSE(out.solved);
}

TEST_CASE("gf2 empty system is trivially solved") {
  Gf2System system(7, 3);
  SolveOutcome out = solveSystem(system);
  CHECK(out.solved);
  CHECK(out.core_equations == 0);
  CHECK(verifySolution(system, out.solution));
  for (uint32_t v = 0; v < 7; v++) {
    CHECK_FALSE(out.solution.get(v));
  }
}

TEST_CASE("gf2 random solvable systems verify (arity 3 and 4)") {
  for (int arity : {3, 4}) {
    int solved = 0;
    for (uint64_t seed = 0; seed < 30; seed++) {
      // Generous slack so almost every draw is solvable.
      Gf2System system =
          randomSystem(/*num_vars=*/700, /*num_eqs=*/500, arity, seed * 2 + arity);
      SolveOutcome out = solveSystem(system);
      if (out.solved) {
        solved++;
        CHECK(verifySolution(system, out.solution));
      }
    }
    CHECK(solved >= 29);
  }
}

TEST_CASE("gf2 verifySolution rejects a corrupted solution") {
  for (uint64_t seed = 100; seed < 110; seed++) {
    Gf2System system = randomSystem(300, 200, 3, seed);
    SolveOutcome out = solveSystem(system);
    if (!out.solved) {
      continue;
    }
    REQUIRE(verifySolution(system, out.solution));

    // Flip a variable that appears an odd number of times in equation 0;
    // that equation's parity must break.
    const uint32_t* idx = system.equationIndices(0);
    uint32_t victim = idx[0];
    int occurrences = 0;
    for (int i = 0; i < 3; i++) {
      if (idx[i] == idx[0]) {
        occurrences++;
      }
    }
    if (occurrences % 2 == 0) {
      victim = idx[1] == idx[0] ? idx[2] : idx[1];
    }
    BitArray mutated = out.solution;
    mutated.set(victim, !mutated.get(victim));
    CHECK_FALSE(verifySolution(system, mutated));
  }
}

TEST_CASE("gf2 solvable rate at the 3-hash density threshold") {
  // ceil(1.089 * 1000) = 1089 variables for 1000 equations sits right at
  // the 3-XORSAT solvability threshold (critical ratio ~0.9179 equations
  // per variable, i.e. ~1089.4 variables here), so a single draw succeeds
  // with probability near one half -- verified against an exact dense-rank
  // oracle. What construction relies on is the reseed loop: at p ~ 0.5 per
  // attempt, 16 attempts fail with probability ~2^-16.
  const uint64_t num_eqs = 1000;
  const uint32_t num_vars =
      static_cast<uint32_t>(std::ceil(1.089 * static_cast<double>(num_eqs)));
  int solved = 0;
  int recovered = 0;
  for (uint64_t seed = 0; seed < 100; seed++) {
    Gf2System system = randomSystem(num_vars, num_eqs, 3, mix64(seed + 1));
    SolveOutcome out = solveSystem(system);
    if (out.solved) {
      solved++;
      recovered++;
      continue;
    }
    for (uint64_t attempt = 1; attempt < 16; attempt++) {
      Gf2System retry =
          randomSystem(num_vars, num_eqs, 3, mixWithSeed(mix64(seed + 1), attempt));
      if (solveSystem(retry).solved) {
        recovered++;
        break;
      }
    }
  }
  CHECK(solved >= 35);
  CHECK(solved <= 75);
  CHECK(recovered == 100);
}

TEST_CASE("gf2 peeling clears systems below the peelability threshold") {
  // num_vars = 1.23 * num_eqs is 0.7% above the 3-hypergraph peeling
  // constant (~1.2218). The critical window narrows like num_eqs^-1/2, so
  // the empty-2-core rate climbs with size: ~80% of draws at 10^4
  // equations, ~99%+ at 10^5 (both agree with an independent 2-core
  // computation). Assert the asymptotic behavior at 10^5 and the
  // at-the-window rate at 10^4.
  auto peelClearRate = [](uint64_t num_eqs, int trials, uint64_t salt) {
    const uint32_t num_vars =
        static_cast<uint32_t>(1.23 * static_cast<double>(num_eqs));
    int peel_only = 0;
    for (int t = 0; t < trials; t++) {
      Gf2System system =
          randomSystem(num_vars, num_eqs, 3, mix64(salt + t));
      SolveOutcome out = solveSystem(system);
      REQUIRE(out.solved);
      if (out.core_equations == 0) {
        peel_only++;
      }
    }
    return peel_only;
  };

  const int small = peelClearRate(10000, 100, 0x9e3779b9);
  CHECK(small >= 65);
  const int large = peelClearRate(100000, 100, 0x51ed2701);
  CHECK(large >= 99);
}

TEST_CASE("gf2 four-hash density threshold is tighter") {
  // delta_4 = 1.024 likewise sits at the 4-XORSAT critical ratio (~0.9768
  // equations per variable), so single draws land near coin-flip odds and
  // the reseed loop is what guarantees a build. Checks the solver handles
  // the denser 4-wise systems the 4-hash CSF mode produces.
  const uint64_t num_eqs = 2000;
  const uint32_t num_vars =
      static_cast<uint32_t>(std::ceil(1.024 * static_cast<double>(num_eqs)));
  int solved = 0;
  int recovered = 0;
  for (uint64_t seed = 0; seed < 20; seed++) {
    Gf2System system = randomSystem(num_vars, num_eqs, 4, mix64(seed + 77));
    SolveOutcome out = solveSystem(system);
    if (out.solved) {
      solved++;
      recovered++;
      CHECK(verifySolution(system, out.solution));
      continue;
    }
    for (uint64_t attempt = 1; attempt < 16; attempt++) {
      Gf2System retry = randomSystem(num_vars, num_eqs, 4,
                                     mixWithSeed(mix64(seed + 77), attempt));
      if (solveSystem(retry).solved) {
        recovered++;
        break;
      }
    }
  }
  CHECK(solved >= 4);
  CHECK(solved <= 17);
  CHECK(recovered == 20);
}
